#include "gsr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

#include "gsr/error.hpp"

namespace gsr {

std::uint32_t InvertedIndex::df(const std::string& term) const {
  auto it = postings.find(term);
  return it == postings.end() ? 0u : static_cast<std::uint32_t>(it->second.size());
}

InvertedIndex build_index(std::span<const Document> docs, const StopList& stops) {
  if (docs.empty()) throw InputError("cannot index an empty corpus");
  InvertedIndex index;
  std::unordered_set<std::string> seen;
  index.doc_ids.reserve(docs.size());
  index.doc_lengths.reserve(docs.size());

  std::map<std::string, std::uint32_t> tf;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!seen.insert(docs[d].id).second) throw InputError("duplicate document id '" + docs[d].id + "'");
    const auto bag = tokenize(docs[d].text, stops);
    tf.clear();
    for (const auto& t : bag.tokens) ++tf[t];
    for (const auto& [term, count] : tf) {
      index.postings[term].push_back({static_cast<std::uint32_t>(d), count});
      index.collection_term_counts[term] += count;
    }
    index.doc_ids.push_back(docs[d].id);
    index.doc_lengths.push_back(static_cast<std::uint32_t>(bag.size()));
    index.total_tokens += bag.size();
  }
  index.avg_doc_length = static_cast<double>(index.total_tokens) / static_cast<double>(docs.size());

  index.tfidf_norms.assign(docs.size(), 0.0);
  const double n = static_cast<double>(docs.size());
  for (const auto& [term, plist] : index.postings) {
    const double idf = std::log(n / static_cast<double>(plist.size()));
    for (const auto& p : plist) {
      const double w = p.tf * idf;
      index.tfidf_norms[p.doc] += w * w;
    }
  }
  for (auto& x : index.tfidf_norms) x = std::sqrt(x);
  return index;
}

namespace {

std::map<std::string, std::uint32_t> term_counts(const BagOfWords& q) {
  std::map<std::string, std::uint32_t> out;
  for (const auto& t : q.tokens) ++out[t];
  return out;
}

RankedList finalize(const std::string& query_id, std::vector<std::pair<std::uint32_t, double>> scored,
                    const std::vector<std::string>& doc_ids, std::size_t depth) {
  auto better = [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return doc_ids[a.first] < doc_ids[b.first];
  };
  if (scored.size() > depth) {
    std::nth_element(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(depth), scored.end(), better);
    scored.resize(depth);
  }
  std::vector<std::pair<std::string, double>> named;
  named.reserve(scored.size());
  for (const auto& [doc, s] : scored) named.emplace_back(doc_ids[doc], s);
  return make_ranked_list(query_id, std::move(named));
}

}  // namespace

RankedList score_tfidf(const InvertedIndex& index, const std::string& query_id, const BagOfWords& query,
                       std::size_t depth) {
  const double n = static_cast<double>(index.doc_count());
  std::unordered_map<std::uint32_t, double> dot;
  double qnorm2 = 0.0;
  for (const auto& [term, count] : term_counts(query)) {
    auto it = index.postings.find(term);
    if (it == index.postings.end()) continue;
    const double idf = std::log(n / static_cast<double>(it->second.size()));
    const double qw = count * idf;
    qnorm2 += qw * qw;
    for (const auto& p : it->second) dot[p.doc] += qw * p.tf * idf;
  }
  std::vector<std::pair<std::uint32_t, double>> scored;
  if (qnorm2 > 0.0) {
    const double qnorm = std::sqrt(qnorm2);
    for (const auto& [doc, d] : dot) {
      const double denom = qnorm * index.tfidf_norms[doc];
      if (d > 0.0 && denom > 0.0) scored.emplace_back(doc, d / denom);
    }
  }
  return finalize(query_id, std::move(scored), index.doc_ids, depth);
}

RankedList score_bm25(const InvertedIndex& index, const std::string& query_id, const BagOfWords& query,
                      const Bm25Params& params, std::size_t depth) {
  if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0) throw InputError("BM25 needs k1 >= 0 and 0 <= b <= 1");
  const double n = static_cast<double>(index.doc_count());
  std::unordered_map<std::uint32_t, double> acc;
  for (const auto& [term, count] : term_counts(query)) {
    auto it = index.postings.find(term);
    if (it == index.postings.end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
    for (const auto& p : it->second) {
      const double len_norm = 1.0 - params.b + params.b * index.doc_lengths[p.doc] / index.avg_doc_length;
      const double tf = p.tf;
      acc[p.doc] += count * idf * tf * (params.k1 + 1.0) / (tf + params.k1 * len_norm);
    }
  }
  std::vector<std::pair<std::uint32_t, double>> scored(acc.begin(), acc.end());
  return finalize(query_id, std::move(scored), index.doc_ids, depth);
}

RankedList score_qlm(const InvertedIndex& index, const std::string& query_id, const BagOfWords& query, double mu,
                     std::size_t depth) {
  if (!(mu > 0.0)) throw InputError("Dirichlet mu must be positive");
  const double total = static_cast<double>(index.total_tokens);

  struct Term {
    const std::vector<Posting>* postings;
    double p_c;
    std::uint32_t count;
  };
  std::vector<Term> terms;
  for (const auto& [term, count] : term_counts(query)) {
    auto it = index.postings.find(term);
    if (it == index.postings.end()) continue;
    const double p_c = index.collection_term_counts.at(term) / total;
    terms.push_back({&it->second, p_c, count});
  }

  std::unordered_map<std::uint32_t, std::unordered_map<const Term*, std::uint32_t>> matched;
  for (const auto& t : terms) {
    for (const auto& p : *t.postings) matched[p.doc][&t] = p.tf;
  }

  std::vector<std::pair<std::uint32_t, double>> scored;
  scored.reserve(matched.size());
  for (const auto& [doc, tfs] : matched) {
    const double len = index.doc_lengths[doc];
    double s = 0.0;
    for (const auto& t : terms) {
      auto f = tfs.find(&t);
      const double tf = f == tfs.end() ? 0.0 : f->second;
      s += t.count * std::log((tf + mu * t.p_c) / (len + mu));
    }
    scored.emplace_back(doc, s);
  }
  return finalize(query_id, std::move(scored), index.doc_ids, depth);
}

SemanticEngine::SemanticEngine(const EmbeddingStore& store, std::vector<std::string> doc_ids,
                               std::span<const BagOfWords> doc_bags, TermWeighting weighting,
                               const InvertedIndex* index)
    : store_(&store), weighting_(weighting), index_(index), doc_ids_(std::move(doc_ids)) {
  if (doc_ids_.size() != doc_bags.size()) throw InputError("document ids and bags differ in length");
  if (weighting_ == TermWeighting::self_information) {
    if (index_ == nullptr) throw InputError("self-information weighting needs an index");
    std::uint64_t min_cf = 0;
    for (const auto& [_, cf] : index_->collection_term_counts) {
      if (cf > 0 && (min_cf == 0 || cf < min_cf)) min_cf = cf;
    }
    if (min_cf > 0) max_si_ = -std::log(static_cast<double>(min_cf) / static_cast<double>(index_->total_tokens));
  }

  const std::size_t dim = store_->dim();
  unit_centroids_.assign(doc_bags.size() * dim, 0.0f);
  has_centroid_.assign(doc_bags.size(), false);
  for (std::size_t d = 0; d < doc_bags.size(); ++d) {
    auto c = centroid(doc_bags[d]);
    if (c.empty()) continue;
    const double nrm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
    if (!(nrm > 0.0)) continue;
    for (std::size_t k = 0; k < dim; ++k) unit_centroids_[d * dim + k] = static_cast<float>(c[k] / nrm);
    has_centroid_[d] = true;
  }
}

double SemanticEngine::weight(const std::string& term) const {
  if (weighting_ == TermWeighting::uniform) return 1.0;
  auto it = index_->collection_term_counts.find(term);
  if (it == index_->collection_term_counts.end() || it->second == 0) return max_si_;
  return -std::log(static_cast<double>(it->second) / static_cast<double>(index_->total_tokens));
}

std::vector<double> SemanticEngine::centroid(const BagOfWords& bag) const {
  const std::size_t dim = store_->dim();
  std::vector<double> acc(dim, 0.0);
  double wsum = 0.0;
  for (const auto& t : bag.tokens) {
    auto hit = store_->lookup(t);
    if (!hit) continue;
    const double w = weight(t);
    auto v = store_->vector(hit->row);
    for (std::size_t k = 0; k < dim; ++k) acc[k] += w * v[k];
    wsum += w;
  }
  if (!(wsum > 0.0)) return {};
  for (auto& x : acc) x /= wsum;
  return acc;
}

RankedList SemanticEngine::score(const std::string& query_id, const BagOfWords& query, std::size_t depth) const {
  auto q = centroid(query);
  const double qn = q.empty() ? 0.0 : std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
  if (!(qn > 0.0)) throw InputError("query " + query_id + " has no token with an embedding");
  for (auto& x : q) x /= qn;

  const std::size_t dim = store_->dim();
  std::vector<std::pair<std::uint32_t, double>> scored;
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    if (!has_centroid_[d]) continue;
    const float* row = unit_centroids_.data() + d * dim;
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += q[k] * row[k];
    scored.emplace_back(static_cast<std::uint32_t>(d), s);
  }
  return finalize(query_id, std::move(scored), doc_ids_, depth);
}

namespace {

std::pair<std::vector<std::string>, std::vector<BagOfWords>> tokenize_all(std::span<const Document> docs,
                                                                          const StopList& stops) {
  std::vector<std::string> ids;
  std::vector<BagOfWords> bags;
  for (const auto& d : docs) {
    ids.push_back(d.id);
    bags.push_back(tokenize(d.text, stops));
  }
  return {std::move(ids), std::move(bags)};
}

}  // namespace

RankedList score_emb_add(const EmbeddingStore& store, std::span<const Document> docs, const StopList& stops,
                         const std::string& query_id, const BagOfWords& query) {
  auto [ids, bags] = tokenize_all(docs, stops);
  return SemanticEngine(store, std::move(ids), bags, TermWeighting::uniform).score(query_id, query);
}

RankedList score_emb_si(const EmbeddingStore& store, const InvertedIndex& index, std::span<const Document> docs,
                        const StopList& stops, const std::string& query_id, const BagOfWords& query) {
  auto [ids, bags] = tokenize_all(docs, stops);
  return SemanticEngine(store, std::move(ids), bags, TermWeighting::self_information, &index)
      .score(query_id, query);
}

RankedList perfect_engine(const Qrels& qrels, const std::string& query_id, bool* flagged_empty) {
  std::vector<std::pair<std::string, double>> relevant;
  for (const auto& [doc, grade] : qrels.judgments_for(query_id)) {
    if (grade > 0) relevant.emplace_back(doc, static_cast<double>(grade));
  }
  if (flagged_empty) *flagged_empty = relevant.empty();
  return make_ranked_list(query_id, std::move(relevant));
}

RankedList random_engine(std::span<const std::string> doc_ids, std::size_t k, std::uint64_t seed,
                         const std::string& query_id) {
  if (k > doc_ids.size()) {
    throw InputError("random engine asked for " + std::to_string(k) + " documents from a corpus of " +
                     std::to_string(doc_ids.size()));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(doc_ids.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  RankedList out{query_id, {}};
  for (std::size_t i = 0; i < k; ++i) {
    out.items.push_back({doc_ids[order[i]], static_cast<double>(k - i), i + 1});
  }
  return out;
}

}  // namespace gsr
