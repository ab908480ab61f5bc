#include "gsr/retrieval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "gsr/error.hpp"
#include "support/fixtures.hpp"

namespace gsr {
namespace {

std::vector<Document> docs_of(std::initializer_list<std::pair<const char*, const char*>> rows) {
  std::vector<Document> d;
  for (const auto& [id, text] : rows) d.push_back({id, text});
  return d;
}

BagOfWords q_of(std::initializer_list<const char*> toks) {
  BagOfWords b;
  for (auto t : toks) b.tokens.emplace_back(t);
  return b;
}

std::map<std::string, double> score_map(const RankedList& l) {
  std::map<std::string, double> m;
  for (const auto& it : l.items) m[it.doc_id] = it.score;
  return m;
}

const std::vector<Document> kFive = docs_of({{"d1", "apple banana apple cherry"},
                                             {"d2", "banana banana date"},
                                             {"d3", "cherry date elder fig fig fig"},
                                             {"d4", "apple"},
                                             {"d5", "grape grape banana elder apple date"}});

std::vector<Document> random_corpus(std::uint64_t seed, std::size_t n_docs) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> word(0, 14);
  std::vector<Document> out;
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += "t" + std::to_string(word(rng)) + " ";
    out.push_back({"doc" + std::to_string(i), text});
  }
  return out;
}

TEST(Index, TwoDocumentExample) {
  auto idx = build_index(docs_of({{"d1", "a b"}, {"d2", "b c"}}), StopList{});
  ASSERT_EQ(idx.postings.at("a").size(), 1u);
  EXPECT_EQ(idx.postings.at("a")[0].doc, 0u);
  ASSERT_EQ(idx.postings.at("b").size(), 2u);
  EXPECT_EQ(idx.postings.at("c")[0].doc, 1u);
  EXPECT_DOUBLE_EQ(idx.avg_doc_length, 2.0);
  EXPECT_EQ(idx.df("b"), 2u);
  EXPECT_EQ(idx.df("zz"), 0u);
}

TEST(Index, RejectsEmptyAndDuplicate) {
  EXPECT_THROW(build_index(std::vector<Document>{}, StopList{}), InputError);
  EXPECT_THROW(build_index(docs_of({{"x", "a"}, {"x", "b"}}), StopList{}), InputError);
}

TEST(Index, StatisticsMatchNaiveRecount) {
  auto corpus = random_corpus(50, 50);
  auto idx = build_index(corpus, StopList{});
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> cf;
  std::map<std::string, std::set<std::size_t>> df;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    auto bag = tokenize(corpus[d].text, StopList{});
    EXPECT_EQ(idx.doc_lengths[d], bag.size());
    total += bag.size();
    for (const auto& t : bag.tokens) {
      ++cf[t];
      df[t].insert(d);
    }
  }
  EXPECT_EQ(idx.total_tokens, total);
  EXPECT_DOUBLE_EQ(idx.avg_doc_length, static_cast<double>(total) / 50.0);
  for (const auto& [t, c] : cf) {
    EXPECT_EQ(idx.collection_term_counts.at(t), c);
    EXPECT_EQ(idx.df(t), df[t].size());
  }
  EXPECT_EQ(std::accumulate(idx.doc_lengths.begin(), idx.doc_lengths.end(), std::uint64_t{0}), idx.total_tokens);
}

// Dense vector-space oracle: full term x doc matrix, plain cosine.
std::map<std::string, double> dense_tfidf(const std::vector<Document>& docs, const BagOfWords& q) {
  std::vector<std::map<std::string, double>> tf(docs.size());
  std::map<std::string, double> df;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : tokenize(docs[d].text, StopList{}).tokens) tf[d][t] += 1;
    for (const auto& [t, _] : tf[d]) df[t] += 1;
  }
  const double n = static_cast<double>(docs.size());
  std::vector<std::string> vocab;
  for (const auto& [t, _] : df) vocab.push_back(t);
  auto vec = [&](const std::map<std::string, double>& counts) {
    std::vector<double> v;
    for (const auto& t : vocab) {
      auto c = counts.find(t);
      v.push_back(c == counts.end() ? 0.0 : c->second * std::log(n / df[t]));
    }
    return v;
  };
  std::map<std::string, double> qc;
  for (const auto& t : q.tokens) qc[t] += 1;
  auto qv = vec(qc);
  std::map<std::string, double> out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    auto dv = vec(tf[d]);
    double dot = 0, a = 0, b = 0;
    for (std::size_t k = 0; k < vocab.size(); ++k) {
      dot += qv[k] * dv[k];
      a += qv[k] * qv[k];
      b += dv[k] * dv[k];
    }
    if (a > 0 && b > 0 && dot > 0) out[docs[d].id] = dot / std::sqrt(a * b);
  }
  return out;
}

TEST(TfIdf, MatchesDenseOracle) {
  auto idx = build_index(kFive, StopList{});
  for (auto q : {q_of({"apple"}), q_of({"banana", "fig"}), q_of({"date", "date", "grape", "zzz"})}) {
    auto got = score_map(score_tfidf(idx, "q", q));
    auto want = dense_tfidf(kFive, q);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [id, s] : want) EXPECT_NEAR(got[id], s, 1e-12) << id;
  }
}

TEST(TfIdf, EdgeCases) {
  auto idx = build_index(kFive, StopList{});
  EXPECT_TRUE(score_tfidf(idx, "q", q_of({"absent"})).empty());
  auto one = build_index(docs_of({{"only", "term"}, {"other", "stuff"}}), StopList{});
  auto l = score_tfidf(one, "q", q_of({"term"}));
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l.items[0].doc_id, "only");
  EXPECT_EQ(l.items[0].rank, 1u);
}

double bm25_oracle(const std::vector<Document>& docs, std::size_t d, const BagOfWords& q, double k1, double b) {
  const double n = static_cast<double>(docs.size());
  std::vector<BagOfWords> bags;
  double total = 0;
  for (const auto& doc : docs) {
    bags.push_back(tokenize(doc.text, StopList{}));
    total += static_cast<double>(bags.back().size());
  }
  const double avgdl = total / n;
  double s = 0;
  for (const auto& t : q.tokens) {
    double df = 0;
    for (const auto& bg : bags) df += std::count(bg.tokens.begin(), bg.tokens.end(), t) > 0;
    if (df == 0) continue;
    const double tf = static_cast<double>(std::count(bags[d].tokens.begin(), bags[d].tokens.end(), t));
    if (tf == 0) continue;
    const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
    s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * static_cast<double>(bags[d].size()) / avgdl));
  }
  return s;
}

TEST(Bm25, MatchesFormulaOracle) {
  auto idx = build_index(kFive, StopList{});
  for (auto [k1, b] : {std::pair{1.2, 0.75}, std::pair{0.0, 0.5}, std::pair{2.0, 0.0}, std::pair{0.9, 1.0}}) {
    auto q = q_of({"apple", "date", "apple", "fig"});
    auto got = score_map(score_bm25(idx, "q", q, {k1, b}));
    for (std::size_t d = 0; d < kFive.size(); ++d) {
      const double want = bm25_oracle(kFive, d, q, k1, b);
      if (want == 0.0) {
        EXPECT_FALSE(got.contains(kFive[d].id));
      } else {
        EXPECT_NEAR(got[kFive[d].id], want, 1e-12);
      }
    }
  }
}

TEST(Bm25, LengthIgnoredWhenBIsZero) {
  auto idx = build_index(docs_of({{"short", "x y"}, {"long", "x y z w v u t s"}, {"pad", "q"}}), StopList{});
  auto m = score_map(score_bm25(idx, "q", q_of({"x"}), {1.2, 0.0}));
  EXPECT_DOUBLE_EQ(m["short"], m["long"]);
  auto m2 = score_map(score_bm25(idx, "q", q_of({"x"}), {1.2, 0.75}));
  EXPECT_GT(m2["short"], m2["long"]);
  EXPECT_THROW(score_bm25(idx, "q", q_of({"x"}), {1.2, 1.5}), InputError);
}

TEST(Bm25, MonotoneInTermFrequency) {
  // Same length, growing tf of the query term.
  auto idx = build_index(docs_of({{"a", "x y y y"}, {"b", "x x y y"}, {"c", "x x x y"}, {"d", "z z z z"}}), StopList{});
  auto l = score_bm25(idx, "q", q_of({"x"}));
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l.items[0].doc_id, "c");
  EXPECT_EQ(l.items[1].doc_id, "b");
  EXPECT_EQ(l.items[2].doc_id, "a");
}

TEST(Qlm, MatchesFormulaOracle) {
  auto idx = build_index(kFive, StopList{});
  const double mu = 10.0;
  auto q = q_of({"apple", "fig", "fig", "nothere"});
  auto got = score_map(score_qlm(idx, "q", q, mu));
  double total = 0;
  std::map<std::string, double> cf;
  std::vector<BagOfWords> bags;
  for (const auto& d : kFive) {
    bags.push_back(tokenize(d.text, StopList{}));
    for (const auto& t : bags.back().tokens) cf[t] += 1;
    total += static_cast<double>(bags.back().size());
  }
  for (std::size_t d = 0; d < kFive.size(); ++d) {
    const auto& tk = bags[d].tokens;
    const bool any = std::count(tk.begin(), tk.end(), "apple") + std::count(tk.begin(), tk.end(), "fig") > 0;
    if (!any) {
      EXPECT_FALSE(got.contains(kFive[d].id));
      continue;
    }
    double s = 0;
    for (const auto& t : q.tokens) {
      if (!cf.contains(t)) continue;
      const double tf = static_cast<double>(std::count(tk.begin(), tk.end(), t));
      s += std::log((tf + mu * cf[t] / total) / (static_cast<double>(tk.size()) + mu));
    }
    EXPECT_NEAR(got[kFive[d].id], s, 1e-12);
  }
}

TEST(Qlm, SingleDocumentCorpusIsMaximumLikelihood) {
  auto idx = build_index(docs_of({{"all", "a a b c"}}), StopList{});
  auto l = score_qlm(idx, "q", q_of({"a", "c"}), 1000.0);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_NEAR(l.items[0].score, std::log(0.5) + std::log(0.25), 1e-12);
}

TEST(Qlm, MissingTermStillContributesThroughSmoothing) {
  auto idx = build_index(docs_of({{"has", "a b"}, {"lacks", "a c"}}), StopList{});
  auto m = score_map(score_qlm(idx, "q", q_of({"a", "b"}), 5.0));
  ASSERT_TRUE(m.contains("lacks"));
  EXPECT_TRUE(std::isfinite(m["lacks"]));
  EXPECT_LT(m["lacks"], m["has"]);
  EXPECT_THROW(score_qlm(idx, "q", q_of({"a"}), 0.0), InputError);
}

// Store for the semantic rankers: small vectors picked by hand.
EmbeddingStore semantic_store() {
  EmbeddingStore s(3);
  s.add("cat", std::vector<float>{1, 0, 0});
  s.add("dog", std::vector<float>{0.8f, 0.6f, 0});
  s.add("car", std::vector<float>{0, 0, 1});
  s.add("road", std::vector<float>{0, 0.3f, 0.9f});
  s.add("rare", std::vector<float>{0, 1, 0});
  return s;
}

std::vector<double> mean_vec(const EmbeddingStore& s, const BagOfWords& b, const std::map<std::string, double>& w) {
  std::vector<double> acc(s.dim(), 0.0);
  double ws = 0;
  for (const auto& t : b.tokens) {
    auto h = s.lookup(t);
    if (!h) continue;
    const double wt = w.empty() ? 1.0 : w.at(t);
    for (std::size_t k = 0; k < s.dim(); ++k) acc[k] += wt * s.vector(h->row)[k];
    ws += wt;
  }
  for (auto& x : acc) x /= ws;
  return acc;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, x = 0, y = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d += a[k] * b[k];
    x += a[k] * a[k];
    y += b[k] * b[k];
  }
  return d / std::sqrt(x * y);
}

const std::vector<Document> kPets = docs_of({{"p1", "cat dog"},
                                             {"p2", "car road road"},
                                             {"p3", "cat car unknownword"},
                                             {"p4", "dog dog rare"},
                                             {"p5", "nothing known"}});

TEST(Semantic, AddMatchesMeanCosineOracle) {
  auto s = semantic_store();
  auto q = q_of({"cat", "road"});
  auto got = score_map(score_emb_add(s, kPets, StopList{}, "q", q));
  EXPECT_FALSE(got.contains("p5"));
  auto qv = mean_vec(s, q, {});
  for (const auto& d : kPets) {
    if (d.id == "p5") continue;
    EXPECT_NEAR(got[d.id], cosine(qv, mean_vec(s, tokenize(d.text, StopList{}), {})), 1e-6) << d.id;
  }
}

TEST(Semantic, TrivialCosines) {
  auto s = semantic_store();
  auto same = score_emb_add(s, docs_of({{"a", "cat"}, {"b", "car"}}), StopList{}, "q", q_of({"cat"}));
  EXPECT_NEAR(same.items[0].score, 1.0, 1e-6);
  EXPECT_EQ(same.items[0].doc_id, "a");
  EXPECT_NEAR(same.items[1].score, 0.0, 1e-6);
  EXPECT_THROW(score_emb_add(s, kPets, StopList{}, "q", q_of({"zzz"})), InputError);
}

TEST(Semantic, SelfInformationMatchesWeightedOracle) {
  auto s = semantic_store();
  auto idx = build_index(kPets, StopList{});
  auto q = q_of({"dog", "rare", "unseenquery"});
  auto got = score_map(score_emb_si(s, idx, kPets, StopList{}, "q", q));
  std::map<std::string, double> w;
  double max_si = 0;
  for (const auto& [t, cf] : idx.collection_term_counts) {
    w[t] = -std::log(static_cast<double>(cf) / static_cast<double>(idx.total_tokens));
    max_si = std::max(max_si, w[t]);
  }
  w["unseenquery"] = max_si;
  auto qv = mean_vec(s, q, w);
  for (const auto& d : kPets) {
    if (d.id == "p5") continue;
    EXPECT_NEAR(got[d.id], cosine(qv, mean_vec(s, tokenize(d.text, StopList{}), w)), 1e-6) << d.id;
  }
}

TEST(Semantic, RareTermFlipsRankingAgainstAdd) {
  EmbeddingStore s(2);
  s.add("common", std::vector<float>{1, 0});
  s.add("rare", std::vector<float>{0, 1});
  s.add("mid", std::vector<float>{0.6f, 0.8f});
  std::vector<Document> docs;
  for (int i = 0; i < 8; ++i) docs.push_back({"filler" + std::to_string(i), "common common"});
  docs.push_back({"A", "common common common rare"});
  docs.push_back({"B", "mid"});
  auto idx = build_index(docs, StopList{});
  auto q = q_of({"common", "rare"});
  auto add = score_map(score_emb_add(s, docs, StopList{}, "q", q));
  auto si = score_map(score_emb_si(s, idx, docs, StopList{}, "q", q));
  // Uniform weights put B (between both axes) above A (mostly "common").
  EXPECT_GT(add["B"], add["A"]);
  // Self-information up-weights "rare", pulling A's centroid towards the query.
  const double w_common = -std::log(19.0 / 21.0);
  const double w_rare = -std::log(1.0 / 21.0);
  std::vector<double> qv = {w_common / (w_common + w_rare), w_rare / (w_common + w_rare)};
  std::vector<double> av = {3 * w_common / (3 * w_common + w_rare), w_rare / (3 * w_common + w_rare)};
  EXPECT_NEAR(si["A"], cosine(qv, av), 1e-6);
  EXPECT_GT(si["A"], si["B"]);
}

TEST(Semantic, UniformFrequenciesReduceToAdd) {
  auto s = semantic_store();
  auto docs = docs_of({{"x", "cat dog car road rare"}, {"y", "cat dog car road rare"}, {"z", "cat rare"}});
  // Make every term equally frequent.
  docs[2].text = "cat dog car road rare";
  docs.push_back({"w", "dog road"});
  docs.push_back({"v", "cat car rare"});
  auto idx = build_index(docs, StopList{});
  std::set<std::uint64_t> cfs;
  for (const auto& [_, c] : idx.collection_term_counts) cfs.insert(c);
  ASSERT_EQ(cfs.size(), 1u);
  for (auto q : {q_of({"cat", "road"}), q_of({"rare"}), q_of({"dog", "car", "car"})}) {
    auto a = score_emb_add(s, docs, StopList{}, "q", q);
    auto b = score_emb_si(s, idx, docs, StopList{}, "q", q);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.items[i].doc_id, b.items[i].doc_id);
  }
}

TEST(Semantic, SingleTokenQueryScoresLikeAddOnSingleTypeDocuments) {
  // A lone query token's weight cancels in the query centroid. Document
  // centroids are weighted too, so scores only coincide when each document
  // holds a single token type.
  auto s = semantic_store();
  auto docs = docs_of({{"a", "cat cat"}, {"b", "dog"}, {"c", "road road road"}, {"d", "rare"}, {"e", "car"}});
  auto idx = build_index(docs, StopList{});
  for (const char* t : {"cat", "dog", "road", "rare"}) {
    auto a = score_emb_add(s, docs, StopList{}, "q", q_of({t}));
    auto b = score_emb_si(s, idx, docs, StopList{}, "q", q_of({t}));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a.items[i].doc_id, b.items[i].doc_id) << t;
      EXPECT_NEAR(a.items[i].score, b.items[i].score, 1e-6) << t;
    }
  }
}

TEST(Engines, PerfectEngineOrdersByGradeThenId) {
  Qrels qr;
  qr.add("q", "d3", 0);
  qr.add("q", "d2", 1);
  qr.add("q", "d1", 2);
  bool empty = true;
  auto l = perfect_engine(qr, "q", &empty);
  EXPECT_FALSE(empty);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l.items[0].doc_id, "d1");
  EXPECT_EQ(l.items[1].doc_id, "d2");

  Qrels ties;
  ties.add("t", "db", 1);
  ties.add("t", "da", 1);
  auto t = perfect_engine(ties, "t");
  EXPECT_EQ(t.items[0].doc_id, "da");

  Qrels zeros;
  zeros.add("z", "x", 0);
  EXPECT_TRUE(perfect_engine(zeros, "z", &empty).empty());
  EXPECT_TRUE(empty);
}

TEST(Engines, RandomEngineContracts) {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("d" + std::to_string(i));
  auto all = random_engine(ids, ids.size(), 7);
  std::set<std::string> seen;
  for (const auto& it : all.items) seen.insert(it.doc_id);
  EXPECT_EQ(seen.size(), ids.size());
  EXPECT_TRUE(is_well_formed(all));
  auto a = random_engine(ids, 4, 99);
  auto b = random_engine(ids, 4, 99);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.items[i].doc_id, b.items[i].doc_id);
  EXPECT_THROW(random_engine(ids, 11, 1), InputError);
}

TEST(Engines, RandomEngineIsUniform) {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("d" + std::to_string(i));
  std::map<std::string, int> freq;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) ++freq[random_engine(ids, 1, seed).items[0].doc_id];
  const double sigma = std::sqrt(10000 * 0.1 * 0.9);
  for (const auto& id : ids) EXPECT_NEAR(freq[id], 1000.0, 3 * sigma) << id;
}

TEST(Engines, AllEnginesProduceWellFormedListsWithIdTies) {
  auto docs = docs_of({{"b", "x y"}, {"a", "x y"}, {"c", "x y"}, {"d", "z"}});
  auto idx = build_index(docs, StopList{});
  for (const auto& l : {score_tfidf(idx, "q", q_of({"x"})), score_bm25(idx, "q", q_of({"x"})),
                        score_qlm(idx, "q", q_of({"x"}))}) {
    ASSERT_TRUE(is_well_formed(l));
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l.items[0].doc_id, "a");
    EXPECT_EQ(l.items[1].doc_id, "b");
    EXPECT_EQ(l.items[2].doc_id, "c");
  }
}

TEST(Engines, DepthLimitKeepsBestDocuments) {
  auto corpus = random_corpus(3, 200);
  auto idx = build_index(corpus, StopList{});
  auto full = score_bm25(idx, "q", q_of({"t1", "t2"}));
  auto cut = score_bm25(idx, "q", q_of({"t1", "t2"}), {}, 10);
  ASSERT_EQ(cut.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(cut.items[i].doc_id, full.items[i].doc_id);
}

}  // namespace
}  // namespace gsr
