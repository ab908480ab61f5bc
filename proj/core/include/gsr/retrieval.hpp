#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsr/collection_io.hpp"
#include "gsr/embedding_store.hpp"
#include "gsr/ranked_list.hpp"
#include "gsr/text_prep.hpp"

namespace gsr {

struct Posting {
  std::uint32_t doc;  // position in InvertedIndex::doc_ids
  std::uint32_t tf;
};

struct InvertedIndex {
  std::unordered_map<std::string, std::vector<Posting>> postings;
  std::vector<std::string> doc_ids;
  std::vector<std::uint32_t> doc_lengths;
  std::unordered_map<std::string, std::uint64_t> collection_term_counts;
  std::uint64_t total_tokens = 0;
  double avg_doc_length = 0.0;
  // Euclidean norm of each document's tf * ln(N/df) vector.
  std::vector<double> tfidf_norms;

  std::size_t doc_count() const noexcept { return doc_ids.size(); }
  std::uint32_t df(const std::string& term) const;
};

// Throws InputError on an empty corpus or a duplicate doc id.
InvertedIndex build_index(std::span<const Document> docs, const StopList& stops);

// Maximum number of items an engine returns per query.
inline constexpr std::size_t kDefaultDepth = 1000;

// Cosine between tf * ln(N/df) query and document vectors; zero scores omitted.
RankedList score_tfidf(const InvertedIndex& index, const std::string& query_id, const BagOfWords& query,
                       std::size_t depth = kDefaultDepth);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// idf = ln((N - df + 0.5) / (df + 0.5) + 1).
RankedList score_bm25(const InvertedIndex& index, const std::string& query_id, const BagOfWords& query,
                      const Bm25Params& params = {}, std::size_t depth = kDefaultDepth);

// Dirichlet-smoothed query likelihood. Documents sharing no query term are omitted.
RankedList score_qlm(const InvertedIndex& index, const std::string& query_id, const BagOfWords& query,
                     double mu = 1000.0, std::size_t depth = kDefaultDepth);

enum class TermWeighting { uniform, self_information };

// Averaged word-embedding ranker (w2v_add / w2v_si style). Document centroids
// are computed once at construction.
class SemanticEngine {
 public:
  // `index` supplies collection frequencies for self-information weights and
  // must describe the same documents, in the same order, as `doc_bags`.
  SemanticEngine(const EmbeddingStore& store, std::vector<std::string> doc_ids,
                 std::span<const BagOfWords> doc_bags, TermWeighting weighting,
                 const InvertedIndex* index = nullptr);

  // Throws InputError when no query token resolves.
  RankedList score(const std::string& query_id, const BagOfWords& query, std::size_t depth = kDefaultDepth) const;

  double weight(const std::string& term) const;

 private:
  // Weighted mean of resolvable token vectors; empty when nothing resolves.
  std::vector<double> centroid(const BagOfWords& bag) const;

  const EmbeddingStore* store_;
  TermWeighting weighting_;
  const InvertedIndex* index_;
  double max_si_ = 0.0;
  std::vector<std::string> doc_ids_;
  std::vector<float> unit_centroids_;  // row-major, unit length
  std::vector<bool> has_centroid_;
};

RankedList score_emb_add(const EmbeddingStore& store, std::span<const Document> docs, const StopList& stops,
                         const std::string& query_id, const BagOfWords& query);

RankedList score_emb_si(const EmbeddingStore& store, const InvertedIndex& index, std::span<const Document> docs,
                        const StopList& stops, const std::string& query_id, const BagOfWords& query);

// All documents with grade > 0, highest grade first, ties by doc id.
// `flagged_empty` is set when the query has no relevant document.
RankedList perfect_engine(const Qrels& qrels, const std::string& query_id, bool* flagged_empty = nullptr);

// K documents drawn uniformly without replacement from `doc_ids`.
RankedList random_engine(std::span<const std::string> doc_ids, std::size_t k, std::uint64_t seed,
                         const std::string& query_id = {});

}  // namespace gsr
