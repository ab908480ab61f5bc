#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsr/collection_io.hpp"
#include "gsr/gender_geometry.hpp"
#include "gsr/ranked_list.hpp"
#include "gsr/text_prep.hpp"

namespace gsr {

// One query in the (g(q), g_q(L)) plane.
struct GsrPoint {
  std::string query_id;
  double gq = 0.0;
  double gl = 0.0;
  std::size_t k_used = 0;
};

struct GsrResult {
  std::vector<GsrPoint> points;
  double slope = 0.0;  // m_s(Q, D)
  double intercept = 0.0;
  double mu_q = 0.0;
  double sigma2_q = 0.0;  // population variance of g(q)
  double mu_ql = 0.0;
  std::size_t n = 0;
  std::optional<double> relative_pct;
};

// 1 / log2(rank + 1), rank 1-based.
double rank_weight(std::size_t rank);

// Rank-discounted mean of per-document genderedness; entry i sits at rank
// i + 1. Undefined entries are skipped and the weight total is taken over the
// defined ones only.
std::optional<double> weighted_list_genderedness(std::span<const std::optional<double>> doc_g);

// g_q(L) for documents given in rank order.
std::optional<double> list_genderedness(std::span<const BagOfWords> docs, const BagOfWords& query,
                                        const GenderScorer& scorer);

// Least-squares slope with population moments. Throws DegenerateError for
// fewer than two points or zero variance of g(q).
GsrResult gsr_slope(std::vector<GsrPoint> points);

// 100 * (sys - perfect) / perfect. Throws DegenerateError when perfect slope is 0.
double relative_gsr(const GsrResult& sys, const GsrResult& perfect);

// Tokenized documents keyed by id.
class DocumentTable {
 public:
  DocumentTable() = default;
  DocumentTable(std::span<const Document> docs, const StopList& stops);

  void add(const std::string& id, BagOfWords bag);
  const BagOfWords* find(const std::string& id) const;
  std::size_t size() const noexcept { return bags_.size(); }

 private:
  std::unordered_map<std::string, BagOfWords> bags_;
};

using QueryBags = std::map<std::string, BagOfWords>;

QueryBags tokenize_topics(std::span<const Topic> topics, const StopList& stops);

struct DroppedQuery {
  std::string query_id;
  std::string reason;
};

struct PointOptions {
  // When set, each list is cut to cutoffs[query_id] items; queries without a
  // positive cutoff are dropped.
  const std::map<std::string, std::size_t>* cutoffs = nullptr;
  unsigned threads = 1;
};

// Per-query (g(q), g_q(L)). Queries where either value is undefined are
// appended to `dropped`, never silently skipped.
std::vector<GsrPoint> gsr_points(const RunSet& run, const QueryBags& queries, const DocumentTable& docs,
                                 const GenderScorer& scorer, const PointOptions& options,
                                 std::vector<DroppedQuery>& dropped);

struct AuditReport {
  GsrResult system;
  GsrResult perfect;
  std::vector<DroppedQuery> dropped;
  std::vector<DroppedQuery> dropped_perfect;
};

// Cuts every list to K = number of relevant documents of its query, fits the
// slope, and fits the perfect engine on the same query set for reference.
AuditReport audit(const RunSet& run, const QueryBags& queries, const DocumentTable& docs, const Qrels& qrels,
                  const GenderScorer& scorer, unsigned threads = 1);

// Per-list inputs for the stereotypical / counter-stereotypical split of the slope.
struct ListBreakdown {
  double gq = 0.0;
  std::vector<std::optional<double>> doc_g;  // rank order
};

struct SlopeSplit {
  double slope = 0.0;
  double stereotypical = 0.0;  // contribution of documents with sgn(g_q(d)) == sgn(g(q))
  double counter = 0.0;        // everything else
  std::size_t n_stereotypical = 0;
  std::size_t n_counter = 0;
};

// Writes the slope as a sum over (query, document) pairs, each weighted by
// its normalized rank discount, and splits that sum by stereotype polarity.
SlopeSplit split_slope(std::span<const ListBreakdown> lists);

// TSV: header comments, "query_id g_q g_L k_used" rows, footer key/value block.
std::string format_audit_tsv(const AuditReport& report, std::span<const std::string> header_lines);
std::string format_result_tsv(const GsrResult& result, std::span<const std::string> header_lines);
// "g_q,g_L" rows.
std::string format_scatter_csv(const GsrResult& result);

// Reads the "slope" value from a report footer.
double read_report_slope(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace gsr
