#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsr/gsr_core.hpp"
#include "gsr/ranked_list.hpp"
#include "gsr/text_prep.hpp"

namespace gsr {

struct EntityLexicons {
  std::set<std::string> male;
  std::set<std::string> female;

  // Built-in lists of tokens naming gendered persons.
  static EntityLexicons defaults();
  // One token per line; entries are lowercased. Throws on overlap or empty sets.
  static EntityLexicons load(const std::filesystem::path& male_path, const std::filesystem::path& female_path);
  // Adds first names (one per line) to the existing sets.
  void add_names(const std::filesystem::path& male_names, const std::filesystem::path& female_names);
  void validate() const;
};

enum class DocGender { male, female, neutral };

const char* to_string(DocGender g);

// Strict majority of lexicon mentions; ties (including none) are neutral.
DocGender intrinsic_genderedness(const BagOfWords& doc, const EntityLexicons& lex);

// (m + epsilon) / (f + epsilon). With epsilon == 0 the plain ratio is
// returned, or nullopt when f == 0.
std::optional<double> representation_gap(std::size_t m, std::size_t f, double epsilon = 0.5);

struct GapRecord {
  std::string query_id;
  double gq = 0.0;
  std::size_t f_sys = 0;
  std::size_t m_sys = 0;
  std::size_t f_perfect = 0;
  std::size_t m_perfect = 0;
  double gap_sys = 0.0;
  double gap_perfect = 0.0;
  int delta_sign = 0;  // +1 system favors male documents, -1 female, 0 neither
  std::optional<int> delta_sign_raw;  // unsmoothed, when both ratios are defined
};

struct GapBin {
  double lo = 0.0;  // exclusive; -inf for the first bin
  double hi = 0.0;  // inclusive; +inf for the last bin
  std::size_t n_queries = 0;
  // Percentages are meaningful only when n_queries > 0.
  double pct_male = 0.0;
  double pct_female = 0.0;
  double pct_neutral = 0.0;
};

struct GapAnalysis {
  std::vector<GapRecord> records;
  std::vector<GapBin> bins;
  std::vector<DroppedQuery> dropped;
};

// Bin edges of the default g(q) quantization.
std::vector<double> default_gap_bin_edges();

// Compares intrinsic male/female document counts of each system list, cut to
// the length of the perfect list, against the perfect list. Both runs must
// cover the same queries. Lexicon matching uses `entity_docs`, tokenized
// without a stop list so pronouns survive.
GapAnalysis delta_gap_analysis(const RunSet& system, const RunSet& perfect, const QueryBags& queries,
                               const DocumentTable& entity_docs, const GenderScorer& scorer,
                               const EntityLexicons& lex, const std::vector<double>& edges,
                               double epsilon = 0.5);

// Bins are grouped by records' gq; exposed for direct use on precomputed records.
std::vector<GapBin> bin_gap_records(const std::vector<GapRecord>& records, const std::vector<double>& edges);

// bin_lo, bin_hi, pct_male, pct_female, pct_neutral, n_queries. Empty bins print "NA".
std::string format_gap_bins_tsv(const std::vector<GapBin>& bins, std::span<const std::string> header_lines);

}  // namespace gsr
