#include "gsr/direct_stereotype.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"
#include "gsr/resources.hpp"

namespace gsr {

EntityLexicons EntityLexicons::defaults() {
  EntityLexicons lex;
  for (auto w : resources::male_entities()) lex.male.emplace(w);
  for (auto w : resources::female_entities()) lex.female.emplace(w);
  return lex;
}

void EntityLexicons::validate() const {
  if (male.empty() || female.empty()) throw InputError("entity lexicons must both be non-empty");
  for (const auto& w : male) {
    if (female.contains(w)) throw InputError("token '" + w + "' is in both entity lexicons");
  }
}

EntityLexicons EntityLexicons::load(const std::filesystem::path& male_path,
                                    const std::filesystem::path& female_path) {
  EntityLexicons lex;
  for (const auto& w : read_word_list(male_path)) lex.male.insert(ascii_lower(w));
  for (const auto& w : read_word_list(female_path)) lex.female.insert(ascii_lower(w));
  lex.validate();
  return lex;
}

void EntityLexicons::add_names(const std::filesystem::path& male_names, const std::filesystem::path& female_names) {
  auto m = read_word_list(male_names);
  auto f = read_word_list(female_names);
  std::set<std::string> ms;
  std::set<std::string> fs;
  for (const auto& w : m) ms.insert(ascii_lower(w));
  for (const auto& w : f) fs.insert(ascii_lower(w));
  // Unisex names would make the lexicons overlap; they carry no signal.
  for (const auto& w : ms) {
    if (!fs.contains(w) && !female.contains(w)) male.insert(w);
  }
  for (const auto& w : fs) {
    if (!ms.contains(w) && !male.contains(w)) female.insert(w);
  }
  validate();
}

const char* to_string(DocGender g) {
  switch (g) {
    case DocGender::male:
      return "male";
    case DocGender::female:
      return "female";
    case DocGender::neutral:
      return "neutral";
  }
  return "neutral";
}

DocGender intrinsic_genderedness(const BagOfWords& doc, const EntityLexicons& lex) {
  std::size_t m = 0;
  std::size_t f = 0;
  for (const auto& t : doc.tokens) {
    if (lex.male.contains(t)) ++m;
    if (lex.female.contains(t)) ++f;
  }
  if (m > f) return DocGender::male;
  if (f > m) return DocGender::female;
  return DocGender::neutral;
}

std::optional<double> representation_gap(std::size_t m, std::size_t f, double epsilon) {
  if (epsilon < 0.0) throw InputError("gap smoothing must be non-negative");
  if (epsilon == 0.0 && f == 0) return std::nullopt;
  return (static_cast<double>(m) + epsilon) / (static_cast<double>(f) + epsilon);
}

std::vector<double> default_gap_bin_edges() { return {-0.1, -0.05, 0.0, 0.05, 0.1}; }

std::vector<GapBin> bin_gap_records(const std::vector<GapRecord>& records, const std::vector<double>& edges) {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw InputError("bin edges must be strictly increasing");
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<GapBin> bins(edges.size() + 1);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].lo = i == 0 ? -inf : edges[i - 1];
    bins[i].hi = i == edges.size() ? inf : edges[i];
  }
  std::vector<std::array<std::size_t, 3>> counts(bins.size(), {0, 0, 0});
  for (const auto& r : records) {
    std::size_t b = 0;
    while (b < edges.size() && r.gq > edges[b]) ++b;
    ++bins[b].n_queries;
    ++counts[b][r.delta_sign > 0 ? 0 : r.delta_sign < 0 ? 1 : 2];
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bins[b].n_queries == 0) continue;
    const double n = static_cast<double>(bins[b].n_queries);
    bins[b].pct_male = 100.0 * counts[b][0] / n;
    bins[b].pct_female = 100.0 * counts[b][1] / n;
    bins[b].pct_neutral = 100.0 * counts[b][2] / n;
  }
  return bins;
}

namespace {

std::pair<std::size_t, std::size_t> count_mf(const RankedList& list, std::size_t k, const DocumentTable& docs,
                                             const EntityLexicons& lex) {
  std::size_t m = 0;
  std::size_t f = 0;
  for (std::size_t i = 0; i < std::min(k, list.size()); ++i) {
    const auto* bag = docs.find(list.items[i].doc_id);
    if (bag == nullptr) continue;
    switch (intrinsic_genderedness(*bag, lex)) {
      case DocGender::male:
        ++m;
        break;
      case DocGender::female:
        ++f;
        break;
      case DocGender::neutral:
        break;
    }
  }
  return {m, f};
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

GapAnalysis delta_gap_analysis(const RunSet& system, const RunSet& perfect, const QueryBags& queries,
                               const DocumentTable& entity_docs, const GenderScorer& scorer,
                               const EntityLexicons& lex, const std::vector<double>& edges, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("delta-gap analysis needs a positive smoothing epsilon");
  lex.validate();
  if (system.size() != perfect.size()) throw InputError("system and perfect runs cover different query sets");
  for (const auto& [qid, _] : system) {
    if (!perfect.contains(qid)) throw InputError("query " + qid + " is missing from the perfect run");
  }

  GapAnalysis out;
  for (const auto& [qid, sys_list] : system) {
    const auto& ref = perfect.at(qid);
    auto q = queries.find(qid);
    std::optional<double> gq;
    if (q != queries.end()) gq = query_genderedness(q->second, scorer);
    if (!gq) {
      out.dropped.push_back({qid, "query genderedness undefined"});
      continue;
    }
    if (ref.empty()) {
      out.dropped.push_back({qid, "no relevant documents"});
      continue;
    }
    GapRecord r;
    r.query_id = qid;
    r.gq = *gq;
    std::tie(r.m_sys, r.f_sys) = count_mf(sys_list, ref.size(), entity_docs, lex);
    std::tie(r.m_perfect, r.f_perfect) = count_mf(ref, ref.size(), entity_docs, lex);
    r.gap_sys = *representation_gap(r.m_sys, r.f_sys, epsilon);
    r.gap_perfect = *representation_gap(r.m_perfect, r.f_perfect, epsilon);
    r.delta_sign = sign_of(r.gap_sys - r.gap_perfect);
    auto raw_sys = representation_gap(r.m_sys, r.f_sys, 0.0);
    auto raw_ref = representation_gap(r.m_perfect, r.f_perfect, 0.0);
    if (raw_sys && raw_ref) r.delta_sign_raw = sign_of(*raw_sys - *raw_ref);
    out.records.push_back(std::move(r));
  }
  out.bins = bin_gap_records(out.records, edges);
  return out;
}

std::string format_gap_bins_tsv(const std::vector<GapBin>& bins, std::span<const std::string> header_lines) {
  std::string out;
  for (const auto& h : header_lines) out += "# " + h + "\n";
  out += "bin_lo\tbin_hi\tpct_male\tpct_female\tpct_neutral\tn_queries\n";
  for (const auto& b : bins) {
    out += format_double(b.lo) + "\t" + format_double(b.hi) + "\t";
    if (b.n_queries == 0) {
      out += "NA\tNA\tNA\t0\n";
    } else {
      out += format_double(b.pct_male) + "\t" + format_double(b.pct_female) + "\t" + format_double(b.pct_neutral) +
             "\t" + std::to_string(b.n_queries) + "\n";
    }
  }
  return out;
}

}  // namespace gsr
