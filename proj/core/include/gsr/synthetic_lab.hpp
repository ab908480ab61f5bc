#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gsr/collection_io.hpp"
#include "gsr/gender_geometry.hpp"
#include "gsr/gsr_core.hpp"
#include "gsr/ranked_list.hpp"
#include "gsr/stat_tools.hpp"

namespace gsr {

struct Job {
  std::string token;
  double pct_female = 0.0;
  double pct_male = 0.0;
};

struct JobTable {
  std::vector<Job> male_jobs;
  std::vector<Job> female_jobs;

  static JobTable defaults();
  // CSV rows "job,group,pct_female,pct_male" with group in {male, female}.
  static JobTable load(const std::filesystem::path& path);
  void validate() const;
};

struct TraitTable {
  std::vector<std::string> agency;
  std::vector<std::string> communion;

  static TraitTable defaults();
  // CSV rows "adjective,construct" with construct in {agency, communion}.
  static TraitTable load(const std::filesystem::path& path);
  void validate() const;
};

enum class SimEngineKind { stereotypical, neutral, counter_stereotypical };

const char* to_string(SimEngineKind kind);

enum class SyntheticShape { toy, traits };

struct SyntheticCollection {
  SyntheticShape shape = SyntheticShape::toy;
  Collection collection;  // qrels left empty
};

// "The <person> is a <job>" for person in {man, woman}; ids "<job>_<person>".
SyntheticCollection build_toy_collection(const JobTable& jobs);

// "The <job> is <adjective>" for every job and trait; ids "<job>_<adjective>".
SyntheticCollection build_synthetic_collection(const JobTable& jobs, const TraitTable& traits);

// Deterministic S / N / CS runs over a collection built by the functions above.
RunSet simulate_engine(SimEngineKind kind, const SyntheticCollection& collection, const JobTable& jobs,
                       const TraitTable& traits = TraitTable::defaults());

struct ThreeSystems {
  GsrResult stereotypical;
  GsrResult neutral;
  GsrResult counter_stereotypical;
  std::vector<DroppedQuery> dropped;
};

ThreeSystems run_toy_gsr(const GenderScorer& scorer, const JobTable& jobs = JobTable::defaults());
ThreeSystems run_synthetic_gsr(const GenderScorer& scorer, const JobTable& jobs = JobTable::defaults(),
                               const TraitTable& traits = TraitTable::defaults());

// GSR of every list in `run`, no truncation.
GsrResult run_gsr(const SyntheticCollection& collection, const RunSet& run, const GenderScorer& scorer,
                  std::vector<DroppedQuery>* dropped = nullptr);

struct ParitySample {
  double gsr = 0.0;  // fitted directly from the points
  double pct_stereotypical = 0.0;
  double stereotypical_term = 0.0;
  double counter_term = 0.0;
};

struct ParityResult {
  std::vector<ParitySample> samples;
  Correlation correlation;  // between gsr and pct_stereotypical
};

// One of {S}, {CS}, (S, CS), (CS, S) per toy query, uniformly at random.
enum class ToyAnswer : std::uint8_t { s_only, cs_only, s_then_cs, cs_then_s };

// GSR and stereotypical share for a fixed assignment of answers (one per
// toy query, in collection topic order).
ParitySample evaluate_parity_solution(const GenderScorer& scorer, const JobTable& jobs,
                                      const std::vector<ToyAnswer>& answers);

ParityResult parity_experiment(const GenderScorer& scorer, std::size_t n_samples, std::uint64_t seed,
                               const JobTable& jobs = JobTable::defaults(), unsigned threads = 1);

// "gsr,pct_stereotypical" rows in sample order.
std::string format_parity_csv(const ParityResult& result);

// Two word groups with a stereotypical gender association each.
struct Dichotomy {
  std::string name;
  std::string male_label;
  std::string female_label;
  std::vector<std::string> male_words;
  std::vector<std::string> female_words;
};

// jobs, agency/communion, science/arts, career/family.
std::vector<Dichotomy> default_dichotomies(const JobTable& jobs = JobTable::defaults(),
                                           const TraitTable& traits = TraitTable::defaults());

// CSV rows "term,group"; `male_label` and `female_label` name the two groups.
Dichotomy load_dichotomy(const std::filesystem::path& path, std::string name, std::string male_label,
                         std::string female_label);

struct DichotomyResult {
  Dichotomy dichotomy;
  std::vector<double> g_male;
  std::vector<double> g_female;
  double mean_male = 0.0;
  double mean_female = 0.0;
  std::vector<std::string> missing;  // words without a vector
  PermutationResult test;            // female group tested for higher g
};

// Throws InputError when either group has no scorable word.
DichotomyResult test_dichotomy(const GenderScorer& scorer, const Dichotomy& d,
                               const PermutationOptions& options = {});

}  // namespace gsr
