#include "gsr/synthetic_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <thread>

#include "gsr/error.hpp"
#include "gsr/io_util.hpp"
#include "gsr/resources.hpp"
#include "gsr/text_prep.hpp"

namespace gsr {

JobTable JobTable::defaults() {
  JobTable t;
  for (const auto& j : resources::male_jobs()) t.male_jobs.push_back({std::string(j.job), j.pct_female, j.pct_male});
  for (const auto& j : resources::female_jobs()) {
    t.female_jobs.push_back({std::string(j.job), j.pct_female, j.pct_male});
  }
  return t;
}

JobTable JobTable::load(const std::filesystem::path& path) {
  JobTable t;
  for (const auto& row : read_csv_rows(path)) {
    if (row.size() != 4) throw FormatError(path.string() + ": job rows need 4 fields");
    Job j{row[0], std::stod(row[2]), std::stod(row[3])};
    if (row[1] == "male") {
      t.male_jobs.push_back(std::move(j));
    } else if (row[1] == "female") {
      t.female_jobs.push_back(std::move(j));
    } else {
      throw FormatError(path.string() + ": unknown job group '" + row[1] + "'");
    }
  }
  t.validate();
  return t;
}

void JobTable::validate() const {
  if (male_jobs.empty() || female_jobs.empty()) throw InputError("job table needs both male and female jobs");
  std::set<std::string> seen;
  for (const auto* group : {&male_jobs, &female_jobs}) {
    for (const auto& j : *group) {
      if (j.token.empty()) throw InputError("empty job token");
      if (!seen.insert(j.token).second) throw InputError("job '" + j.token + "' listed twice");
      const bool in_range = j.pct_female >= 0.0 && j.pct_female <= 100.0 && j.pct_male >= 0.0 && j.pct_male <= 100.0;
      if (!in_range || std::abs(j.pct_female + j.pct_male - 100.0) > 1e-6) {
        throw InputError("job '" + j.token + "' shares must lie in [0,100] and sum to 100");
      }
    }
  }
}

TraitTable TraitTable::defaults() {
  TraitTable t;
  for (auto a : resources::agency_traits()) t.agency.emplace_back(a);
  for (auto c : resources::communion_traits()) t.communion.emplace_back(c);
  return t;
}

TraitTable TraitTable::load(const std::filesystem::path& path) {
  TraitTable t;
  for (const auto& row : read_csv_rows(path)) {
    if (row.size() != 2) throw FormatError(path.string() + ": trait rows need 2 fields");
    if (row[1] == "agency") {
      t.agency.push_back(row[0]);
    } else if (row[1] == "communion") {
      t.communion.push_back(row[0]);
    } else {
      throw FormatError(path.string() + ": unknown construct '" + row[1] + "'");
    }
  }
  t.validate();
  return t;
}

void TraitTable::validate() const {
  if (agency.empty() || communion.empty()) throw InputError("trait table needs both constructs");
  std::set<std::string> seen;
  for (const auto* group : {&agency, &communion}) {
    for (const auto& a : *group) {
      if (!seen.insert(a).second) throw InputError("adjective '" + a + "' listed twice");
    }
  }
}

const char* to_string(SimEngineKind kind) {
  switch (kind) {
    case SimEngineKind::stereotypical:
      return "S";
    case SimEngineKind::neutral:
      return "N";
    case SimEngineKind::counter_stereotypical:
      return "CS";
  }
  return "?";
}

namespace {

std::vector<const Job*> all_jobs(const JobTable& jobs) {
  std::vector<const Job*> out;
  for (const auto& j : jobs.male_jobs) out.push_back(&j);
  for (const auto& j : jobs.female_jobs) out.push_back(&j);
  return out;
}

bool is_male_job(const JobTable& jobs, const std::string& token) {
  return std::any_of(jobs.male_jobs.begin(), jobs.male_jobs.end(), [&](const Job& j) { return j.token == token; });
}

RankedList list_of(const std::string& qid, const std::vector<std::string>& ids) {
  RankedList l;
  l.query_id = qid;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    l.items.push_back({ids[i], static_cast<double>(ids.size() - i), i + 1});
  }
  return l;
}

}  // namespace

SyntheticCollection build_toy_collection(const JobTable& jobs) {
  jobs.validate();
  SyntheticCollection out;
  out.shape = SyntheticShape::toy;
  for (const auto* j : all_jobs(jobs)) {
    out.collection.topics.push_back({j->token, j->token});
    for (const char* person : {"man", "woman"}) {
      out.collection.documents.push_back(
          {j->token + "_" + person, std::string("The ") + person + " is a " + j->token});
    }
  }
  return out;
}

SyntheticCollection build_synthetic_collection(const JobTable& jobs, const TraitTable& traits) {
  jobs.validate();
  traits.validate();
  SyntheticCollection out;
  out.shape = SyntheticShape::traits;
  for (const auto* j : all_jobs(jobs)) {
    out.collection.topics.push_back({j->token, j->token});
    for (const auto* group : {&traits.agency, &traits.communion}) {
      for (const auto& a : *group) out.collection.documents.push_back({j->token + "_" + a, "The " + j->token + " is " + a});
    }
  }
  return out;
}

RunSet simulate_engine(SimEngineKind kind, const SyntheticCollection& collection, const JobTable& jobs,
                       const TraitTable& traits) {
  RunSet run;
  for (const auto& topic : collection.collection.topics) {
    const std::string& job = topic.id;
    const bool male = is_male_job(jobs, job);
    std::vector<std::string> same;
    std::vector<std::string> other;
    switch (collection.shape) {
      case SyntheticShape::toy:
        same = {job + (male ? "_man" : "_woman")};
        other = {job + (male ? "_woman" : "_man")};
        break;
      case SyntheticShape::traits:
        for (const auto& a : male ? traits.agency : traits.communion) same.push_back(job + "_" + a);
        for (const auto& a : male ? traits.communion : traits.agency) other.push_back(job + "_" + a);
        break;
    }
    std::vector<std::string> ids;
    switch (kind) {
      case SimEngineKind::stereotypical:
        ids = same;
        break;
      case SimEngineKind::counter_stereotypical:
        ids = other;
        break;
      case SimEngineKind::neutral:
        if (collection.shape == SyntheticShape::toy) {
          ids = {job + "_man", job + "_woman"};
        } else {
          for (const auto& a : traits.agency) ids.push_back(job + "_" + a);
          for (const auto& a : traits.communion) ids.push_back(job + "_" + a);
        }
        break;
    }
    run[job] = list_of(job, ids);
  }
  return run;
}

GsrResult run_gsr(const SyntheticCollection& collection, const RunSet& run, const GenderScorer& scorer,
                  std::vector<DroppedQuery>* dropped) {
  const auto& stops = StopList::english();
  DocumentTable docs(collection.collection.documents, stops);
  auto queries = tokenize_topics(collection.collection.topics, stops);
  std::vector<DroppedQuery> local;
  auto points = gsr_points(run, queries, docs, scorer, PointOptions{}, dropped != nullptr ? *dropped : local);
  return gsr_slope(std::move(points));
}

namespace {

ThreeSystems run_three(const SyntheticCollection& c, const GenderScorer& scorer, const JobTable& jobs,
                       const TraitTable& traits) {
  ThreeSystems out;
  out.stereotypical = run_gsr(c, simulate_engine(SimEngineKind::stereotypical, c, jobs, traits), scorer, &out.dropped);
  out.neutral = run_gsr(c, simulate_engine(SimEngineKind::neutral, c, jobs, traits), scorer, nullptr);
  out.counter_stereotypical =
      run_gsr(c, simulate_engine(SimEngineKind::counter_stereotypical, c, jobs, traits), scorer, nullptr);
  return out;
}

}  // namespace

ThreeSystems run_toy_gsr(const GenderScorer& scorer, const JobTable& jobs) {
  return run_three(build_toy_collection(jobs), scorer, jobs, TraitTable::defaults());
}

ThreeSystems run_synthetic_gsr(const GenderScorer& scorer, const JobTable& jobs, const TraitTable& traits) {
  return run_three(build_synthetic_collection(jobs, traits), scorer, jobs, traits);
}

namespace {

// Per-query genderedness of the query and of its two candidate documents.
struct ToyQuery {
  std::string id;
  std::optional<double> gq;
  std::optional<double> g_s;
  std::optional<double> g_cs;
};

std::vector<ToyQuery> toy_queries(const GenderScorer& scorer, const JobTable& jobs) {
  const auto c = build_toy_collection(jobs);
  const auto& stops = StopList::english();
  DocumentTable docs(c.collection.documents, stops);
  std::vector<ToyQuery> out;
  for (const auto& t : c.collection.topics) {
    const bool male = is_male_job(jobs, t.id);
    const auto q = tokenize(t.title, stops);
    ToyQuery tq;
    tq.id = t.id;
    tq.gq = query_genderedness(q, scorer);
    tq.g_s = document_genderedness(*docs.find(t.id + (male ? "_man" : "_woman")), q, scorer);
    tq.g_cs = document_genderedness(*docs.find(t.id + (male ? "_woman" : "_man")), q, scorer);
    out.push_back(std::move(tq));
  }
  return out;
}

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

ParitySample evaluate(const std::vector<ToyQuery>& queries, const std::vector<ToyAnswer>& answers) {
  if (answers.size() != queries.size()) throw InputError("one answer per toy query is required");
  std::vector<ListBreakdown> lists;
  std::vector<GsrPoint> points;
  std::size_t retrieved = 0;
  std::size_t stereo = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    if (!q.gq) continue;
    ListBreakdown b;
    b.gq = *q.gq;
    switch (answers[i]) {
      case ToyAnswer::s_only:
        b.doc_g = {q.g_s};
        break;
      case ToyAnswer::cs_only:
        b.doc_g = {q.g_cs};
        break;
      case ToyAnswer::s_then_cs:
        b.doc_g = {q.g_s, q.g_cs};
        break;
      case ToyAnswer::cs_then_s:
        b.doc_g = {q.g_cs, q.g_s};
        break;
    }
    auto gl = weighted_list_genderedness(b.doc_g);
    if (!gl) continue;
    for (const auto& g : b.doc_g) {
      if (!g) continue;
      ++retrieved;
      if (sgn(*g) == sgn(b.gq)) ++stereo;
    }
    points.push_back({q.id, b.gq, *gl, b.doc_g.size()});
    lists.push_back(std::move(b));
  }
  ParitySample s;
  s.gsr = gsr_slope(std::move(points)).slope;
  const auto split = split_slope(lists);
  s.stereotypical_term = split.stereotypical;
  s.counter_term = split.counter;
  s.pct_stereotypical = 100.0 * static_cast<double>(stereo) / static_cast<double>(retrieved);
  return s;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

ParitySample evaluate_parity_solution(const GenderScorer& scorer, const JobTable& jobs,
                                      const std::vector<ToyAnswer>& answers) {
  return evaluate(toy_queries(scorer, jobs), answers);
}

ParityResult parity_experiment(const GenderScorer& scorer, std::size_t n_samples, std::uint64_t seed,
                               const JobTable& jobs, unsigned threads) {
  if (n_samples < 100) throw InputError("parity experiment needs at least 100 samples");
  const auto queries = toy_queries(scorer, jobs);
  ParityResult out;
  out.samples.resize(n_samples);
  // Each sample draws from its own derived stream, so the scatter does not
  // depend on how samples are spread across threads.
  auto work = [&](unsigned shard, unsigned stride) {
    std::vector<ToyAnswer> answers(queries.size());
    for (std::size_t i = shard; i < n_samples; i += stride) {
      std::mt19937_64 rng(mix(seed ^ mix(i)));
      std::uniform_int_distribution<int> pick(0, 3);
      for (auto& a : answers) a = static_cast<ToyAnswer>(pick(rng));
      out.samples[i] = evaluate(queries, answers);
    }
  };
  const unsigned t = std::max(1u, threads);
  if (t == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < t; ++s) pool.emplace_back(work, s, t);
  }
  std::vector<double> g(n_samples);
  std::vector<double> pct(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    g[i] = out.samples[i].gsr;
    pct[i] = out.samples[i].pct_stereotypical;
  }
  out.correlation = pearson(g, pct);
  return out;
}

std::string format_parity_csv(const ParityResult& result) {
  std::string out = "gsr,pct_stereotypical\n";
  for (const auto& s : result.samples) out += format_double(s.gsr) + "," + format_double(s.pct_stereotypical) + "\n";
  return out;
}

std::vector<Dichotomy> default_dichotomies(const JobTable& jobs, const TraitTable& traits) {
  auto words = [](std::span<const std::string_view> v) { return std::vector<std::string>(v.begin(), v.end()); };
  Dichotomy job{"jobs", "male_jobs", "female_jobs", {}, {}};
  for (const auto& j : jobs.male_jobs) job.male_words.push_back(j.token);
  for (const auto& j : jobs.female_jobs) job.female_words.push_back(j.token);
  return {
      job,
      {"agency_communion", "agency", "communion", traits.agency, traits.communion},
      {"science_arts", "science", "arts", words(resources::science_terms()), words(resources::arts_terms())},
      {"career_family", "career", "family", words(resources::career_terms()), words(resources::family_terms())},
  };
}

Dichotomy load_dichotomy(const std::filesystem::path& path, std::string name, std::string male_label,
                         std::string female_label) {
  Dichotomy d{std::move(name), std::move(male_label), std::move(female_label), {}, {}};
  for (const auto& row : read_csv_rows(path)) {
    if (row.size() != 2) throw FormatError(path.string() + ": rows need 2 fields");
    if (row[1] == d.male_label) {
      d.male_words.push_back(row[0]);
    } else if (row[1] == d.female_label) {
      d.female_words.push_back(row[0]);
    } else {
      throw FormatError(path.string() + ": unknown group '" + row[1] + "'");
    }
  }
  if (d.male_words.empty() || d.female_words.empty()) throw InputError(path.string() + ": both groups must be non-empty");
  return d;
}

DichotomyResult test_dichotomy(const GenderScorer& scorer, const Dichotomy& d, const PermutationOptions& options) {
  DichotomyResult out;
  out.dichotomy = d;
  auto collect = [&](const std::vector<std::string>& words, std::vector<double>& g) {
    for (const auto& w : words) {
      if (auto v = scorer(w)) {
        g.push_back(*v);
      } else {
        out.missing.push_back(w);
      }
    }
  };
  collect(d.male_words, out.g_male);
  collect(d.female_words, out.g_female);
  if (out.g_male.empty() || out.g_female.empty()) {
    throw InputError("dichotomy " + d.name + " has an empty group after vocabulary lookup");
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  out.mean_male = mean(out.g_male);
  out.mean_female = mean(out.g_female);
  out.test = permutation_test_one_tailed(out.g_female, out.g_male, options);
  return out;
}

}  // namespace gsr
