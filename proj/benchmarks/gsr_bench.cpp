#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gsr/gsr_core.hpp"
#include "gsr/retrieval.hpp"
#include "gsr/stat_tools.hpp"

namespace {

// Documents of 200 tokens drawn from a Zipf-like vocabulary of 5000 terms.
std::vector<gsr::Document> zipf_corpus(std::size_t n_docs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> weights(5000);
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> term(weights.begin(), weights.end());
  std::vector<gsr::Document> docs(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    docs[d].id = "d" + std::to_string(d);
    for (int t = 0; t < 200; ++t) docs[d].text += "t" + std::to_string(term(rng)) + " ";
  }
  return docs;
}

void BM_Bm25Query(benchmark::State& state) {
  const auto docs = zipf_corpus(static_cast<std::size_t>(state.range(0)), 1);
  const gsr::StopList stops;
  const auto index = gsr::build_index(docs, stops);
  const auto query = gsr::tokenize("t3 t40 t400 t2500", stops);
  for (auto _ : state) benchmark::DoNotOptimize(gsr::score_bm25(index, "q", query));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bm25Query)->Arg(1000)->Arg(10000);

void BM_BuildIndex(benchmark::State& state) {
  const auto docs = zipf_corpus(static_cast<std::size_t>(state.range(0)), 2);
  const gsr::StopList stops;
  for (auto _ : state) benchmark::DoNotOptimize(gsr::build_index(docs, stops));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GsrSlope(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<gsr::GsrPoint> points(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double gq = n(rng);
    points[i] = {"q" + std::to_string(i), gq, 0.3 * gq + 0.1 * n(rng), 100};
  }
  for (auto _ : state) benchmark::DoNotOptimize(gsr::gsr_slope(points));
}
BENCHMARK(BM_GsrSlope)->Arg(250)->Arg(10000);

void BM_ListGenderedness(benchmark::State& state) {
  const auto store = gsr::testing::gendered_store(5);
  const auto dir = gsr::extract_direction(store, gsr::DefinitionalPairs::defaults(), "she", {});
  gsr::GenderScorer scorer(store, dir);
  scorer.precompute();
  const gsr::StopList stops = gsr::StopList::english();
  const auto query = gsr::tokenize("electrician", stops);
  std::vector<gsr::BagOfWords> docs;
  for (int i = 0; i < 100; ++i)
    docs.push_back(gsr::tokenize(i % 2 ? "the man is an electrician" : "mary is a nurse who gives care", stops));
  for (auto _ : state) benchmark::DoNotOptimize(gsr::list_genderedness(docs, query, scorer));
}
BENCHMARK(BM_ListGenderedness);

void BM_PermutationExact(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(10), b(10);
  for (auto& x : a) x = n(rng) + 0.5;
  for (auto& x : b) x = n(rng);
  for (auto _ : state) benchmark::DoNotOptimize(gsr::permutation_test_one_tailed(a, b));
}
BENCHMARK(BM_PermutationExact)->Unit(benchmark::kMillisecond);

void BM_PermutationMonteCarlo(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(40), b(40);
  for (auto& x : a) x = n(rng) + 0.3;
  for (auto& x : b) x = n(rng);
  gsr::PermutationOptions opt;
  opt.trials = 100'000;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gsr::permutation_test_one_tailed(a, b, opt));
}
BENCHMARK(BM_PermutationMonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LoadBinary(benchmark::State& state) {
  gsr::testing::TempDir dir;
  const auto path = dir / "emb.bin";
  gsr::save_binary(gsr::testing::random_store(static_cast<std::size_t>(state.range(0)), 300, 6), path);
  for (auto _ : state) benchmark::DoNotOptimize(gsr::load_binary(path));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LoadBinary)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
