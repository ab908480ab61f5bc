#include "gsr/stat_tools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "gsr/error.hpp"

namespace gsr {

namespace {

// p-values are reported in (0, 1]; underflow is floored at the smallest normal double.
double clamp_p(double p) { return std::clamp(p, std::numeric_limits<double>::min(), 1.0); }

double correlation_p(double r, std::size_t n) {
  const double df = static_cast<double>(n) - 2.0;
  if (std::abs(r) >= 1.0) return clamp_p(0.0);
  const double t = r * std::sqrt(df / ((1.0 - r) * (1.0 + r)));
  return student_t_two_sided_p(t, df);
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete beta needs positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw InputError("t distribution needs positive degrees of freedom");
  if (std::isinf(t)) return clamp_p(0.0);
  const double x = df / (df + t * t);
  return clamp_p(incomplete_beta(df / 2.0, 0.5, x));
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("correlation inputs differ in length");
  if (x.size() < 3) throw InputError("correlation needs at least 3 pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateError("correlation undefined for a constant input");
  Correlation c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  c.p = correlation_p(c.r, x.size());
  return c;
}

std::vector<double> mid_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("correlation inputs differ in length");
  auto rx = mid_ranks(x);
  auto ry = mid_ranks(y);
  return pearson(rx, ry);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ using u128 = unsigned __int128;
  u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

// Counts size-`take` subsets of `sorted_desc` whose sum reaches `threshold`.
class SubsetCounter {
 public:
  SubsetCounter(std::vector<double> sorted_desc, double threshold)
      : v_(std::move(sorted_desc)), threshold_(threshold), prefix_(v_.size() + 1, 0.0) {
    for (std::size_t i = 0; i < v_.size(); ++i) prefix_[i + 1] = prefix_[i] + v_[i];
  }

  std::uint64_t count(std::size_t take) { return recurse(0, take, 0.0); }

 private:
  double range_sum(std::size_t from, std::size_t len) const { return prefix_[from + len] - prefix_[from]; }

  std::uint64_t recurse(std::size_t idx, std::size_t take, double partial) {
    const std::size_t left = v_.size() - idx;
    if (take == 0) return partial >= threshold_ ? 1 : 0;
    if (take > left) return 0;
    // Largest reachable sum uses the next `take` values, smallest the last `take`.
    if (partial + range_sum(idx, take) < threshold_) return 0;
    if (partial + range_sum(v_.size() - take, take) >= threshold_) return binomial(left, take);
    return recurse(idx + 1, take - 1, partial + v_[idx]) + recurse(idx + 1, take, partial);
  }

  std::vector<double> v_;
  double threshold_;
  std::vector<double> prefix_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PermutationResult permutation_test_one_tailed(std::span<const double> group_a, std::span<const double> group_b,
                                              const PermutationOptions& options) {
  if (group_a.empty() || group_b.empty()) throw InputError("permutation test needs two non-empty groups");
  const std::size_t na = group_a.size();
  const std::size_t nb = group_b.size();
  std::vector<double> pooled(group_a.begin(), group_a.end());
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const double total = std::accumulate(pooled.begin(), pooled.end(), 0.0);
  const double sum_a = std::accumulate(group_a.begin(), group_a.end(), 0.0);

  PermutationResult out;
  out.observed = sum_a / static_cast<double>(na) - (total - sum_a) / static_cast<double>(nb);

  // mean(a) - mean(b) increases with sum(a) at fixed group sizes, so the test
  // compares subset sums; the slack absorbs summation-order rounding on ties.
  double scale = 0.0;
  for (double x : pooled) scale += std::abs(x);
  const double threshold = sum_a - 1e-12 * (scale + 1.0);

  const std::uint64_t combos = binomial(na + nb, na);
  if (combos <= options.exact_limit) {
    std::sort(pooled.begin(), pooled.end(), std::greater<>());
    SubsetCounter counter(std::move(pooled), threshold);
    const auto hits = counter.count(na);
    out.exact = true;
    out.permutations = combos;
    out.p = clamp_p(static_cast<double>(hits) / static_cast<double>(combos));
    out.resolution = 1.0 / static_cast<double>(combos);
    return out;
  }

  if (options.trials == 0) throw InputError("Monte Carlo permutation test needs at least one trial");
  // A fixed shard layout keeps the result independent of the thread count.
  constexpr std::size_t kShards = 64;
  std::vector<std::uint64_t> shard_hits(kShards, 0);
  auto run_shard = [&](std::size_t shard) {
    const std::uint64_t begin = options.trials * shard / kShards;
    const std::uint64_t end = options.trials * (shard + 1) / kShards;
    std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(shard)));
    std::vector<double> work(pooled);
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < na; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, work.size() - 1);
        std::swap(work[i], work[pick(rng)]);
        s += work[i];
      }
      if (s >= threshold) ++hits;
    }
    shard_hits[shard] = hits;
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    for (std::size_t s = 0; s < kShards; ++s) run_shard(s);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < kShards; s += threads) run_shard(s);
      });
    }
  }
  const auto hits = std::accumulate(shard_hits.begin(), shard_hits.end(), std::uint64_t{0});
  out.exact = false;
  out.permutations = options.trials;
  out.p = clamp_p(static_cast<double>(hits + 1) / static_cast<double>(options.trials + 1));
  out.resolution = 1.0 / static_cast<double>(options.trials + 1);
  return out;
}

PairedTTest paired_t_test(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw InputError("paired t test inputs differ in length");
  if (before.size() < 2) throw InputError("paired t test needs at least 2 pairs");
  const double n = static_cast<double>(before.size());
  std::vector<double> d(before.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = after[i] - before[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) throw DegenerateError("paired differences have zero variance");
  PairedTTest out;
  out.df = n - 1.0;
  out.t = mean / std::sqrt(var / n);
  out.p = student_t_two_sided_p(out.t, out.df);
  out.significant_05 = out.p < 0.05;
  out.significant_01 = out.p < 0.01;
  return out;
}

}  // namespace gsr
