#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gsr {

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-sided, t-transform with n - 2 degrees of freedom
};

// Product-moment correlation. Throws InputError on length mismatch or n < 3,
// DegenerateError on zero variance.
Correlation pearson(std::span<const double> x, std::span<const double> y);

// Pearson on mid-ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks, tied values share the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> v);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct PermutationOptions {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  // Exact enumeration when C(n_a + n_b, n_a) does not exceed this.
  std::uint64_t exact_limit = 20'000'000;
  unsigned threads = 1;
};

struct PermutationResult {
  double p = 1.0;
  double observed = 0.0;  // mean(a) - mean(b)
  bool exact = false;
  std::uint64_t permutations = 0;  // enumerated, or Monte Carlo trials
  // Smallest attainable p: 1 / C(n, n_a) exact, 1 / (trials + 1) Monte Carlo.
  double resolution = 0.0;
};

// One-tailed test that group_a has the higher mean: the share of relabelings
// whose mean(a) - mean(b) is at least the observed difference. Monte Carlo
// mode returns (hits + 1) / (trials + 1).
PermutationResult permutation_test_one_tailed(std::span<const double> group_a, std::span<const double> group_b,
                                              const PermutationOptions& options = {});

struct PairedTTest {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
  bool significant_05 = false;
  bool significant_01 = false;
};

// Two-sided paired t on after - before. Throws DegenerateError when the
// differences have zero variance.
PairedTTest paired_t_test(std::span<const double> before, std::span<const double> after);

// C(n, k) saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace gsr
