#pragma once

// Monte Carlo experiments for the double-index sum W_r: distances to the
// VG1(r, 0, 1, 0) target, bound checks, rate fits, the binary D2 statistic,
// and the exact point mass of a non-smooth test function.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vgstein/bounds.hpp"
#include "vgstein/simulate.hpp"
#include "vgstein/test_functions.hpp"

namespace vgstein::harness {

inline constexpr std::size_t kMinSamples = 10000;

struct SimConfig {
  std::uint64_t m = 1, n = 1;
  int r = 1;
  sim::Law law_x = sim::Law::kRademacher, law_y = sim::Law::kRademacher;
  // For kCustom: a standardized sampler and its standardized moments.
  sim::Sampler custom_x, custom_y;
  MomentBundle custom_moments_x, custom_moments_y;
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 1;
  std::vector<TestFunction> h_suite;
  int threads = 0;  // 0: OpenMP default, capped by VGSTEIN_THREADS
  double time_budget_seconds = 0.0;
  std::size_t block_size = std::size_t{1} << 16;
};

struct HResult {
  std::string h;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  double distance = 0.0;
  // Symmetrized bound; total is +inf when h has an unbounded norm.
  bounds::BoundReport bound;
  bool pass = false;  // distance <= bound.total + 3 SE
};

struct SimResult {
  std::uint64_t m = 0, n = 0;
  int r = 1;
  std::string law_x, law_y;
  std::size_t n_samples = 0;
  std::vector<HResult> per_h;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
};

// VG1(r, 0, 1, 0) expectation of h: closed form when the test function has
// one, quadrature at rel 1e-10 otherwise.
double vg_target(const TestFunction& h, int r);

SimResult simulate_w(const SimConfig& cfg);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t used = 0;
};

// Least-squares slope of log distance against log m. Points whose distance
// does not exceed 5 SE are dropped. Needs >= 4 points (DomainError) and >= 3
// usable ones (InsufficientSignalError).
RateFit rate_fit(std::span<const double> ms, std::span<const double> distances,
                 std::span<const double> ses);
RateFit rate_fit(const std::vector<SimResult>& sweep, std::string_view h);

struct PointMass {
  double exact = 0.0;
  double stirling = 0.0;
};

// P(W = 0) for Rademacher laws with m = 2k, n = 2l, and its Stirling form.
PointMass nonsmooth_exact(std::uint64_t k, std::uint64_t l);

// E h(W_1) for Rademacher laws by summing over the two binomial counts.
double rademacher_expectation(std::uint64_t m, std::uint64_t n, const RealFn& h);
// Same by brute force over all 2^{m+n} sign patterns; m + n <= 24.
double rademacher_expectation_enumerated(std::uint64_t m, std::uint64_t n, const RealFn& h);

struct D2Value {
  std::int64_t d2 = 0;
  double w = 0.0;
};

// Sequences over {'0','1'}. X and Y count the zeros.
D2Value d2_statistic(std::string_view seq1, std::string_view seq2);

// n_sequences pairs of uniform bit sequences; bound from bounds::d2_bound.
SimResult d2_experiment(std::uint64_t m, std::uint64_t n, std::size_t n_sequences,
                        const std::vector<TestFunction>& h_suite, std::uint64_t seed,
                        int threads = 0, double time_budget_seconds = 0.0);

}  // namespace vgstein::harness
