#pragma once

// Block-partitioned Monte Carlo kernel for W_r = sum_k S_k T_k with
// S_k = m^{-1/2} sum_i X_ik and T_k = n^{-1/2} sum_j Y_jk.
//
// Samples are split into fixed-size blocks; block b draws from its own
// mt19937_64 seeded with seed_seq{seed, b}. Per-block statistics are merged
// in block order, so results do not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vgstein/sampling.hpp"
#include "vgstein/test_functions.hpp"
#include "vgstein/vgdist.hpp"

namespace vgstein::sim {

enum class Law { kRademacher, kGaussian, kUniformPm, kCustom };

std::string law_name(Law law);
// "rademacher", "gaussian", "uniform_pm"; DomainError otherwise.
Law parse_law(std::string_view name);
// Standardized moments of a built-in law; DomainError for kCustom.
MomentBundle law_moments(Law law);

// One standardized draw (zero mean, unit variance).
using Sampler = std::function<double(sampling::Engine&)>;

// kProduct builds W from the driving laws. kD2 draws two uniform bit
// sequences and standardizes D2 = XY + (m-X)(n-Y); requires r = 1.
enum class Statistic { kProduct, kD2 };

struct KernelSpec {
  std::uint64_t m = 1, n = 1;
  int r = 1;
  Law law_x = Law::kRademacher, law_y = Law::kRademacher;
  Sampler custom_x, custom_y;  // used when the law is kCustom
  Statistic statistic = Statistic::kProduct;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::size_t block_size = std::size_t{1} << 16;
  std::vector<RealFn> hs;
  double time_budget_seconds = 0.0;  // 0 means unlimited

  void validate() const;
  std::size_t block_count() const;
  std::size_t block_length(std::size_t block) const;
};

// Running mean and sum of squared deviations per test function.
struct Accumulator {
  std::size_t count = 0;
  std::vector<double> mean, m2;

  explicit Accumulator(std::size_t hs = 0) : mean(hs, 0.0), m2(hs, 0.0) {}
  // Chan et al. pairwise update; order matters for bitwise results.
  void merge(const Accumulator& other);
  double variance(std::size_t h) const;
  double std_error(std::size_t h) const;
};

// The W draws of one block, in order.
void draw_block(const KernelSpec& spec, std::size_t block, std::span<double> out);
// Statistics of one block.
Accumulator run_block(const KernelSpec& spec, std::size_t block);

// Serial reference and OpenMP driver. Both throw PartialResultError when the
// time budget runs out, reporting the samples finished so far.
Accumulator simulate_serial(const KernelSpec& spec);
Accumulator simulate_omp(const KernelSpec& spec, int threads);

// Worker count: requested if positive, else the OpenMP default; capped by
// VGSTEIN_THREADS when that is set to a positive integer.
int resolve_threads(int requested);

}  // namespace vgstein::sim
