#pragma once

// Declarative experiment sweeps: a flat key = value config, one simulation
// per grid cell, and a fixed-schema CSV.
//
//   # comment
//   m = 20, 40, 80
//   n = 20, 40, 80        (omit for n = m)
//   pairing = diagonal    (zip m with n) | grid (all pairs)
//   r = 1
//   laws = rademacher, gaussian/gaussian
//   h = cos, tanh
//   n_samples = 10000000
//   seed = 42
//   statistic = product | d2
//   rate_fit = true
//   threads = 0
//   time_budget = 0       (seconds per cell, 0 = none)

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vgstein/harness.hpp"

namespace vgstein::sweep {

struct SweepConfig {
  std::vector<std::uint64_t> m, n;
  bool diagonal = true;
  std::vector<int> r{1};
  std::vector<std::pair<sim::Law, sim::Law>> laws{{sim::Law::kRademacher, sim::Law::kRademacher}};
  std::vector<std::string> h{"cos"};
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 1;
  bool d2 = false;
  bool fit_rate = false;
  int threads = 0;
  double time_budget_seconds = 0.0;
};

// DomainError naming the line for unknown keys, bad values and empty grids.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);

struct Cell {
  std::uint64_t m = 0, n = 0;
  int r = 1;
  sim::Law law_x = sim::Law::kRademacher, law_y = sim::Law::kRademacher;
};

std::vector<Cell> cells(const SweepConfig& cfg);

struct CellOutcome {
  Cell cell;
  bool ok = false;
  harness::SimResult result;
  std::string error;
};

struct FitOutcome {
  int r = 1;
  std::string law_x, law_y, h;
  bool ok = false;
  harness::RateFit fit;
  std::string error;
};

struct SweepOutput {
  std::vector<CellOutcome> outcomes;
  std::vector<FitOutcome> fits;
  std::size_t failed_cells() const;
};

SweepOutput run_sweep(const SweepConfig& cfg);

// Header: m,n,r,law_x,law_y,h,n_samples,estimate,se,target,distance,
// gamma1,gamma2,gamma3,M2,M3,M4,bound,pass. A failed cell gets pass = error
// and empty numeric fields. Each rate fit adds a row with m = fit, the slope
// in the estimate column, the number of points used in n_samples, and pass
// = ok or insufficient.
std::string to_csv(const SweepOutput& out, const SweepConfig& cfg);

// %.17g, so values round-trip.
std::string format_double(double v);

}  // namespace vgstein::sweep
