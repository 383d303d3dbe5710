#include "vgstein/harness.hpp"

#include <cmath>
#include <numbers>

#include "vgstein/errors.hpp"
#include "vgstein/quad.hpp"

namespace vgstein::harness {

double vg_target(const TestFunction& h, int r) {
  const auto p = VGParams::first(r, 0.0, 1.0, 0.0);
  if (h.exact_expectation) return h.exact_expectation(p);
  quad::QuadConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-10;
  return vg::expect(p, h.h, cfg);
}

namespace {

bool finite_norms(const HNorms& n) {
  return std::isfinite(n.centered) && std::isfinite(n.d1) && std::isfinite(n.d2) &&
         std::isfinite(n.d3);
}

MomentBundle moments_of(sim::Law law, const MomentBundle& custom) {
  return law == sim::Law::kCustom ? custom : sim::law_moments(law);
}

sim::KernelSpec kernel_spec(const SimConfig& cfg) {
  if (cfg.n_samples < kMinSamples) {
    throw DomainError("n_samples must be at least " + std::to_string(kMinSamples));
  }
  sim::KernelSpec spec;
  spec.m = cfg.m;
  spec.n = cfg.n;
  spec.r = cfg.r;
  spec.law_x = cfg.law_x;
  spec.law_y = cfg.law_y;
  spec.custom_x = cfg.custom_x;
  spec.custom_y = cfg.custom_y;
  spec.seed = cfg.seed;
  spec.n_samples = cfg.n_samples;
  spec.block_size = cfg.block_size;
  spec.time_budget_seconds = cfg.time_budget_seconds;
  for (const auto& h : cfg.h_suite) spec.hs.push_back(h.h);
  spec.validate();
  return spec;
}

SimResult finish(const SimConfig& cfg, const sim::Accumulator& acc, const MomentBundle& mx,
                 const MomentBundle& my, bool d2) {
  SimResult out;
  out.m = cfg.m;
  out.n = cfg.n;
  out.r = cfg.r;
  out.law_x = d2 ? "bits" : sim::law_name(cfg.law_x);
  out.law_y = d2 ? "bits" : sim::law_name(cfg.law_y);
  out.n_samples = acc.count;
  for (std::size_t i = 0; i < cfg.h_suite.size(); ++i) {
    const auto& h = cfg.h_suite[i];
    HResult res;
    res.h = h.name;
    res.estimate = acc.mean[i];
    res.se = acc.std_error(i);
    res.target = vg_target(h, cfg.r);
    res.distance = std::abs(res.estimate - res.target);
    const HNorms norms = h.norms(res.target);
    if (finite_norms(norms)) {
      res.bound = d2 ? bounds::d2_bound(cfg.m, cfg.n, norms)
                     : bounds::vg_bound(mx, my, cfg.m, cfg.n, cfg.r, norms, true);
    } else {
      res.bound.m = cfg.m;
      res.bound.n = cfg.n;
      res.bound.r = cfg.r;
      res.bound.variant = bounds::Variant::kSymmetrizedMin;
      res.bound.total = std::numeric_limits<double>::infinity();
    }
    res.pass = res.distance <= res.bound.total + 3.0 * res.se;
    out.per_h.push_back(std::move(res));
  }
  return out;
}

}  // namespace

SimResult simulate_w(const SimConfig& cfg) {
  const auto spec = kernel_spec(cfg);
  const MomentBundle mx = moments_of(cfg.law_x, cfg.custom_moments_x);
  const MomentBundle my = moments_of(cfg.law_y, cfg.custom_moments_y);
  mx.require_standardized(1e-9);
  my.require_standardized(1e-9);
  const auto acc = sim::simulate_omp(spec, cfg.threads);
  return finish(cfg, acc, mx, my, false);
}

RateFit rate_fit(std::span<const double> ms, std::span<const double> distances,
                 std::span<const double> ses) {
  if (ms.size() != distances.size() || ms.size() != ses.size()) {
    throw DomainError("rate_fit inputs must have equal lengths");
  }
  if (ms.size() < 4) throw DomainError("rate_fit needs at least 4 grid points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!(ms[i] > 0.0)) throw DomainError("grid values must be positive");
    if (distances[i] > 5.0 * ses[i] && distances[i] > 0.0) {
      lx.push_back(std::log(ms[i]));
      ly.push_back(std::log(distances[i]));
    }
  }
  if (lx.size() < 3) {
    throw InsufficientSignalError("only " + std::to_string(lx.size()) +
                                  " points have distance above 5 SE; need 3");
  }
  const double k = static_cast<double>(lx.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientSignalError("usable points share one grid value");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.used = lx.size();
  return fit;
}

RateFit rate_fit(const std::vector<SimResult>& sweep, std::string_view h) {
  std::vector<double> ms, ds, ses;
  for (const auto& cell : sweep) {
    if (cell.m != cell.n) throw DomainError("rate_fit expects an m = n sweep");
    for (const auto& res : cell.per_h) {
      if (res.h == h) {
        ms.push_back(static_cast<double>(cell.m));
        ds.push_back(res.distance);
        ses.push_back(res.se);
      }
    }
  }
  return rate_fit(ms, ds, ses);
}

namespace {

// C(2k, k) 4^{-k}; exact integer arithmetic while it fits, log space beyond.
double central_binomial_mass(std::uint64_t k) {
  if (k <= 30) {
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) c = c * (k + i) / i;
    return std::ldexp(static_cast<double>(c), -2 * static_cast<int>(k));
  }
  const double kk = static_cast<double>(k);
  return std::exp(std::lgamma(2 * kk + 1) - 2 * std::lgamma(kk + 1) - 2 * kk * std::numbers::ln2);
}

// log C(len, j) - len log 2.
double log_binomial_pmf(std::uint64_t len, std::uint64_t j) {
  const double l = static_cast<double>(len), jj = static_cast<double>(j);
  return std::lgamma(l + 1) - std::lgamma(jj + 1) - std::lgamma(l - jj + 1) - l * std::numbers::ln2;
}

}  // namespace

PointMass nonsmooth_exact(std::uint64_t k, std::uint64_t l) {
  if (k < 1 || l < 1) throw DomainError("k and l must be at least 1");
  if (k > 1000000 || l > 1000000) throw DomainError("k and l are limited to 1e6");
  const double a = central_binomial_mass(k), b = central_binomial_mass(l);
  const double m = 2.0 * static_cast<double>(k), n = 2.0 * static_cast<double>(l);
  PointMass pm;
  pm.exact = a + b - a * b;
  // The product of the two Stirling terms is 2 / (pi sqrt(mn)).
  pm.stirling = std::sqrt(2.0 / (std::numbers::pi * m)) + std::sqrt(2.0 / (std::numbers::pi * n)) -
                2.0 / (std::numbers::pi * std::sqrt(m * n));
  return pm;
}

double rademacher_expectation(std::uint64_t m, std::uint64_t n, const RealFn& h) {
  if (m == 0 || n == 0) throw DomainError("m and n must be positive");
  if (m > 100000 || n > 100000) throw DomainError("m and n are limited to 1e5");
  const double inv = 1.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  std::vector<double> px(m + 1), py(n + 1);
  for (std::uint64_t i = 0; i <= m; ++i) px[i] = std::exp(log_binomial_pmf(m, i));
  for (std::uint64_t j = 0; j <= n; ++j) py[j] = std::exp(log_binomial_pmf(n, j));
  double total = 0.0;
  for (std::uint64_t i = 0; i <= m; ++i) {
    const double sx = 2.0 * static_cast<double>(i) - static_cast<double>(m);
    double row = 0.0;
    for (std::uint64_t j = 0; j <= n; ++j) {
      const double sy = 2.0 * static_cast<double>(j) - static_cast<double>(n);
      row += py[j] * h(sx * sy * inv);
    }
    total += px[i] * row;
  }
  return total;
}

double rademacher_expectation_enumerated(std::uint64_t m, std::uint64_t n, const RealFn& h) {
  if (m == 0 || n == 0) throw DomainError("m and n must be positive");
  if (m + n > 24) throw DomainError("enumeration is limited to m + n <= 24");
  const double inv = 1.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  const std::uint64_t patterns = std::uint64_t{1} << (m + n);
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    std::int64_t sx = 0, sy = 0;
    for (std::uint64_t i = 0; i < m; ++i) sx += (bits >> i) & 1 ? 1 : -1;
    for (std::uint64_t j = 0; j < n; ++j) sy += (bits >> (m + j)) & 1 ? 1 : -1;
    total += h(static_cast<double>(sx * sy) * inv);
  }
  return total / static_cast<double>(patterns);
}

D2Value d2_statistic(std::string_view seq1, std::string_view seq2) {
  if (seq1.empty() || seq2.empty()) throw DomainError("sequences must be non-empty");
  auto zeros = [](std::string_view s) {
    std::int64_t z = 0;
    for (char c : s) {
      if (c == '0') {
        ++z;
      } else if (c != '1') {
        throw DomainError("sequences must be over {0, 1}");
      }
    }
    return z;
  };
  const auto m = static_cast<std::int64_t>(seq1.size());
  const auto n = static_cast<std::int64_t>(seq2.size());
  const std::int64_t x = zeros(seq1), y = zeros(seq2);
  D2Value v;
  v.d2 = x * y + (m - x) * (n - y);
  // (D2 - mn/2) / sqrt(mn/4) with an integer numerator.
  v.w = static_cast<double>(2 * v.d2 - m * n) / std::sqrt(static_cast<double>(m * n));
  return v;
}

SimResult d2_experiment(std::uint64_t m, std::uint64_t n, std::size_t n_sequences,
                        const std::vector<TestFunction>& h_suite, std::uint64_t seed, int threads,
                        double time_budget_seconds) {
  SimConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.r = 1;
  cfg.n_samples = n_sequences;
  cfg.seed = seed;
  cfg.h_suite = h_suite;
  cfg.threads = threads;
  cfg.time_budget_seconds = time_budget_seconds;
  auto spec = kernel_spec(cfg);
  spec.statistic = sim::Statistic::kD2;
  const auto acc = sim::simulate_omp(spec, threads);
  const auto rad = MomentBundle::rademacher();
  return finish(cfg, acc, rad, rad, true);
}

}  // namespace vgstein::harness
