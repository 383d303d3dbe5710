#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with global error control.
// Infinite ends are compactified with x = a + t/(1-t); the finite end keeps
// full resolution, so endpoint singularities there are resolved by bisection.

#include <functional>
#include <limits>
#include <span>
#include <utility>

namespace vgstein::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  // Used by callers that truncate exponentially decaying tails themselves.
  double tail_cut_epsilon = 1e-16;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

// Integral of f over (a, b); a and b may be -kInf / +kInf. split_points that
// fall strictly inside (a, b) become mandatory interval boundaries.
// Throws DomainError for a >= b or an invalid config, AccuracyError when the
// tolerance is not met within max_subdivisions.
QuadResult integrate(const Integrand& f, double a, double b,
                     std::span<const double> split_points = {},
                     const QuadConfig& cfg = {});

// Integral of h * density over support, split at the density's kink.
double expectation(const Integrand& h, const Integrand& density,
                   std::pair<double, double> support, double kink,
                   const QuadConfig& cfg = {});

}  // namespace vgstein::quad
