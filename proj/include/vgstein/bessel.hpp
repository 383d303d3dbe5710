#pragma once

// Modified Bessel functions I_nu and K_nu of real order and real argument.
//
// All evaluations go through exponentially scaled kernels, so the scaled
// variants (exp(-|x|) I_nu(x), exp(x) K_nu(x)) stay finite far beyond the
// point where the unscaled functions overflow.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vgstein::bessel {

// I_nu(x), nu > -1. Negative x uses the even extension I_nu(|x|), which is the
// continuation the Stein solver needs (I_nu(x)/x^nu is even in x).
// scaled == true returns exp(-|x|) I_nu(x).
double bessel_i(double nu, double x, bool scaled = false);

// K_nu(x), any real nu (K_{-nu} = K_nu), x > 0.
// scaled == true returns exp(x) K_nu(x).
double bessel_k(double nu, double x, bool scaled = false);

// log K_nu(x) for x > 0; finite where K_nu itself overflows (large nu, tiny x).
double log_bessel_k(double nu, double x);

// I_nu(|x|) / |x|^nu, analytic and even; equals 1 / (2^nu Gamma(nu+1)) at 0.
double bessel_i_over_power(double nu, double x);

// K_nu'(x) = -(K_{nu-1}(x) + K_{nu+1}(x)) / 2.
double bessel_k_derivative(double nu, double x);

// I_nu'(x) = (I_{nu-1}(x) + I_{nu+1}(x)) / 2, x > 0.
double bessel_i_derivative(double nu, double x);

// One row of the inequality checker.
struct InequalityPoint {
  std::string name;  // "k_slope", "i_tail_large_order" or "i_tail_small_order"
  double x = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct InequalityReport {
  double nu = 0.0;
  double beta = 0.0;
  int derivative_order = 0;
  std::vector<InequalityPoint> points;

  bool all_pass() const;
};

// Evaluates both sides of every applicable kernel inequality on x_grid, x >= 0:
//   k_slope (nu > -1/2):
//     |d/dx(e^{-bx} K_nu(x) / x^nu) int_0^x e^{bt} t^nu I_nu(t) dt|
//       < 2(b+1)/(2nu+1) x K_{nu+1}(x) I_nu(x)
//   i_tail_large_order (nu >= 1/2):
//     |d^n/dx^n(e^{-bx} I_nu(x) / x^nu) int_x^inf e^{bt} t^nu K_nu(t) dt|
//       < sqrt(pi) Gamma(nu+1/2) / ((1-b^2)^{nu+1/2} Gamma(nu+1))
//   i_tail_small_order (|nu| < 1/2): same left side
//       < (e+1) 2^{2nu} Gamma(nu+1/2) / (1-|b|)
// derivative_order selects n for the two tail inequalities (0, 1 or 2).
// Throws DomainError for |beta| >= 1, nu <= -1/2, negative grid points or an
// unsupported derivative order.
InequalityReport check_kernel_inequalities(double nu, double beta,
                                          std::span<const double> x_grid,
                                          int derivative_order = 0);

// Identity and asymptote checks over a fixed grid: the Wronskian
// I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x, K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}, and
// the large-argument ratios of I_nu and K_nu for nu in {-1/2, 0, 1/2} at x = 50.
struct SelfCheck {
  double wronskian_max_rel = 0.0;
  double k_half_max_rel = 0.0;
  double i_ratio_max_dev = 0.0;  // max |ratio - 1| at x = 50
  double k_ratio_max_dev = 0.0;
  std::size_t grid_points = 0;

  bool pass() const;  // 1e-10, 1e-12, 0.005, 0.005
};

SelfCheck self_check();

}  // namespace vgstein::bessel
