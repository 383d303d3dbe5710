#pragma once

// Variance-Gamma laws: parametrisations, density, CDF, moments, MGF, tails,
// sampling and the special-case constructors.
//
// First parametrisation VG1(r, theta, sigma, mu); second VG2(nu, alpha, beta, mu)
// with nu = (r-1)/2, alpha = sqrt(theta^2 + sigma^2)/sigma^2, beta = theta/sigma^2.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "vgstein/quad.hpp"

namespace vgstein {

struct VGParams {
  double r = 1.0;
  double theta = 0.0;
  double sigma = 1.0;
  double mu = 0.0;

  // Validating constructors. Throw DomainError on r <= 0, sigma <= 0,
  // non-finite input, nu <= -1/2 or alpha <= |beta|.
  static VGParams first(double r, double theta, double sigma, double mu);
  static VGParams second(double nu, double alpha, double beta, double mu);

  double nu() const { return 0.5 * (r - 1.0); }
  double alpha() const;
  double beta() const { return theta / (sigma * sigma); }

  void validate() const;
};

// Moments of a single driving variable, raw[k] = E X^k for k = 0..6.
struct MomentBundle {
  std::array<double, 7> raw{1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  double abs3 = 0.0;  // E|X|^3
  double abs5 = 0.0;  // E|X|^5

  static MomentBundle rademacher();
  static MomentBundle gaussian();
  // Uniform on [-sqrt 3, sqrt 3].
  static MomentBundle uniform_pm();
  // Subtracts the sample mean and divides by the sample SD before taking moments.
  static MomentBundle from_samples(std::span<const double> xs);

  // E X^2 >= (E X)^2, E|X|^k >= |E X^k|, E X^4 >= (E X^2)^2.
  bool consistent() const;
  // Throws DomainError unless mean is 0 and variance 1 within tol.
  void require_standardized(double tol = 1e-12) const;
};

// Gaussian absolute moments E|X|^k = 2^{k/2} Gamma((k+1)/2) / sqrt(pi).
double gaussian_abs_moment(int k);

namespace vg {

// Density of VG1. Returns +inf at x = mu when nu <= 0.
double density(const VGParams& p, double x);
// Same law evaluated through the (nu, alpha, beta) form; used as a cross-check.
double density_second_form(const VGParams& p, double x);
// log density, -inf never returned for finite x; +inf at the kink when nu <= 0.
double log_density(const VGParams& p, double x);

double cdf(const VGParams& p, double x, const quad::QuadConfig& cfg = {});
double survival(const VGParams& p, double x, const quad::QuadConfig& cfg = {});
// CDF on an increasing grid by accumulating cell integrals (one quadrature per cell).
std::vector<double> cdf_grid(const VGParams& p, std::span<const double> xs,
                             const quad::QuadConfig& cfg = {});

// (mu + r theta, r (sigma^2 + 2 theta^2)).
std::pair<double, double> mean_variance(const VGParams& p);

// M_0..M_{k_max} from the three-term recurrence. Requires mu == 0.
std::vector<double> moments(const VGParams& p, int k_max);

// E exp(tX) for mu == 0: (1 - 2 theta t - sigma^2 t^2)^{-r/2}.
// Throws DomainError unless |t + beta| < alpha.
double mgf(const VGParams& p, double t);

// Leading-order tail of the density as |x - mu| -> inf, on the side of x.
double tail_envelope(const VGParams& p, double x);

// E h(X) by quadrature in the centred variable, split at the kink.
double expect(const VGParams& p, const std::function<double(double)>& h,
              const quad::QuadConfig& cfg = {});

// Sum of independent VG laws with common theta and sigma.
VGParams convolve(const VGParams& a, const VGParams& b);

VGParams laplace(double mu, double sigma);
// Product of zero-mean normals with SDs sx, sy and correlation rho.
VGParams product_normal(double sx, double sy, double rho);
// Difference of a correlated gamma pair with common shape r and rates l1, l2.
VGParams gamma_difference(double r, double l1, double l2, double rho);
// Dispatch by name: "laplace" {mu, sigma}, "product_normal" {sx, sy, rho},
// "gamma_difference" {r, l1, l2, rho}. "normal" and "gamma" name limiting cases
// that have no finite parameters and throw DomainError.
VGParams from_special_case(std::string_view kind, std::span<const double> args);

// n draws of mu + theta V + sigma sqrt(V) U with V ~ Gamma(r/2, rate 1/2),
// U ~ N(0, 1). Deterministic given seed.
std::vector<double> sample(const VGParams& p, std::uint64_t seed, std::size_t n);

}  // namespace vg
}  // namespace vgstein
