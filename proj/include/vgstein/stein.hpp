#pragma once

// The VG Stein operator, the bounded solution of the Stein equation, the
// characterising residual, and the derivative-bound constants for the
// symmetric case.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vgstein/quad.hpp"
#include "vgstein/test_functions.hpp"
#include "vgstein/vgdist.hpp"

namespace vgstein::stein {

// A function with its first two derivatives.
struct TwiceDifferentiable {
  RealFn f, d1, d2;
};

// sigma^2 (x-mu) f'' + (sigma^2 r + 2 theta (x-mu)) f' + (r theta - (x-mu)) f,
// from the values of f, f', f'' at x.
double stein_operator(const VGParams& p, double x, double f, double d1, double d2);
double stein_operator(const VGParams& p, const TwiceDifferentiable& fn, double x);

// Same operator divided by sigma^2, i.e. in (nu, alpha, beta) form:
// (x-mu) f'' + (2nu+1 + 2beta(x-mu)) f' + ((2nu+1)beta - (alpha^2-beta^2)(x-mu)) f.
double stein_operator_second_form(const VGParams& p, double x, double f, double d1, double d2);

enum class ResidualMethod { kQuadrature, kMonteCarlo };

struct ResidualResult {
  double value = 0.0;
  double std_error = 0.0;  // zero for quadrature
  std::size_t samples = 0;
};

// E[second-form operator applied to fn] under VG(p). Checks the decay
// condition f^{(k)}(x) |x|^{nu+3/2} e^{-(alpha -/+ beta)|x|} -> 0 on a probe grid
// first and throws DomainError if it fails.
ResidualResult characterization_residual(const VGParams& p, const TwiceDifferentiable& fn,
                                         ResidualMethod method, std::uint64_t seed = 1,
                                         std::size_t samples = 1000000,
                                         const quad::QuadConfig& cfg = {});

// Same expectation under an arbitrary density (for mismatched-law controls).
double operator_expectation(const VGParams& p, const TwiceDifferentiable& fn,
                            const RealFn& density, double kink, const quad::QuadConfig& cfg = {});

// x^j exp(-c x^2) for j = 0..5 and c in {1/2, 1/10}, with derivatives.
std::vector<TwiceDifferentiable> damped_polynomial_suite();

struct SolutionValues {
  double f = 0.0, d1 = 0.0, d2 = 0.0;
};

struct TailIdentity {
  double left = 0.0;   // int_{-inf}^u w(y) k(y) dy
  double right = 0.0;  // -int_u^inf w(y) k(y) dy
};

// Bounded solution of the VG1(r, theta, sigma, mu) Stein equation for h.
// Built by stein_solve; immutable and safe to evaluate concurrently.
class SteinSolution {
 public:
  const VGParams& params() const;
  double target_expectation() const;  // E h(X), X ~ VG(p)
  // False for -1/2 < nu < 0, where other bounded solutions exist.
  bool unique() const;

  double f(double x) const;
  SolutionValues values(double x) const;  // f, f', f'' analytically
  // k = 0..4; orders 3 and 4 by central differences of the analytic f''.
  double derivative(double x, int k) const;

  // The two tail representations of the right-hand kernel at x, in the
  // normalised coordinate u = alpha (x - mu). They agree when h is centred.
  TailIdentity tail_identity(double x) const;

  struct Impl;

 private:
  explicit SteinSolution(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
  friend SteinSolution stein_solve(const VGParams&, const RealFn&, const quad::QuadConfig&);
};

// Throws DomainError when h grows faster than the VG tails allow, and
// AccuracyError when a quadrature fails.
SteinSolution stein_solve(const VGParams& p, const RealFn& h, const quad::QuadConfig& cfg = {});
inline SteinSolution stein_solve(const VGParams& p, const TestFunction& h,
                                 const quad::QuadConfig& cfg = {}) {
  return stein_solve(p, h.h, cfg);
}

// v(nu) from the fourth-derivative bound of the normalised (nu, 1, 0, 0) equation.
double v_nu(double nu);

struct LemmaConstants {
  std::array<double, 5> bound{};  // bounds on ||g||, ..., ||g''''||
  double v = 0.0;
  bool small_v_warning = false;  // v(nu) < 1e-3
};

// Bounds for the solution of the VG2(nu, 1, 0, 0) equation, nu > -1/2.
LemmaConstants lemma_constants(double nu, const HNorms& norms);

// M^0..M^4 for the VG1(r, 0, sigma, mu) equation; r must be a positive integer.
std::array<double, 5> bound_constants(int r, double sigma, const HNorms& norms);
// As above, refusing theta != 0 and non-integer r with DomainError.
std::array<double, 5> bound_constants(const VGParams& p, const HNorms& norms);

}  // namespace vgstein::stein
