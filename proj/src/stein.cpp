#include "vgstein/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "vgstein/bessel.hpp"
#include "vgstein/errors.hpp"

namespace vgstein::stein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this |u| the analytic g'' suffers cancellation between the k/u term
// and the Bessel products; it is interpolated from +/-kNearZero, +/-2 kNearZero.
constexpr double kNearZero = 1e-3;
// Below this s the one-sided limits at zero are used for g and g'.
constexpr double kLimitZero = 1e-12;

void check_decay(const VGParams& p, const RealFn& g, const char* what) {
  const double nu = p.nu();
  const double alpha = p.alpha();
  const double beta = p.beta();
  for (double side : {-1.0, 1.0}) {
    const double rate = side > 0.0 ? alpha - beta : alpha + beta;
    double first = kInf;
    double last = kInf;
    for (double L : {20.0, 40.0, 80.0}) {
      const double u = L / (alpha - std::abs(beta));
      const double value = g(p.mu + side * u);
      if (!std::isfinite(value)) {
        throw DomainError(std::string(what) + " is not finite on the decay probe grid");
      }
      const double w = value == 0.0 ? -kInf : std::log(std::abs(value)) + (nu + 1.5) * std::log(u) -
                                                  rate * u;
      if (first == kInf) first = w;
      last = w;
    }
    if (last != -kInf && !(last < first)) {
      throw DomainError(std::string(what) +
                        " does not decay against the VG tails; the expectation is not defined");
    }
  }
}

}  // namespace

// ------------------------------------------------------------------ operator

double stein_operator(const VGParams& p, double x, double f, double d1, double d2) {
  const double u = x - p.mu;
  const double s2 = p.sigma * p.sigma;
  return s2 * u * d2 + (s2 * p.r + 2.0 * p.theta * u) * d1 + (p.r * p.theta - u) * f;
}

double stein_operator(const VGParams& p, const TwiceDifferentiable& fn, double x) {
  return stein_operator(p, x, fn.f(x), fn.d1(x), fn.d2(x));
}

double stein_operator_second_form(const VGParams& p, double x, double f, double d1, double d2) {
  const double u = x - p.mu;
  const double nu2 = 2.0 * p.nu() + 1.0;
  const double a = p.alpha();
  const double b = p.beta();
  return u * d2 + (nu2 + 2.0 * b * u) * d1 + (nu2 * b - (a - b) * (a + b) * u) * f;
}

ResidualResult characterization_residual(const VGParams& p, const TwiceDifferentiable& fn,
                                         ResidualMethod method, std::uint64_t seed,
                                         std::size_t samples, const quad::QuadConfig& cfg) {
  p.validate();
  check_decay(p, fn.f, "f");
  check_decay(p, fn.d1, "f'");
  check_decay(p, fn.d2, "f''");
  const auto op = [&](double x) {
    return stein_operator_second_form(p, x, fn.f(x), fn.d1(x), fn.d2(x));
  };
  if (method == ResidualMethod::kQuadrature) {
    return {vg::expect(p, op, cfg), 0.0, 0};
  }
  if (samples < 2) throw DomainError("Monte Carlo residual needs at least two samples");
  const auto xs = vg::sample(p, seed, samples);
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    const double v = op(x);
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double operator_expectation(const VGParams& p, const TwiceDifferentiable& fn,
                            const RealFn& density, double kink, const quad::QuadConfig& cfg) {
  const auto op = [&](double x) {
    return stein_operator_second_form(p, x, fn.f(x), fn.d1(x), fn.d2(x));
  };
  return quad::expectation(op, density, {-kInf, kInf}, kink, cfg);
}

std::vector<TwiceDifferentiable> damped_polynomial_suite() {
  std::vector<TwiceDifferentiable> suite;
  for (double c : {0.5, 0.1}) {
    for (int j = 0; j <= 5; ++j) {
      const auto pw = [](double x, int k) { return k < 0 ? 0.0 : std::pow(x, k); };
      TwiceDifferentiable t;
      t.f = [=](double x) { return pw(x, j) * std::exp(-c * x * x); };
      t.d1 = [=](double x) {
        return (j * pw(x, j - 1) - 2.0 * c * pw(x, j + 1)) * std::exp(-c * x * x);
      };
      t.d2 = [=](double x) {
        return (j * (j - 1) * pw(x, j - 2) - 2.0 * c * (2 * j + 1) * pw(x, j) +
                4.0 * c * c * pw(x, j + 2)) *
               std::exp(-c * x * x);
      };
      suite.push_back(std::move(t));
    }
  }
  return suite;
}

// ------------------------------------------------------------------ solution
//
// With u = alpha (x - mu) and b = beta / alpha the equation becomes
//   u g'' + (2nu+1 + 2bu) g' + ((2nu+1)b - (1-b^2)u) g = k(u),
//   k(u) = h(mu + u/alpha) - E h,
// and f(x) = g(u) / (alpha sigma^2). For u > 0 the bounded solution is
//   g = -(K_nu(u) A(u) + I_nu(u) B(u)) e^{-bu} / u^nu,
//   A = int_0^u e^{by} y^nu I_nu(y) k(y) dy,  B = int_u^inf e^{by} y^nu K_nu(y) k(y) dy.
// Negative u reuses the same formula on the reflected problem (b -> -b,
// k(t) -> -k(-t)), which is equivalent once k is centred.

struct SteinSolution::Impl {
  VGParams p;
  RealFn h;
  quad::QuadConfig cfg;
  double target = 0.0;
  double nu = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  double scale = 0.0;  // 1 / (alpha sigma^2)
  double i_over_power0 = 0.0;

  double k(double u) const { return h(p.mu + u / alpha) - target; }
  double k_side(double t, int side) const { return side > 0 ? k(t) : -k(-t); }

  struct Half {
    double g = 0.0, g1 = 0.0, g2 = 0.0;
  };

  // int_0^inf e^{-(1-b)y} y^nu e^y K_nu(y) k(y) dy on one side.
  double tail_at_zero(int side) const {
    const double bs = side * b;
    const auto f = [&](double y) {
      const double w =
          std::exp(nu * std::log(y) - (1.0 - bs) * y) * bessel::bessel_k(nu, y, true);
      return w * k_side(y, side);
    };
    const std::array<double, 3> splits{1.0, 10.0, 40.0};
    return quad::integrate(f, 0.0, kInf, splits, cfg).value;
  }

  Half half(double s, int side, bool want_g2) const {
    const double bs = side * b;
    if (s < kLimitZero) {
      const double b0 = tail_at_zero(side);
      return {-b0 * i_over_power0, k_side(0.0, side) / (2.0 * nu + 1.0) + bs * b0 * i_over_power0,
              0.0};
    }
    const double log_s = std::log(s);
    const auto fa = [&](double y) {
      const double w = std::exp(nu * (std::log(y) - log_s) - (1.0 + bs) * (s - y)) *
                       bessel::bessel_i(nu, y, true);
      return w * k_side(y, side);
    };
    const auto fb = [&](double y) {
      const double w = std::exp(nu * (std::log(y) - log_s) - (1.0 - bs) * (y - s)) *
                       bessel::bessel_k(nu, y, true);
      return w * k_side(y, side);
    };
    const std::array<double, 3> split_a{s - 40.0, s - 10.0, s - 1.0};
    const std::array<double, 3> split_b{s + 1.0, s + 10.0, s + 40.0};
    const double a = quad::integrate(fa, 0.0, s, split_a, cfg).value;
    const double bb = quad::integrate(fb, s, kInf, split_b, cfg).value;

    const double k0 = bessel::bessel_k(nu, s, true);
    const double k1 = bessel::bessel_k(nu + 1.0, s, true);
    const double i0 = bessel::bessel_i(nu, s, true);
    const double i1 = bessel::bessel_i(nu + 1.0, s, true);
    Half out;
    out.g = -(k0 * a + i0 * bb);
    out.g1 = -((-bs * k0 - k1) * a + (-bs * i0 + i1) * bb);
    if (want_g2) {
      const double c = (2.0 * nu + 1.0) / s;
      out.g2 = -((bs * bs * k0 + 2.0 * bs * k1 + k0 + c * k1) * a +
                 (bs * bs * i0 - 2.0 * bs * i1 + i0 - c * i1) * bb) +
               k_side(s, side) / s;
    }
    return out;
  }

  double g2_far(double u) const {
    return u > 0.0 ? half(u, 1, true).g2 : half(-u, -1, true).g2;
  }

  SolutionValues values_u(double u) const {
    const int side = u >= 0.0 ? 1 : -1;
    const double s = std::abs(u);
    const bool near = s < kNearZero;
    const Half hv = half(s, side, !near);
    SolutionValues v{hv.g, side * hv.g1, hv.g2};
    if (near) {
      // Cubic through g'' at -2a, -a, a, 2a.
      const double a = kNearZero;
      const double a3 = a * a * a;
      const double w0 = (u * u - a * a) * (u - 2 * a) / (-12.0 * a3);
      const double w1 = (u + 2 * a) * (u - a) * (u - 2 * a) / (6.0 * a3);
      const double w2 = -(u + 2 * a) * (u + a) * (u - 2 * a) / (6.0 * a3);
      const double w3 = (u + 2 * a) * (u * u - a * a) / (12.0 * a3);
      v.d2 = w0 * g2_far(-2 * a) + w1 * g2_far(-a) + w2 * g2_far(a) + w3 * g2_far(2 * a);
    }
    return v;
  }

  double u_of(double x) const { return alpha * (x - p.mu); }
};

SteinSolution::SteinSolution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

const VGParams& SteinSolution::params() const { return impl_->p; }
double SteinSolution::target_expectation() const { return impl_->target; }
bool SteinSolution::unique() const { return impl_->nu >= 0.0; }

SolutionValues SteinSolution::values(double x) const {
  const auto& m = *impl_;
  const SolutionValues g = m.values_u(m.u_of(x));
  return {m.scale * g.f, m.scale * m.alpha * g.d1, m.scale * m.alpha * m.alpha * g.d2};
}

double SteinSolution::f(double x) const { return values(x).f; }

double SteinSolution::derivative(double x, int k) const {
  const auto& m = *impl_;
  switch (k) {
    case 0:
      return values(x).f;
    case 1:
      return values(x).d1;
    case 2:
      return values(x).d2;
    case 3:
    case 4: {
      // Five-point stencils on g'' in the normalised coordinate.
      const double u = m.u_of(x);
      const double d = k == 3 ? 0.01 : 0.02;
      const auto g2 = [&](double t) { return m.values_u(t).d2; };
      const double gm2 = g2(u - 2 * d), gm1 = g2(u - d), gp1 = g2(u + d), gp2 = g2(u + 2 * d);
      double gk = 0.0;
      if (k == 3) {
        gk = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * d);
      } else {
        gk = (-gm2 + 16.0 * gm1 - 30.0 * g2(u) + 16.0 * gp1 - gp2) / (12.0 * d * d);
      }
      return m.scale * std::pow(m.alpha, k) * gk;
    }
    default:
      throw DomainError("derivative order must be 0..4");
  }
}

TailIdentity SteinSolution::tail_identity(double x) const {
  const auto& m = *impl_;
  const double u = m.u_of(x);
  const auto w = [&](double y) {
    if (y == 0.0) return 0.0;
    const double a = std::abs(y);
    return std::exp(m.b * y + m.nu * std::log(a) - a) * bessel::bessel_k(m.nu, a, true) * m.k(y);
  };
  const std::array<double, 5> splits{0.0, -10.0, 10.0, -40.0, 40.0};
  TailIdentity t;
  t.left = quad::integrate(w, -kInf, u, splits, m.cfg).value;
  t.right = -quad::integrate(w, u, kInf, splits, m.cfg).value;
  return t;
}

SteinSolution stein_solve(const VGParams& p, const RealFn& h, const quad::QuadConfig& cfg) {
  p.validate();
  cfg.validate();
  auto impl = std::make_shared<SteinSolution::Impl>();
  impl->p = p;
  impl->h = h;
  impl->cfg = cfg;
  impl->nu = p.nu();
  impl->alpha = p.alpha();
  impl->b = p.beta() / impl->alpha;
  impl->scale = 1.0 / (impl->alpha * p.sigma * p.sigma);
  impl->i_over_power0 = bessel::bessel_i_over_power(impl->nu, 0.0);

  check_decay(p, h, "h");
  impl->target = vg::expect(p, h, cfg);
  if (!std::isfinite(impl->target)) throw DomainError("E h(X) is not finite");
  return SteinSolution(std::move(impl));
}

// ------------------------------------------------------------------ constants

double v_nu(double nu) {
  if (!(nu > -0.5)) throw DomainError("v(nu) needs nu > -1/2");
  const double rounded = std::round(nu);
  if (nu == rounded) {
    return std::exp((2.0 * nu + 1.0) * std::numbers::ln2 + std::lgamma(nu + 1.0) +
                    std::lgamma(nu + 3.0)) *
           (2.0 * nu + 1.0);
  }
  return std::abs(std::sin(std::numbers::pi * nu)) *
         std::exp(2.0 * nu * std::numbers::ln2 + std::lgamma(nu + 1.0) + std::lgamma(nu + 4.0)) *
         (2.0 * nu + 1.0);
}

LemmaConstants lemma_constants(double nu, const HNorms& n) {
  if (!(nu > -0.5)) throw DomainError("lemma constants need nu > -1/2");
  const double c = n.centered;
  const double r = 2.0 * nu + 1.0;
  const double base = std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(nu + 0.5)) + 1.0 / r;
  LemmaConstants out;
  out.v = v_nu(nu);
  out.small_v_warning = out.v < 1e-3;
  out.bound[0] = (1.0 / r + std::numbers::pi * std::exp(std::lgamma(nu + 0.5) - std::lgamma(nu + 1.0)) / 2.0) * c;
  out.bound[1] = 2.0 * c / r;
  out.bound[2] = base * (3.0 * n.d1 + 4.0 * c);
  out.bound[3] = base * (5.0 * n.d2 + 18.0 * n.d1 + 18.0 * c) + c / out.v;
  out.bound[4] = base * (8.0 * n.d3 + 52.0 * n.d2 + 123.0 * n.d1 + 123.0 * c) + (n.d1 + c) / out.v;
  return out;
}

std::array<double, 5> bound_constants(int r, double sigma, const HNorms& n) {
  if (r < 1) throw DomainError("bound constants need a positive integer r");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  for (double v : {n.centered, n.d1, n.d2, n.d3}) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("norms must be finite and non-negative");
  }
  const double rr = static_cast<double>(r);
  const double c = n.centered;
  const double s = sigma;
  const double base = (std::sqrt(std::numbers::pi / (2.0 * rr)) + 1.0 / rr) / (s * s);
  std::array<double, 5> m{};
  m[0] = (1.0 / rr + std::numbers::pi * std::exp(std::lgamma(0.5 * rr) - std::lgamma(0.5 * rr + 0.5)) / 2.0) * c / s;
  m[1] = 2.0 * c / (s * s * rr);
  m[2] = base * (3.0 * n.d1 + 4.0 * c / s);
  m[3] = base * (5.0 * n.d2 + 18.0 * n.d1 / s + 19.0 * c / (s * s));
  m[4] = base * (8.0 * n.d3 + 52.0 * n.d2 / s + 124.0 * n.d1 / (s * s) + 124.0 * c / (s * s * s));
  return m;
}

std::array<double, 5> bound_constants(const VGParams& p, const HNorms& n) {
  p.validate();
  if (p.theta != 0.0) {
    throw DomainError("derivative bounds are only available for theta = 0");
  }
  if (p.r != std::round(p.r) || p.r < 1.0) {
    throw DomainError("derivative bounds need a positive integer r");
  }
  return bound_constants(static_cast<int>(p.r), p.sigma, n);
}

}  // namespace vgstein::stein
