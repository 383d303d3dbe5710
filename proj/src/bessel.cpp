#include "vgstein/bessel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vgstein/errors.hpp"
#include "vgstein/quad.hpp"

namespace vgstein::bessel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr int kMaxIter = 100000;
// Power series for I below this argument, continued fractions above.
constexpr double kSeriesLimit = 15.0;
// Temme's series for K below this argument, Steed's CF2 above.
constexpr double kTemmeLimit = 2.0;

// Taylor coefficients of 1/Gamma(z) about 0: 1/Gamma(z) = sum_k c[k] z^k.
constexpr std::array<double, 23> kRecipGammaTaylor = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13};

struct TemmeGammas {
  double gam1;   // (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
  double gam2;   // (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
  double gampl;  // 1/Gamma(1+mu)
  double gammi;  // 1/Gamma(1-mu)
};

TemmeGammas temme_gammas(double mu) {
  const double mu2 = mu * mu;
  double even = 0.0;
  for (int k = 22; k >= 2; k -= 2) even = even * mu2 + kRecipGammaTaylor[k];
  double odd = 0.0;
  for (int k = 21; k >= 1; k -= 2) odd = odd * mu2 + kRecipGammaTaylor[k];
  const double gam1 = -even;
  const double gam2 = odd;
  return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

// exp(x) K_nu(x) and exp(x) K_{nu+1}(x), both multiplied by exp(-log_scale).
struct ScaledKPair {
  double k0;
  double k1;
  double log_scale;
};

// nu >= 0, x > 0.
ScaledKPair scaled_k_pair(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  double kmu = 0.0;
  double k1 = 0.0;
  double log_scale = 0.0;

  if (x < kTemmeLimit) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * i - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    // K_{mu+1} ~ x^{-mu-1} overflows first for tiny x. Normalising by K_mu
    // keeps both finite: their ratio is at most about 1/x.
    const double log_k1 = std::log(sum1) + std::log(xi2);
    const double ex = std::exp(x);
    if (log_k1 > 600.0) {
      log_scale = std::log(sum);
      kmu = ex;
      k1 = std::exp(log_k1 - log_scale) * ex;
    } else {
      kmu = sum * ex;
      k1 = std::exp(log_k1) * ex;
    }
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(kPi / (2.0 * x)) / s;
    k1 = kmu * (mu + x + 0.5 - h) * xi;
  }

  for (int i = 1; i <= nl; ++i) {
    const double factor = (mu + i) * xi2;
    if (k1 > 1e300 / (factor + 1.0)) {
      kmu /= k1;
      log_scale += std::log(k1);
      k1 = 1.0;
    }
    const double next = factor * k1 + kmu;
    kmu = k1;
    k1 = next;
  }
  return {kmu, k1, log_scale};
}

// exp(-x) I_nu(x) for nu > -1, 0 <= x <= kSeriesLimit, by the defining series.
double scaled_i_series(double nu, double x) {
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw RangeError("I_nu(0) is unbounded for -1 < nu < 0");
  }
  const double half = 0.5 * x;
  const double q = half * half;
  double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0) - x);
  double sum = term;
  for (int k = 1; k <= kMaxIter; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

// exp(-x) I_nu(x) for nu >= 0, x > 0, via CF1 for I'/I and the Wronskian.
double scaled_i_cf(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  double h = nu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  for (int i = 1; i <= kMaxIter; ++i) {
    b += xi2;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  double ril = 1e-200;
  double ripl = h * ril;
  const double ril1 = ril;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
  }
  const double f = ripl / ril;

  const ScaledKPair k = scaled_k_pair(mu < 0.0 ? -mu : mu, x);
  // K_mu for mu in [-1/2, 1/2]; K_{mu+1} needs the recurrence when mu < 0.
  double kmu = k.k0;
  double kmu1 = k.k1;
  if (mu < 0.0) {
    // k holds K_{|mu|}, K_{|mu|+1}; K_{mu+1} = K_{1-|mu|} = K_{|mu|-1}
    //   = K_{|mu|+1} - 2|mu|/x K_{|mu|}.
    kmu1 = k.k1 - 2.0 * (-mu) * xi * k.k0;
  }
  const double kmup = mu * xi * kmu - kmu1;
  const double imu = xi / (f * kmu - kmup) * std::exp(-k.log_scale);
  return imu * ril1 / ril;
}

// exp(-x) I_nu(x), nu > -1, x >= 0.
double scaled_i(double nu, double x) {
  if (x <= kSeriesLimit) return scaled_i_series(nu, x);
  if (nu >= 0.0) return scaled_i_cf(nu, x);
  // I_{-a} = I_a + (2/pi) sin(a pi) K_a, a = -nu in (0, 1).
  const double a = -nu;
  const ScaledKPair k = scaled_k_pair(a, x);
  return scaled_i_cf(a, x) +
         2.0 / kPi * std::sin(a * kPi) * k.k0 * std::exp(k.log_scale - 2.0 * x);
}

void require_order(double nu) {
  if (!(nu > -1.0) || !std::isfinite(nu)) {
    std::ostringstream msg;
    msg << "Bessel I requires order nu > -1, got " << nu;
    throw DomainError(msg.str());
  }
}

void require_positive_argument(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "Bessel K requires a finite argument x > 0, got " << x;
    throw DomainError(msg.str());
  }
}

double checked_exp(double log_value, const char* what) {
  if (log_value > 709.78) {
    std::ostringstream msg;
    msg << what << " overflows double precision; use the scaled variant";
    throw RangeError(msg.str());
  }
  return std::exp(log_value);
}

}  // namespace

double bessel_i(double nu, double x, bool scaled) {
  require_order(nu);
  if (!std::isfinite(x)) throw DomainError("Bessel I requires a finite argument");
  const double ax = std::abs(x);
  const double s = scaled_i(nu, ax);
  if (scaled) return s;
  if (s == 0.0) return 0.0;
  return checked_exp(std::log(s) + ax, "I_nu(x)");
}

double bessel_k(double nu, double x, bool scaled) {
  require_positive_argument(x);
  if (!std::isfinite(nu)) throw DomainError("Bessel K requires a finite order");
  const ScaledKPair k = scaled_k_pair(std::abs(nu), x);
  const double log_value = std::log(k.k0) + k.log_scale - (scaled ? 0.0 : x);
  if (k.log_scale == 0.0 && std::isfinite(k.k0)) {
    return scaled ? k.k0 : k.k0 * std::exp(-x);
  }
  return checked_exp(log_value, "K_nu(x)");
}

double log_bessel_k(double nu, double x) {
  require_positive_argument(x);
  const ScaledKPair k = scaled_k_pair(std::abs(nu), x);
  return std::log(k.k0) + k.log_scale - x;
}

double bessel_i_over_power(double nu, double x) {
  require_order(nu);
  const double ax = std::abs(x);
  if (ax <= kSeriesLimit) {
    const double q = 0.25 * ax * ax;
    double term = std::exp(-nu * std::numbers::ln2 - std::lgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k <= kMaxIter; ++k) {
      term *= q / (k * (nu + k));
      sum += term;
      if (term < kEps * sum) break;
    }
    return sum;
  }
  return checked_exp(std::log(scaled_i(nu, ax)) + ax - nu * std::log(ax), "I_nu(x)/x^nu");
}

double bessel_k_derivative(double nu, double x) {
  require_positive_argument(x);
  const double a = std::abs(nu);
  const ScaledKPair k = scaled_k_pair(a, x);
  // K_{nu-1} = K_{nu+1} - 2 nu / x K_nu, so K' = -K_{nu+1} + (nu/x) K_nu (nu >= 0).
  const double scaled_deriv = -k.k1 + a / x * k.k0;
  const double log_mag = std::log(std::abs(scaled_deriv)) + k.log_scale - x;
  return -checked_exp(log_mag, "K_nu'(x)");
}

double bessel_i_derivative(double nu, double x) {
  require_order(nu);
  require_positive_argument(x);
  // I' = I_{nu+1} + (nu/x) I_nu.
  const double s = scaled_i(nu + 1.0, x) + nu / x * scaled_i(nu, x);
  if (s == 0.0) return 0.0;
  const double sign = s < 0.0 ? -1.0 : 1.0;
  return sign * checked_exp(std::log(std::abs(s)) + x, "I_nu'(x)");
}

bool InequalityReport::all_pass() const {
  for (const auto& p : points) {
    if (!p.pass) return false;
  }
  return true;
}

InequalityReport check_kernel_inequalities(double nu, double beta,
                                           std::span<const double> x_grid,
                                           int derivative_order) {
  if (!(beta > -1.0 && beta < 1.0)) throw DomainError("inequalities require -1 < beta < 1");
  if (!(nu > -0.5)) throw DomainError("no kernel inequality applies for nu <= -1/2");
  if (derivative_order < 0 || derivative_order > 2) {
    throw DomainError("derivative order must be 0, 1 or 2");
  }
  for (double x : x_grid) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("grid points must be finite and >= 0");
  }

  InequalityReport report;
  report.nu = nu;
  report.beta = beta;
  report.derivative_order = derivative_order;

  quad::QuadConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-11;

  // Scaled kernels: e^{-t} I_nu(t) and e^{t} K_nu(t).
  const auto left_integral = [&](double x) {
    if (x == 0.0) return 0.0;
    const auto g = [&](double t) {
      return std::exp(-(1.0 + beta) * (x - t) + nu * std::log(t)) * scaled_i(nu, t);
    };
    return quad::integrate(g, 0.0, x, {}, cfg).value;
  };
  const auto right_integral = [&](double x) {
    const auto g = [&](double t) {
      if (t == 0.0) return 0.0;
      const ScaledKPair k = scaled_k_pair(std::abs(nu), t);
      return std::exp(-(1.0 - beta) * (t - x) + nu * std::log(t) + std::log(k.k0) + k.log_scale);
    };
    return quad::integrate(g, x, quad::kInf, {}, cfg).value;
  };

  const double rhs_large = std::sqrt(kPi) * std::tgamma(nu + 0.5) /
                           (std::pow(1.0 - beta * beta, nu + 0.5) * std::tgamma(nu + 1.0));
  const double rhs_small =
      (std::numbers::e + 1.0) * std::pow(2.0, 2.0 * nu) * std::tgamma(nu + 0.5) / (1.0 - std::abs(beta));

  for (double x : x_grid) {
    // k_slope: |(beta K_nu + K_{nu+1}) / x^nu| * int_0^x ..., all in scaled form.
    if (x > 0.0) {
      const ScaledKPair k = scaled_k_pair(std::abs(nu), x);
      double k_next = k.k1;
      if (nu < 0.0) k_next = k.k1 - 2.0 * (-nu) / x * k.k0;
      const double scale = std::exp(k.log_scale - nu * std::log(x));
      const double lhs = std::abs((beta * k.k0 + k_next) * scale * left_integral(x));
      const double rhs = 2.0 * (beta + 1.0) / (2.0 * nu + 1.0) * x * k_next *
                         std::exp(k.log_scale) * scaled_i(nu, x);
      report.points.push_back({"k_slope", x, lhs, rhs, lhs < rhs});
    } else {
      report.points.push_back({"k_slope", x, 0.0, 0.0, true});
    }

    // n-th derivative of e^{-bx} I_nu(x) / x^nu, scaled by e^{(b-1)x}.
    double factor = 0.0;
    if (x == 0.0) {
      const double i0 = bessel_i_over_power(nu, 0.0);
      const double terms[3] = {i0, -beta * i0, (beta * beta + 1.0 / (2.0 * nu + 2.0)) * i0};
      factor = terms[derivative_order];
    } else {
      const double i0 = scaled_i(nu, x);
      const double i1 = scaled_i(nu + 1.0, x);
      const double xp = std::exp(-nu * std::log(x));
      switch (derivative_order) {
        case 0: factor = i0 * xp; break;
        case 1: factor = (-beta * i0 + i1) * xp; break;
        default:
          factor = (beta * beta * i0 - 2.0 * beta * i1 + i0 - (2.0 * nu + 1.0) / x * i1) * xp;
          break;
      }
    }
    const double lhs = std::abs(factor * right_integral(x));
    if (nu >= 0.5) {
      report.points.push_back({"i_tail_large_order", x, lhs, rhs_large, lhs < rhs_large});
    }
    if (std::abs(nu) < 0.5) {
      report.points.push_back({"i_tail_small_order", x, lhs, rhs_small, lhs < rhs_small});
    }
  }
  return report;
}

}  // namespace vgstein::bessel
