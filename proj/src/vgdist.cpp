#include "vgstein/vgdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "vgstein/bessel.hpp"
#include "vgstein/errors.hpp"
#include "vgstein/sampling.hpp"

namespace vgstein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogPi = 1.1447298858494002;  // log(pi)

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

// alpha^2 - beta^2 = 1/sigma^2; kept as an explicit product for the second form.
double alpha2_minus_beta2(double alpha, double beta) { return (alpha - beta) * (alpha + beta); }

}  // namespace

// ---------------------------------------------------------------- VGParams

VGParams VGParams::first(double r, double theta, double sigma, double mu) {
  VGParams p{r, theta, sigma, mu};
  p.validate();
  return p;
}

VGParams VGParams::second(double nu, double alpha, double beta, double mu) {
  if (!finite_all({nu, alpha, beta, mu})) throw DomainError("VG parameters must be finite");
  if (!(nu > -0.5)) throw DomainError("nu must exceed -1/2");
  if (!(alpha > std::abs(beta))) throw DomainError("alpha must exceed |beta|");
  const double gap = alpha2_minus_beta2(alpha, beta);
  return first(2.0 * nu + 1.0, beta / gap, 1.0 / std::sqrt(gap), mu);
}

double VGParams::alpha() const {
  return std::hypot(theta, sigma) / (sigma * sigma);
}

void VGParams::validate() const {
  if (!finite_all({r, theta, sigma, mu})) throw DomainError("VG parameters must be finite");
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(alpha() > std::abs(beta()))) throw DomainError("alpha must exceed |beta|");
}

// ------------------------------------------------------------ MomentBundle

MomentBundle MomentBundle::rademacher() {
  MomentBundle m;
  m.raw = {1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
  m.abs3 = 1.0;
  m.abs5 = 1.0;
  return m;
}

double gaussian_abs_moment(int k) {
  if (k < 0) throw DomainError("moment order must be non-negative");
  return std::pow(2.0, 0.5 * k) * std::tgamma(0.5 * (k + 1)) / std::sqrt(std::numbers::pi);
}

MomentBundle MomentBundle::gaussian() {
  MomentBundle m;
  m.raw = {1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0};
  m.abs3 = gaussian_abs_moment(3);
  m.abs5 = gaussian_abs_moment(5);
  return m;
}

MomentBundle MomentBundle::uniform_pm() {
  // E|X|^k = 3^{k/2} / (k + 1) on [-sqrt 3, sqrt 3].
  const double s3 = std::sqrt(3.0);
  MomentBundle m;
  m.raw = {1.0, 0.0, 1.0, 0.0, 9.0 / 5.0, 0.0, 27.0 / 7.0};
  m.abs3 = 3.0 * s3 / 4.0;
  m.abs5 = 9.0 * s3 / 6.0;
  return m;
}

MomentBundle MomentBundle::from_samples(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("need at least two samples to standardise");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  if (!(var > 0.0)) throw DomainError("samples have zero variance");
  const double sd = std::sqrt(var);

  MomentBundle m;
  m.raw.fill(0.0);
  m.abs3 = m.abs5 = 0.0;
  for (double x : xs) {
    const double z = (x - mean) / sd;
    double pk = 1.0;
    for (int k = 0; k <= 6; ++k) {
      m.raw[k] += pk;
      pk *= z;
    }
    const double a = std::abs(z);
    m.abs3 += a * a * a;
    m.abs5 += a * a * a * a * a;
  }
  const double inv = 1.0 / static_cast<double>(xs.size());
  for (double& v : m.raw) v *= inv;
  m.abs3 *= inv;
  m.abs5 *= inv;
  return m;
}

bool MomentBundle::consistent() const {
  const double slack = 1e-12;
  const auto geq = [&](double a, double b) { return a >= b - slack * std::max(1.0, std::abs(b)); };
  return geq(raw[2], raw[1] * raw[1]) && geq(abs3, std::abs(raw[3])) &&
         geq(abs5, std::abs(raw[5])) && geq(raw[4], raw[2] * raw[2]);
}

void MomentBundle::require_standardized(double tol) const {
  if (std::abs(raw[1]) > tol || std::abs(raw[2] - 1.0) > tol) {
    std::ostringstream msg;
    msg << "moments must be standardised (mean 0, variance 1); got mean " << raw[1]
        << ", second moment " << raw[2];
    throw DomainError(msg.str());
  }
  for (double v : raw) {
    if (!std::isfinite(v)) throw DomainError("moments must be finite through order 6");
  }
  if (!std::isfinite(abs3) || !std::isfinite(abs5)) {
    throw DomainError("absolute moments must be finite");
  }
}

namespace vg {

namespace {

// Log density at the kink for nu > 0: Gamma(nu) 2^{nu-1} / (sigma sqrt(pi) Gamma(r/2) (2 c alpha)^nu).
double log_kink_value(const VGParams& p) {
  const double nu = p.nu();
  const double c = std::hypot(p.theta, p.sigma);
  return std::lgamma(nu) + (nu - 1.0) * std::numbers::ln2 - std::log(p.sigma) - 0.5 * kLogPi -
         std::lgamma(0.5 * p.r) - nu * std::log(2.0 * c * p.alpha());
}

// Mandatory and helpful split points for integrals in u = x - mu.
std::vector<double> centred_splits(const VGParams& p) {
  const auto [m, v] = mean_variance(p);
  const double s = std::sqrt(v);
  std::vector<double> splits{0.0, -s, s, -8.0 * s, 8.0 * s, -40.0 * s, 40.0 * s};
  if (m - p.mu != 0.0) splits.push_back(m - p.mu);
  return splits;
}

// Works in u = x - mu directly so that tiny |u| is not lost to rounding in mu + u.
double log_density_centred(const VGParams& p, double u) {
  const double nu = p.nu();
  if (u == 0.0) return nu > 0.0 ? log_kink_value(p) : kInf;
  const double a = std::abs(u);
  const double c = std::hypot(p.theta, p.sigma);
  return p.beta() * u + nu * std::log(a / (2.0 * c)) + bessel::log_bessel_k(nu, p.alpha() * a) -
         std::log(p.sigma) - 0.5 * kLogPi - std::lgamma(0.5 * p.r);
}

double density_centred(const VGParams& p, double u) { return std::exp(log_density_centred(p, u)); }

}  // namespace

double log_density(const VGParams& p, double x) { return log_density_centred(p, x - p.mu); }

double density(const VGParams& p, double x) { return std::exp(log_density(p, x)); }

double density_second_form(const VGParams& p, double x) {
  const double u = x - p.mu;
  const double nu = p.nu();
  if (u == 0.0) return nu > 0.0 ? std::exp(log_kink_value(p)) : kInf;
  const double a = std::abs(u);
  const double alpha = p.alpha();
  const double beta = p.beta();
  const double log_p = (nu + 0.5) * std::log(alpha2_minus_beta2(alpha, beta)) - 0.5 * kLogPi -
                       std::lgamma(nu + 0.5) + nu * std::log(a / (2.0 * alpha)) + beta * u +
                       bessel::log_bessel_k(nu, alpha * a);
  return std::exp(log_p);
}

double cdf(const VGParams& p, double x, const quad::QuadConfig& cfg) {
  if (std::isnan(x)) throw DomainError("cdf argument is NaN");
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  const double u = x - p.mu;
  if (u > 0.0) return 1.0 - survival(p, x, cfg);
  const auto splits = centred_splits(p);
  const auto f = [&](double t) { return density_centred(p, t); };
  return quad::integrate(f, -kInf, u, splits, cfg).value;
}

double survival(const VGParams& p, double x, const quad::QuadConfig& cfg) {
  if (std::isnan(x)) throw DomainError("survival argument is NaN");
  if (x == -kInf) return 1.0;
  if (x == kInf) return 0.0;
  const double u = x - p.mu;
  if (u <= 0.0) return 1.0 - cdf(p, x, cfg);
  const auto splits = centred_splits(p);
  const auto f = [&](double t) { return density_centred(p, t); };
  return quad::integrate(f, u, kInf, splits, cfg).value;
}

std::vector<double> cdf_grid(const VGParams& p, std::span<const double> xs,
                             const quad::QuadConfig& cfg) {
  std::vector<double> out;
  out.reserve(xs.size());
  if (xs.empty()) return out;
  if (!std::is_sorted(xs.begin(), xs.end())) throw DomainError("cdf grid must be increasing");
  const auto f = [&](double t) { return density_centred(p, t); };
  const std::array<double, 1> kink{0.0};
  double acc = cdf(p, xs[0], cfg);
  out.push_back(acc);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] > xs[i - 1]) {
      acc += quad::integrate(f, xs[i - 1] - p.mu, xs[i] - p.mu, kink, cfg).value;
    }
    out.push_back(std::min(acc, 1.0));
  }
  return out;
}

std::pair<double, double> mean_variance(const VGParams& p) {
  return {p.mu + p.r * p.theta, p.r * (p.sigma * p.sigma + 2.0 * p.theta * p.theta)};
}

std::vector<double> moments(const VGParams& p, int k_max) {
  if (p.mu != 0.0) throw DomainError("moment recurrence needs mu = 0; shift the variable first");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  std::vector<double> m(static_cast<std::size_t>(k_max) + 1);
  m[0] = 1.0;
  m[1] = p.r * p.theta;
  const double s2 = p.sigma * p.sigma;
  for (int k = 1; k < k_max; ++k) {
    m[k + 1] = p.theta * (2.0 * k + p.r) * m[k] + s2 * k * (p.r + k - 1.0) * m[k - 1];
  }
  return m;
}

double mgf(const VGParams& p, double t) {
  if (p.mu != 0.0) throw DomainError("mgf is defined here for mu = 0; shift the variable first");
  if (!(std::abs(t + p.beta()) < p.alpha())) {
    throw DomainError("mgf argument outside the strip |t + beta| < alpha");
  }
  const double base = 1.0 - 2.0 * p.theta * t - p.sigma * p.sigma * t * t;
  return std::pow(base, -0.5 * p.r);
}

double tail_envelope(const VGParams& p, double x) {
  const double u = x - p.mu;
  if (u == 0.0 || !std::isfinite(u)) throw DomainError("tail envelope needs finite x != mu");
  const double nu = p.nu();
  const double alpha = p.alpha();
  const double beta = p.beta();
  const double a = std::abs(u);
  const double rate = u > 0.0 ? alpha - beta : alpha + beta;
  const double log_env = (nu + 0.5) * std::log(alpha2_minus_beta2(alpha, beta) / (2.0 * alpha)) -
                         std::lgamma(nu + 0.5) + (nu - 0.5) * std::log(a) - rate * a;
  return std::exp(log_env);
}

double expect(const VGParams& p, const std::function<double(double)>& h,
              const quad::QuadConfig& cfg) {
  const auto splits = centred_splits(p);
  const auto f = [&](double u) {
    const double d = density_centred(p, u);
    return d == 0.0 ? 0.0 : h(p.mu + u) * d;
  };
  return quad::integrate(f, -kInf, kInf, splits, cfg).value;
}

VGParams convolve(const VGParams& a, const VGParams& b) {
  a.validate();
  b.validate();
  const auto same = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!same(a.theta, b.theta) || !same(a.sigma, b.sigma)) {
    throw DomainError("convolution needs equal theta and sigma");
  }
  return VGParams::first(a.r + b.r, a.theta, a.sigma, a.mu + b.mu);
}

VGParams laplace(double mu, double sigma) { return VGParams::first(2.0, 0.0, sigma, mu); }

VGParams product_normal(double sx, double sy, double rho) {
  if (!(sx > 0.0) || !(sy > 0.0)) throw DomainError("normal SDs must be positive");
  if (!(std::abs(rho) < 1.0)) throw DomainError("correlation must satisfy |rho| < 1");
  return VGParams::first(1.0, rho * sx * sy, sx * sy * std::sqrt(1.0 - rho * rho), 0.0);
}

VGParams gamma_difference(double r, double l1, double l2, double rho) {
  if (!(r > 0.0)) throw DomainError("gamma shape must be positive");
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw DomainError("gamma rates must be positive");
  if (!(std::abs(rho) < 1.0)) throw DomainError("correlation must satisfy |rho| < 1");
  return VGParams::first(2.0 * r, 1.0 / (2.0 * l1) - 1.0 / (2.0 * l2),
                         std::sqrt((1.0 - rho) / (l1 * l2)), 0.0);
}

VGParams from_special_case(std::string_view kind, std::span<const double> args) {
  const auto need = [&](std::size_t n) {
    if (args.size() != n) {
      std::ostringstream msg;
      msg << kind << " takes " << n << " arguments, got " << args.size();
      throw DomainError(msg.str());
    }
  };
  if (kind == "laplace") {
    need(2);
    return laplace(args[0], args[1]);
  }
  if (kind == "product_normal") {
    need(3);
    return product_normal(args[0], args[1], args[2]);
  }
  if (kind == "gamma_difference") {
    need(4);
    return gamma_difference(args[0], args[1], args[2], args[3]);
  }
  if (kind == "normal" || kind == "gamma") {
    throw DomainError(std::string(kind) +
                      " is a limiting case with no finite VG parameters; compare CDFs along a "
                      "parameter sequence instead");
  }
  throw DomainError("unknown special case: " + std::string(kind));
}

std::vector<double> sample(const VGParams& p, std::uint64_t seed, std::size_t n) {
  p.validate();
  if (n < 1) throw DomainError("sample count must be at least 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  sampling::Engine eng(seq);
  sampling::NormalGenerator normal;
  std::vector<double> out(n);
  const double shape = 0.5 * p.r;
  for (auto& z : out) {
    const double v = 2.0 * sampling::gamma(shape, eng, normal);
    z = p.mu + p.theta * v + p.sigma * std::sqrt(v) * normal(eng);
  }
  return out;
}

}  // namespace vg
}  // namespace vgstein
