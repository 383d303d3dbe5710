#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vgstein/bessel.hpp"
#include "vgstein/errors.hpp"
#include "vgstein/quad.hpp"
#include "vgstein/sampling.hpp"
#include "vgstein/vgdist.hpp"

using namespace vgstein;
using vgstein::quad::kInf;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// 3 x 3 x 3 x 2 cells covering nu < 0, nu = 1/2 and nu > 0, both skews.
std::vector<VGParams> parameter_grid() {
  std::vector<VGParams> grid;
  for (double r : {0.6, 2.0, 5.0})
    for (double theta : {-0.8, 0.0, 0.5})
      for (double sigma : {0.5, 1.0, 2.0})
        for (double mu : {0.0, -2.0}) grid.push_back(VGParams::first(r, theta, sigma, mu));
  return grid;
}

double integrate_centred(const VGParams& p, const std::function<double(double)>& g,
                         double abs_tol = 1e-11) {
  const std::vector<double> split{0.0};
  quad::QuadConfig cfg;
  cfg.abs_tol = abs_tol;
  cfg.rel_tol = 1e-11;
  cfg.max_subdivisions = 5000;
  return quad::integrate([&](double u) { return g(u) * vg::density(p, p.mu + u); }, -kInf, kInf,
                         split, cfg)
      .value;
}

// E exp(tX) with the exponential folded into the log density (mu = 0).
double mgf_by_quadrature(const VGParams& p, double t) {
  const std::vector<double> split{0.0};
  quad::QuadConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-11;
  cfg.max_subdivisions = 5000;
  return quad::integrate([&](double u) { return std::exp(t * u + vg::log_density(p, u)); }, -kInf,
                         kInf, split, cfg)
      .value;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

TEST_CASE("parametrisation round trip") {
  for (const auto& p : parameter_grid()) {
    const auto q = VGParams::second(p.nu(), p.alpha(), p.beta(), p.mu);
    CHECK(rel_err(q.r, p.r) < 1e-14);
    CHECK(std::abs(q.theta - p.theta) <= 1e-14 * std::max(1.0, std::abs(p.theta)));
    CHECK(rel_err(q.sigma, p.sigma) < 1e-14);
    CHECK(q.mu == p.mu);
    CHECK(p.alpha() > std::abs(p.beta()));
  }
  CHECK_THROWS_AS(VGParams::first(0.0, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(VGParams::first(1.0, 0.0, -1.0, 0.0), DomainError);
  CHECK_THROWS_AS(VGParams::second(-0.5, 1.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(VGParams::second(1.0, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("density worked values") {
  CHECK(vg::density(VGParams::first(2, 0, 1, 0), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  // Laplace(mu, sigma) everywhere.
  const auto lap = vg::laplace(1.0, 2.0);
  for (double x : {-5.0, 0.0, 0.9, 3.0, 30.0}) {
    CHECK(rel_err(vg::density(lap, x), std::exp(-std::abs(x - 1.0) / 2.0) / 4.0) < 1e-13);
  }
  const auto p1 = VGParams::first(1, 0, 1, 0);
  for (double x : {-3.0, -0.2, 1.0, 7.5}) {
    CHECK(rel_err(vg::density(p1, x), bessel::bessel_k(0.0, std::abs(x)) / std::numbers::pi) <
          1e-13);
  }
  CHECK(std::isinf(vg::density(p1, 0.0)));
  CHECK(std::isinf(vg::density(VGParams::first(0.5, 0.3, 1, 0), 0.0)));
  // Kink value matches the limit from either side.
  const auto p = VGParams::first(3.4, -0.6, 1.3, 0.7);
  CHECK(rel_err(vg::density(p, 0.7), vg::density(p, 0.7 + 1e-9)) < 1e-6);
  CHECK(rel_err(vg::density(p, 0.7), vg::density(p, 0.7 - 1e-9)) < 1e-6);
}

TEST_CASE("the two density forms agree") {
  for (const auto& p : parameter_grid()) {
    for (double u : {-25.0, -3.0, -0.4, -1e-6, 1e-6, 0.01, 1.0, 4.0, 25.0}) {
      const double a = vg::density(p, p.mu + u);
      const double b = vg::density_second_form(p, p.mu + u);
      if (a == 0.0) {
        CHECK(b == 0.0);
        continue;
      }
      CHECK(rel_err(a, b) < 1e-12);
    }
  }
}

TEST_CASE("density normalisation over the grid") {
  int cells = 0;
  for (const auto& p : parameter_grid()) {
    CAPTURE(p.r);
    CAPTURE(p.theta);
    CAPTURE(p.sigma);
    CAPTURE(p.mu);
    CHECK(std::abs(vg::expect(p, [](double) { return 1.0; }) - 1.0) < 1e-8);
    ++cells;
  }
  CHECK(cells == 54);
  const auto p = VGParams::first(1.7, 0.4, 1.3, -2.0);
  CHECK(std::abs(vg::expect(p, [](double) { return 1.0; }) - 1.0) < 1e-8);
}

TEST_CASE("mean and variance") {
  const auto [m, v] = vg::mean_variance(VGParams::first(3, 2, 1, 0));
  CHECK(m == 6.0);
  CHECK(v == 27.0);
  const auto [m2, v2] = vg::mean_variance(VGParams::first(2, 1, 2, -1));
  CHECK(m2 == 1.0);
  CHECK(v2 == 12.0);
  for (const auto& p : parameter_grid()) {
    const auto [mean, var] = vg::mean_variance(p);
    const double qm = vg::expect(p, [](double x) { return x; });
    const double qv = vg::expect(p, [&](double x) { return (x - mean) * (x - mean); });
    CHECK(std::abs(qm - mean) <= 1e-6 * std::max(1.0, std::abs(mean)));
    CHECK(rel_err(qv, var) < 1e-6);
  }
}

TEST_CASE("moment recurrence") {
  const auto m = vg::moments(VGParams::first(1, 1, 1, 0), 2);
  CHECK(m == std::vector<double>{1.0, 1.0, 4.0});
  CHECK(vg::moments(VGParams::first(2.5, 0, 1.5, 0), 1)[1] == 0.0);
  CHECK_THROWS_AS(vg::moments(VGParams::first(1, 1, 1, 0.5), 2), DomainError);
  CHECK_THROWS_AS(vg::moments(VGParams::first(1, 1, 1, 0), 0), DomainError);

  for (double r : {0.6, 2.0, 5.0}) {
    for (double theta : {-0.8, 0.0, 0.5}) {
      const auto p = VGParams::first(r, theta, 1.2, 0.0);
      const auto rec = vg::moments(p, 8);
      const auto [mean, var] = vg::mean_variance(p);
      CHECK(std::abs(rec[2] - rec[1] * rec[1] - var) <= 1e-12 * var);
      for (int k = 1; k <= 8; ++k) {
        // Odd moments of symmetric laws vanish; measure them against the L2 scale.
        const double scale =
            std::sqrt(integrate_centred(p, [k](double u) { return std::pow(u, 2 * k); }));
        const double q =
            integrate_centred(p, [k](double u) { return std::pow(u, k); }, 1e-9 * scale);
        CAPTURE(r);
        CAPTURE(theta);
        CAPTURE(k);
        if (theta == 0.0 && k % 2 == 1) {
          CHECK(rec[k] == 0.0);
          CHECK(std::abs(q) < 1e-6 * scale);
        } else {
          CHECK(rel_err(rec[k], q) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("moment generating function") {
  CHECK(vg::mgf(VGParams::first(3.3, 0.4, 0.7, 0), 0.0) == 1.0);
  // Laplace(0, 1): 1 / (1 - t^2).
  CHECK(vg::mgf(VGParams::first(2, 0, 1, 0), 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(vg::mgf(VGParams::first(1, 0.3, 1, 0), 0.2) ==
        doctest::Approx(std::pow(0.84, -0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(vg::mgf(VGParams::first(2, 0, 1, 0), 1.0), DomainError);
  CHECK_THROWS_AS(vg::mgf(VGParams::first(2, 0, 1, 1.0), 0.1), DomainError);

  for (const auto& base : parameter_grid()) {
    if (base.mu != 0.0) continue;
    const double a = base.alpha();
    const double b = base.beta();
    for (double frac : {-0.6, -0.2, 0.3, 0.7}) {
      const double t = -b + frac * a;
      const double q = mgf_by_quadrature(base, t);
      CAPTURE(base.r);
      CAPTURE(base.theta);
      CAPTURE(base.sigma);
      CAPTURE(t);
      CHECK(rel_err(vg::mgf(base, t), q) < 1e-8);
    }
  }
}

TEST_CASE("recurrence moments are MGF derivatives at zero") {
  const auto p = VGParams::first(2.5, 0.3, 0.9, 0.0);
  const auto rec = vg::moments(p, 4);
  // Order-8 central differences of the closed form.
  const double h = 0.005;
  const auto M = [&](double t) { return vg::mgf(p, t); };
  const double d1 = (M(-2 * h) - 8 * M(-h) + 8 * M(h) - M(2 * h)) / (12 * h);
  const double d2 = (-M(-2 * h) + 16 * M(-h) - 30 * M(0) + 16 * M(h) - M(2 * h)) / (12 * h * h);
  const double d3 = (M(-3 * h) - 8 * M(-2 * h) + 13 * M(-h) - 13 * M(h) + 8 * M(2 * h) - M(3 * h)) /
                    (8 * h * h * h);
  const double d4 = (-M(-3 * h) + 12 * M(-2 * h) - 39 * M(-h) + 56 * M(0) - 39 * M(h) +
                     12 * M(2 * h) - M(3 * h)) /
                    (6 * h * h * h * h);
  CHECK(rel_err(d1, rec[1]) < 1e-5);
  CHECK(rel_err(d2, rec[2]) < 1e-5);
  CHECK(rel_err(d3, rec[3]) < 1e-5);
  CHECK(rel_err(d4, rec[4]) < 1e-5);
}

TEST_CASE("tail envelope") {
  for (double r : {1.0, 2.0, 3.0}) {
    for (double theta : {-0.5, 0.5}) {
      const auto p = VGParams::first(r, theta, 1.0, 0.3);
      for (double side : {-1.0, 1.0}) {
        const double x = p.mu + side * 40.0;
        CAPTURE(r);
        CAPTURE(theta);
        CAPTURE(side);
        CHECK(std::abs(vg::density(p, x) / vg::tail_envelope(p, x) - 1.0) < 0.01);
      }
    }
  }
  CHECK_THROWS_AS(vg::tail_envelope(VGParams::first(1, 0, 1, 0), 0.0), DomainError);
}

TEST_CASE("cdf") {
  const auto lap = VGParams::first(2, 0, 1, 0);
  CHECK(vg::cdf(lap, -1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-10));
  CHECK(vg::cdf(lap, 2.5) == doctest::Approx(1.0 - 0.5 * std::exp(-2.5)).epsilon(1e-10));
  for (double r : {0.6, 1.0, 4.0}) {
    CHECK(vg::cdf(VGParams::first(r, 0, 1.7, 3.0), 3.0) == doctest::Approx(0.5).epsilon(1e-9));
  }
  const auto p = VGParams::first(1, 0.5, 1, 0);
  const double tail = vg::survival(p, 10.0);
  const double env_tail =
      quad::integrate([&](double x) { return vg::tail_envelope(p, x); }, 10.0, kInf).value;
  CHECK(tail / env_tail > 0.5);
  CHECK(tail / env_tail < 2.0);
  CHECK(vg::cdf(p, 10.0) == doctest::Approx(1.0 - tail).epsilon(1e-12));

  // Monotone, with limits 0 and 1.
  const auto q = VGParams::first(1.7, 0.4, 1.3, -2.0);
  CHECK(vg::cdf(q, -kInf) == 0.0);
  CHECK(vg::cdf(q, kInf) == 1.0);
  CHECK(vg::cdf(q, -200.0) < 1e-8);
  CHECK(vg::cdf(q, 200.0) > 1.0 - 1e-8);
  std::vector<double> xs;
  for (double x = -15.0; x <= 15.0; x += 0.25) xs.push_back(x);
  const auto grid = vg::cdf_grid(q, xs);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] >= grid[i - 1]);
  for (std::size_t i = 0; i < xs.size(); i += 17) {
    CHECK(std::abs(grid[i] - vg::cdf(q, xs[i])) < 1e-8);
  }
}

TEST_CASE("quadrature expectations against VG densities") {
  const auto p1 = VGParams::first(1, 0, 1, 0);
  const auto d1 = [&](double x) { return vg::density(p1, x); };
  CHECK(quad::expectation([](double x) { return std::cos(x); }, d1, {-kInf, kInf}, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(quad::expectation([](double) { return 1.0; }, d1, {-kInf, kInf}, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-8));
  const auto p3 = VGParams::first(3, 2, 1, 0);
  const auto d3 = [&](double x) { return vg::density(p3, x); };
  CHECK(quad::expectation([](double x) { return x; }, d3, {-kInf, kInf}, 0.0) ==
        doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("convolution and special cases") {
  const auto a = vg::convolve(VGParams::first(1, 0, 1, 0), VGParams::first(1, 0, 1, 0));
  CHECK(a.r == 2.0);
  CHECK(a.theta == 0.0);
  CHECK(a.sigma == 1.0);
  CHECK(a.mu == 0.0);
  const auto b = vg::convolve(VGParams::first(2, 1, 1, 3), VGParams::first(3, 1, 1, -3));
  CHECK(b.r == 5.0);
  CHECK(b.theta == 1.0);
  CHECK(b.mu == 0.0);
  CHECK_THROWS_AS(vg::convolve(VGParams::first(2, 1, 1, 0), VGParams::first(2, 0.5, 1, 0)),
                  DomainError);
  CHECK_THROWS_AS(vg::convolve(VGParams::first(2, 1, 1, 0), VGParams{0.0, 1, 1, 0}), DomainError);

  const auto lap = vg::laplace(0.0, 2.0);
  CHECK((lap.r == 2.0 && lap.theta == 0.0 && lap.sigma == 2.0 && lap.mu == 0.0));
  const auto pn = vg::product_normal(1, 1, 0);
  CHECK((pn.r == 1.0 && pn.theta == 0.0 && pn.sigma == 1.0 && pn.mu == 0.0));
  const auto pc = vg::product_normal(2, 3, 0.6);
  CHECK(pc.theta == doctest::Approx(3.6));
  CHECK(pc.sigma == doctest::Approx(4.8));
  const auto gd = vg::gamma_difference(1, 1, 1, 0);
  CHECK((gd.r == 2.0 && gd.theta == 0.0 && gd.sigma == 1.0 && gd.mu == 0.0));

  const std::vector<double> args{0.0, 2.0};
  CHECK(vg::from_special_case("laplace", args).sigma == 2.0);
  CHECK_THROWS_AS(vg::from_special_case("normal", args), DomainError);
  CHECK_THROWS_AS(vg::from_special_case("gamma", args), DomainError);
  CHECK_THROWS_AS(vg::from_special_case("product_normal", args), DomainError);
  CHECK_THROWS_AS(vg::product_normal(1, 1, 1.0), DomainError);
}

TEST_CASE("sampler determinism and moments") {
  const auto p = VGParams::first(4, 0, 1, 0);
  CHECK(vg::sample(p, 7, 1000) == vg::sample(p, 7, 1000));
  CHECK(vg::sample(p, 7, 1000) != vg::sample(p, 8, 1000));

  const std::size_t n = 1000000;
  const auto xs = vg::sample(p, 12345, n);
  double s1 = 0, s2 = 0, s4 = 0;
  for (double x : xs) {
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double N = static_cast<double>(n);
  const double mean = s1 / N;
  const double var = s2 / N - mean * mean;
  // SE of the sample variance from the fourth moment of VG1(4,0,1,0): M4 = 3 r (r+2) = 72.
  const double se_var = std::sqrt((72.0 - 16.0) / N);
  CHECK(std::abs(var - 4.0) < 4.0 * se_var);
  CHECK(std::abs(mean) < 4.0 * std::sqrt(4.0 / N));
  (void)s4;

  const auto lap = vg::sample(VGParams::first(2, 0, 1, 0), 99, n);
  const double below = static_cast<double>(std::count_if(lap.begin(), lap.end(),
                                                         [](double x) { return x < 0.0; })) / N;
  CHECK(std::abs(below - 0.5) < 4.0 * std::sqrt(0.25 / N));

  const auto skew = VGParams::first(3, -0.7, 1.4, 2.0);
  const auto ys = vg::sample(skew, 5, 200000);
  double m = 0;
  for (double y : ys) m += y;
  m /= static_cast<double>(ys.size());
  const auto [mu, v] = vg::mean_variance(skew);
  CHECK(std::abs(m - mu) < 4.0 * std::sqrt(v / static_cast<double>(ys.size())));
}

TEST_CASE("sampler passes Kolmogorov-Smirnov against the quadrature CDF") {
  for (const auto& p : {VGParams::first(2, 0, 1, 0), VGParams::first(3, 0.5, 0.8, -1.0),
                        VGParams::first(1.5, -0.4, 1.0, 0.0)}) {
    const std::size_t n = 1000000;
    auto xs = vg::sample(p, 2024, n);
    std::sort(xs.begin(), xs.end());
    // Tabulated CDF with linear interpolation; grid spacing keeps interpolation
    // error far below the KS threshold.
    const double lo = xs.front() - 1.0;
    const double hi = xs.back() + 1.0;
    std::vector<double> grid;
    for (int i = 0; i <= 6000; ++i) grid.push_back(lo + (hi - lo) * i / 6000.0);
    grid.push_back(p.mu);
    std::sort(grid.begin(), grid.end());
    const auto F = vg::cdf_grid(p, grid);
    double d = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      while (grid[j + 1] < xs[i]) ++j;
      const double w = (xs[i] - grid[j]) / (grid[j + 1] - grid[j]);
      const double f = F[j] + w * (F[j + 1] - F[j]);
      d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                    std::abs(f - static_cast<double>(i + 1) / n)});
    }
    CAPTURE(p.r);
    // Asymptotic critical value at the 0.1% level.
    CHECK(d < 1.9495 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("mixture and sum representations agree in moments") {
  // mu + theta sum X_i^2 + sigma sum X_i Y_i against mu + theta V + sigma sqrt(V) U.
  const int r = 3;
  const double theta = 0.4, sigma = 0.9, mu = -0.5;
  const auto p = VGParams::first(r, theta, sigma, mu);
  const std::size_t n = 400000;
  const auto mix = vg::sample(p, 31, n);
  sampling::Engine eng(77);
  sampling::NormalGenerator normal;
  std::vector<double> sum(n);
  for (auto& z : sum) {
    double acc = mu;
    for (int i = 0; i < r; ++i) {
      const double x = normal(eng);
      const double y = normal(eng);
      acc += theta * x * x + sigma * x * y;
    }
    z = acc;
  }
  for (int k = 1; k <= 4; ++k) {
    double a = 0, a2 = 0, b = 0, b2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pa = std::pow(mix[i], k), pb = std::pow(sum[i], k);
      a += pa;
      a2 += pa * pa;
      b += pb;
      b2 += pb * pb;
    }
    const double N = static_cast<double>(n);
    a /= N;
    b /= N;
    const double se = std::sqrt((a2 / N - a * a) / N + (b2 / N - b * b) / N);
    CAPTURE(k);
    CHECK(std::abs(a - b) < 5.0 * se);
  }
}

TEST_CASE("gamma limit as sigma shrinks") {
  const double shape = 1.5, rate = 1.0;
  double previous = 1.0;
  for (double sigma : {0.5, 0.1, 0.02}) {
    const auto p = VGParams::first(2.0 * shape, 1.0 / (2.0 * rate), sigma, 0.0);
    std::vector<double> xs;
    for (double x = -2.0; x <= 10.0; x += 0.05) xs.push_back(x);
    const auto F = vg::cdf_grid(p, xs);
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double g = xs[i] <= 0.0 ? 0.0 : boost::math::gamma_p(shape, rate * xs[i]);
      d = std::max(d, std::abs(F[i] - g));
    }
    CAPTURE(sigma);
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 0.02);
}

TEST_CASE("normal limit as r grows") {
  const double sigma = 1.3, mu = 0.4;
  double previous = 1.0;
  for (double r : {4.0, 16.0, 64.0}) {
    const auto p = VGParams::first(r, 0.0, sigma / std::sqrt(r), mu);
    std::vector<double> xs;
    for (double x = mu - 6 * sigma; x <= mu + 6 * sigma; x += 0.02) xs.push_back(x);
    const auto F = vg::cdf_grid(p, xs);
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      d = std::max(d, std::abs(F[i] - normal_cdf((xs[i] - mu) / sigma)));
    }
    CAPTURE(r);
    CHECK(d < previous);
    previous = d;
  }
}

TEST_CASE("moment bundles") {
  const auto rad = MomentBundle::rademacher();
  const auto gau = MomentBundle::gaussian();
  const auto uni = MomentBundle::uniform_pm();
  for (const auto& m : {rad, gau, uni}) {
    CHECK(m.consistent());
    CHECK_NOTHROW(m.require_standardized());
  }
  CHECK(gau.abs3 == doctest::Approx(2.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(gau.abs5 == doctest::Approx(8.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(gaussian_abs_moment(4) == doctest::Approx(3.0).epsilon(1e-15));

  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(-5.0, 11.0);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = u(eng);
  const auto est = MomentBundle::from_samples(xs);
  CHECK_NOTHROW(est.require_standardized(1e-10));
  CHECK(est.raw[4] == doctest::Approx(1.8).epsilon(0.01));
  CHECK(est.abs3 == doctest::Approx(uni.abs3).epsilon(0.01));

  MomentBundle bad = rad;
  bad.raw[2] = 2.0;
  CHECK_THROWS_AS(bad.require_standardized(), DomainError);
}
