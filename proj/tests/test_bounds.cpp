#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "vgstein/bounds.hpp"
#include "vgstein/errors.hpp"
#include "vgstein/stein.hpp"

using namespace vgstein;
using namespace vgstein::bounds;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

MomentBundle skewed() {
  // Centred exponential, standardized: X = E - 1.
  std::mt19937_64 eng(5);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = e(eng);
  return MomentBundle::from_samples(xs);
}

const HNorms kUnit{2.0, 1.0, 1.0, 1.0};

}  // namespace

TEST_CASE("gamma coefficients for Rademacher laws") {
  const auto rad = MomentBundle::rademacher();
  for (std::uint64_t m : {1u, 7u, 100u}) {
    for (std::uint64_t n : {1u, 3u, 250u}) {
      const auto g = gamma_coefficients(rad, rad, m, n);
      CHECK(g.g1 == 0.0);
      CHECK(same_bits(g.g2, 9.0 / m));
      CHECK(same_bits(g.g3, 1.0 / n));
    }
  }
}

TEST_CASE("gamma coefficients for Gaussian laws") {
  const auto g = gamma_coefficients(MomentBundle::gaussian(), MomentBundle::gaussian(), 10, 20);
  CHECK(g.g1 == 0.0);
  CHECK(g.g2 == doctest::Approx(81.0 / 10));
  CHECK(g.g3 == doctest::Approx(9.0 / 20));
  // Every term carries 1/m, 1/n or 1/sqrt(mn): quadrupling both at least halves each.
  const auto x = skewed();
  for (std::uint64_t k = 1; k < (1ull << 40); k *= 4) {
    const auto a = gamma_coefficients(x, x, k, k);
    const auto b = gamma_coefficients(x, x, 4 * k, 4 * k);
    CHECK(b.g1 <= 0.5 * a.g1 * (1 + 1e-12));
    CHECK(b.g2 <= 0.5 * a.g2 * (1 + 1e-12));
    CHECK(b.g3 <= 0.5 * a.g3 * (1 + 1e-12));
  }
}

TEST_CASE("gamma coefficients for a skewed law, term by term") {
  const auto x = skewed();
  const auto y = MomentBundle::uniform_pm();
  const double m = 12, n = 5, s = std::sqrt(m * n);
  const auto g = gamma_coefficients(x, y, 12, 5);
  // Uniform has no third moment, so only the X-skewness terms survive.
  CHECK(g.g1 == doctest::Approx(11 / s * std::abs(x.raw[3]) * y.raw[4]).epsilon(1e-14));
  CHECK(g.g2 == doctest::Approx(9 / m * x.raw[4] * y.raw[4] +
                                85 / s * std::abs(x.raw[3]) * y.abs5)
                    .epsilon(1e-14));
  CHECK(g.g3 == doctest::Approx(1 / n * x.raw[4] * y.raw[4] +
                                284 / m * std::abs(x.raw[3]) * x.abs3 * y.raw[6] +
                                135 / s * std::abs(x.raw[3]) * x.raw[4] * y.abs3)
                    .epsilon(1e-14));
  CHECK(x.raw[3] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gamma coefficients are nonincreasing in m and n") {
  const auto x = skewed();
  const auto y = MomentBundle::gaussian();
  for (std::uint64_t m = 1; m < 200; m = m * 2 + 1) {
    for (std::uint64_t n = 1; n < 200; n = n * 3 + 1) {
      const auto g = gamma_coefficients(x, y, m, n);
      const auto gm = gamma_coefficients(x, y, m + 1, n);
      const auto gn = gamma_coefficients(x, y, m, n + 1);
      CHECK(gm.g1 <= g.g1);
      CHECK(gm.g2 <= g.g2);
      CHECK(gm.g3 <= g.g3);
      CHECK(gn.g1 <= g.g1);
      CHECK(gn.g2 <= g.g2);
      CHECK(gn.g3 <= g.g3);
      CHECK(vg_bound(x, y, m + 1, n, 2, kUnit, false).total <=
            vg_bound(x, y, m, n, 2, kUnit, false).total);
    }
  }
}

TEST_CASE("gamma coefficient errors") {
  auto bad = MomentBundle::rademacher();
  bad.raw[2] = 2.0;
  CHECK_THROWS_AS(gamma_coefficients(bad, MomentBundle::rademacher(), 3, 3), DomainError);
  bad = MomentBundle::gaussian();
  bad.raw[1] = 0.1;
  CHECK_THROWS_AS(gamma_coefficients(MomentBundle::gaussian(), bad, 3, 3), DomainError);
  CHECK_THROWS_AS(gamma_coefficients(MomentBundle::gaussian(), MomentBundle::gaussian(), 0, 3),
                  DomainError);
}

TEST_CASE("binary-sequence bound is min of the two orderings, bitwise") {
  for (auto [m, n] : {std::pair<std::uint64_t, std::uint64_t>{100, 100}, {2, 8}, {8, 2}, {1, 1000}}) {
    const auto M = stein::bound_constants(1, 1.0, kUnit);
    const double A = 9.0 / m * M[3] + 1.0 / n * M[4];
    const double B = 9.0 / n * M[3] + 1.0 / m * M[4];
    const auto rep = d2_bound(m, n, kUnit);
    CAPTURE(m);
    CAPTURE(n);
    CHECK(same_bits(rep.total, std::min(A, B)));
    CHECK(rep.variant == Variant::kSymmetrizedMin);
    CHECK(rep.M3 == M[3]);
    CHECK(rep.M4 == M[4]);
  }
  const auto sq = d2_bound(100, 100, kUnit);
  CHECK_FALSE(sq.swapped);
  const auto M = stein::bound_constants(1, 1.0, kUnit);
  CHECK(sq.total == doctest::Approx(0.09 * M[3] + 0.01 * M[4]).epsilon(1e-15));
  // 9/. lands on the larger index.
  const auto r28 = d2_bound(2, 8, kUnit);
  CHECK(r28.swapped);
  CHECK(r28.gamma2 == 9.0 / 8);
  CHECK_FALSE(d2_bound(8, 2, kUnit).swapped);
  // m -> infinity under the as-stated ordering tends to M^4 / n.
  const auto rad = MomentBundle::rademacher();
  const auto big = vg_bound(rad, rad, 1ull << 40, 10, 1, kUnit, false);
  CHECK(big.total == doctest::Approx(M[4] / 10).epsilon(1e-10));
}

TEST_CASE("r prefactor") {
  const auto x = skewed();
  const auto y = MomentBundle::uniform_pm();
  const auto rad = MomentBundle::rademacher();
  for (int r : {1, 2, 3, 5}) {
    const auto M = stein::bound_constants(r, 1.0, kUnit);
    for (const auto& [a, b] : {std::pair{x, y}, std::pair{rad, rad}}) {
      const auto rep = vg_bound(a, b, 30, 40, r, kUnit, false);
      const auto g = gamma_coefficients(a, b, 30, 40);
      CHECK(rep.r == r);
      CHECK(same_bits(rep.total, r * (g.g1 * M[2] + g.g2 * M[3] + g.g3 * M[4])));
    }
  }
}

TEST_CASE("symmetrized bound never exceeds either ordering") {
  const auto x = skewed();
  const auto y = MomentBundle::gaussian();
  for (std::uint64_t m : {1u, 4u, 50u}) {
    for (std::uint64_t n : {2u, 9u, 400u}) {
      const auto s = vg_bound(x, y, m, n, 3, kUnit, true);
      CHECK(s.total <= vg_bound(x, y, m, n, 3, kUnit, false).total);
      CHECK(s.total <= vg_bound(y, x, n, m, 3, kUnit, false).total);
      CHECK(s.total >= 0.0);
      CHECK(s.gamma1 >= 0.0);
    }
  }
}

TEST_CASE("zero norms give a zero bound; bad inputs are refused") {
  const auto rad = MomentBundle::rademacher();
  CHECK(vg_bound(rad, rad, 5, 5, 2, HNorms{}, true).total == 0.0);
  CHECK(d2_bound(3, 4, HNorms{}).total == 0.0);
  CHECK_THROWS_AS(vg_bound(rad, rad, 5, 5, 0, kUnit, true), DomainError);
  const HNorms inf{1.0, 1.0, INFINITY, 1.0};
  CHECK_THROWS_AS(vg_bound(rad, rad, 5, 5, 1, inf, true), DomainError);
  CHECK(variant_name(Variant::kAsStated) == "as_stated");
  CHECK(variant_name(Variant::kSymmetrizedMin) == "symmetrized_min");
}
