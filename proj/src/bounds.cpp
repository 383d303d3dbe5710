#include "vgstein/bounds.hpp"

#include <cmath>

#include "vgstein/errors.hpp"
#include "vgstein/stein.hpp"

namespace vgstein::bounds {

std::string variant_name(Variant v) {
  return v == Variant::kAsStated ? "as_stated" : "symmetrized_min";
}

Gammas gamma_coefficients(const MomentBundle& mx, const MomentBundle& my, std::uint64_t m,
                          std::uint64_t n) {
  if (m == 0 || n == 0) throw DomainError("m and n must be positive");
  mx.require_standardized(1e-9);
  my.require_standardized(1e-9);
  const double dm = static_cast<double>(m), dn = static_cast<double>(n);
  const double rmn = std::sqrt(dm * dn);

  const double x3 = std::abs(mx.raw[3]), x4 = mx.raw[4], ax3 = mx.abs3;
  const double y3 = std::abs(my.raw[3]), y4 = my.raw[4], y6 = my.raw[6], ay3 = my.abs3,
               ay5 = my.abs5;

  Gammas g;
  g.g1 = 10.0 / dn * y3 * ay3 + 11.0 / rmn * x3 * y4;
  g.g2 = 9.0 / dm * x4 * y4 + 30.0 / dn * y3 * y4 + 85.0 / rmn * x3 * ay5 +
         46.0 / rmn * ax3 * y3 * y4;
  g.g3 = 1.0 / dn * x4 * y4 * (1.0 + 15.0 * y3) + 284.0 / dm * x3 * ax3 * y6 +
         148.0 / dn * x4 * y3 * ay5 + 135.0 / rmn * x3 * x4 * ay3 + 248.0 / rmn * x4 * y3;
  return g;
}

namespace {

BoundReport one_sided(const MomentBundle& mx, const MomentBundle& my, std::uint64_t m,
                      std::uint64_t n, int r, const std::array<double, 5>& M) {
  const Gammas g = gamma_coefficients(mx, my, m, n);
  BoundReport b;
  b.gamma1 = g.g1;
  b.gamma2 = g.g2;
  b.gamma3 = g.g3;
  b.m = m;
  b.n = n;
  b.r = r;
  b.M2 = M[2];
  b.M3 = M[3];
  b.M4 = M[4];
  b.total = r * (g.g1 * M[2] + g.g2 * M[3] + g.g3 * M[4]);
  return b;
}

}  // namespace

BoundReport vg_bound(const MomentBundle& mx, const MomentBundle& my, std::uint64_t m,
                     std::uint64_t n, int r, const HNorms& norms, bool symmetrize) {
  if (r < 1) throw DomainError("r must be a positive integer");
  const auto M = stein::bound_constants(r, 1.0, norms);
  for (int k = 2; k <= 4; ++k) {
    if (!std::isfinite(M[k])) throw DomainError("test-function norms must be finite");
  }
  BoundReport a = one_sided(mx, my, m, n, r, M);
  if (!symmetrize) return a;
  BoundReport b = one_sided(my, mx, n, m, r, M);
  a.variant = b.variant = Variant::kSymmetrizedMin;
  if (b.total < a.total) {
    b.swapped = true;
    return b;
  }
  return a;
}

BoundReport d2_bound(std::uint64_t m, std::uint64_t n, const HNorms& norms) {
  const auto rad = MomentBundle::rademacher();
  return vg_bound(rad, rad, m, n, 1, norms, true);
}

}  // namespace vgstein::bounds
