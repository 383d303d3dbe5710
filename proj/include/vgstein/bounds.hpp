#pragma once

// Explicit error bounds for the double-index sum W_r against VG1(r, 0, 1, 0).

#include <array>
#include <cstdint>
#include <string>

#include "vgstein/test_functions.hpp"
#include "vgstein/vgdist.hpp"

namespace vgstein::bounds {

struct Gammas {
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;
};

enum class Variant { kAsStated, kSymmetrizedMin };
std::string variant_name(Variant v);

struct BoundReport {
  double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;
  std::uint64_t m = 0, n = 0;
  int r = 1;
  double M2 = 0.0, M3 = 0.0, M4 = 0.0;
  double total = 0.0;
  Variant variant = Variant::kAsStated;
  // Under kSymmetrizedMin, true when the (Y, X, n, m) ordering won; the gammas
  // and m, n fields then describe that ordering.
  bool swapped = false;
};

// gamma^k_{m,n}(X, Y). Both bundles must be standardized.
Gammas gamma_coefficients(const MomentBundle& mx, const MomentBundle& my, std::uint64_t m,
                          std::uint64_t n);

// r (g1 M^2 + g2 M^3 + g3 M^4) with M^k = M^k_{r,1}(h).
BoundReport vg_bound(const MomentBundle& mx, const MomentBundle& my, std::uint64_t m,
                     std::uint64_t n, int r, const HNorms& norms, bool symmetrize);

// Binary sequences: both laws Rademacher, r = 1, symmetrized.
BoundReport d2_bound(std::uint64_t m, std::uint64_t n, const HNorms& norms);

}  // namespace vgstein::bounds
