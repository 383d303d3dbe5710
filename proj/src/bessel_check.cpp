#include <algorithm>
#include <cmath>
#include <numbers>

#include "vgstein/bessel.hpp"

namespace vgstein::bessel {

bool SelfCheck::pass() const {
  return wronskian_max_rel <= 1e-10 && k_half_max_rel <= 1e-12 && i_ratio_max_dev <= 0.005 &&
         k_ratio_max_dev <= 0.005;
}

SelfCheck self_check() {
  SelfCheck out;
  // Scaled pairs: e^{-x} I * e^{x} K is the unscaled product.
  for (double nu = -0.45; nu <= 6.0; nu += 0.35) {
    for (double lx = -3.0; lx <= 2.6; lx += 0.2) {
      const double x = std::pow(10.0, lx);
      const double w = bessel_i(nu, x, true) * bessel_k(nu + 1, x, true) +
                       bessel_i(nu + 1, x, true) * bessel_k(nu, x, true);
      out.wronskian_max_rel = std::max(out.wronskian_max_rel, std::abs(x * w - 1.0));
      ++out.grid_points;
    }
  }
  for (double lx = -3.0; lx <= 2.8; lx += 0.1) {
    const double x = std::pow(10.0, lx);
    const double exact = std::sqrt(std::numbers::pi / (2.0 * x));
    out.k_half_max_rel =
        std::max(out.k_half_max_rel, std::abs(bessel_k(0.5, x, true) / exact - 1.0));
  }
  const double x = 50.0;
  for (double nu : {-0.5, 0.0, 0.5}) {
    const double ri = bessel_i(nu, x, true) * std::sqrt(2.0 * std::numbers::pi * x);
    const double rk = bessel_k(nu, x, true) / std::sqrt(std::numbers::pi / (2.0 * x));
    out.i_ratio_max_dev = std::max(out.i_ratio_max_dev, std::abs(ri - 1.0));
    out.k_ratio_max_dev = std::max(out.k_ratio_max_dev, std::abs(rk - 1.0));
  }
  return out;
}

}  // namespace vgstein::bessel
