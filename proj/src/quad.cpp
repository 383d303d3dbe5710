#include "vgstein/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "vgstein/errors.hpp"

namespace vgstein::quad {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], kNodes[3], kNodes[5], kNodes[7].
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

enum class Map { kIdentity, kRight, kLeft };

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  Map map = Map::kIdentity;
  double anchor = 0.0;
  double value = 0.0;
  double err = 0.0;
  bool divisible = true;
};

double evaluate(const Integrand& f, Map map, double anchor, double t) {
  double x = t;
  double jacobian = 1.0;
  if (map != Map::kIdentity) {
    const double s = 1.0 - t;
    const double u = t / s;
    jacobian = 1.0 / (s * s);
    x = map == Map::kRight ? anchor + u : anchor - u;
  }
  const double fx = f(x);
  if (!std::isfinite(fx)) {
    std::ostringstream msg;
    msg << "integrand is not finite at x = " << x;
    throw DomainError(msg.str());
  }
  const double value = fx * jacobian;
  // Far tails of a compactified range: jacobian overflow times an
  // underflowed integrand.
  return std::isfinite(value) ? value : 0.0;
}

void apply_rule(const Integrand& f, Segment& seg) {
  const double center = 0.5 * (seg.lo + seg.hi);
  const double half = 0.5 * (seg.hi - seg.lo);

  std::array<double, 15> fv{};
  for (int j = 0; j < 7; ++j) {
    fv[2 * j] = evaluate(f, seg.map, seg.anchor, center - half * kNodes[j]);
    fv[2 * j + 1] = evaluate(f, seg.map, seg.anchor, center + half * kNodes[j]);
  }
  fv[14] = evaluate(f, seg.map, seg.anchor, center);

  double kronrod = kKronrod[7] * fv[14];
  double gauss = kGauss[3] * fv[14];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[2 * j] + fv[2 * j + 1];
    kronrod += kKronrod[j] * pair;
    abs_sum += kKronrod[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrod[7] * std::abs(fv[14] - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrod[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
  }

  const double result = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > kTiny / (50.0 * kEpsilon)) {
    err = std::max(50.0 * kEpsilon * res_abs, err);
  }

  seg.value = result;
  seg.err = err;
  const double scale = std::max({std::abs(seg.lo), std::abs(seg.hi), kTiny});
  seg.divisible = (seg.hi - seg.lo) > 128.0 * kEpsilon * scale;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_cut_epsilon > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("max_subdivisions must be at least 1");
  }
}

QuadResult integrate(const Integrand& f, double a, double b,
                     std::span<const double> split_points, const QuadConfig& cfg) {
  cfg.validate();
  if (std::isnan(a) || std::isnan(b) || !(a < b)) {
    throw DomainError("integration limits must satisfy a < b");
  }

  std::vector<double> bounds{a};
  for (double s : split_points) {
    if (std::isfinite(s) && s > a && s < b) bounds.push_back(s);
  }
  std::sort(bounds.begin() + 1, bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  if (std::isinf(a) && std::isinf(b) && bounds.size() == 1) bounds.push_back(0.0);
  bounds.push_back(b);

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    Segment seg;
    const double lo = bounds[i];
    const double hi = bounds[i + 1];
    if (std::isinf(lo)) {
      seg = {0.0, 1.0, Map::kLeft, hi};
    } else if (std::isinf(hi)) {
      seg = {0.0, 1.0, Map::kRight, lo};
    } else {
      seg = {lo, hi, Map::kIdentity, 0.0};
    }
    apply_rule(f, seg);
    segments.push_back(seg);
  }

  int subdivisions = 0;
  for (;;) {
    double total = 0.0;
    double total_err = 0.0;
    for (const auto& s : segments) {
      total += s.value;
      total_err += s.err;
    }
    if (total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
      return {total, total_err, subdivisions};
    }

    auto worst = segments.end();
    for (auto it = segments.begin(); it != segments.end(); ++it) {
      if (it->divisible && (worst == segments.end() || it->err > worst->err)) worst = it;
    }
    if (worst == segments.end() || subdivisions >= cfg.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge: estimate " << total << ", error " << total_err
          << " after " << subdivisions << " subdivisions";
      throw AccuracyError(msg.str(), total, total_err);
    }

    Segment left = *worst;
    Segment right = *worst;
    const double mid = 0.5 * (worst->lo + worst->hi);
    left.hi = mid;
    right.lo = mid;
    apply_rule(f, left);
    apply_rule(f, right);
    *worst = left;
    segments.push_back(right);
    ++subdivisions;
  }
}

double expectation(const Integrand& h, const Integrand& density,
                   std::pair<double, double> support, double kink, const QuadConfig& cfg) {
  const std::array<double, 1> split{kink};
  const auto integrand = [&](double x) {
    const double p = density(x);
    return p == 0.0 ? 0.0 : h(x) * p;
  };
  return integrate(integrand, support.first, support.second, split, cfg).value;
}

}  // namespace vgstein::quad
