#include <bit>
#include <cmath>
#include <string>

#include "vgstein/errors.hpp"
#include "vgstein/simulate.hpp"

namespace vgstein::sim {

std::string law_name(Law law) {
  switch (law) {
    case Law::kRademacher: return "rademacher";
    case Law::kGaussian: return "gaussian";
    case Law::kUniformPm: return "uniform_pm";
    case Law::kCustom: return "custom";
  }
  return "unknown";
}

Law parse_law(std::string_view name) {
  if (name == "rademacher") return Law::kRademacher;
  if (name == "gaussian") return Law::kGaussian;
  if (name == "uniform_pm") return Law::kUniformPm;
  throw DomainError("unknown law: " + std::string(name));
}

MomentBundle law_moments(Law law) {
  switch (law) {
    case Law::kRademacher: return MomentBundle::rademacher();
    case Law::kGaussian: return MomentBundle::gaussian();
    case Law::kUniformPm: return MomentBundle::uniform_pm();
    case Law::kCustom: break;
  }
  throw DomainError("custom laws carry their own moments");
}

void KernelSpec::validate() const {
  if (m == 0 || n == 0) throw DomainError("m and n must be positive");
  if (r < 1) throw DomainError("r must be a positive integer");
  if (n_samples == 0) throw DomainError("n_samples must be positive");
  if (block_size == 0) throw DomainError("block_size must be positive");
  if (hs.empty()) throw DomainError("need at least one test function");
  if (statistic == Statistic::kD2 && r != 1) throw DomainError("the D2 statistic has r = 1");
  if (law_x == Law::kCustom && !custom_x) throw DomainError("custom law_x needs a sampler");
  if (law_y == Law::kCustom && !custom_y) throw DomainError("custom law_y needs a sampler");
  if (!(time_budget_seconds >= 0.0)) throw DomainError("time budget must be >= 0");
}

std::size_t KernelSpec::block_count() const { return (n_samples + block_size - 1) / block_size; }

std::size_t KernelSpec::block_length(std::size_t block) const {
  const std::size_t start = block * block_size;
  return std::min(block_size, n_samples - start);
}

void Accumulator::merge(const Accumulator& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
  const double nt = na + nb;
  for (std::size_t h = 0; h < mean.size(); ++h) {
    const double d = o.mean[h] - mean[h];
    mean[h] += d * nb / nt;
    m2[h] += o.m2[h] + d * d * na * nb / nt;
  }
  count += o.count;
}

double Accumulator::variance(std::size_t h) const {
  return count > 1 ? m2[h] / static_cast<double>(count - 1) : 0.0;
}

double Accumulator::std_error(std::size_t h) const {
  return count > 0 ? std::sqrt(variance(h) / static_cast<double>(count)) : 0.0;
}

namespace {

sampling::Engine block_engine(std::uint64_t seed, std::size_t block) {
  const auto b = static_cast<std::uint64_t>(block);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return sampling::Engine(seq);
}

// 2 * popcount - len over len fair bits, i.e. a sum of len Rademacher signs.
std::int64_t sign_sum(std::uint64_t len, sampling::Engine& eng) {
  std::int64_t ones = 0;
  std::uint64_t left = len;
  while (left >= 64) {
    ones += std::popcount(eng());
    left -= 64;
  }
  if (left > 0) ones += std::popcount(eng() & ((std::uint64_t{1} << left) - 1));
  return 2 * ones - static_cast<std::int64_t>(len);
}

// Unnormalised sum of len draws of a non-Rademacher law.
double law_sum(Law law, const Sampler& custom, std::uint64_t len, sampling::Engine& eng,
               sampling::NormalGenerator& normal) {
  switch (law) {
    case Law::kGaussian:
      // A sum of len standard normals is exactly N(0, len).
      return std::sqrt(static_cast<double>(len)) * normal(eng);
    case Law::kUniformPm: {
      double s = 0.0;
      for (std::uint64_t i = 0; i < len; ++i) s += std::sqrt(3.0) * (2.0 * sampling::uniform_open(eng) - 1.0);
      return s;
    }
    case Law::kCustom: {
      double s = 0.0;
      for (std::uint64_t i = 0; i < len; ++i) s += custom(eng);
      return s;
    }
    case Law::kRademacher: break;
  }
  return static_cast<double>(sign_sum(len, eng));
}

}  // namespace

void draw_block(const KernelSpec& spec, std::size_t block, std::span<double> out) {
  auto eng = block_engine(spec.seed, block);
  sampling::NormalGenerator normal;
  const double inv = 1.0 / std::sqrt(static_cast<double>(spec.m) * static_cast<double>(spec.n));
  const bool bits = spec.statistic == Statistic::kD2 ||
                    (spec.law_x == Law::kRademacher && spec.law_y == Law::kRademacher);

  for (double& w : out) {
    if (bits) {
      // Integer numerator: sum_k (2 pop_x - m)(2 pop_y - n). For D2 the counts of
      // zeros give 2 D2 - mn = (2X - m)(2Y - n), the same product up to sign flips.
      std::int64_t num = 0;
      for (int k = 0; k < spec.r; ++k) {
        const std::int64_t sx = sign_sum(spec.m, eng);
        const std::int64_t sy = sign_sum(spec.n, eng);
        num += sx * sy;
      }
      w = static_cast<double>(num) * inv;
    } else {
      double acc = 0.0;
      for (int k = 0; k < spec.r; ++k) {
        const double sx = law_sum(spec.law_x, spec.custom_x, spec.m, eng, normal);
        const double sy = law_sum(spec.law_y, spec.custom_y, spec.n, eng, normal);
        acc += sx * sy;
      }
      w = acc * inv;
    }
  }
}

Accumulator run_block(const KernelSpec& spec, std::size_t block) {
  const std::size_t len = spec.block_length(block);
  std::vector<double> ws(len);
  draw_block(spec, block, ws);

  Accumulator acc(spec.hs.size());
  acc.count = len;
  for (std::size_t h = 0; h < spec.hs.size(); ++h) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double v = spec.hs[h](ws[i]);
      const double d = v - mean;
      mean += d / static_cast<double>(i + 1);
      m2 += d * (v - mean);
    }
    acc.mean[h] = mean;
    acc.m2[h] = m2;
  }
  return acc;
}

}  // namespace vgstein::sim
