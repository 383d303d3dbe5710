#pragma once

// Random variates built on std::mt19937_64. Each generator object owns its
// state; parallel callers use one object per stream.

#include <cstdint>
#include <random>

namespace vgstein::sampling {

using Engine = std::mt19937_64;

// Uniform on the open interval (0, 1) with 53 random bits.
inline double uniform_open(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Marsaglia polar method; keeps the second deviate of each pair.
class NormalGenerator {
 public:
  double operator()(Engine& eng);

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Gamma(shape, rate 1). Marsaglia-Tsang squeeze for shape >= 1; shape < 1
// samples shape + 1 and multiplies by U^{1/shape}.
double gamma(double shape, Engine& eng, NormalGenerator& normal);

}  // namespace vgstein::sampling
