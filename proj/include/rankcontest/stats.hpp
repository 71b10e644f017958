#pragma once

#include <cstdint>
#include <random>

namespace rankcontest {

// Inverse CDF of the standard normal. Acklam's rational approximation
// refined with one Halley step; |error| < 1e-15 on (0,1).
double norm_quantile(double p);

// Deterministic uniform stream. Wraps mt19937_64 and converts to doubles
// directly so draws are identical across standard library implementations.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double next_open01() {
    double u = (gen_() >> 11) * 0x1.0p-53;
    return u <= 0.0 ? 0x1.0p-53 : u;
  }

  // Uniform on [lo, hi).
  double next(double lo, double hi) { return lo + (hi - lo) * next_open01(); }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rankcontest
