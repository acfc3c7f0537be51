#include "gsn/rng.hpp"

#include <cmath>
#include <numbers>

namespace gsn::rng {

double normal(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a, std::uint64_t b,
              std::uint64_t c) {
  const double u1 = uniform(seed, purpose, a, b, c);
  const double u2 = uniform(seed, purpose, a, b, c ^ (1ULL << 63));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace gsn::rng
