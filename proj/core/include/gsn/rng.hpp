#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, purpose tag, up to three indices), so results do not depend on
// evaluation order or thread count. The exact bit recipe is documented in
// docs/rng.md and must not change without bumping file format versions.

#include <cstdint>
#include <string_view>

namespace gsn::rng {

/// Packs up to eight ASCII characters little-endian into a 64-bit tag.
constexpr std::uint64_t tag(std::string_view name) {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < name.size() && i < 8; ++i) {
    t |= static_cast<std::uint64_t>(static_cast<unsigned char>(name[i])) << (8 * i);
  }
  return t;
}

namespace tags {
inline constexpr std::uint64_t hide = tag("hide");
inline constexpr std::uint64_t validate = tag("valid");
inline constexpr std::uint64_t init = tag("init");
inline constexpr std::uint64_t tie_break = tag("tiebrk");
inline constexpr std::uint64_t params = tag("param");
inline constexpr std::uint64_t epoch = tag("epoch");
inline constexpr std::uint64_t bench = tag("bench");
inline constexpr std::uint64_t repeat = tag("repeat");
}  // namespace tags

/// SplitMix64 step: add the golden-ratio increment, then finalize.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a,
                            std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ purpose);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

/// Maps 64 random bits to the open interval (0, 1) using the top 52 bits.
/// (With 53 bits the largest value, 2^53 - 0.5, would round up to 1.)
constexpr double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

constexpr double uniform(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a,
                         std::uint64_t b = 0, std::uint64_t c = 0) {
  return to_open_unit(key(seed, purpose, a, b, c));
}

/// Uniform on the open interval (lo, hi).
constexpr double uniform_in(double lo, double hi, std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  return lo + (hi - lo) * uniform(seed, purpose, a, b, c);
}

/// Standard normal via Box-Muller on two keyed draws (c and c ^ 1<<63).
double normal(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a, std::uint64_t b = 0,
              std::uint64_t c = 0);

/// Derives an independent child seed, e.g. one per epoch or per repeat.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  return key(seed, purpose, index);
}

}  // namespace gsn::rng
