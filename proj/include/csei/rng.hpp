#pragma once

#include <cstdint>
#include <random>

namespace csei {

// splitmix64; used to derive independent per-tree seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Draw helpers on top of mt19937_64. The engine is bit-specified by the
// standard; the library distributions are not, so these mappings keep
// output identical across standard libraries.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  // multiply-shift range reduction
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n);
  return static_cast<std::uint64_t>(wide >> 64);
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + uniform_unit(rng) * (hi - lo);
}

}  // namespace csei
