#ifndef LEXACQ_RANDOM_HPP
#define LEXACQ_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace lexacq {

// Draws defined here rather than through std distributions, whose output
// differs between standard libraries.

// Uniform integer in [0, bound); bound must be positive.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound)
{
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit)
      return x % bound;
  }
}

// Uniform double in [0, 1).
inline double draw_unit(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace lexacq

#endif
