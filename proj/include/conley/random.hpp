#pragma once

#include <cstdint>
#include <random>

#include "conley/geometry.hpp"
#include "conley/grid.hpp"

namespace conley {

using Rng = std::mt19937_64;

/// Uniform draw in [0, 1) with a platform-independent mapping.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(uniform01(rng) * n); }

inline Point uniform_in_box(const BoxGrid& grid, BoxId b, Rng& rng) {
  Point lo = grid.lower(b), hi = grid.upper(b);
  Point p(lo.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = lo[i] + uniform01(rng) * (hi[i] - lo[i]);
  return p;
}

}  // namespace conley
