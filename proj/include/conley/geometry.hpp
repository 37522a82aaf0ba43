#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "conley/error.hpp"

namespace conley {

using Point = std::vector<double>;

/// Axis-aligned closed rectangle [lower_0, upper_0] x ... x [lower_{d-1}, upper_{d-1}].
struct Rect {
  Point lower;
  Point upper;

  std::size_t dimension() const { return lower.size(); }

  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    }
    return true;
  }

  double diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) s += (upper[i] - lower[i]) * (upper[i] - lower[i]);
    return std::sqrt(s);
  }

  void validate() const {
    require(!lower.empty() && lower.size() == upper.size(), ErrorKind::Precondition,
            "rectangle needs matching non-empty bounds");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      require(std::isfinite(lower[i]) && std::isfinite(upper[i]) && lower[i] < upper[i],
              ErrorKind::Precondition, "rectangle axis " + std::to_string(i) + " must satisfy lower < upper");
    }
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// Euclidean distance from a point to a closed rectangle (0 inside).
inline double distance_to_rect(std::span<const double> x, std::span<const double> lo, std::span<const double> hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = 0.0;
    if (x[i] < lo[i]) d = lo[i] - x[i];
    else if (x[i] > hi[i]) d = x[i] - hi[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace conley
