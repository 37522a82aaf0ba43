#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "conley/error.hpp"
#include "conley/geometry.hpp"

namespace conley {

using BoxId = std::size_t;

/// Sorted, duplicate-free set of box indices over a fixed grid.
class BoxSet {
 public:
  BoxSet() = default;
  BoxSet(std::initializer_list<BoxId> ids) : ids_(ids) { normalize(); }
  explicit BoxSet(std::vector<BoxId> ids) : ids_(std::move(ids)) { normalize(); }

  static BoxSet from_sorted(std::vector<BoxId> ids) {
    BoxSet s;
    s.ids_ = std::move(ids);
    return s;
  }

  static BoxSet from_mask(std::span<const char> mask) {
    std::vector<BoxId> ids;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) ids.push_back(i);
    return from_sorted(std::move(ids));
  }

  bool contains(BoxId b) const { return std::binary_search(ids_.begin(), ids_.end(), b); }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<BoxId>& ids() const { return ids_; }
  BoxId front() const { return ids_.front(); }

  std::vector<char> mask(std::size_t grid_size) const {
    std::vector<char> m(grid_size, 0);
    for (BoxId b : ids_) m[b] = 1;
    return m;
  }

  friend BoxSet operator|(const BoxSet& a, const BoxSet& b) {
    std::vector<BoxId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  friend BoxSet operator&(const BoxSet& a, const BoxSet& b) {
    std::vector<BoxId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  friend BoxSet operator-(const BoxSet& a, const BoxSet& b) {
    std::vector<BoxId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  bool is_subset_of(const BoxSet& other) const {
    return std::includes(other.begin(), other.end(), begin(), end());
  }

  friend bool operator==(const BoxSet&, const BoxSet&) = default;

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<BoxId> ids_;
};

/// Uniform cubical partition of a rectangle. Box ids are row-major with
/// axis 0 varying fastest.
class BoxGrid {
 public:
  static constexpr std::size_t kMaxBoxes = std::size_t{1} << 31;

  BoxGrid() = default;
  BoxGrid(Rect domain, std::vector<std::size_t> counts) : domain_(std::move(domain)), counts_(std::move(counts)) {
    domain_.validate();
    require(counts_.size() == domain_.dimension(), ErrorKind::Precondition,
            "need one subdivision count per axis");
    size_ = 1;
    for (std::size_t c : counts_) {
      require(c >= 1, ErrorKind::Precondition, "subdivision count must be at least 1 on every axis");
      require(size_ <= kMaxBoxes / c, ErrorKind::Capacity,
              "box count exceeds index capacity of " + std::to_string(kMaxBoxes));
      size_ *= c;
    }
    widths_.resize(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i)
      widths_[i] = (domain_.upper[i] - domain_.lower[i]) / static_cast<double>(counts_[i]);
  }

  std::size_t dimension() const { return counts_.size(); }
  std::size_t size() const { return size_; }
  const Rect& domain() const { return domain_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  const std::vector<double>& widths() const { return widths_; }

  double diagonal() const { return norm(widths_); }
  double min_width() const { return *std::min_element(widths_.begin(), widths_.end()); }

  std::vector<std::size_t> multi_index(BoxId id) const {
    std::vector<std::size_t> m(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      m[i] = id % counts_[i];
      id /= counts_[i];
    }
    return m;
  }

  BoxId id(std::span<const std::size_t> m) const {
    BoxId id = 0;
    for (std::size_t i = counts_.size(); i-- > 0;) id = id * counts_[i] + m[i];
    return id;
  }

  std::size_t axis_cell(std::size_t axis, double x) const {
    double q = std::floor((x - domain_.lower[axis]) / widths_[axis]);
    if (q < 0.0) return 0;
    auto c = static_cast<std::size_t>(q);
    return std::min(c, counts_[axis] - 1);
  }

  /// Box containing x (upper domain faces belong to the last box).
  BoxId box_of(std::span<const double> x) const {
    require(domain_.contains(x), ErrorKind::Domain, "point outside grid domain");
    BoxId id = 0;
    for (std::size_t i = counts_.size(); i-- > 0;) id = id * counts_[i] + axis_cell(i, x[i]);
    return id;
  }

  Point lower(BoxId id) const {
    auto m = multi_index(id);
    Point p(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) p[i] = domain_.lower[i] + static_cast<double>(m[i]) * widths_[i];
    return p;
  }

  Point upper(BoxId id) const {
    auto m = multi_index(id);
    Point p(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      p[i] = m[i] + 1 == counts_[i] ? domain_.upper[i]
                                    : domain_.lower[i] + static_cast<double>(m[i] + 1) * widths_[i];
    return p;
  }

  Point center(BoxId id) const {
    auto m = multi_index(id);
    Point p(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      p[i] = domain_.lower[i] + (static_cast<double>(m[i]) + 0.5) * widths_[i];
    return p;
  }

  bool box_contains(BoxId id, std::span<const double> x) const {
    Point lo = lower(id), hi = upper(id);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  double distance_to_box(BoxId id, std::span<const double> x) const {
    Point lo = lower(id), hi = upper(id);
    return distance_to_rect(x, lo, hi);
  }

  /// Chebyshev distance in box-index units.
  std::size_t index_distance(BoxId a, BoxId b) const {
    auto ma = multi_index(a), mb = multi_index(b);
    std::size_t d = 0;
    for (std::size_t i = 0; i < ma.size(); ++i) d = std::max(d, ma[i] > mb[i] ? ma[i] - mb[i] : mb[i] - ma[i]);
    return d;
  }

  /// Calls fn(neighbor) for every box in the 3^d - 1 neighborhood that lies on
  /// the grid; returns false if part of the neighborhood falls off the grid.
  template <class Fn>
  bool for_each_neighbor(BoxId id, Fn&& fn) const {
    auto m = multi_index(id);
    const std::size_t d = m.size();
    std::vector<int> off(d, -1);
    bool complete = true;
    std::vector<std::size_t> n(d);
    while (true) {
      bool zero = true, inside = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (off[i] != 0) zero = false;
        long long v = static_cast<long long>(m[i]) + off[i];
        if (v < 0 || v >= static_cast<long long>(counts_[i])) inside = false;
        else n[i] = static_cast<std::size_t>(v);
      }
      if (!zero) {
        if (inside) fn(id_of(n));
        else complete = false;
      }
      std::size_t k = 0;
      while (k < d && off[k] == 1) off[k++] = -1;
      if (k == d) break;
      ++off[k];
    }
    return complete;
  }

  /// All boxes whose closure meets the closed ball of the given radius.
  template <class Fn>
  void for_each_box_near(std::span<const double> x, double radius, Fn&& fn) const {
    const std::size_t d = dimension();
    std::vector<std::size_t> lo(d), hi(d), cur(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = axis_cell(i, std::max(x[i] - radius, domain_.lower[i]));
      hi[i] = axis_cell(i, std::min(x[i] + radius, domain_.upper[i]));
    }
    cur = lo;
    while (true) {
      BoxId b = id_of(cur);
      if (distance_to_box(b, x) <= radius) fn(b);
      std::size_t k = 0;
      while (k < d && cur[k] == hi[k]) cur[k] = lo[k], ++k;
      if (k == d) break;
      ++cur[k];
    }
  }

  BoxSet all() const {
    std::vector<BoxId> ids(size_);
    for (std::size_t i = 0; i < size_; ++i) ids[i] = i;
    return BoxSet::from_sorted(std::move(ids));
  }

  /// Boxes of the grid whose closure meets the closed rectangle [lo, hi].
  BoxSet boxes_meeting(std::span<const double> lo, std::span<const double> hi) const {
    std::vector<BoxId> ids;
    for (BoxId b = 0; b < size_; ++b) {
      Point bl = lower(b), bu = upper(b);
      bool meets = true;
      for (std::size_t i = 0; i < dimension(); ++i)
        if (bu[i] < lo[i] || bl[i] > hi[i]) meets = false;
      if (meets) ids.push_back(b);
    }
    return BoxSet::from_sorted(std::move(ids));
  }

  friend bool operator==(const BoxGrid& a, const BoxGrid& b) {
    return a.domain_ == b.domain_ && a.counts_ == b.counts_;
  }

 private:
  BoxId id_of(const std::vector<std::size_t>& m) const { return id(std::span<const std::size_t>(m)); }

  Rect domain_;
  std::vector<std::size_t> counts_;
  std::vector<double> widths_;
  std::size_t size_ = 0;
};

inline BoxGrid build_grid(const Rect& domain, const std::vector<std::size_t>& counts) {
  return BoxGrid(domain, counts);
}

/// Boxes of `set` with a grid neighbor outside the set or off the grid.
inline BoxSet boundary_layer(const BoxGrid& grid, const BoxSet& set) {
  auto m = set.mask(grid.size());
  std::vector<BoxId> out;
  for (BoxId b : set) {
    bool boundary = false;
    bool complete = grid.for_each_neighbor(b, [&](BoxId n) {
      if (!m[n]) boundary = true;
    });
    if (boundary || !complete) out.push_back(b);
  }
  return BoxSet::from_sorted(std::move(out));
}

/// set plus every grid neighbor of its boxes.
inline BoxSet dilate(const BoxGrid& grid, const BoxSet& set) {
  auto m = set.mask(grid.size());
  for (BoxId b : set) grid.for_each_neighbor(b, [&](BoxId n) { m[n] = 1; });
  return BoxSet::from_mask(m);
}

/// Distance from x to the union of closed boxes (+inf for the empty set).
inline double distance_to_set(const BoxGrid& grid, const BoxSet& set, std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  for (BoxId b : set) {
    best = std::min(best, grid.distance_to_box(b, x));
    if (best == 0.0) break;
  }
  return best;
}

/// Whether x lies in one of the closed boxes of the set.
inline bool in_closed_union(const BoxGrid& grid, const BoxSet& set, std::span<const double> x) {
  if (!grid.domain().contains(x)) return false;
  BoxId b = grid.box_of(x);
  if (set.contains(b)) return true;
  bool hit = false;
  grid.for_each_neighbor(b, [&](BoxId n) {
    if (!hit && set.contains(n) && grid.box_contains(n, x)) hit = true;
  });
  return hit;
}

}  // namespace conley
