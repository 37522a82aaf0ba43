#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/grid.hpp"

namespace conley {

/// Outer approximation of one box under the time-T map.
struct BoxImage {
  BoxSet targets;
  bool exit = false;  // some padded image point left the domain
};

/// Regular lattice of samples in a box, corners included.
inline std::vector<Point> box_samples(const BoxGrid& grid, BoxId b, std::size_t per_axis) {
  require(per_axis >= 1, ErrorKind::Precondition, "samples_per_axis must be positive");
  const std::size_t d = grid.dimension();
  Point lo = grid.lower(b), hi = grid.upper(b);
  std::vector<Point> out;
  std::vector<std::size_t> k(d, 0);
  while (true) {
    Point p(d);
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = per_axis == 1 ? 0.5 * (lo[i] + hi[i])
                           : lo[i] + (hi[i] - lo[i]) * static_cast<double>(k[i]) / static_cast<double>(per_axis - 1);
    }
    out.push_back(std::move(p));
    std::size_t a = 0;
    while (a < d && k[a] + 1 == per_axis) k[a++] = 0;
    if (a == d) break;
    ++k[a];
  }
  return out;
}

inline BoxImage box_image(const FlowSystem& sys, const BoxGrid& grid, BoxId b, double map_time, double padding,
                          std::size_t samples_per_axis) {
  require(b < grid.size(), ErrorKind::Precondition, "box index out of range");
  require(map_time >= sys.step(), ErrorKind::Precondition, "map time must be at least the integrator step");
  require(padding >= 0.0, ErrorKind::Precondition, "padding must be non-negative");
  BoxImage img;
  std::vector<BoxId> hits;
  const Rect& dom = grid.domain();
  for (const Point& x : box_samples(grid, b, samples_per_axis)) {
    FlowResult r = flow_map(sys, x, map_time);
    if (r.escaped) {
      img.exit = true;
      continue;
    }
    const Point& y = r.point;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] - padding < dom.lower[i] || y[i] + padding > dom.upper[i]) img.exit = true;
    }
    hits.push_back(grid.box_of(y));
    grid.for_each_box_near(y, padding, [&](BoxId t) { hits.push_back(t); });
  }
  img.targets = BoxSet(std::move(hits));
  return img;
}

/// Directed graph over boxes approximating the time-T map. Edge lists are
/// sorted and duplicate-free; `exits[b]` marks an edge to the exit pseudo-node.
class TransitionGraph {
 public:
  TransitionGraph() = default;
  TransitionGraph(BoxGrid grid, double map_time, double padding, std::size_t samples_per_axis,
                  std::vector<std::vector<BoxId>> edges, std::vector<char> exits)
      : grid_(std::move(grid)),
        map_time_(map_time),
        padding_(padding),
        samples_per_axis_(samples_per_axis),
        edges_(std::move(edges)),
        exits_(std::move(exits)) {
    require(edges_.size() == grid_.size() && exits_.size() == grid_.size(), ErrorKind::Precondition,
            "edge table size must match the grid");
    preds_.assign(grid_.size(), {});
    for (BoxId b = 0; b < edges_.size(); ++b) {
      auto& e = edges_[b];
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
      for (BoxId t : e) {
        require(t < grid_.size(), ErrorKind::Precondition, "edge target out of range");
        preds_[t].push_back(b);
      }
    }
  }

  const BoxGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  double map_time() const { return map_time_; }
  double padding() const { return padding_; }
  std::size_t samples_per_axis() const { return samples_per_axis_; }
  const std::vector<BoxId>& successors(BoxId b) const { return edges_[b]; }
  const std::vector<BoxId>& predecessors(BoxId b) const { return preds_[b]; }
  bool exits(BoxId b) const { return exits_[b] != 0; }
  const std::vector<std::vector<BoxId>>& edges() const { return edges_; }
  const std::vector<char>& exit_flags() const { return exits_; }

  bool has_exit_node() const {
    for (char e : exits_)
      if (e) return true;
    return false;
  }

  bool has_edge(BoxId from, BoxId to) const {
    const auto& e = edges_[from];
    return std::binary_search(e.begin(), e.end(), to);
  }

  friend bool operator==(const TransitionGraph& a, const TransitionGraph& b) {
    return a.grid_ == b.grid_ && a.map_time_ == b.map_time_ && a.padding_ == b.padding_ &&
           a.samples_per_axis_ == b.samples_per_axis_ && a.edges_ == b.edges_ && a.exits_ == b.exits_;
  }

 private:
  BoxGrid grid_;
  double map_time_ = 0.0;
  double padding_ = 0.0;
  std::size_t samples_per_axis_ = 0;
  std::vector<std::vector<BoxId>> edges_;
  std::vector<char> exits_;
  std::vector<std::vector<BoxId>> preds_;
};

inline TransitionGraph build_transition_graph(const FlowSystem& sys, const BoxGrid& grid, double map_time,
                                              double padding, std::size_t samples_per_axis) {
  require(sys.domain().contains(grid.domain().lower) && sys.domain().contains(grid.domain().upper),
          ErrorKind::Precondition, "grid domain must lie inside the system domain");
  std::vector<std::vector<BoxId>> edges(grid.size());
  std::vector<char> exits(grid.size(), 0);
  for (BoxId b = 0; b < grid.size(); ++b) {
    BoxImage img = box_image(sys, grid, b, map_time, padding, samples_per_axis);
    edges[b] = img.targets.ids();
    exits[b] = img.exit ? 1 : 0;
  }
  return TransitionGraph(grid, map_time, padding, samples_per_axis, std::move(edges), std::move(exits));
}

struct InvariantPart {
  BoxSet boxes;
  bool isolated = false;  // avoids the outer boundary layer of the region
};

/// Largest I within B in which every box has a predecessor and a successor in I.
inline InvariantPart invariant_part(const TransitionGraph& g, const BoxSet& region) {
  const std::size_t n = g.size();
  for (BoxId b : region) require(b < n, ErrorKind::Precondition, "box index out of range");
  std::vector<char> in = region.mask(n);
  std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
  for (BoxId b : region) {
    for (BoxId t : g.successors(b)) {
      if (in[t]) {
        ++outdeg[b];
        ++indeg[t];
      }
    }
  }
  std::deque<BoxId> queue;
  for (BoxId b : region)
    if (indeg[b] == 0 || outdeg[b] == 0) queue.push_back(b);
  while (!queue.empty()) {
    BoxId b = queue.front();
    queue.pop_front();
    if (!in[b]) continue;
    in[b] = 0;
    for (BoxId t : g.successors(b)) {
      if (in[t] && --indeg[t] == 0) queue.push_back(t);
    }
    for (BoxId p : g.predecessors(b)) {
      if (in[p] && --outdeg[p] == 0) queue.push_back(p);
    }
  }
  InvariantPart out;
  out.boxes = BoxSet::from_mask(in);
  out.isolated = (out.boxes & boundary_layer(g.grid(), region)).empty();
  return out;
}

}  // namespace conley
