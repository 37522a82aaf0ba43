#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/graph_algorithms.hpp"
#include "conley/grid.hpp"
#include "conley/transition_graph.hpp"

namespace conley {

namespace detail {

inline bool nontrivial(const TransitionGraph& g, const std::vector<std::size_t>& comp) {
  return comp.size() > 1 || g.has_edge(comp.front(), comp.front());
}

inline SccResult region_sccs(const TransitionGraph& g, const std::vector<char>& active) {
  return strongly_connected_components(
      g.size(), [&](std::size_t v) -> const std::vector<BoxId>& { return g.successors(v); }, active);
}

inline std::vector<char> forward_closure(const TransitionGraph& g, const BoxSet& seeds,
                                         const std::vector<char>& active) {
  return reachable_from(
      g.size(), std::span<const std::size_t>(seeds.ids()),
      [&](std::size_t v) -> const std::vector<BoxId>& { return g.successors(v); }, active);
}

inline std::vector<char> backward_closure(const TransitionGraph& g, const BoxSet& seeds,
                                          const std::vector<char>& active) {
  return reachable_from(
      g.size(), std::span<const std::size_t>(seeds.ids()),
      [&](std::size_t v) -> const std::vector<BoxId>& { return g.predecessors(v); }, active);
}

}  // namespace detail

/// Boxes in nontrivial strongly connected components of the graph restricted
/// to the region (the exit pseudo-node never takes part).
inline BoxSet chain_recurrent_boxes(const TransitionGraph& g, const BoxSet& region) {
  auto active = region.mask(g.size());
  SccResult scc = detail::region_sccs(g, active);
  std::vector<BoxId> out;
  for (const auto& comp : scc.members)
    if (detail::nontrivial(g, comp)) out.insert(out.end(), comp.begin(), comp.end());
  return BoxSet(std::move(out));
}

/// A non-recurrent box of the region together with the Morse indices
/// (1-based) it can reach and that can reach it.
struct ConnectingBox {
  BoxId box = 0;
  std::vector<std::size_t> reachable;
  std::vector<std::size_t> coreachable;

  friend bool operator==(const ConnectingBox&, const ConnectingBox&) = default;
};

/// Recurrent classes of the restricted graph, stored in admissible order:
/// morse_sets[i - 1] is the class with index i, and every path between
/// distinct classes runs from a higher index to a lower one.
struct MorseGraph {
  BoxSet region;
  std::vector<BoxSet> morse_sets;
  std::vector<std::vector<char>> reaches;  // reaches[i][j]: path from class i+1 to class j+1, i != j
  std::vector<ConnectingBox> connecting;

  std::size_t size() const { return morse_sets.size(); }

  friend bool operator==(const MorseGraph&, const MorseGraph&) = default;

  /// Index i covers index j (j < i in the poset) if class i reaches class j.
  bool above(std::size_t i, std::size_t j) const { return reaches[i - 1][j - 1] != 0; }

  BoxSet recurrent() const {
    BoxSet all;
    for (const auto& m : morse_sets) all = all | m;
    return all;
  }

  /// 1-based Morse index of the class containing b, or 0.
  std::size_t index_of(BoxId b) const {
    for (std::size_t i = 0; i < morse_sets.size(); ++i)
      if (morse_sets[i].contains(b)) return i + 1;
    return 0;
  }
};

inline MorseGraph morse_graph(const TransitionGraph& g, const BoxSet& region) {
  const std::size_t n_boxes = g.size();
  auto active = region.mask(n_boxes);
  SccResult scc = detail::region_sccs(g, active);

  std::vector<BoxSet> classes;
  for (const auto& comp : scc.members)
    if (detail::nontrivial(g, comp)) classes.push_back(BoxSet::from_sorted(comp));
  const std::size_t n = classes.size();

  // Raw reachability between classes (in discovery order).
  std::vector<std::vector<char>> raw(n, std::vector<char>(n, 0));
  std::vector<std::vector<char>> fwd(n);
  for (std::size_t i = 0; i < n; ++i) {
    fwd[i] = detail::forward_closure(g, classes[i], active);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && fwd[i][classes[j].front()]) raw[i][j] = 1;
  }

  // Sinks first; ties go to the class holding the smallest box index.
  std::vector<std::size_t> order;
  std::vector<char> placed(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (placed[i]) continue;
      bool sink = true;
      for (std::size_t j = 0; j < n; ++j)
        if (!placed[j] && raw[i][j]) sink = false;
      if (sink && (best == n || classes[i].front() < classes[best].front())) best = i;
    }
    require(best != n, ErrorKind::Construction, "class reachability is cyclic");
    placed[best] = 1;
    order.push_back(best);
  }

  MorseGraph mg;
  mg.region = region;
  mg.reaches.assign(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    mg.morse_sets.push_back(classes[order[a]]);
    for (std::size_t b = 0; b < n; ++b) mg.reaches[a][b] = raw[order[a]][order[b]];
  }

  std::vector<char> recurrent(n_boxes, 0);
  for (const auto& c : classes)
    for (BoxId b : c) recurrent[b] = 1;
  std::vector<std::vector<char>> bwd(n);
  for (std::size_t a = 0; a < n; ++a) bwd[a] = detail::backward_closure(g, mg.morse_sets[a], active);
  for (BoxId b : region) {
    if (recurrent[b]) continue;
    ConnectingBox cb;
    cb.box = b;
    for (std::size_t a = 0; a < n; ++a) {
      if (fwd[order[a]][b]) cb.coreachable.push_back(a + 1);
      if (bwd[a][b]) cb.reachable.push_back(a + 1);
    }
    mg.connecting.push_back(std::move(cb));
  }
  return mg;
}

using DownSet = std::vector<std::size_t>;  // sorted 1-based Morse indices

inline bool is_down_set(const MorseGraph& mg, const DownSet& d) {
  std::vector<char> in(mg.size() + 1, 0);
  for (std::size_t i : d) {
    if (i < 1 || i > mg.size()) return false;
    in[i] = 1;
  }
  for (std::size_t i : d)
    for (std::size_t j = 1; j <= mg.size(); ++j)
      if (mg.above(i, j) && !in[j]) return false;
  return true;
}

inline constexpr std::size_t kMaxDownSets = std::size_t{1} << 20;

/// All down-sets, ordered by size and then lexicographically.
inline std::vector<DownSet> enumerate_down_sets(const MorseGraph& mg) {
  const std::size_t n = mg.size();
  std::vector<DownSet> out;
  DownSet current;
  std::vector<char> in(n + 1, 0);
  // Indices are processed ascending, so everything below i is decided before i.
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (out.size() > kMaxDownSets)
      throw Error(ErrorKind::Capacity, "more than 2^20 down-sets; reduce the number of Morse sets");
    if (i > n) {
      out.push_back(current);
      return;
    }
    self(self, i + 1);
    bool allowed = true;
    for (std::size_t j = 1; j < i; ++j)
      if (mg.above(i, j) && !in[j]) allowed = false;
    if (allowed) {
      in[i] = 1;
      current.push_back(i);
      self(self, i + 1);
      current.pop_back();
      in[i] = 0;
    }
  };
  rec(rec, 1);
  if (out.size() > kMaxDownSets)
    throw Error(ErrorKind::Capacity, "more than 2^20 down-sets; reduce the number of Morse sets");
  std::sort(out.begin(), out.end(), [](const DownSet& a, const DownSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

struct ARPair {
  BoxSet attractor;
  BoxSet repeller;
  DownSet down_set;
};

namespace detail {

inline std::pair<BoxSet, BoxSet> split_by_down_set(const MorseGraph& mg, const TransitionGraph& g,
                                                   const DownSet& d, const std::vector<char>& active) {
  require(is_down_set(mg, d), ErrorKind::Precondition, "index set is not downward closed");
  std::vector<char> in(mg.size() + 1, 0);
  for (std::size_t i : d) in[i] = 1;
  BoxSet lower, upper;
  for (std::size_t i = 1; i <= mg.size(); ++i) {
    if (in[i]) lower = lower | mg.morse_sets[i - 1];
    else upper = upper | mg.morse_sets[i - 1];
  }
  return {BoxSet::from_mask(forward_closure(g, lower, active)), BoxSet::from_mask(backward_closure(g, upper, active))};
}

}  // namespace detail

/// Attractor = invariant boxes reachable from the classes in D; repeller =
/// invariant boxes that reach a class outside D. Paths stay in the region.
inline std::pair<BoxSet, BoxSet> ar_regions(const MorseGraph& mg, const TransitionGraph& g, const BoxSet& region,
                                            const DownSet& d) {
  auto active = region.mask(g.size());
  auto [down, up] = detail::split_by_down_set(mg, g, d, active);
  BoxSet inv = invariant_part(g, region).boxes;
  return {down & inv, up & inv};
}

/// Region sets of an index pair for down-set D: `unstable_side` approximates
/// I^-_D (boxes whose backward orbits come from classes in D) and
/// `stable_side` approximates I^+ of the complement (boxes that can reach a
/// class outside D). Paths are confined to `interior` (N - L).
struct PairRegions {
  BoxSet unstable_side;
  BoxSet stable_side;
};

inline PairRegions ar_regions_in_pair(const MorseGraph& mg, const TransitionGraph& g, const BoxSet& interior,
                                      const DownSet& d) {
  auto active = interior.mask(g.size());
  auto [down, up] = detail::split_by_down_set(mg, g, d, active);
  return {down, up};
}

inline std::vector<ARPair> enumerate_ar_pairs(const MorseGraph& mg, const TransitionGraph& g, const BoxSet& region) {
  std::vector<ARPair> out;
  for (auto& d : enumerate_down_sets(mg)) {
    auto [a, r] = ar_regions(mg, g, region, d);
    out.push_back(ARPair{std::move(a), std::move(r), std::move(d)});
  }
  return out;
}

struct IntersectionReport {
  BoxSet intersection;
  BoxSet recurrent;
  BoxSet symmetric_difference;
  bool equal = false;
};

inline IntersectionReport compare_with_intersection(const MorseGraph& mg, const std::vector<ARPair>& pairs,
                                                    const BoxSet& universe) {
  IntersectionReport rep;
  rep.intersection = universe;
  for (const auto& p : pairs) rep.intersection = rep.intersection & (p.attractor | p.repeller);
  rep.recurrent = mg.recurrent();
  rep.symmetric_difference = (rep.intersection - rep.recurrent) | (rep.recurrent - rep.intersection);
  rep.equal = rep.symmetric_difference.empty();
  return rep;
}

/// Combinatorial check that the recurrent set equals the intersection of
/// A u A* over every attractor-repeller pair.
inline IntersectionReport check_R_equals_intersection(const MorseGraph& mg, const TransitionGraph& g,
                                                      const BoxSet& region) {
  return compare_with_intersection(mg, enumerate_ar_pairs(mg, g, region), invariant_part(g, region).boxes);
}

struct OracleResult {
  std::vector<char> flagged;
  std::vector<std::vector<std::size_t>> edges;
};

/// Brute-force epsilon-chain recurrence on a finite point cloud: x -> y when
/// some sampled time t in [t_min, t_max] brings x within eps of y.
inline OracleResult epsilon_chain_oracle(const FlowSystem& sys, const std::vector<Point>& points, double eps,
                                         double t_max, std::size_t steps, double t_min = 1.0) {
  require(eps > 0.0, ErrorKind::Precondition, "epsilon must be positive");
  require(t_min >= 1.0 && t_max >= t_min, ErrorKind::Precondition, "need 1 <= t_min <= t_max");
  require(steps >= 1, ErrorKind::Precondition, "need at least one probe time");
  const std::size_t n = points.size();
  const double dt = steps > 1 ? (t_max - t_min) / static_cast<double>(steps - 1) : 0.0;

  std::vector<std::vector<Point>> probes(n);
  for (std::size_t i = 0; i < n; ++i) {
    FlowResult r = flow_map(sys, points[i], t_min);
    if (r.escaped) continue;
    probes[i].push_back(r.point);
    for (std::size_t k = 1; k < steps; ++k) {
      r = flow_map(sys, probes[i].back(), dt);
      if (r.escaped) break;
      probes[i].push_back(r.point);
    }
  }

  OracleResult out;
  out.edges.resize(n);
  out.flagged.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& y : probes[i]) {
        if (distance(y, points[j]) < eps) {
          out.edges[i].push_back(j);
          break;
        }
      }
    }
  }
  std::vector<char> active(n, 1);
  SccResult scc = strongly_connected_components(
      n, [&](std::size_t v) -> const std::vector<std::size_t>& { return out.edges[v]; }, active);
  for (const auto& comp : scc.members) {
    bool cyc = comp.size() > 1 ||
               std::binary_search(out.edges[comp.front()].begin(), out.edges[comp.front()].end(), comp.front());
    if (cyc)
      for (std::size_t v : comp) out.flagged[v] = 1;
  }
  return out;
}

}  // namespace conley
