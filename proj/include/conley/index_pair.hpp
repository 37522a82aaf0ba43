#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/grid.hpp"
#include "conley/random.hpp"
#include "conley/recurrence.hpp"
#include "conley/transition_graph.hpp"

namespace conley {

/// Combinatorial index pair (N, L). When `exit_in_L` is set, the exterior of
/// the domain (the exit pseudo-node) is part of the exit set.
struct IndexPair {
  BoxGrid grid;
  BoxSet N;
  BoxSet L;
  bool exit_in_L = false;

  BoxSet interior() const { return N - L; }

  /// Whether x lies in a box of N - L (box-level membership).
  bool in_interior(std::span<const double> x) const {
    if (!grid.domain().contains(x)) return false;
    BoxId b = grid.box_of(x);
    return N.contains(b) && !L.contains(b);
  }

  bool in_L(std::span<const double> x) const { return grid.domain().contains(x) && L.contains(grid.box_of(x)); }
  bool in_N(std::span<const double> x) const { return grid.domain().contains(x) && N.contains(grid.box_of(x)); }

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Point of the pointed space N/L: either a point of N - L or the basepoint [L].
struct QuotientPoint {
  bool basepoint = false;
  Point x;

  static QuotientPoint base() { return QuotientPoint{true, {}}; }
  static QuotientPoint at(Point p) { return QuotientPoint{false, std::move(p)}; }
};

inline constexpr BoxId kExitTarget = std::numeric_limits<BoxId>::max();

struct PairValidation {
  bool subset = true;        // L within N
  bool condition_i = true;   // L positively invariant relative to N
  bool condition_ii = true;  // exits from N - L pass through L
  bool isolating = true;     // Inv(N - L) avoids the boundary layer of N - L
  std::vector<std::pair<BoxId, BoxId>> condition_i_violations;
  std::vector<std::pair<BoxId, BoxId>> condition_ii_violations;  // target kExitTarget = exit pseudo-node
  std::vector<BoxId> isolation_violations;

  bool ok() const { return subset && condition_i && condition_ii && isolating; }

  friend bool operator==(const PairValidation&, const PairValidation&) = default;
};

inline PairValidation validate_index_pair(const TransitionGraph& g, const IndexPair& pair) {
  PairValidation rep;
  rep.subset = pair.L.is_subset_of(pair.N);
  const auto n_mask = pair.N.mask(g.size());
  const auto l_mask = pair.L.mask(g.size());
  for (BoxId b : pair.L) {
    for (BoxId t : g.successors(b)) {
      if (n_mask[t] && !l_mask[t]) rep.condition_i_violations.emplace_back(b, t);
    }
  }
  const BoxSet interior = pair.interior();
  for (BoxId b : interior) {
    for (BoxId t : g.successors(b))
      if (!n_mask[t]) rep.condition_ii_violations.emplace_back(b, t);
    if (g.exits(b) && !pair.exit_in_L) rep.condition_ii_violations.emplace_back(b, kExitTarget);
  }
  rep.condition_i = rep.condition_i_violations.empty();
  rep.condition_ii = rep.condition_ii_violations.empty();
  InvariantPart inv = invariant_part(g, interior);
  rep.isolation_violations = (inv.boxes & boundary_layer(g.grid(), interior)).ids();
  rep.isolating = rep.isolation_violations.empty();
  return rep;
}

inline std::string describe_violations(const PairValidation& rep) {
  std::string s;
  auto target = [](BoxId t) { return t == kExitTarget ? std::string("exit") : std::to_string(t); };
  if (!rep.subset) s += "L is not contained in N; ";
  for (auto [b, t] : rep.condition_i_violations) s += "(i) " + std::to_string(b) + "->" + target(t) + "; ";
  for (auto [b, t] : rep.condition_ii_violations) s += "(ii) " + std::to_string(b) + "->" + target(t) + "; ";
  for (BoxId b : rep.isolation_violations) s += "isolation " + std::to_string(b) + "; ";
  return s;
}

/// N = forward closure (inside B) of Inv(B) and its one-box collar; L = the
/// forward closure inside N of the boxes with an edge leaving N. Edges to the
/// exit pseudo-node put the domain exterior into the exit set.
inline IndexPair build_index_pair(const TransitionGraph& g, const BoxSet& region) {
  InvariantPart inv = invariant_part(g, region);
  if (inv.boxes.empty() || !inv.isolated)
    throw Error(ErrorKind::NotIsolating,
                "invariant part of the region is empty or touches its boundary; enlarge the region or refine the grid");
  const auto active = region.mask(g.size());
  BoxSet seed = inv.boxes | (dilate(g.grid(), inv.boxes) & region);
  BoxSet n_set = BoxSet::from_mask(detail::forward_closure(g, seed, active));
  auto n_mask = n_set.mask(g.size());
  std::vector<BoxId> leaving;
  bool exits = false;
  for (BoxId b : n_set) {
    if (g.exits(b)) exits = true;
    for (BoxId t : g.successors(b))
      if (!n_mask[t]) {
        leaving.push_back(b);
        break;
      }
  }
  BoxSet l_set = BoxSet::from_mask(detail::forward_closure(g, BoxSet::from_sorted(leaving), n_mask));
  IndexPair pair{g.grid(), n_set, l_set, exits};
  if (!(inv.boxes & l_set).empty())
    throw Error(ErrorKind::Construction, "exit set swallows part of the invariant set; refine the grid");
  PairValidation rep = validate_index_pair(g, pair);
  if (!rep.ok()) throw Error(ErrorKind::Construction, "index pair failed validation: " + describe_violations(rep));
  return pair;
}

/// Exit time: 0 on L, the crossing time out of N - L otherwise, or
/// `never` when the orbit is still inside at the horizon.
struct ExitTime {
  double value = 0.0;
  bool never = false;
  double horizon = 0.0;

  static constexpr double kNever = std::numeric_limits<double>::infinity();
};

namespace detail {

inline bool outside_interior(const IndexPair& pair, const FlowResult& r) {
  return r.escaped || !pair.in_interior(r.point);
}

}  // namespace detail

inline ExitTime exit_time(const FlowSystem& sys, const IndexPair& pair, std::span<const double> x, double dt,
                          double horizon) {
  require(pair.in_N(x), ErrorKind::Precondition, "exit time requested for a point outside N");
  require(dt > 0.0 && horizon > 0.0, ErrorKind::Precondition, "dt and horizon must be positive");
  if (pair.in_L(x)) return ExitTime{0.0, false, horizon};
  Point y(x.begin(), x.end());
  double t = 0.0;
  const double tol = dt / 1024.0;
  while (t < horizon) {
    double h = std::min(dt, horizon - t);
    FlowResult r = flow_map(sys, y, h);
    if (detail::outside_interior(pair, r)) {
      double lo = 0.0, hi = h;
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (detail::outside_interior(pair, flow_map(sys, y, mid))) hi = mid;
        else lo = mid;
      }
      return ExitTime{t + 0.5 * (lo + hi), false, horizon};
    }
    y = std::move(r.point);
    t += h;
  }
  return ExitTime{ExitTime::kNever, true, horizon};
}

/// Induced semiflow on N/L: the basepoint absorbs every orbit that leaves N - L.
inline QuotientPoint quotient_flow(const FlowSystem& sys, const IndexPair& pair, const QuotientPoint& q, double t,
                                   double dt) {
  if (q.basepoint) return q;
  if (!pair.in_interior(q.x)) return QuotientPoint::base();
  Point y = q.x;
  double s = 0.0;
  while (s < t) {
    double h = std::min(dt, t - s);
    FlowResult r = flow_map(sys, y, h);
    if (detail::outside_interior(pair, r)) return QuotientPoint::base();
    y = std::move(r.point);
    s += h;
  }
  return QuotientPoint::at(std::move(y));
}

/// Semiflow on N stopped at the exit time.
inline Point stopped_flow(const FlowSystem& sys, const IndexPair& pair, std::span<const double> x, double t,
                          double dt) {
  if (t <= 0.0) return Point(x.begin(), x.end());
  ExitTime tau = exit_time(sys, pair, x, dt, t);
  double s = tau.never ? t : std::min(t, tau.value);
  FlowResult r = flow_map(sys, x, s);
  // The crossing time is a bisection midpoint; step back to the inside bracket.
  if (r.escaped) r = flow_map(sys, x, std::max(0.0, s - dt / 1024.0));
  return r.point;
}

inline constexpr std::size_t kProbeTimes = 16;

struct RegularityReport {
  bool pass = true;
  std::size_t checked = 0;
  std::vector<Point> violations;
  double exit_time_modulus = 0.0;  // max |tau(x) - tau(y)| over sampled near pairs
  std::size_t modulus_pairs = 0;

  friend bool operator==(const RegularityReport&, const RegularityReport&) = default;
};

/// Sampled check that every point of L leaves the closure of N - L at once,
/// plus an estimate of how much the exit time varies between nearby points.
inline RegularityReport regularity_check(const FlowSystem& sys, const IndexPair& pair, std::size_t n_samples,
                                         double t_probe, double dt, Rng& rng, double horizon = 20.0) {
  RegularityReport rep;
  const BoxSet interior = pair.interior();
  const BoxGrid& grid = pair.grid;
  std::vector<Point> probes;
  for (BoxId b : pair.L)
    for (auto& p : box_samples(grid, b, 3)) probes.push_back(std::move(p));
  if (!pair.L.empty())
    for (std::size_t k = 0; k < n_samples; ++k)
      probes.push_back(uniform_in_box(grid, pair.L.ids()[uniform_index(rng, pair.L.size())], rng));
  // The domain exterior is part of the exit set: probe points of N on the
  // domain boundary where the field does not point inward.
  if (pair.exit_in_L) {
    const Rect& dom = grid.domain();
    for (BoxId b : pair.N)
      for (auto& p : box_samples(grid, b, 3)) {
        Point v = sys.velocity(p);
        bool outward = false;
        for (std::size_t i = 0; i < p.size(); ++i)
          if ((p[i] == dom.lower[i] && v[i] <= 0.0) || (p[i] == dom.upper[i] && v[i] >= 0.0)) outward = true;
        if (outward) probes.push_back(std::move(p));
      }
  }

  // Probe times t_k = k * t_probe / kProbeTimes. Once some sample in [0, t_1]
  // is outside, every later t_k is satisfied as well, so only t_1 matters.
  const double t1 = t_probe / static_cast<double>(kProbeTimes);
  const double step = std::min(dt, t1);
  for (const Point& x : probes) {
    ++rep.checked;
    bool left = !in_closed_union(grid, interior, x);
    Point y = x;
    for (double t = 0.0; !left && t < t1 - 1e-12; t += step) {
      FlowResult r = flow_map(sys, y, std::min(step, t1 - t));
      left = r.escaped || !in_closed_union(grid, interior, r.point);
      y = std::move(r.point);
    }
    if (!left) rep.violations.push_back(x);
  }
  rep.pass = rep.violations.empty();

  if (!interior.empty()) {
    const double delta = 0.25 * grid.min_width();
    for (std::size_t k = 0; k < std::min<std::size_t>(n_samples, 16); ++k) {
      BoxId b = interior.ids()[uniform_index(rng, interior.size())];
      Point x = uniform_in_box(grid, b, rng);
      Point y = x;
      std::size_t axis = uniform_index(rng, x.size());
      y[axis] += (uniform01(rng) < 0.5 ? -delta : delta);
      if (!pair.in_N(y)) continue;
      ExitTime tx = exit_time(sys, pair, x, dt, horizon), ty = exit_time(sys, pair, y, dt, horizon);
      if (tx.never || ty.never) continue;
      rep.exit_time_modulus = std::max(rep.exit_time_modulus, std::abs(tx.value - ty.value));
      ++rep.modulus_pairs;
    }
  }
  return rep;
}

struct RetractionReport {
  bool pass = true;
  std::size_t tested = 0;    // samples with tau <= 1
  std::size_t excluded = 0;  // samples with tau > 1 (outside U)
  std::vector<Point> failures;
};

/// Samples U = {tau <= 1} and checks that the stopped semiflow carries each
/// point into L (within one box width) and is the identity at time 0.
inline RetractionReport retraction_check(const FlowSystem& sys, const IndexPair& pair, std::size_t n_samples, double dt,
                                         Rng& rng) {
  RetractionReport rep;
  const BoxGrid& grid = pair.grid;
  const double tol = grid.diagonal();
  auto near_exit_set = [&](const Point& p) {
    if (distance_to_set(grid, pair.L, p) <= tol) return true;
    if (!pair.exit_in_L) return false;
    const Rect& dom = grid.domain();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] - dom.lower[i] <= tol || dom.upper[i] - p[i] <= tol) return true;
    return false;
  };
  for (std::size_t k = 0; k < n_samples; ++k) {
    BoxId b = pair.N.ids()[uniform_index(rng, pair.N.size())];
    Point x = uniform_in_box(grid, b, rng);
    if (!pair.in_N(x)) continue;
    ExitTime tau = exit_time(sys, pair, x, dt, 1.0 + dt);
    if (tau.never || tau.value > 1.0) {
      ++rep.excluded;
      continue;
    }
    ++rep.tested;
    Point start = stopped_flow(sys, pair, x, 0.0, dt);
    Point end = stopped_flow(sys, pair, x, tau.value, dt);
    if (start != x || !near_exit_set(end)) rep.failures.push_back(x);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace conley
