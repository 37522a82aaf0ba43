#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "conley/config.hpp"
#include "conley/index_pair.hpp"
#include "conley/lyapunov.hpp"
#include "conley/random.hpp"
#include "conley/recurrence.hpp"
#include "conley/serialization.hpp"
#include "conley/transition_graph.hpp"

namespace conley {

/// Grid, graph, index pair and Morse graph for one configured system.
struct Analysis {
  TransitionGraph graph;
  MorseGraph full;  // classes over the whole grid
  IndexPair pair;
  MorseGraph morse;  // classes inside N - L
};

inline Analysis analyze(const ResolvedConfig& rc, std::optional<IndexPair> pair = std::nullopt) {
  Analysis a;
  a.graph = build_transition_graph(rc.system, rc.grid, rc.map_time, rc.padding, 3);
  a.full = morse_graph(a.graph, rc.grid.all());
  a.pair = pair ? *pair : build_index_pair(a.graph, rc.grid.all());
  a.morse = pair_morse_graph(a.graph, a.pair);
  return a;
}

struct Check {
  std::string name;
  bool pass = false;
  bool mandatory = true;
  nlohmann::json measured = nlohmann::json::object();
  nlohmann::json tolerance = nlohmann::json::object();
  nlohmann::json counterexamples = nlohmann::json::array();
};

struct VerifyReport {
  nlohmann::json config;
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (c.mandatory && !c.pass) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks)
      cs.push_back({{"name", c.name},
                    {"pass", c.pass},
                    {"mandatory", c.mandatory},
                    {"measured", c.measured},
                    {"tolerance", c.tolerance},
                    {"counterexamples", c.counterexamples}});
    return {{"config", config}, {"checks", cs}, {"pass", pass()}};
  }

  std::string text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.pass ? "PASS " : (c.mandatory ? "FAIL " : "WARN ")) << c.name << "  " << c.measured.dump();
      if (!c.pass && !c.counterexamples.empty()) os << "  e.g. " << c.counterexamples.front().dump();
      os << "\n";
    }
    os << (pass() ? "overall: PASS\n" : "overall: FAIL\n");
    return os.str();
  }
};

namespace detail {

inline constexpr std::size_t kMaxCounterexamples = 10;

inline void note(Check& c, const nlohmann::json& example) {
  if (c.counterexamples.size() < kMaxCounterexamples) c.counterexamples.push_back(example);
}

/// Random points of N - L whose box is outside `excluded`. Gives up after a
/// bounded number of draws, so the result may be shorter than requested.
inline std::vector<Point> sample_interior(const IndexPair& pair, const BoxSet& excluded, std::size_t count, Rng& rng) {
  std::vector<Point> out;
  const BoxSet pool = pair.interior() - excluded;
  if (pool.empty()) return out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(uniform_in_box(pair.grid, pool.ids()[uniform_index(rng, pool.size())], rng));
  return out;
}

inline BoxSet dilate_times(const BoxGrid& grid, BoxSet s, std::size_t times) {
  for (std::size_t k = 0; k < times; ++k) s = dilate(grid, s);
  return s;
}

inline bool is_pristine_builtin(const FlowSystem& sys, const char* name) {
  return sys.name() == name && io::is_unmodified_builtin(sys);
}

}  // namespace detail

inline Check check_graph_soundness(const ResolvedConfig& rc, const Analysis& a, std::size_t probes, Rng& rng) {
  Check c{"graph.outer_approximation"};
  const BoxGrid& grid = rc.grid;
  std::size_t failures = 0, tested = 0;
  for (std::size_t k = 0; k < probes; ++k) {
    BoxId b = uniform_index(rng, grid.size());
    Point x = uniform_in_box(grid, b, rng);
    FlowResult r = flow_map(rc.system, x, rc.map_time);
    ++tested;
    bool ok = r.escaped ? a.graph.exits(b) : (a.graph.has_edge(b, grid.box_of(r.point)) ||
                                              (a.graph.exits(b) && !grid.domain().contains(r.point)));
    if (!ok) {
      ++failures;
      detail::note(c, {{"box", b}, {"point", x}});
    }
  }
  c.pass = failures == 0;
  c.measured = {{"probes", tested}, {"failures", failures}, {"exit_node", a.graph.has_exit_node()}};
  c.tolerance = {{"failures", 0}};
  return c;
}

/// Lattice of `per_axis` points per axis over the domain, axis 0 fastest.
inline std::vector<Point> domain_lattice(const Rect& dom, std::size_t per_axis) {
  std::vector<Point> pts;
  std::vector<std::size_t> idx(dom.dimension(), 0);
  for (;;) {
    Point p(dom.dimension());
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = dom.lower[i] + (dom.upper[i] - dom.lower[i]) * static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
    pts.push_back(std::move(p));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == idx.size()) return pts;
  }
}

struct OracleComparison {
  std::vector<Point> points;
  OracleResult oracle;
  std::size_t flagged = 0;
  std::vector<Point> flagged_outside_boxes;  // flagged, but not in a recurrent box
  std::vector<Point> flagged_far;            // flagged and farther than eps from every recurrent box
  std::vector<Point> missed_inside;          // unflagged, in a recurrent box off the cluster boundary
};

inline OracleComparison compare_oracle(const FlowSystem& sys, const BoxGrid& grid, const BoxSet& recurrent,
                                       std::size_t per_axis, double eps, double t_max) {
  OracleComparison c;
  c.points = domain_lattice(grid.domain(), per_axis);
  c.oracle = epsilon_chain_oracle(sys, c.points, eps, t_max, 200);
  const BoxSet edge = boundary_layer(grid, recurrent);
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    const Point& p = c.points[k];
    BoxId b = grid.box_of(p);
    if (c.oracle.flagged[k]) {
      ++c.flagged;
      if (!recurrent.contains(b)) c.flagged_outside_boxes.push_back(p);
      if (distance_to_set(grid, recurrent, p) > eps) c.flagged_far.push_back(p);
    } else if (recurrent.contains(b) && !edge.contains(b)) {
      c.missed_inside.push_back(p);
    }
  }
  return c;
}

/// Oracle-flagged points must lie within eps of the recurrent boxes, and
/// recurrent boxes the oracle misses must sit on a cluster boundary.
inline Check check_oracle(const ResolvedConfig& rc, const Analysis& a) {
  Check c{"recurrence.epsilon_chain_oracle"};
  const std::size_t per_axis = rc.grid.dimension() == 1 ? 201 : 21;
  OracleComparison o = compare_oracle(rc.system, rc.grid, a.full.recurrent(), per_axis, rc.epsilon, 10.0);
  for (const auto& p : o.flagged_far) detail::note(c, {{"point", p}, {"kind", "flagged far from recurrent boxes"}});
  for (const auto& p : o.missed_inside) detail::note(c, {{"point", p}, {"kind", "missed inside a recurrent cluster"}});
  c.pass = o.flagged_far.empty() && o.missed_inside.empty();
  c.measured = {{"points", o.points.size()},
                {"flagged", o.flagged},
                {"flagged_outside_boxes", o.flagged_outside_boxes.size()},
                {"flagged_far", o.flagged_far.size()},
                {"missed_inside", o.missed_inside.size()},
                {"epsilon", rc.epsilon}};
  c.tolerance = {{"flagged_far", 0}, {"missed_inside", 0}};
  return c;
}

inline Check check_intersection(const Analysis& a) {
  Check c{"recurrence.R_equals_intersection"};
  IntersectionReport r = check_R_equals_intersection(a.full, a.graph, a.graph.grid().all());
  c.pass = r.equal;
  c.measured = {{"recurrent", r.recurrent.size()}, {"intersection", r.intersection.size()},
                {"symmetric_difference", r.symmetric_difference.size()}};
  c.tolerance = {{"symmetric_difference", 0}};
  for (BoxId b : r.symmetric_difference) detail::note(c, b);
  return c;
}

inline Check check_pair_conditions(const Analysis& a) {
  Check c{"index_pair.conditions"};
  PairValidation v = validate_index_pair(a.graph, a.pair);
  c.pass = v.ok();
  c.measured = io::to_json(v);
  c.measured["N"] = a.pair.N.size();
  c.measured["L"] = a.pair.L.size();
  c.measured["exit_in_L"] = a.pair.exit_in_L;
  return c;
}

inline Check check_regularity(const ResolvedConfig& rc, const Analysis& a, Rng& rng) {
  Check c{"index_pair.regularity"};
  RegularityReport r = regularity_check(rc.system, a.pair, rc.raw.samples, 0.5, 1e-3, rng);
  c.pass = r.pass;
  c.measured = {{"checked", r.checked}, {"violations", r.violations.size()},
                {"exit_time_modulus", r.exit_time_modulus}, {"modulus_pairs", r.modulus_pairs}};
  c.tolerance = {{"violations", 0}};
  for (const auto& p : r.violations) detail::note(c, p);
  return c;
}

inline Check check_retraction(const ResolvedConfig& rc, const Analysis& a, Rng& rng) {
  Check c{"index_pair.retraction"};
  RetractionReport r = retraction_check(rc.system, a.pair, rc.raw.samples, 1e-2, rng);
  c.pass = r.pass;
  c.measured = {{"tested", r.tested}, {"excluded", r.excluded}, {"failures", r.failures.size()}};
  c.tolerance = {{"failures", 0}};
  for (const auto& p : r.failures) detail::note(c, p);
  return c;
}

/// tau_+(x) = ln(1/|x|) for x' = x on [-1, 1].
inline Check check_saddle_exit_time(const ResolvedConfig& rc, const Analysis& a) {
  Check c{"index_pair.exit_time_closed_form"};
  double worst = 0.0;
  for (int k = 1; k <= 9; ++k)
    for (double s : {-1.0, 1.0}) {
      Point x{s * 0.1 * k};
      ExitTime t = exit_time(rc.system, a.pair, x, 1e-3, 20.0);
      double err = t.never ? ExitTime::kNever : std::abs(t.value - std::log(1.0 / std::abs(x[0])));
      if (err >= 1e-3) detail::note(c, {{"x", x[0]}, {"error", t.never ? -1.0 : err}});
      worst = std::max(worst, err);
    }
  c.pass = worst < 1e-3;
  c.measured = {{"max_error", std::isfinite(worst) ? nlohmann::json(worst) : nlohmann::json("never-exits")}};
  c.tolerance = {{"max_error", 1e-3}};
  return c;
}

inline std::vector<Check> check_single_pair(const ResolvedConfig& rc, const Analysis& a, const LyapunovParams& lp,
                                            Rng& rng) {
  std::vector<Check> out;
  const auto fn = pair_lyapunov_function(rc.system, a.pair, a.graph, a.morse, DownSet{1}, lp);
  const PairRegions& reg = fn.terms().front().regions;

  Check zo{"lyapunov.pair.zero_one_sets"};
  double a_max = 0.0, r_min = 1.0, l_max = 0.0;
  for (BoxId b : a.pair.N) {
    if (a.pair.L.contains(b)) continue;
    const bool in_a = reg.unstable_side.contains(b), in_r = reg.stable_side.contains(b);
    if (!in_a && !in_r) continue;
    double v = fn.at(rc.grid.center(b));
    if (in_a) {
      a_max = std::max(a_max, v);
      if (v >= 0.05) detail::note(zo, {{"box", b}, {"value", v}, {"region", "attractor"}});
    } else {
      r_min = std::min(r_min, v);
      if (v <= 0.95) detail::note(zo, {{"box", b}, {"value", v}, {"region", "repeller"}});
    }
  }
  for (BoxId b : a.pair.L) l_max = std::max(l_max, fn.at(rc.grid.center(b)));
  zo.pass = a_max < 0.05 && r_min > 0.95 && l_max == 0.0;
  zo.measured = {{"attractor_max", a_max}, {"repeller_min", r_min}, {"L_max", l_max},
                 {"attractor_boxes", reg.unstable_side.size()}, {"repeller_boxes", reg.stable_side.size()}};
  zo.tolerance = {{"attractor_max", 0.05}, {"repeller_min", 0.95}, {"L_max", 0.0}};
  out.push_back(std::move(zo));

  Check sd{"lyapunov.pair.strict_decrease"};
  const BoxSet excluded = detail::dilate_times(rc.grid, reg.unstable_side | reg.stable_side | a.pair.L, 2);
  auto pts = detail::sample_interior(a.pair, excluded, rc.raw.samples, rng);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& x : pts) {
    double gx = fn.at(x);
    double gy = fn(quotient_flow(rc.system, a.pair, QuotientPoint::at(x), 1.0, fn.sample_step()));
    margin = std::min(margin, gx - gy);
    if (!(gy < gx - 1e-4)) detail::note(sd, {{"point", x}, {"g", gx}, {"g_after", gy}});
  }
  sd.pass = sd.counterexamples.empty();
  sd.measured = {{"samples", pts.size()}, {"min_drop", pts.empty() ? nlohmann::json(nullptr) : nlohmann::json(margin)}};
  sd.tolerance = {{"min_drop", 1e-4}};
  out.push_back(std::move(sd));

  Check fp{"lyapunov.pair.fixed_point_recursion"};
  double worst = 0.0;
  std::size_t used = 0;
  for (const auto& x : detail::sample_interior(a.pair, BoxSet{}, std::max<std::size_t>(rc.raw.samples / 2, 1), rng)) {
    const Rho& rho = *fn.terms().front().rho;
    const double step = fn.sample_step();
    SupEnvelope hx = sup_envelope(rc.system, a.pair, rho, QuotientPoint::at(x), step, lp.horizon);
    QuotientPoint y = quotient_flow(rc.system, a.pair, QuotientPoint::at(x), step, step);
    SupEnvelope hy = sup_envelope(rc.system, a.pair, rho, y, step, lp.horizon);
    if (!hx.converged || !hy.converged) continue;
    ++used;
    double err = std::abs(hx.value - std::max(rho(QuotientPoint::at(x)), hy.value));
    worst = std::max(worst, err);
    if (err > 1e-6) detail::note(fp, {{"point", x}, {"error", err}});
  }
  fp.pass = worst <= 1e-6;
  fp.measured = {{"converged_samples", used}, {"max_error", worst}};
  fp.tolerance = {{"max_error", 1e-6}};
  out.push_back(std::move(fp));
  return out;
}

inline Check check_monotone(const ResolvedConfig& rc, const Analysis& a, const LyapunovFunction& fn,
                            std::size_t samples, Rng& rng) {
  Check c{"lyapunov." + to_string(fn.construction()) + ".monotone"};
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    BoxId b = a.pair.N.ids()[uniform_index(rng, a.pair.N.size())];
    Point x = uniform_in_box(rc.grid, b, rng);
    QuotientPoint q = a.pair.in_interior(x) ? QuotientPoint::at(x) : QuotientPoint::base();
    const double gx = fn(q);
    for (double t : {0.5, 1.0, 2.0}) {
      double gy = fn(quotient_flow(rc.system, a.pair, q, t, fn.sample_step()));
      ++n;
      worst = std::max(worst, gy - gx);
      if (gy > gx + 1e-6) detail::note(c, {{"point", x}, {"t", t}, {"g", gx}, {"g_after", gy}});
    }
  }
  c.pass = c.counterexamples.empty();
  c.measured = {{"comparisons", n}, {"max_increase", worst}};
  c.tolerance = {{"max_increase", 1e-6}};
  return c;
}

inline Check check_levels(const Analysis& a, const LyapunovField& f) {
  Check c{"lyapunov.morse-sum.levels"};
  double worst = 0.0, l_max = 0.0;
  for (std::size_t i = 1; i <= a.morse.size(); ++i)
    for (BoxId b : a.morse.morse_sets[i - 1]) {
      double dev = std::abs(f.value(b) - static_cast<double>(i));
      worst = std::max(worst, dev);
      if (dev >= 0.1) detail::note(c, {{"box", b}, {"index", i}, {"value", f.value(b)}});
    }
  for (BoxId b : a.pair.L) l_max = std::max(l_max, f.value(b));
  c.pass = worst < 0.1 && l_max == 0.0;
  c.measured = {{"morse_sets", a.morse.size()}, {"max_deviation", worst}, {"L_max", l_max}};
  c.tolerance = {{"max_deviation", 0.1}, {"L_max", 0.0}};
  return c;
}

inline std::vector<Check> check_complete(const ResolvedConfig& rc, const Analysis& a, const LyapunovFunction& fn,
                                         Rng& rng) {
  std::vector<Check> out;
  const std::size_t n = a.morse.size();
  std::vector<double> lo(n, 1e300), hi(n, -1e300);
  for (std::size_t i = 0; i < n; ++i)
    for (BoxId b : a.morse.morse_sets[i]) {
      double v = fn.at(rc.grid.center(b));
      lo[i] = std::min(lo[i], v);
      hi[i] = std::max(hi[i], v);
    }

  Check cs{"lyapunov.complete.constant_on_morse_sets"};
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spread = std::max(spread, hi[i] - lo[i]);
    if (hi[i] - lo[i] >= 0.05) detail::note(cs, {{"index", i + 1}, {"min", lo[i]}, {"max", hi[i]}});
  }
  cs.pass = spread < 0.05;
  cs.measured = {{"max_spread", spread}};
  cs.tolerance = {{"max_spread", 0.05}};
  out.push_back(std::move(cs));

  // If M_i reaches M_j, the pair generated by j separates them with weight at
  // least the smallest one in the sum.
  Check od{"lyapunov.complete.order"};
  const double min_weight = fn.terms().empty() ? 0.0 : fn.terms().back().weight;
  const double need = std::min(0.1, 0.5 * min_weight);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      if (i == j || !a.morse.above(i, j)) continue;
      double d = lo[i - 1] - hi[j - 1];
      gap = std::min(gap, d);
      if (d < need) detail::note(od, {{"upper", i}, {"lower", j}, {"gap", d}});
    }
  od.pass = od.counterexamples.empty();
  od.measured = {{"min_gap", std::isfinite(gap) ? nlohmann::json(gap) : nlohmann::json(nullptr)}};
  od.tolerance = {{"min_gap", need}};
  out.push_back(std::move(od));

  Check sd{"lyapunov.complete.strict_decrease"};
  const BoxSet excluded = detail::dilate_times(rc.grid, a.morse.recurrent() | a.pair.L, 2);
  auto pts = detail::sample_interior(a.pair, excluded, std::max<std::size_t>(rc.raw.samples / 2, 1), rng);
  double drop = std::numeric_limits<double>::infinity();
  for (const auto& x : pts) {
    double gx = fn.at(x);
    double gy = fn(quotient_flow(rc.system, a.pair, QuotientPoint::at(x), 1.0, fn.sample_step()));
    drop = std::min(drop, gx - gy);
    if (!(gy < gx - 1e-4)) detail::note(sd, {{"point", x}, {"g", gx}, {"g_after", gy}});
  }
  sd.pass = sd.counterexamples.empty();
  sd.measured = {{"samples", pts.size()}, {"min_drop", pts.empty() ? nlohmann::json(nullptr) : nlohmann::json(drop)}};
  sd.tolerance = {{"min_drop", 1e-4}};
  out.push_back(std::move(sd));

  Check rn{"lyapunov.complete.renewal_identity"};
  double resid = 0.0;
  const double step = fn.sample_step();
  const std::size_t m = static_cast<std::size_t>(std::llround(1.0 / step));
  const double delta = static_cast<double>(m) * step;
  auto pts2 = detail::sample_interior(a.pair, BoxSet{}, std::max<std::size_t>(rc.raw.samples / 2, 1), rng);
  for (const auto& x : pts2) {
    QuotientPoint q = QuotientPoint::at(x);
    double gx = fn(q);
    auto h = fn.envelope_along(q);
    double integral = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
      double w = (k == 0 || k == m) ? 0.5 : 1.0;
      integral += w * std::exp(-static_cast<double>(k) * step) * (k < h.size() ? h[k] : 0.0);
    }
    integral *= step;
    double gy = fn(quotient_flow(rc.system, a.pair, q, delta, step));
    double r = std::abs(gx - (integral + std::exp(-delta) * gy));
    resid = std::max(resid, r);
    if (r >= 2e-3) detail::note(rn, {{"point", x}, {"residual", r}});
  }
  rn.pass = resid < 2e-3;
  rn.measured = {{"samples", pts2.size()}, {"max_residual", resid}, {"delta", delta}};
  rn.tolerance = {{"max_residual", 2e-3}};
  out.push_back(std::move(rn));
  return out;
}

inline Check check_uniform_entry(const ResolvedConfig& rc, const Analysis& a, Rng& rng) {
  Check c{"lyapunov.uniform_entry"};
  const PairRegions reg = ar_regions_in_pair(a.morse, a.graph, a.pair.interior(), DownSet{1});
  const BoxSet u = (dilate(rc.grid, reg.unstable_side) & a.pair.N) | reg.unstable_side | a.pair.L;
  const BoxSet b = a.pair.interior() - detail::dilate_times(rc.grid, reg.stable_side, 2) - u;
  if (b.empty()) {
    c.pass = true;
    c.measured = {{"start_boxes", 0}};
    return c;
  }
  EntryTime t = uniform_entry_time(rc.system, a.pair, reg, b, u, rc.raw.samples, 0.05, rc.raw.horizon, rng);
  c.pass = !t.exceeded;
  c.measured = {{"start_boxes", b.size()}, {"samples", t.samples},
                {"T", t.exceeded ? nlohmann::json("horizon-exceeded") : nlohmann::json(t.value)}};
  c.tolerance = {{"horizon", rc.raw.horizon}};
  return c;
}

inline Check check_filtration(const ResolvedConfig& rc, const Analysis& a, const LyapunovField& f, Rng& rng) {
  Check c{"filtration.regular_index_filtration"};
  try {
    Filtration filt = extract_filtration(rc.system, f, a.pair, a.graph, a.morse, rng);
    c.pass = true;
    std::vector<std::size_t> sizes;
    for (const auto& l : filt.levels) sizes.push_back(l.size());
    c.measured = {{"levels", filt.levels.size()}, {"level_sizes", sizes}};
  } catch (const Error& e) {
    c.pass = false;
    c.measured = {{"error", e.what()}};
  }
  return c;
}

/// Runs every property check for the configured system. Deterministic for a
/// fixed config: one generator seeded from the config feeds all draws in a
/// fixed order.
inline VerifyReport run_verify(const ResolvedConfig& rc, std::optional<IndexPair> pair = std::nullopt) {
  VerifyReport rep;
  rep.config = to_json(rc);
  Rng rng(rc.raw.seed);
  Analysis a = analyze(rc, std::move(pair));
  const LyapunovParams lp{rc.raw.dt, rc.raw.t_max, rc.raw.horizon};

  rep.checks.push_back(check_graph_soundness(rc, a, 5 * rc.raw.samples, rng));
  rep.checks.push_back(check_oracle(rc, a));
  rep.checks.push_back(check_intersection(a));
  rep.checks.push_back(check_pair_conditions(a));
  rep.checks.push_back(check_regularity(rc, a, rng));
  rep.checks.push_back(check_retraction(rc, a, rng));
  if (detail::is_pristine_builtin(rc.system, "saddle1d")) rep.checks.push_back(check_saddle_exit_time(rc, a));
  if (a.morse.size() == 0) return rep;

  for (auto& c : check_single_pair(rc, a, lp, rng)) rep.checks.push_back(std::move(c));
  const auto single = pair_lyapunov_function(rc.system, a.pair, a.graph, a.morse, DownSet{1}, lp);
  const auto morse = morse_lyapunov_function(rc.system, a.pair, a.graph, a.morse, lp);
  const auto complete = complete_lyapunov_function(rc.system, a.pair, a.graph, a.morse, lp);
  for (const LyapunovFunction* fn : {&single, &morse, &complete})
    rep.checks.push_back(check_monotone(rc, a, *fn, rc.raw.samples, rng));
  const LyapunovField mf = tabulate(morse);
  rep.checks.push_back(check_levels(a, mf));
  for (auto& c : check_complete(rc, a, complete, rng)) rep.checks.push_back(std::move(c));
  rep.checks.push_back(check_uniform_entry(rc, a, rng));
  rep.checks.push_back(check_filtration(rc, a, mf, rng));
  return rep;
}

}  // namespace conley
