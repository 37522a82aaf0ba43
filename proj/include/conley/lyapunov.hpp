#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/grid.hpp"
#include "conley/index_pair.hpp"
#include "conley/random.hpp"
#include "conley/recurrence.hpp"
#include "conley/transition_graph.hpp"

namespace conley {

/// Box union with flat bounds for repeated point-to-set distance queries.
class BoxRegion {
 public:
  BoxRegion() = default;
  BoxRegion(const BoxGrid& grid, BoxSet boxes) : grid_(&grid), boxes_(std::move(boxes)), dim_(grid.dimension()) {
    mask_ = boxes_.mask(grid.size());
    bounds_.reserve(2 * dim_ * boxes_.size());
    for (BoxId b : boxes_) {
      Point lo = grid.lower(b), hi = grid.upper(b);
      for (std::size_t i = 0; i < dim_; ++i) {
        bounds_.push_back(lo[i]);
        bounds_.push_back(hi[i]);
      }
    }
  }

  const BoxSet& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  bool contains_box(BoxId b) const { return mask_[b] != 0; }

  double distance(std::span<const double> x) const {
    if (boxes_.empty()) return std::numeric_limits<double>::infinity();
    if (grid_->domain().contains(x) && mask_[grid_->box_of(x)]) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const double* p = bounds_.data();
    for (std::size_t k = 0; k < boxes_.size(); ++k, p += 2 * dim_) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_ && s < best; ++i) {
        double lo = p[2 * i], hi = p[2 * i + 1];
        double d = x[i] < lo ? lo - x[i] : (x[i] > hi ? x[i] - hi : 0.0);
        s += d * d;
      }
      best = std::min(best, s);
      if (best == 0.0) break;
    }
    return std::sqrt(best);
  }

  /// Smallest distance between this union and another.
  double distance_to(const BoxRegion& other) const {
    if (empty() || other.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    const double* p = bounds_.data();
    for (std::size_t k = 0; k < boxes_.size(); ++k, p += 2 * dim_) {
      const double* q = other.bounds_.data();
      for (std::size_t m = 0; m < other.boxes_.size(); ++m, q += 2 * dim_) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
          double gap = std::max({0.0, q[2 * i] - p[2 * i + 1], p[2 * i] - q[2 * i + 1]});
          s += gap * gap;
        }
        best = std::min(best, s);
      }
    }
    return std::sqrt(best);
  }

 private:
  const BoxGrid* grid_ = nullptr;
  BoxSet boxes_;
  std::size_t dim_ = 0;
  std::vector<char> mask_;
  std::vector<double> bounds_;
};

/// Urysohn-type function on N/L built from distances in the quotient metric
/// d_q(x, y) = min(d(x, y), d(x, L) + d(y, L)): zero on [L] and on the
/// attractor-side region, one on the repeller-side region.
class Rho {
 public:
  Rho(const IndexPair& pair, const BoxSet& zero_region, const BoxSet& one_region)
      : grid_(&pair.grid),
        l_(pair.grid, pair.L),
        zero_(pair.grid, pair.L | zero_region),
        attractor_(pair.grid, zero_region),
        one_(pair.grid, one_region),
        core_((zero_region - boundary_layer(pair.grid, zero_region)).mask(pair.grid.size())) {
    require((zero_region & one_region).empty(), ErrorKind::RegionOverlap,
            "zero and one regions of rho overlap");
    one_to_l_ = one_.distance_to(l_);
  }

  double operator()(const QuotientPoint& q) const {
    if (q.basepoint) return 0.0;
    return value(q.x);
  }

  double value(std::span<const double> x) const {
    const double dz = zero_.distance(x);
    double dr = one_.distance(x);
    if (!l_.empty()) dr = std::min(dr, l_.distance(x) + one_to_l_);
    const double inf = std::numeric_limits<double>::infinity();
    if (dz == inf && dr == inf) throw Error(ErrorKind::Precondition, "rho needs a non-empty zero or one region");
    if (dz == inf) return 1.0;
    if (dr == inf) return 0.0;
    if (dz == 0.0 && dr == 0.0) throw Error(ErrorKind::RegionOverlap, "point lies in both rho regions");
    return dz / (dz + dr);
  }

  /// Whether x sits deep inside the attractor-side region (its box and all
  /// neighbors belong to it), where sampled orbits stay and rho stays 0.
  bool settled(std::span<const double> x) const {
    return !attractor_.empty() && grid_->domain().contains(x) && core_[grid_->box_of(x)];
  }

  const BoxRegion& one_region() const { return one_; }
  const BoxRegion& attractor_region() const { return attractor_; }

 private:
  const BoxGrid* grid_;
  BoxRegion l_;
  BoxRegion zero_;
  BoxRegion attractor_;
  BoxRegion one_;
  std::vector<char> core_;
  double one_to_l_ = std::numeric_limits<double>::infinity();
};

inline Rho rho(const IndexPair& pair, const BoxSet& zero_region, const BoxSet& one_region) {
  return Rho(pair, zero_region, one_region);
}

struct LyapunovParams {
  double dt = 0.05;       // sampling step of quotient trajectories
  double t_max = 12.0;    // quadrature cutoff
  double horizon = 20.0;  // extra marching for the sup envelope beyond t_max

  friend bool operator==(const LyapunovParams&, const LyapunovParams&) = default;
};

/// Samples of the induced semiflow at spacing dt. Once the orbit leaves
/// N - L every later sample is the basepoint (index >= base_index).
struct QuotientTrajectory {
  std::vector<Point> points;
  std::size_t base_index = std::numeric_limits<std::size_t>::max();
  double dt = 0.0;

  std::size_t size() const { return points.size(); }
  bool is_base(std::size_t k) const { return k >= base_index; }
};

/// `stop(k, point)` may end the march early (returns true to stop).
template <class Stop>
QuotientTrajectory quotient_trajectory(const FlowSystem& sys, const IndexPair& pair, const QuotientPoint& q,
                                       double dt, std::size_t max_samples, Stop&& stop) {
  QuotientTrajectory tr;
  tr.dt = dt;
  if (q.basepoint || !pair.in_interior(q.x)) {
    tr.base_index = 0;
    return tr;
  }
  tr.points.push_back(q.x);
  if (stop(0, tr.points.back())) return tr;
  while (tr.points.size() < max_samples) {
    FlowResult r = flow_map(sys, tr.points.back(), dt);
    if (detail::outside_interior(pair, r)) {
      tr.base_index = tr.points.size();
      return tr;
    }
    tr.points.push_back(std::move(r.point));
    if (stop(tr.points.size() - 1, tr.points.back())) return tr;
  }
  return tr;
}

struct SupEnvelope {
  double value = 0.0;
  bool converged = false;
};

namespace detail {

inline std::size_t samples_for(double span, double dt) {
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-9)) + 1;
}

/// Suffix maxima of rho along a trajectory; entries past the end are 0
/// (basepoint or settled in the attractor-side region).
struct EnvelopeSeries {
  std::vector<double> h;
  bool converged = false;
};

inline EnvelopeSeries envelope_series(const Rho& rho, const QuotientTrajectory& tr, bool stopped_by_settle) {
  EnvelopeSeries s;
  s.h.resize(tr.points.size());
  double running = 0.0;
  for (std::size_t k = tr.points.size(); k-- > 0;) {
    running = std::max(running, rho.value(tr.points[k]));
    s.h[k] = running;
  }
  s.converged = tr.base_index != std::numeric_limits<std::size_t>::max() || stopped_by_settle ||
                (!s.h.empty() && s.h.front() >= 1.0);
  return s;
}

inline double trapezoid_discounted(const std::vector<double>& h, double dt, std::size_t k_max) {
  // Samples beyond the stored series are 0.
  // Normalized so that h == 1 integrates to exactly 1.
  auto at = [&](std::size_t k) { return k < h.size() ? h[k] : 0.0; };
  double sum = 0.0, unit = 0.0;
  for (std::size_t k = 0; k <= k_max; ++k) {
    double w = ((k == 0 || k == k_max) ? 0.5 : 1.0) * std::exp(-static_cast<double>(k) * dt);
    sum += w * at(k);
    unit += w;
  }
  const double tail = std::exp(-static_cast<double>(k_max) * dt);
  sum = sum * dt + tail * at(k_max);
  unit = unit * dt + tail;
  return std::min(1.0, sum / unit);
}

}  // namespace detail

/// h(x) = sup_{t >= 0} rho(phi_#^t x), sampled at spacing dt up to the horizon.
inline SupEnvelope sup_envelope(const FlowSystem& sys, const IndexPair& pair, const Rho& rho, const QuotientPoint& x,
                                double dt, double horizon) {
  if (x.basepoint) return {0.0, true};
  bool settled = false;
  auto tr = quotient_trajectory(sys, pair, x, dt, detail::samples_for(horizon, dt), [&](std::size_t, const Point& p) {
    return settled = rho.settled(p);
  });
  auto s = detail::envelope_series(rho, tr, settled);
  return {s.h.empty() ? 0.0 : s.h.front(), s.converged};
}

struct DiscountedAverage {
  double value = 0.0;
  double tail_bound = 0.0;  // e^{-t_max}
  bool converged = false;
};

/// g(x) = int_0^inf e^{-t} h(phi_#^t x) dt by the trapezoid rule on
/// [0, t_max] plus the tail term e^{-t_max} h(phi_#^{t_max} x).
inline DiscountedAverage discounted_average(const FlowSystem& sys, const IndexPair& pair, const Rho& rho,
                                            const QuotientPoint& x, const LyapunovParams& p) {
  require(p.t_max >= 1.0, ErrorKind::Precondition, "quadrature cutoff must be at least 1");
  const std::size_t k_max = detail::samples_for(p.t_max, p.dt) - 1;
  const double dt = p.t_max / static_cast<double>(k_max);
  DiscountedAverage out;
  out.tail_bound = std::exp(-p.t_max);
  if (x.basepoint) {
    out.converged = true;
    return out;
  }
  bool settled = false;
  auto tr = quotient_trajectory(sys, pair, x, dt, detail::samples_for(p.t_max + p.horizon, dt),
                                [&](std::size_t, const Point& q) { return settled = rho.settled(q); });
  auto s = detail::envelope_series(rho, tr, settled);
  out.value = detail::trapezoid_discounted(s.h, dt, k_max);
  out.converged = s.converged;
  return out;
}

enum class Construction { SinglePair, MorseSum, Complete };

inline std::string to_string(Construction c) {
  switch (c) {
    case Construction::SinglePair: return "single-pair";
    case Construction::MorseSum: return "morse-sum";
    case Construction::Complete: return "complete";
  }
  return "unknown";
}

/// Weighted sum of single-pair functions sum_i w_i g_i, evaluated pointwise.
/// All terms share one quotient trajectory per evaluation point.
class LyapunovFunction {
 public:
  struct Term {
    DownSet down_set;
    PairRegions regions;
    double weight = 1.0;
    std::shared_ptr<Rho> rho;
  };

  LyapunovFunction(const FlowSystem& sys, const IndexPair& pair, LyapunovParams params, Construction tag)
      : sys_(&sys), pair_(&pair), params_(params), tag_(tag) {
    require(params_.dt > 0.0 && params_.t_max >= 1.0 && params_.horizon >= 0.0, ErrorKind::Precondition,
            "invalid Lyapunov parameters");
    k_max_ = detail::samples_for(params_.t_max, params_.dt) - 1;
    step_ = params_.t_max / static_cast<double>(k_max_);
  }

  void add_term(DownSet d, PairRegions regions, double weight) {
    auto r = std::make_shared<Rho>(*pair_, regions.unstable_side, regions.stable_side);
    terms_.push_back(Term{std::move(d), std::move(regions), weight, std::move(r)});
  }

  const std::vector<Term>& terms() const { return terms_; }
  const LyapunovParams& params() const { return params_; }
  Construction construction() const { return tag_; }
  const IndexPair& pair() const { return *pair_; }
  const FlowSystem& system() const { return *sys_; }
  double sample_step() const { return step_; }

  double range_hi() const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.weight;
    return s;
  }

  struct Evaluation {
    double g = 0.0;
    std::vector<double> per_term;   // g_i
    std::vector<double> envelope;   // h_i(x)
    bool converged = true;
  };

  Evaluation evaluate(const QuotientPoint& x) const {
    Evaluation ev;
    ev.per_term.assign(terms_.size(), 0.0);
    ev.envelope.assign(terms_.size(), 0.0);
    if (x.basepoint) return ev;
    auto tr = trajectory(x);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      auto s = series(i, tr);
      ev.per_term[i] = detail::trapezoid_discounted(s.h, step_, k_max_);
      ev.envelope[i] = s.h.empty() ? 0.0 : s.h.front();
      ev.converged = ev.converged && s.converged;
    }
    // Fixed summation order keeps results bit-stable.
    for (std::size_t i = 0; i < terms_.size(); ++i) ev.g += terms_[i].weight * ev.per_term[i];
    return ev;
  }

  double operator()(const QuotientPoint& x) const { return evaluate(x).g; }
  double at(std::span<const double> x) const { return evaluate(QuotientPoint::at(Point(x.begin(), x.end()))).g; }

  /// Weighted envelope sum_i w_i h_i along the sampled quotient orbit of x,
  /// one entry per sample step (empty past the basepoint).
  std::vector<double> envelope_along(const QuotientPoint& x) const {
    if (x.basepoint) return {};
    auto tr = trajectory(x);
    std::vector<double> out(tr.points.size(), 0.0);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      auto s = series(i, tr);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += terms_[i].weight * (k < s.h.size() ? s.h[k] : 0.0);
    }
    return out;
  }

  QuotientTrajectory trajectory(const QuotientPoint& x) const {
    const std::size_t max_samples = detail::samples_for(params_.t_max + params_.horizon, step_);
    return quotient_trajectory(*sys_, *pair_, x, step_, max_samples, [&](std::size_t, const Point& p) {
      for (const auto& t : terms_)
        if (!t.rho->settled(p)) return false;
      return !terms_.empty();
    });
  }

 private:
  detail::EnvelopeSeries series(std::size_t i, const QuotientTrajectory& tr) const {
    const Rho& r = *terms_[i].rho;
    // Truncate at the first settled sample: rho vanishes from there on.
    QuotientTrajectory cut;
    cut.dt = tr.dt;
    cut.base_index = tr.base_index;
    bool settled = false;
    for (const auto& p : tr.points) {
      cut.points.push_back(p);
      if (r.settled(p)) {
        settled = true;
        break;
      }
    }
    return detail::envelope_series(r, cut, settled);
  }

  const FlowSystem* sys_;
  const IndexPair* pair_;
  LyapunovParams params_;
  Construction tag_;
  std::vector<Term> terms_;
  std::size_t k_max_ = 0;
  double step_ = 0.0;
};

/// Values at box centers of N - L (0 on L).
struct LyapunovField {
  Construction construction = Construction::SinglePair;
  LyapunovParams params;
  double range_lo = 0.0;
  double range_hi = 1.0;
  std::vector<BoxId> boxes;     // all boxes of N, ascending
  std::vector<double> values;   // aligned with boxes
  std::vector<Point> centers;   // evaluation points
  std::vector<DownSet> down_sets;
  std::vector<double> weights;

  double value(BoxId b) const {
    auto it = std::lower_bound(boxes.begin(), boxes.end(), b);
    require(it != boxes.end() && *it == b, ErrorKind::Precondition, "box not covered by the field");
    return values[static_cast<std::size_t>(it - boxes.begin())];
  }

  bool covers(BoxId b) const { return std::binary_search(boxes.begin(), boxes.end(), b); }

  friend bool operator==(const LyapunovField&, const LyapunovField&) = default;
};

inline LyapunovField tabulate(const LyapunovFunction& fn) {
  const IndexPair& pair = fn.pair();
  LyapunovField f;
  f.construction = fn.construction();
  f.params = fn.params();
  f.range_lo = 0.0;
  f.range_hi = fn.range_hi();
  for (const auto& t : fn.terms()) {
    f.down_sets.push_back(t.down_set);
    f.weights.push_back(t.weight);
  }
  for (BoxId b : pair.N) {
    Point c = pair.grid.center(b);
    double v = pair.L.contains(b) ? 0.0 : fn.at(c);
    f.boxes.push_back(b);
    f.values.push_back(v);
    f.centers.push_back(std::move(c));
  }
  return f;
}

/// Morse graph of the isolated invariant set inside N - L.
inline MorseGraph pair_morse_graph(const TransitionGraph& g, const IndexPair& pair) {
  return morse_graph(g, pair.interior());
}

inline LyapunovFunction pair_lyapunov_function(const FlowSystem& sys, const IndexPair& pair, const TransitionGraph& g,
                                               const MorseGraph& mg, const DownSet& d, const LyapunovParams& params) {
  LyapunovFunction fn(sys, pair, params, Construction::SinglePair);
  fn.add_term(d, ar_regions_in_pair(mg, g, pair.interior(), d), 1.0);
  return fn;
}

inline LyapunovFunction morse_lyapunov_function(const FlowSystem& sys, const IndexPair& pair,
                                                const TransitionGraph& g, const MorseGraph& mg,
                                                const LyapunovParams& params) {
  require(mg.size() >= 1, ErrorKind::Precondition, "Morse-sum construction needs at least one Morse set");
  LyapunovFunction fn(sys, pair, params, Construction::MorseSum);
  DownSet d;
  for (std::size_t j = 0; j <= mg.size(); ++j) {
    if (j > 0) d.push_back(j);
    fn.add_term(d, ar_regions_in_pair(mg, g, pair.interior(), d), 1.0);
  }
  return fn;
}

inline LyapunovFunction complete_lyapunov_function(const FlowSystem& sys, const IndexPair& pair,
                                                   const TransitionGraph& g, const MorseGraph& mg,
                                                   const LyapunovParams& params) {
  LyapunovFunction fn(sys, pair, params, Construction::Complete);
  double w = 1.0;
  for (const auto& d : enumerate_down_sets(mg)) {
    w *= 0.5;
    fn.add_term(d, ar_regions_in_pair(mg, g, pair.interior(), d), w);
  }
  return fn;
}

inline LyapunovField pair_lyapunov(const FlowSystem& sys, const IndexPair& pair, const TransitionGraph& g,
                                   const MorseGraph& mg, const DownSet& d, const LyapunovParams& params) {
  return tabulate(pair_lyapunov_function(sys, pair, g, mg, d, params));
}

inline LyapunovField morse_lyapunov(const FlowSystem& sys, const IndexPair& pair, const TransitionGraph& g,
                                    const MorseGraph& mg, const LyapunovParams& params) {
  return tabulate(morse_lyapunov_function(sys, pair, g, mg, params));
}

inline LyapunovField complete_lyapunov(const FlowSystem& sys, const IndexPair& pair, const TransitionGraph& g,
                                       const MorseGraph& mg, const LyapunovParams& params) {
  return tabulate(complete_lyapunov_function(sys, pair, g, mg, params));
}

struct EntryTime {
  double value = 0.0;
  bool exceeded = false;  // some sample was still outside U at the horizon
  std::size_t samples = 0;
};

/// Smallest sampled T after which every sampled quotient orbit from B stays
/// in U (the basepoint counts as inside U).
inline EntryTime uniform_entry_time(const FlowSystem& sys, const IndexPair& pair, const PairRegions& regions,
                                    const BoxSet& b_set, const BoxSet& u_set, std::size_t n_samples, double dt,
                                    double horizon, Rng& rng) {
  require((b_set & regions.stable_side).empty(), ErrorKind::Precondition,
          "start set meets the repeller-side region");
  require((pair.L | regions.unstable_side).is_subset_of(u_set), ErrorKind::Precondition,
          "target set must contain L and the attractor-side region");
  require(!b_set.empty(), ErrorKind::Precondition, "start set is empty");
  std::vector<Point> starts;
  for (BoxId b : b_set)
    for (auto& p : box_samples(pair.grid, b, 3)) starts.push_back(std::move(p));
  for (std::size_t k = 0; k < n_samples; ++k)
    starts.push_back(uniform_in_box(pair.grid, b_set.ids()[uniform_index(rng, b_set.size())], rng));

  const auto u_mask = u_set.mask(pair.grid.size());
  const std::size_t max_samples = detail::samples_for(horizon, dt);
  EntryTime out;
  std::size_t worst = 0;  // first index from which all samples lie in U
  for (const auto& x : starts) {
    if (!pair.in_N(x)) continue;
    ++out.samples;
    QuotientPoint q = pair.in_interior(x) ? QuotientPoint::at(x) : QuotientPoint::base();
    auto tr = quotient_trajectory(sys, pair, q, dt, max_samples, [](std::size_t, const Point&) { return false; });
    std::size_t first_good = 0;
    for (std::size_t k = 0; k < tr.points.size(); ++k)
      if (!u_mask[pair.grid.box_of(tr.points[k])]) first_good = k + 1;
    if (first_good == max_samples) out.exceeded = true;
    worst = std::max(worst, first_good);
  }
  out.value = out.exceeded ? std::numeric_limits<double>::infinity() : static_cast<double>(worst) * dt;
  return out;
}

struct LevelReport {
  std::size_t level = 0;  // k of the pair (N_k, N_{k-1})
  PairValidation validation;
  RegularityReport regularity;
  bool morse_set_inside = true;   // M_k lies in N_k - N_{k-1}
  bool others_outside = true;     // no other Morse set meets N_k - N_{k-1}
  bool ok() const { return validation.ok() && regularity.pass && morse_set_inside && others_outside; }

  friend bool operator==(const LevelReport&, const LevelReport&) = default;
};

struct Filtration {
  std::vector<BoxSet> levels;       // N_0 ... N_n
  std::vector<double> thresholds;   // k + 1/2 for k = 0..n-1
  std::vector<LevelReport> reports; // one per k = 1..n
  bool nested = true;

  friend bool operator==(const Filtration&, const Filtration&) = default;

  bool ok() const {
    if (!nested) return false;
    for (const auto& r : reports)
      if (!r.ok()) return false;
    return true;
  }
};

struct FiltrationOptions {
  std::size_t regularity_samples = 64;
  double t_probe = 0.5;
  double probe_dt = 1e-3;
};

/// Level sets N_k = L u {g <= k + 1/2}, N_n = N, each consecutive pair checked
/// as a regular index pair for M_k. Throws a filtration error naming the first
/// failing level; the filtration with its reports is attached to the result
/// only when everything passes.
inline Filtration build_filtration_levels(const LyapunovField& field, const IndexPair& pair, const MorseGraph& mg) {
  require(field.construction == Construction::MorseSum, ErrorKind::Precondition,
          "filtration extraction needs a Morse-sum field");
  const std::size_t n = mg.size();
  Filtration f;
  for (std::size_t k = 0; k < n; ++k) {
    const double cut = static_cast<double>(k) + 0.5;
    std::vector<BoxId> ids(pair.L.begin(), pair.L.end());
    for (std::size_t i = 0; i < field.boxes.size(); ++i)
      if (!pair.L.contains(field.boxes[i]) && field.values[i] <= cut) ids.push_back(field.boxes[i]);
    f.levels.push_back(BoxSet(std::move(ids)));
    f.thresholds.push_back(cut);
  }
  f.levels.push_back(pair.N);
  for (std::size_t k = 1; k < f.levels.size(); ++k)
    if (!f.levels[k - 1].is_subset_of(f.levels[k])) f.nested = false;
  return f;
}

inline Filtration extract_filtration(const FlowSystem& sys, const LyapunovField& field, const IndexPair& pair,
                                     const TransitionGraph& g, const MorseGraph& mg, Rng& rng,
                                     const FiltrationOptions& opt = {}) {
  Filtration f = build_filtration_levels(field, pair, mg);
  if (!f.nested) throw Error(ErrorKind::Filtration, "levels are not nested");
  for (std::size_t k = 1; k < f.levels.size(); ++k) {
    LevelReport rep;
    rep.level = k;
    IndexPair sub{pair.grid, f.levels[k], f.levels[k - 1], pair.exit_in_L};
    rep.validation = validate_index_pair(g, sub);
    rep.regularity = regularity_check(sys, sub, opt.regularity_samples, opt.t_probe, opt.probe_dt, rng);
    const BoxSet diff = sub.interior();
    rep.morse_set_inside = mg.morse_sets[k - 1].is_subset_of(diff);
    for (std::size_t i = 0; i < mg.size(); ++i)
      if (i + 1 != k && !(mg.morse_sets[i] & diff).empty()) rep.others_outside = false;
    f.reports.push_back(std::move(rep));
  }
  for (const auto& rep : f.reports) {
    if (rep.ok()) continue;
    std::string msg = "level " + std::to_string(rep.level) + " (N_" + std::to_string(rep.level) + ", N_" +
                      std::to_string(rep.level - 1) + ") failed:";
    if (!rep.validation.ok()) msg += " " + describe_violations(rep.validation);
    if (!rep.regularity.pass)
      msg += " regularity violations=" + std::to_string(rep.regularity.violations.size()) + ";";
    if (!rep.morse_set_inside) msg += " Morse set M_" + std::to_string(rep.level) + " not inside the level;";
    if (!rep.others_outside) msg += " another Morse set meets the level;";
    throw Error(ErrorKind::Filtration, msg);
  }
  return f;
}

}  // namespace conley
