#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conley/error.hpp"
#include "conley/geometry.hpp"

namespace conley {

/// One monomial of a polynomial vector field: coeffs[j] * prod_i x_i^exponents[i]
/// contributes to output axis j.
struct PolynomialTerm {
  std::vector<double> coeffs;
  std::vector<int> exponents;

  friend bool operator==(const PolynomialTerm&, const PolynomialTerm&) = default;
};

class PolynomialField {
 public:
  PolynomialField() = default;
  PolynomialField(std::size_t dimension, std::vector<PolynomialTerm> terms)
      : dimension_(dimension), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      require(t.coeffs.size() == dimension_ && t.exponents.size() == dimension_, ErrorKind::Precondition,
              "polynomial term arity must match the dimension");
      for (int e : t.exponents) require(e >= 0, ErrorKind::Precondition, "negative exponent in polynomial term");
    }
  }

  std::size_t dimension() const { return dimension_; }
  const std::vector<PolynomialTerm>& terms() const { return terms_; }

  void operator()(std::span<const double> x, std::span<double> dx) const {
    for (std::size_t j = 0; j < dimension_; ++j) dx[j] = 0.0;
    for (const auto& t : terms_) {
      double m = 1.0;
      for (std::size_t i = 0; i < dimension_; ++i) {
        for (int k = 0; k < t.exponents[i]; ++k) m *= x[i];
      }
      for (std::size_t j = 0; j < dimension_; ++j) dx[j] += t.coeffs[j] * m;
    }
  }

  friend bool operator==(const PolynomialField&, const PolynomialField&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<PolynomialTerm> terms_;
};

/// A continuous flow given by a polynomial ODE on a bounded rectangle,
/// integrated with a fixed-step classical Runge-Kutta scheme.
/// Immutable after construction.
class FlowSystem {
 public:
  FlowSystem(std::string name, Rect domain, double step, PolynomialField field)
      : name_(std::move(name)), domain_(std::move(domain)), step_(step), field_(std::move(field)) {
    domain_.validate();
    require(field_.dimension() == domain_.dimension(), ErrorKind::Precondition,
            "field dimension does not match domain dimension");
    require(std::isfinite(step_) && step_ > 0.0, ErrorKind::Precondition, "integrator step must be positive");
  }

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return domain_.dimension(); }
  const Rect& domain() const { return domain_; }
  double step() const { return step_; }
  const PolynomialField& field() const { return field_; }

  void eval(std::span<const double> x, std::span<double> dx) const { field_(x, dx); }

  Point velocity(std::span<const double> x) const {
    Point dx(dimension());
    eval(x, dx);
    return dx;
  }

 private:
  std::string name_;
  Rect domain_;
  double step_;
  PolynomialField field_;
};

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"saddle1d", "contract1d", "doublewell1d", "hopf2d", "gradient2d"};
  return names;
}

inline FlowSystem builtin_system(const std::string& name) {
  using T = PolynomialTerm;
  if (name == "saddle1d") {
    return FlowSystem(name, Rect{{-1.0}, {1.0}}, 0.01, PolynomialField(1, {T{{1.0}, {1}}}));
  }
  if (name == "contract1d") {
    return FlowSystem(name, Rect{{-2.0}, {2.0}}, 0.01, PolynomialField(1, {T{{-1.0}, {1}}}));
  }
  if (name == "doublewell1d") {
    return FlowSystem(name, Rect{{-2.0}, {2.0}}, 0.01, PolynomialField(1, {T{{1.0}, {1}}, T{{-1.0}, {3}}}));
  }
  if (name == "hopf2d") {
    // x' = x - y - x(x^2+y^2),  y' = x + y - y(x^2+y^2)
    return FlowSystem(name, Rect{{-2.0, -2.0}, {2.0, 2.0}}, 0.01,
                      PolynomialField(2, {T{{1.0, 1.0}, {1, 0}}, T{{-1.0, 1.0}, {0, 1}}, T{{-1.0, 0.0}, {3, 0}},
                                          T{{-1.0, 0.0}, {1, 2}}, T{{0.0, -1.0}, {2, 1}}, T{{0.0, -1.0}, {0, 3}}}));
  }
  if (name == "gradient2d") {
    return FlowSystem(name, Rect{{-1.0, -1.0}, {1.0, 1.0}}, 0.01,
                      PolynomialField(2, {T{{-1.0, 0.0}, {1, 0}}, T{{0.0, -2.0}, {0, 1}}}));
  }
  std::string valid;
  for (const auto& n : builtin_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::Catalog, "unknown system '" + name + "'; valid names: " + valid);
}

/// Endpoint of an integration. When `escaped` is set, `point` and `time` are
/// the last in-domain sample before the path left the domain.
struct FlowResult {
  Point point;
  double time = 0.0;
  bool escaped = false;
};

namespace detail {

inline void rk4_step(const FlowSystem& sys, std::span<double> x, double h, std::span<double> work) {
  const std::size_t d = x.size();
  auto k1 = work.subspan(0, d), k2 = work.subspan(d, d), k3 = work.subspan(2 * d, d), k4 = work.subspan(3 * d, d),
       tmp = work.subspan(4 * d, d);
  sys.eval(x, k1);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  sys.eval(tmp, k2);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  sys.eval(tmp, k3);
  for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
  sys.eval(tmp, k4);
  for (std::size_t i = 0; i < d; ++i) {
    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(x[i])) throw Error(ErrorKind::Numerical, "non-finite state during integration");
  }
}

// Number of full steps and the trailing partial step for a horizon t.
inline std::pair<long long, double> split_time(double t, double step) {
  double q = t / step;
  long long n = static_cast<long long>(std::floor(q + 1e-9));
  double rem = t - static_cast<double>(n) * step;
  if (rem < step * 1e-9) rem = 0.0;
  return {n, rem};
}

}  // namespace detail

inline void check_in_domain(const FlowSystem& sys, std::span<const double> x) {
  require(x.size() == sys.dimension(), ErrorKind::Domain, "point dimension mismatch");
  require(sys.domain().contains(x), ErrorKind::Domain, "point outside the system domain");
}

/// Numerical time-t map. Deterministic: identical inputs give bit-identical
/// outputs, and integrating t then s reproduces t+s exactly whenever t is a
/// multiple of the integrator step.
inline FlowResult flow_map(const FlowSystem& sys, std::span<const double> x, double t) {
  check_in_domain(sys, x);
  require(std::isfinite(t) && t >= 0.0, ErrorKind::Precondition, "flow time must be non-negative");
  FlowResult r{Point(x.begin(), x.end()), 0.0, false};
  std::vector<double> work(5 * x.size());
  Point next(x.size());
  auto [n, rem] = detail::split_time(t, sys.step());
  for (long long k = 0; k <= n; ++k) {
    double h = k < n ? sys.step() : rem;
    if (h == 0.0) break;
    next = r.point;
    detail::rk4_step(sys, next, h, work);
    if (!sys.domain().contains(next)) {
      r.escaped = true;
      return r;
    }
    r.point.swap(next);
    r.time = k < n ? static_cast<double>(k + 1) * sys.step() : t;
  }
  r.time = t;
  return r;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
  bool escaped = false;
  std::size_t escape_index = 0;  // index of the first sample that would lie outside
};

inline Trajectory sample_trajectory(const FlowSystem& sys, std::span<const double> x, double horizon,
                                    double sample_step) {
  check_in_domain(sys, x);
  require(sample_step > 0.0 && horizon > 0.0 && sample_step <= horizon, ErrorKind::Precondition,
          "need 0 < sample_step <= horizon");
  Trajectory tr;
  const auto count = static_cast<std::size_t>(std::floor(horizon / sample_step + 1e-9));
  tr.times.push_back(0.0);
  tr.points.emplace_back(x.begin(), x.end());
  for (std::size_t k = 1; k <= count; ++k) {
    FlowResult r = flow_map(sys, tr.points.back(), sample_step);
    if (r.escaped) {
      tr.escaped = true;
      tr.escape_index = k;
      break;
    }
    tr.times.push_back(static_cast<double>(k) * sample_step);
    tr.points.push_back(std::move(r.point));
  }
  return tr;
}

}  // namespace conley
