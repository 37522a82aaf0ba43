#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/grid.hpp"
#include "conley/serialization.hpp"

namespace conley {

/// Everything a driver run needs. Zero or negative values mean "use the
/// default for this system" where noted.
struct RunConfig {
  std::string system = "doublewell1d";
  std::string system_file;          // overrides `system` when set
  std::vector<std::size_t> depth;   // per axis; empty = 256 in 1D, 64 per axis otherwise
  double map_time = 0.0;            // 0 = 1.5 in 1D, 2.0 otherwise
  double padding = -1.0;            // < 0 = one box diagonal
  double dt = 0.05;
  double horizon = 20.0;
  double t_max = 12.0;
  double epsilon = 0.0;             // 0 = two box widths
  std::uint64_t seed = 7;
  std::string out = "out";
  std::size_t samples = 100;
};

struct ResolvedConfig {
  RunConfig raw;
  FlowSystem system;
  BoxGrid grid;
  double map_time;
  double padding;
  double epsilon;
};

inline FlowSystem load_system(const RunConfig& cfg) {
  if (!cfg.system_file.empty())
    return io::system_from_json(io::parse(io::read_file(cfg.system_file), cfg.system_file));
  try {
    return builtin_system(cfg.system);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

inline ResolvedConfig resolve(const RunConfig& cfg) {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) throw Error(ErrorKind::Config, std::string(name) + " must be positive");
  };
  positive(cfg.dt, "--dt");
  positive(cfg.horizon, "--horizon");
  positive(cfg.t_max, "--tmax");
  if (cfg.t_max < 1.0) throw Error(ErrorKind::Config, "--tmax must be at least 1");
  if (cfg.map_time != 0.0) positive(cfg.map_time, "--map-time");
  if (cfg.epsilon != 0.0) positive(cfg.epsilon, "--epsilon");
  if (!std::isfinite(cfg.padding)) throw Error(ErrorKind::Config, "--padding must be finite");
  if (cfg.samples == 0) throw Error(ErrorKind::Config, "sample count must be positive");

  FlowSystem sys = load_system(cfg);
  const std::size_t d = sys.dimension();
  std::vector<std::size_t> counts = cfg.depth;
  if (counts.empty()) counts.assign(d, d == 1 ? 256 : 64);
  if (counts.size() == 1 && d > 1) counts.assign(d, counts.front());
  if (counts.size() != d)
    throw Error(ErrorKind::Config, "--depth needs 1 or " + std::to_string(d) + " values for this system");
  for (std::size_t c : counts)
    if (c == 0) throw Error(ErrorKind::Config, "--depth must be at least 1 on every axis");
  BoxGrid grid = [&] {
    try {
      return BoxGrid(sys.domain(), counts);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, std::string(e.what()) + "; lower --depth");
    }
  }();
  const double map_time = cfg.map_time > 0.0 ? cfg.map_time : (d == 1 ? 1.5 : 2.0);
  if (map_time < sys.step())
    throw Error(ErrorKind::Config, "--map-time must be at least the integrator step " + std::to_string(sys.step()));
  const double padding = cfg.padding >= 0.0 ? cfg.padding : grid.diagonal();
  const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 2.0 * grid.min_width();
  return ResolvedConfig{cfg, std::move(sys), std::move(grid), map_time, padding, eps};
}

inline nlohmann::json to_json(const ResolvedConfig& rc) {
  return {{"system", io::to_json(rc.system)},
          {"depth", rc.grid.counts()},
          {"map_time", rc.map_time},
          {"padding", rc.padding},
          {"dt", rc.raw.dt},
          {"horizon", rc.raw.horizon},
          {"t_max", rc.raw.t_max},
          {"epsilon", rc.epsilon},
          {"seed", rc.raw.seed},
          {"samples", rc.raw.samples}};
}

}  // namespace conley
