#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "conley/conley.hpp"

namespace fs = std::filesystem;
using namespace conley;

namespace {

constexpr int kPass = 0;
constexpr int kPropertyFailure = 1;
constexpr int kConfigError = 2;

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::Ingestion:
    case ErrorKind::Catalog:
    case ErrorKind::Selection:
    case ErrorKind::Capacity:
      return kConfigError;
    default:
      return kPropertyFailure;
  }
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
  io::write_atomic(dir / name, content);
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::string describe(const DownSet& d) { return "{" + join(d) + "}"; }

int cmd_analyze(const ResolvedConfig& rc) {
  const fs::path out = rc.raw.out;
  Analysis a = analyze(rc);
  emit(out, "graph.json", io::dump(io::to_json(a.graph)));
  emit(out, "graph.dot", io::to_dot(a.graph));
  emit(out, "morse.json", io::dump(io::to_json(a.morse)));
  emit(out, "morse.dot", io::to_dot(a.morse));
  emit(out, "recurrent.json", io::dump(io::to_json(a.full.recurrent())));
  emit(out, "pair.json", io::dump(io::to_json(a.pair)));

  std::cout << "system " << rc.system.name() << ", grid " << join(rc.grid.counts()) << " (" << rc.grid.size()
            << " boxes)\n";
  std::cout << "exit node: " << (a.graph.has_exit_node() ? "yes" : "no") << "\n";
  std::cout << "index pair: |N| = " << a.pair.N.size() << ", |L| = " << a.pair.L.size() << "\n";
  std::cout << "Morse sets: " << a.morse.size() << " (admissible order, sinks first)\n";
  for (std::size_t i = 1; i <= a.morse.size(); ++i) {
    std::vector<std::size_t> below;
    for (std::size_t j = 1; j <= a.morse.size(); ++j)
      if (j != i && a.morse.above(i, j)) below.push_back(j);
    Point c = rc.grid.center(a.morse.morse_sets[i - 1].front());
    std::cout << "  M" << i << ": " << a.morse.morse_sets[i - 1].size() << " boxes, first box center (";
    for (std::size_t k = 0; k < c.size(); ++k) std::cout << (k ? ", " : "") << c[k];
    std::cout << "), flows to {" << join(below) << "}\n";
  }
  return kPass;
}

int cmd_lyapunov(const ResolvedConfig& rc, const std::string& construction, std::size_t selector) {
  const fs::path out = rc.raw.out;
  Analysis a = analyze(rc);
  const LyapunovParams lp{rc.raw.dt, rc.raw.t_max, rc.raw.horizon};
  std::optional<LyapunovFunction> fn;
  if (construction == "pair") {
    auto downs = enumerate_down_sets(a.morse);
    if (selector < 1 || selector > downs.size()) {
      std::string valid;
      for (std::size_t k = 0; k < downs.size(); ++k)
        valid += (k ? ", " : "") + std::to_string(k + 1) + "=" + describe(downs[k]);
      throw Error(ErrorKind::Selection, "pair index " + std::to_string(selector) + " out of range; valid: " + valid);
    }
    fn.emplace(pair_lyapunov_function(rc.system, a.pair, a.graph, a.morse, downs[selector - 1], lp));
  } else if (construction == "morse") {
    fn.emplace(morse_lyapunov_function(rc.system, a.pair, a.graph, a.morse, lp));
  } else {
    fn.emplace(complete_lyapunov_function(rc.system, a.pair, a.graph, a.morse, lp));
  }
  LyapunovField f = tabulate(*fn);
  emit(out, "field.json", io::dump(io::to_json(f)));
  emit(out, "field.csv", io::to_csv(f));
  emit(out, "field_plot.csv", io::plot_csv(f, rc.grid));
  std::cout << to_string(f.construction) << " field on " << f.boxes.size() << " boxes, range [" << f.range_lo << ", "
            << f.range_hi << "], " << fn->terms().size() << " pair term(s)\n";
  for (std::size_t i = 1; i <= a.morse.size(); ++i) {
    double lo = 1e300, hi = -1e300;
    for (BoxId b : a.morse.morse_sets[i - 1]) {
      lo = std::min(lo, f.value(b));
      hi = std::max(hi, f.value(b));
    }
    std::cout << "  M" << i << ": values in [" << lo << ", " << hi << "]\n";
  }
  return kPass;
}

int cmd_filtration(const ResolvedConfig& rc) {
  const fs::path out = rc.raw.out;
  Rng rng(rc.raw.seed);
  TransitionGraph g = build_transition_graph(rc.system, rc.grid, rc.map_time, rc.padding, 3);
  if (invariant_part(g, rc.grid.all()).boxes.empty()) {
    // Nothing recurrent: the trivial filtration N_0 = L = N = empty.
    Filtration f;
    f.levels.push_back(BoxSet{});
    emit(out, "filtration.json", io::dump(io::to_json(f)));
    emit(out, "filtration_report.txt", "n = 0: empty invariant set, trivial filtration\n");
    std::cout << "n = 0: trivial filtration\n";
    return kPass;
  }
  Analysis a = analyze(rc);
  const LyapunovParams lp{rc.raw.dt, rc.raw.t_max, rc.raw.horizon};
  LyapunovField mf = morse_lyapunov(rc.system, a.pair, a.graph, a.morse, lp);
  Filtration f = build_filtration_levels(mf, a.pair, a.morse);
  std::string failure;
  try {
    f = extract_filtration(rc.system, mf, a.pair, a.graph, a.morse, rng);
  } catch (const Error& e) {
    failure = e.what();
  }
  std::string text;
  for (std::size_t k = 0; k < f.levels.size(); ++k)
    text += "N_" + std::to_string(k) + ": " + std::to_string(f.levels[k].size()) + " boxes\n";
  for (const auto& r : f.reports)
    text += "(N_" + std::to_string(r.level) + ", N_" + std::to_string(r.level - 1) + "): " + (r.ok() ? "pass" : "FAIL") +
            "\n";
  text += failure.empty() ? "filtration: PASS\n" : failure + "\n";
  emit(out, "filtration.json", io::dump(io::to_json(f)));
  emit(out, "filtration_report.txt", text);
  std::cout << text;
  if (!failure.empty()) {
    std::cerr << failure << "\n";
    return kPropertyFailure;
  }
  return kPass;
}

int cmd_verify(const ResolvedConfig& rc, const std::string& pair_file) {
  const fs::path out = rc.raw.out;
  std::optional<IndexPair> pair;
  if (!pair_file.empty()) {
    pair = io::pair_from_json(io::parse(io::read_file(pair_file), pair_file));
    if (!(pair->grid == rc.grid)) throw Error(ErrorKind::Ingestion, "pair: field 'grid' does not match the configured grid");
  }
  VerifyReport rep = run_verify(rc, pair);
  emit(out, "report.json", io::dump(rep.to_json()));
  emit(out, "report.txt", rep.text());
  std::cout << rep.text();
  return rep.pass() ? kPass : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conley-Morse analysis of polynomial flows on box grids"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string construction = "morse", pair_file;
  std::size_t selector = 1;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--system", cfg.system, "builtin system name")->capture_default_str();
    sub->add_option("--system-file", cfg.system_file, "system JSON file (overrides --system)");
    sub->add_option("--depth", cfg.depth, "boxes per axis (one value, or one per axis)")->delimiter(',');
    sub->add_option("--map-time", cfg.map_time, "time-T map for the transition graph (default 1.5 in 1D, 2 in 2D)");
    sub->add_option("--padding", cfg.padding, "image padding radius (default one box diagonal)");
    sub->add_option("--dt", cfg.dt, "sampling step of quotient trajectories")->capture_default_str();
    sub->add_option("--horizon", cfg.horizon, "march horizon beyond the quadrature cutoff")->capture_default_str();
    sub->add_option("--tmax", cfg.t_max, "quadrature cutoff")->capture_default_str();
    sub->add_option("--epsilon", cfg.epsilon, "epsilon-chain jump size (default two box widths)");
    sub->add_option("--seed", cfg.seed, "seed for all sampled checks")->capture_default_str();
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "transition graph, Morse graph, index pair");
  auto* lyap_cmd = app.add_subcommand("lyapunov", "Lyapunov function on the index pair");
  auto* filt_cmd = app.add_subcommand("filtration", "regular index filtration from the Morse-sum function");
  auto* verify_cmd = app.add_subcommand("verify", "run the property suite");
  for (auto* s : {analyze_cmd, lyap_cmd, filt_cmd, verify_cmd}) common(s);
  lyap_cmd->add_option("--construction", construction, "pair | morse | complete")
      ->check(CLI::IsMember({"pair", "morse", "complete"}))
      ->capture_default_str();
  lyap_cmd->add_option("--pair", selector, "1-based attractor-repeller pair index for --construction pair")
      ->capture_default_str();
  verify_cmd->add_option("--pair-file", pair_file, "index pair JSON to verify instead of the constructed one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }

  try {
    ResolvedConfig rc = resolve(cfg);
    if (*analyze_cmd) return cmd_analyze(rc);
    if (*lyap_cmd) return cmd_lyapunov(rc, construction, selector);
    if (*filt_cmd) return cmd_filtration(rc);
    return cmd_verify(rc, pair_file);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
