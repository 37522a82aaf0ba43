// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// usage: acceptance <conley-cli> <scratch-dir>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "conley/conley.hpp"

using namespace conley;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::map<int, Outcome> results;

ResolvedConfig config(const std::string& system, std::vector<std::size_t> depth, std::size_t samples) {
  RunConfig c;
  c.system = system;
  c.depth = std::move(depth);
  c.samples = samples;
  return resolve(c);
}

std::string measured(const Check& c) { return c.name + " " + c.measured.dump(); }

struct Command {
  int status = -1;
  std::string output;
};

Command run(const std::string& cmd, const fs::path& log) {
  Command r;
  int raw = std::system((cmd + " > " + log.string() + " 2>&1").c_str());
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = io::read_file(log);
  return r;
}

void saddle_exit() {
  ResolvedConfig rc = config("saddle1d", {64}, 100);
  Analysis a = analyze(rc);
  Rng rng(rc.raw.seed);
  Check t = check_saddle_exit_time(rc, a);
  Check r = check_regularity(rc, a, rng);
  results[1] = {t.pass && r.pass, measured(t) + "; " + measured(r)};
}

void doublewell(const fs::path& cli, const fs::path& dir) {
  ResolvedConfig rc = config("doublewell1d", {256}, 100);
  Analysis a = analyze(rc);
  Rng rng(rc.raw.seed);
  const LyapunovParams lp{rc.raw.dt, rc.raw.t_max, rc.raw.horizon};

  {
    const BoxSet rec = a.full.recurrent();
    const double eps = 2.0 * rc.grid.min_width();
    OracleComparison o = compare_oracle(rc.system, rc.grid, rec, 201, eps, 10.0);
    std::size_t off_cluster = 0;
    for (std::size_t k = 0; k < o.points.size(); ++k) {
      if (!o.oracle.flagged[k]) continue;
      const double x = o.points[k][0];
      if (std::min({std::abs(x + 1.0), std::abs(x), std::abs(x - 1.0)}) > eps) ++off_cluster;
    }
    std::ostringstream os;
    os << "points=" << o.points.size() << " flagged=" << o.flagged << " flagged_outside_boxes="
       << o.flagged_outside_boxes.size() << " off_cluster=" << off_cluster
       << " missed_inside_clusters=" << o.missed_inside.size();
    results[2] = {o.flagged > 0 && o.flagged_outside_boxes.empty() && off_cluster == 0 && o.missed_inside.empty(),
                  os.str()};
  }

  {
    auto single = check_single_pair(rc, a, lp, rng);
    const Check& zo = single[0];
    const Check& sd = single[1];
    results[3] = {zo.pass && sd.pass && sd.measured["samples"] == 100, measured(zo) + "; " + measured(sd)};
  }

  const auto fn = morse_lyapunov_function(rc.system, a.pair, a.graph, a.morse, lp);
  const LyapunovField mf = tabulate(fn);
  {
    Check lv = check_levels(a, mf);
    Check mono = check_monotone(rc, a, fn, 500, rng);
    results[4] = {a.morse.size() == 3 && lv.pass && mono.pass, measured(lv) + "; " + measured(mono)};
  }

  {
    Outcome o;
    try {
      Filtration f = extract_filtration(rc.system, mf, a.pair, a.graph, a.morse, rng);
      std::size_t violations = 0;
      bool graph_ok = true;
      for (const auto& r : f.reports) {
        violations += r.regularity.violations.size();
        graph_ok = graph_ok && r.validation.condition_i && r.validation.condition_ii;
      }
      o.pass = f.levels.size() == 4 && f.nested && graph_ok && violations == 0 && f.ok();
      std::ostringstream os;
      os << "levels=" << f.levels.size() << " nested=" << f.nested << " regularity_violations=" << violations;
      o.detail = os.str();
    } catch (const Error& e) {
      o.detail = e.what();
    }
    Command neg = run(cli.string() + " filtration --system doublewell1d --depth 8 --out " + (dir / "neg").string(),
                      dir / "neg.log");
    const bool named = neg.output.find("level ") != std::string::npos;
    if (neg.status == 0 || !named) o.pass = false;
    o.detail += "; depth-8 control exit=" + std::to_string(neg.status) + (named ? " names a level" : " names no level");
    results[5] = o;
  }

  {
    PairRegions reg = ar_regions_in_pair(a.morse, a.graph, a.pair.interior(), DownSet{1});
    BoxSet b_set;
    for (BoxId b : a.pair.interior())
      if (rc.grid.lower(b)[0] >= -0.7 && rc.grid.upper(b)[0] <= -0.3) b_set = b_set | BoxSet{b};
    BoxSet u = dilate(rc.grid, a.morse.morse_sets[0]) | reg.unstable_side | a.pair.L;
    EntryTime t = uniform_entry_time(rc.system, a.pair, reg, b_set, u, rc.raw.samples, rc.raw.dt, 20.0, rng);
    std::ostringstream os;
    os << "start_boxes=" << b_set.size() << " samples=" << t.samples << " T=" << t.value;
    results[8] = {!t.exceeded && std::isfinite(t.value), os.str()};
  }
}

void complete_hopf() {
  ResolvedConfig rc = config("hopf2d", {64, 64}, 100);  // 50 samples per sampled check
  Analysis a = analyze(rc);
  Rng rng(rc.raw.seed);
  const LyapunovParams lp{rc.raw.dt, rc.raw.t_max, rc.raw.horizon};
  const auto fn = complete_lyapunov_function(rc.system, a.pair, a.graph, a.morse, lp);
  auto checks = check_complete(rc, a, fn, rng);
  const Check& cs = checks[0];
  const Check& sd = checks[2];
  const Check& rn = checks[3];

  const BoxId origin_box = rc.grid.box_of(Point{0.0, 0.0});
  double cycle_max = -1.0, origin = -1.0;
  bool found = false;
  for (const auto& m : a.morse.morse_sets) {
    if (m.contains(origin_box)) {
      origin = fn.at(Point{0.0, 0.0});
      found = true;
    } else {
      for (BoxId b : m) cycle_max = std::max(cycle_max, fn.at(rc.grid.center(b)));
    }
  }
  const bool gap = found && a.morse.size() == 2 && origin >= cycle_max + 0.1;
  std::ostringstream os;
  os << "morse_sets=" << a.morse.size() << " origin=" << origin << " cycle_max=" << cycle_max << "; "
     << measured(cs) << "; " << measured(sd) << "; " << measured(rn);
  results[6] = {gap && cs.pass && sd.pass && rn.pass && sd.measured["samples"] == 50, os.str()};
}

void intersection() {
  Outcome o{true, ""};
  for (const char* name : {"contract1d", "doublewell1d", "gradient2d", "hopf2d"}) {
    ResolvedConfig rc = config(name, {}, 100);
    Analysis a = analyze(rc);
    Check c = check_intersection(a);
    o.pass = o.pass && c.pass;
    o.detail += std::string(o.detail.empty() ? "" : " ") + name + "=" +
                c.measured["symmetric_difference"].dump();
  }
  results[7] = o;
}

void determinism(const fs::path& cli, const fs::path& dir) {
  auto once = [&](const std::string& tag) {
    Command c = run(cli.string() + " verify --system contract1d --seed 11 --out " + (dir / tag).string(),
                    dir / (tag + ".log"));
    return std::make_pair(c.status, io::read_file(dir / tag / "report.json"));
  };
  Outcome o;
  try {
    auto [s1, a] = once("det1");
    auto [s2, b] = once("det2");
    o.pass = s1 == s2 && !a.empty() && a == b;
    o.detail = "report.json bytes=" + std::to_string(a.size()) + (a == b ? " identical" : " differ");
  } catch (const Error& e) {
    o.detail = e.what();
  }
  results[9] = o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <conley-cli> <scratch-dir>\n";
    return 2;
  }
  const fs::path cli = argv[1], dir = argv[2];
  fs::create_directories(dir);

  auto guard = [](int id, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("error: ") + e.what()};
    }
  };
  guard(1, saddle_exit);
  guard(2, [&] { doublewell(cli, dir); });
  guard(6, complete_hopf);
  guard(7, intersection);
  guard(9, [&] { determinism(cli, dir); });

  int failed = 0;
  for (int id = 1; id <= 9; ++id) {
    auto it = results.find(id);
    Outcome o = it == results.end() ? Outcome{false, "not evaluated"} : it->second;
    if (!o.pass) ++failed;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "\n";
  }
  std::cout << (failed == 0 ? "acceptance: PASS" : "acceptance: FAIL (" + std::to_string(failed) + ")") << std::endl;
  return failed == 0 ? 0 : 1;
}
