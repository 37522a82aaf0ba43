#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>

#include "conley/conley.hpp"

using namespace conley;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  FlowSystem sys = builtin_system("doublewell1d");
  BoxGrid grid{sys.domain(), {64}};
  TransitionGraph graph = build_transition_graph(sys, grid, 1.5, grid.diagonal(), 3);
  IndexPair pair = build_index_pair(graph, grid.all());
  MorseGraph mg = pair_morse_graph(graph, pair);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

bool ingestion_error_naming(const std::function<void()>& fn, const std::string& key) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == ErrorKind::Ingestion && std::string(e.what()).find(key) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("systems round-trip through JSON") {
  for (const auto& name : builtin_names()) {
    FlowSystem s = builtin_system(name);
    auto j = io::to_json(s);
    CHECK(j["field"] == name);
    FlowSystem back = io::system_from_json(io::parse(io::dump(j), "system"));
    CHECK(back.name() == s.name());
    CHECK(back.domain() == s.domain());
    CHECK(back.field() == s.field());
    CHECK(io::dump(io::to_json(back)) == io::dump(j));
  }
  FlowSystem custom("cubic", Rect{{-1.0}, {1.0}}, 0.02, PolynomialField(1, {PolynomialTerm{{-2.0}, {3}}}));
  auto j = io::to_json(custom);
  CHECK(j["field"].is_array());
  FlowSystem back = io::system_from_json(j);
  CHECK(back.field() == custom.field());
  CHECK(back.step() == 0.02);
}

TEST_CASE("system ingestion errors name the field") {
  auto j = io::to_json(builtin_system("hopf2d"));
  auto without = [&](const char* key) {
    auto k = j;
    k.erase(key);
    return k;
  };
  CHECK(ingestion_error_naming([&] { io::system_from_json(without("step")); }, "step"));
  CHECK(ingestion_error_naming([&] { io::system_from_json(without("domain")); }, "domain"));
  auto bad = j;
  bad["dimension"] = "two";
  CHECK(ingestion_error_naming([&] { io::system_from_json(bad); }, "dimension"));
  bad = j;
  bad["field"] = "saddle1d";
  CHECK(ingestion_error_naming([&] { io::system_from_json(bad); }, "field"));
  bad = j;
  bad["step"] = -1.0;
  CHECK_THROWS_AS(io::system_from_json(bad), Error);
  CHECK(ingestion_error_naming([] { io::parse("{\"a\": ", "system"); }, "malformed"));
}

TEST_CASE("graph, Morse graph and pair round-trip") {
  const auto& f = fixture();
  auto gj = io::parse(io::dump(io::to_json(f.graph)), "graph");
  TransitionGraph g = io::graph_from_json(gj);
  CHECK(g == f.graph);
  CHECK(io::dump(io::to_json(g)) == io::dump(gj));

  MorseGraph mg = io::morse_from_json(io::parse(io::dump(io::to_json(f.mg)), "morse"), f.grid.size());
  CHECK(mg == f.mg);

  IndexPair p = io::pair_from_json(io::parse(io::dump(io::to_json(f.pair)), "pair"));
  CHECK(p == f.pair);

  auto v = validate_index_pair(f.graph, f.pair);
  CHECK(io::validation_from_json(io::to_json(v), "validation") == v);
}

TEST_CASE("DOT output lists nodes and edges") {
  const auto& f = fixture();
  std::string dot = io::to_dot(f.mg);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("M3 -> M1") != std::string::npos);
  CHECK(dot.find("M3 -> M2") != std::string::npos);
  std::string gdot = io::to_dot(f.graph);
  CHECK(gdot.rfind("digraph", 0) == 0);
  std::size_t arrows = 0;
  for (std::size_t p = gdot.find("->"); p != std::string::npos; p = gdot.find("->", p + 2)) ++arrows;
  std::size_t edges = 0;
  for (const auto& e : f.graph.edges()) edges += e.size();
  for (char e : f.graph.exit_flags()) edges += e ? 1 : 0;
  CHECK(arrows == edges);
}

TEST_CASE("pair ingestion errors") {
  const auto& f = fixture();
  auto j = io::to_json(f.pair);
  auto bad = j;
  bad.erase("L");
  CHECK(ingestion_error_naming([&] { io::pair_from_json(bad); }, "'L'"));
  bad = j;
  bad["N"].push_back(f.grid.size() + 3);
  CHECK(ingestion_error_naming([&] { io::pair_from_json(bad); }, "'N'"));
  bad = j;
  bad["N"] = io::json::array();
  bad["L"] = io::json::array({0});
  CHECK(ingestion_error_naming([&] { io::pair_from_json(bad); }, "'L'"));
  bad = j;
  bad["exit_in_L"] = 3;
  CHECK(ingestion_error_naming([&] { io::pair_from_json(bad); }, "exit_in_L"));
}

TEST_CASE("fields round-trip through JSON and CSV") {
  const auto& f = fixture();
  LyapunovParams lp;
  lp.t_max = 6.0;
  lp.horizon = 8.0;
  auto field = morse_lyapunov(f.sys, f.pair, f.graph, f.mg, lp);
  auto j = io::parse(io::dump(io::to_json(field)), "field");
  LyapunovField back = io::field_from_json(j);
  CHECK(back == field);
  CHECK(io::dump(io::to_json(back)) == io::dump(j));

  LyapunovField rows = field;
  io::field_rows_from_csv(io::to_csv(field), rows);
  CHECK(rows.boxes == field.boxes);
  CHECK(rows.values == field.values);
  CHECK(rows.centers == field.centers);
  CHECK(io::to_csv(rows) == io::to_csv(field));

  std::string plot = io::plot_csv(field, f.grid);
  CHECK(static_cast<std::size_t>(std::count(plot.begin(), plot.end(), '\n')) == f.grid.size() + 1);

  CHECK(ingestion_error_naming([&] { io::field_rows_from_csv("x,y\n", rows); }, "header"));
  CHECK(ingestion_error_naming([&] { io::field_rows_from_csv("box_id,x0,value\n1,abc,2\n", rows); }, "row 2"));
  auto bad = j;
  bad["construction"] = "quadratic";
  CHECK(ingestion_error_naming([&] { io::field_from_json(bad); }, "construction"));
}

TEST_CASE("filtration round-trips through JSON") {
  const auto& f = fixture();
  auto field = morse_lyapunov(f.sys, f.pair, f.graph, f.mg, LyapunovParams{});
  Filtration filt = build_filtration_levels(field, f.pair, f.mg);
  Rng rng(3);
  for (std::size_t k = 1; k < filt.levels.size(); ++k) {
    LevelReport r;
    r.level = k;
    IndexPair sub{f.grid, filt.levels[k], filt.levels[k - 1], true};
    r.validation = validate_index_pair(f.graph, sub);
    r.regularity = regularity_check(f.sys, sub, 8, 0.5, 1e-3, rng);
    filt.reports.push_back(r);
  }
  auto j = io::parse(io::dump(io::to_json(filt)), "filtration");
  Filtration back = io::filtration_from_json(j, f.grid.size());
  CHECK(back == filt);
  CHECK(io::dump(io::to_json(back)) == io::dump(j));
  auto bad = j;
  bad.erase("thresholds");
  CHECK(ingestion_error_naming([&] { io::filtration_from_json(bad, f.grid.size()); }, "thresholds"));
}

TEST_CASE("atomic writes") {
  fs::path dir = fs::temp_directory_path() / "conley_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  io::write_atomic(dir / "a.json", "{}\n");
  io::write_atomic(dir / "a.json", "{\"k\": 1}\n");
  CHECK(io::read_file(dir / "a.json") == "{\"k\": 1}\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(io::read_file(dir / "missing.json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("configuration validation") {
  auto kind_of = [](const RunConfig& c) {
    try {
      resolve(c);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Numerical;  // sentinel: no error
  };
  RunConfig c;
  auto rc = resolve(c);
  CHECK(rc.grid.counts() == std::vector<std::size_t>{256});
  CHECK(rc.map_time == 1.5);
  CHECK(rc.padding == rc.grid.diagonal());
  CHECK(rc.epsilon == 2.0 * rc.grid.min_width());
  c.system = "hopf2d";
  rc = resolve(c);
  CHECK(rc.grid.counts() == std::vector<std::size_t>{64, 64});
  CHECK(rc.map_time == 2.0);

  RunConfig bad;
  bad.depth = {0};
  CHECK(kind_of(bad) == ErrorKind::Config);
  bad = RunConfig{};
  bad.depth = {16, 16};
  CHECK(kind_of(bad) == ErrorKind::Config);
  bad = RunConfig{};
  bad.system = "lorenz";
  CHECK(kind_of(bad) == ErrorKind::Config);
  bad = RunConfig{};
  bad.dt = -1.0;
  CHECK(kind_of(bad) == ErrorKind::Config);
  bad = RunConfig{};
  bad.map_time = 0.001;
  CHECK(kind_of(bad) == ErrorKind::Config);
  bad = RunConfig{};
  bad.system_file = "/nonexistent/system.json";
  CHECK(kind_of(bad) != ErrorKind::Numerical);
}

TEST_CASE("verification reports are deterministic for a fixed seed") {
  RunConfig c;
  c.system = "contract1d";
  c.depth = {32};
  c.samples = 20;
  auto rc = resolve(c);
  std::string a = io::dump(run_verify(rc).to_json());
  std::string b = io::dump(run_verify(rc).to_json());
  CHECK(a == b);
  c.seed = 8;
  auto other = run_verify(resolve(c));
  CHECK(other.pass());
}
