#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/grid.hpp"
#include "conley/index_pair.hpp"
#include "conley/lyapunov.hpp"
#include "conley/recurrence.hpp"
#include "conley/transition_graph.hpp"

namespace conley::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Ingestion, where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::Ingestion, where + ": missing field '" + key + "'");
  return *it;
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Ingestion, where + ": field '" + key + "' has the wrong type");
  }
}

inline BoxSet boxes(const json& j, const char* key, const std::string& where, std::size_t grid_size) {
  auto ids = get<std::vector<BoxId>>(j, key, where);
  for (BoxId b : ids)
    if (b >= grid_size) throw Error(ErrorKind::Ingestion, where + ": field '" + key + "' has an out-of-range box");
  return BoxSet(std::move(ids));
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

/// Pretty JSON with a trailing newline; key order is sorted, so output is
/// byte-stable for equal values.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Ingestion, where + ": malformed JSON (" + e.what() + ")");
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Ingestion, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Write to a sibling temp file, then rename over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorKind::Config, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---- systems ---------------------------------------------------------------

inline json to_json(const Rect& r) {
  json a = json::array();
  for (std::size_t i = 0; i < r.dimension(); ++i) a.push_back({r.lower[i], r.upper[i]});
  return a;
}

inline Rect rect_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Ingestion, where + ": expected [[lo, hi], ...]");
  Rect r;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw Error(ErrorKind::Ingestion, where + ": each interval must be [lo, hi]");
    r.lower.push_back(iv[0].get<double>());
    r.upper.push_back(iv[1].get<double>());
  }
  return r;
}

inline bool is_unmodified_builtin(const FlowSystem& sys) {
  for (const auto& n : builtin_names())
    if (n == sys.name()) {
      FlowSystem b = builtin_system(n);
      return b.domain() == sys.domain() && b.step() == sys.step() && b.field() == sys.field();
    }
  return false;
}

inline json to_json(const FlowSystem& sys) {
  json j;
  j["name"] = sys.name();
  j["dimension"] = sys.dimension();
  j["domain"] = to_json(sys.domain());
  j["step"] = sys.step();
  if (is_unmodified_builtin(sys)) {
    j["field"] = sys.name();
  } else {
    json terms = json::array();
    for (const auto& t : sys.field().terms()) terms.push_back({{"coeffs", t.coeffs}, {"exponents", t.exponents}});
    j["field"] = terms;
  }
  return j;
}

inline FlowSystem system_from_json(const json& j) {
  const std::string where = "system";
  const auto dim = detail::get<std::size_t>(j, "dimension", where);
  Rect domain = rect_from_json(detail::field(j, "domain", where), where + ".domain");
  if (domain.dimension() != dim) throw Error(ErrorKind::Ingestion, where + ": field 'domain' does not match 'dimension'");
  const double step = detail::get<double>(j, "step", where);
  const json& f = detail::field(j, "field", where);
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "custom";
  PolynomialField pf;
  try {
    if (f.is_string()) {
      FlowSystem b = builtin_system(f.get<std::string>());
      if (b.dimension() != dim) throw Error(ErrorKind::Ingestion, where + ": field 'field' names a system of another dimension");
      pf = b.field();
      if (!j.contains("name")) name = b.name();
    } else if (f.is_array()) {
      std::vector<PolynomialTerm> terms;
      for (std::size_t k = 0; k < f.size(); ++k) {
        const std::string w = where + ".field[" + std::to_string(k) + "]";
        terms.push_back({detail::get<std::vector<double>>(f[k], "coeffs", w),
                         detail::get<std::vector<int>>(f[k], "exponents", w)});
      }
      pf = PolynomialField(dim, std::move(terms));
    } else {
      throw Error(ErrorKind::Ingestion, where + ": field 'field' must be a builtin name or a term list");
    }
    return FlowSystem(name, domain, step, pf);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Ingestion) throw;
    throw Error(ErrorKind::Ingestion, where + ": " + e.what());
  }
}

// ---- grids, graphs ---------------------------------------------------------

inline json to_json(const BoxGrid& g) { return {{"domain", to_json(g.domain())}, {"counts", g.counts()}}; }

inline BoxGrid grid_from_json(const json& j, const std::string& where) {
  Rect d = rect_from_json(detail::field(j, "domain", where), where + ".domain");
  auto counts = detail::get<std::vector<std::size_t>>(j, "counts", where);
  try {
    return BoxGrid(d, counts);
  } catch (const Error& e) {
    throw Error(ErrorKind::Ingestion, where + ": " + e.what());
  }
}

inline json to_json(const BoxSet& s) { return s.ids(); }

inline json to_json(const TransitionGraph& g) {
  json edges = json::array();
  std::vector<BoxId> exits;
  for (BoxId b = 0; b < g.size(); ++b) {
    edges.push_back({b, g.successors(b)});
    if (g.exits(b)) exits.push_back(b);
  }
  return {{"grid", to_json(g.grid())}, {"map_time", g.map_time()},     {"padding", g.padding()},
          {"samples_per_axis", g.samples_per_axis()}, {"edges", edges}, {"exits", exits},
          {"exit_node", g.has_exit_node()}};
}

inline TransitionGraph graph_from_json(const json& j) {
  const std::string where = "graph";
  BoxGrid grid = grid_from_json(detail::field(j, "grid", where), where + ".grid");
  const json& e = detail::field(j, "edges", where);
  if (!e.is_array()) throw Error(ErrorKind::Ingestion, where + ": field 'edges' must be an array");
  std::vector<std::vector<BoxId>> edges(grid.size());
  for (const auto& row : e) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number_unsigned() || !row[1].is_array())
      throw Error(ErrorKind::Ingestion, where + ": field 'edges' entries must be [box, [targets]]");
    BoxId b = row[0].get<BoxId>();
    if (b >= grid.size()) throw Error(ErrorKind::Ingestion, where + ": field 'edges' has an out-of-range box");
    for (const auto& t : row[1]) {
      if (!t.is_number_unsigned() || t.get<BoxId>() >= grid.size())
        throw Error(ErrorKind::Ingestion, where + ": field 'edges' has an out-of-range target");
      edges[b].push_back(t.get<BoxId>());
    }
  }
  std::vector<char> exits(grid.size(), 0);
  for (BoxId b : detail::boxes(j, "exits", where, grid.size())) exits[b] = 1;
  return TransitionGraph(grid, detail::get<double>(j, "map_time", where), detail::get<double>(j, "padding", where),
                         detail::get<std::size_t>(j, "samples_per_axis", where), std::move(edges), std::move(exits));
}

inline std::string to_dot(const TransitionGraph& g) {
  std::ostringstream os;
  os << "digraph transitions {\n";
  for (BoxId b = 0; b < g.size(); ++b) {
    for (BoxId t : g.successors(b)) os << "  " << b << " -> " << t << ";\n";
    if (g.exits(b)) os << "  " << b << " -> exit;\n";
  }
  if (g.has_exit_node()) os << "  exit [shape=doublecircle];\n";
  os << "}\n";
  return os.str();
}

// ---- Morse graphs ----------------------------------------------------------

inline json to_json(const MorseGraph& mg) {
  json sets = json::array(), order = json::array(), conn = json::array();
  for (std::size_t i = 1; i <= mg.size(); ++i) {
    sets.push_back({{"index", i}, {"boxes", to_json(mg.morse_sets[i - 1])}});
    for (std::size_t k = 1; k <= mg.size(); ++k)
      if (k != i && mg.above(i, k)) order.push_back({i, k});
  }
  for (const auto& c : mg.connecting)
    conn.push_back({{"box", c.box}, {"reachable", c.reachable}, {"coreachable", c.coreachable}});
  return {{"region", to_json(mg.region)}, {"morse_sets", sets}, {"order", order}, {"connecting", conn}};
}

inline MorseGraph morse_from_json(const json& j, std::size_t grid_size) {
  const std::string where = "morse";
  MorseGraph mg;
  mg.region = detail::boxes(j, "region", where, grid_size);
  const json& sets = detail::field(j, "morse_sets", where);
  if (!sets.is_array()) throw Error(ErrorKind::Ingestion, where + ": field 'morse_sets' must be an array");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const std::string w = where + ".morse_sets[" + std::to_string(k) + "]";
    if (detail::get<std::size_t>(sets[k], "index", w) != k + 1)
      throw Error(ErrorKind::Ingestion, w + ": field 'index' out of sequence");
    mg.morse_sets.push_back(detail::boxes(sets[k], "boxes", w, grid_size));
  }
  const std::size_t n = mg.size();
  mg.reaches.assign(n, std::vector<char>(n, 0));
  for (const auto& pr : detail::get<std::vector<std::vector<std::size_t>>>(j, "order", where)) {
    if (pr.size() != 2 || pr[0] < 1 || pr[0] > n || pr[1] < 1 || pr[1] > n || pr[0] == pr[1])
      throw Error(ErrorKind::Ingestion, where + ": field 'order' has an invalid pair");
    mg.reaches[pr[0] - 1][pr[1] - 1] = 1;
  }
  const json& conn = detail::field(j, "connecting", where);
  for (const auto& c : conn) {
    ConnectingBox cb;
    cb.box = detail::get<BoxId>(c, "box", where + ".connecting");
    cb.reachable = detail::get<std::vector<std::size_t>>(c, "reachable", where + ".connecting");
    cb.coreachable = detail::get<std::vector<std::size_t>>(c, "coreachable", where + ".connecting");
    mg.connecting.push_back(std::move(cb));
  }
  return mg;
}

inline std::string to_dot(const MorseGraph& mg) {
  std::ostringstream os;
  os << "digraph morse {\n";
  for (std::size_t i = 1; i <= mg.size(); ++i)
    os << "  M" << i << " [label=\"M" << i << " (" << mg.morse_sets[i - 1].size() << " boxes)\"];\n";
  // Only covering relations, so the drawing is the Hasse diagram.
  for (std::size_t i = 1; i <= mg.size(); ++i)
    for (std::size_t k = 1; k <= mg.size(); ++k) {
      if (k == i || !mg.above(i, k)) continue;
      bool covered = true;
      for (std::size_t m = 1; m <= mg.size(); ++m)
        if (m != i && m != k && mg.above(i, m) && mg.above(m, k)) covered = false;
      if (covered) os << "  M" << i << " -> M" << k << ";\n";
    }
  os << "}\n";
  return os.str();
}

// ---- index pairs -----------------------------------------------------------

inline json to_json(const IndexPair& p) {
  return {{"grid", to_json(p.grid)}, {"N", to_json(p.N)}, {"L", to_json(p.L)}, {"exit_in_L", p.exit_in_L}};
}

inline IndexPair pair_from_json(const json& j) {
  const std::string where = "pair";
  BoxGrid grid = grid_from_json(detail::field(j, "grid", where), where + ".grid");
  IndexPair p{grid, detail::boxes(j, "N", where, grid.size()), detail::boxes(j, "L", where, grid.size()),
              detail::get<bool>(j, "exit_in_L", where)};
  if (!p.L.is_subset_of(p.N)) throw Error(ErrorKind::Ingestion, where + ": field 'L' is not contained in 'N'");
  return p;
}

inline json to_json(const PairValidation& v) {
  json ci = json::array(), cii = json::array();
  for (auto [a, b] : v.condition_i_violations) ci.push_back({a, b});
  for (auto [a, b] : v.condition_ii_violations) cii.push_back({a, b == kExitTarget ? json("exit") : json(b)});
  return {{"subset", v.subset},
          {"condition_i", v.condition_i},
          {"condition_ii", v.condition_ii},
          {"isolating", v.isolating},
          {"condition_i_violations", ci},
          {"condition_ii_violations", cii},
          {"isolation_violations", v.isolation_violations},
          {"pass", v.ok()}};
}

inline PairValidation validation_from_json(const json& j, const std::string& where) {
  PairValidation v;
  v.subset = detail::get<bool>(j, "subset", where);
  v.condition_i = detail::get<bool>(j, "condition_i", where);
  v.condition_ii = detail::get<bool>(j, "condition_ii", where);
  v.isolating = detail::get<bool>(j, "isolating", where);
  for (const auto& e : detail::field(j, "condition_i_violations", where))
    v.condition_i_violations.emplace_back(e.at(0).get<BoxId>(), e.at(1).get<BoxId>());
  for (const auto& e : detail::field(j, "condition_ii_violations", where))
    v.condition_ii_violations.emplace_back(e.at(0).get<BoxId>(),
                                           e.at(1).is_string() ? kExitTarget : e.at(1).get<BoxId>());
  v.isolation_violations = detail::get<std::vector<BoxId>>(j, "isolation_violations", where);
  return v;
}

inline json to_json(const RegularityReport& r) {
  return {{"pass", r.pass},
          {"checked", r.checked},
          {"violations", r.violations},
          {"exit_time_modulus", r.exit_time_modulus},
          {"modulus_pairs", r.modulus_pairs}};
}

inline RegularityReport regularity_from_json(const json& j, const std::string& where) {
  RegularityReport r;
  r.pass = detail::get<bool>(j, "pass", where);
  r.checked = detail::get<std::size_t>(j, "checked", where);
  r.violations = detail::get<std::vector<Point>>(j, "violations", where);
  r.exit_time_modulus = detail::get<double>(j, "exit_time_modulus", where);
  r.modulus_pairs = detail::get<std::size_t>(j, "modulus_pairs", where);
  return r;
}

// ---- Lyapunov fields, filtrations ------------------------------------------

inline json to_json(const LyapunovParams& p) { return {{"dt", p.dt}, {"t_max", p.t_max}, {"horizon", p.horizon}}; }

inline Construction construction_from_string(const std::string& s, const std::string& where) {
  for (auto c : {Construction::SinglePair, Construction::MorseSum, Construction::Complete})
    if (to_string(c) == s) return c;
  throw Error(ErrorKind::Ingestion, where + ": field 'construction' has unknown value '" + s + "'");
}

inline json to_json(const LyapunovField& f) {
  json values = json::array();
  for (std::size_t i = 0; i < f.boxes.size(); ++i)
    values.push_back({{"box", f.boxes[i]}, {"center", f.centers[i]}, {"value", f.values[i]}});
  return {{"construction", to_string(f.construction)},
          {"params", to_json(f.params)},
          {"range", {f.range_lo, f.range_hi}},
          {"down_sets", f.down_sets},
          {"weights", f.weights},
          {"values", values}};
}

inline LyapunovField field_from_json(const json& j) {
  const std::string where = "field";
  LyapunovField f;
  f.construction = construction_from_string(detail::get<std::string>(j, "construction", where), where);
  const json& p = detail::field(j, "params", where);
  f.params = {detail::get<double>(p, "dt", where + ".params"), detail::get<double>(p, "t_max", where + ".params"),
              detail::get<double>(p, "horizon", where + ".params")};
  auto range = detail::get<std::vector<double>>(j, "range", where);
  if (range.size() != 2) throw Error(ErrorKind::Ingestion, where + ": field 'range' must have two entries");
  f.range_lo = range[0];
  f.range_hi = range[1];
  f.down_sets = detail::get<std::vector<DownSet>>(j, "down_sets", where);
  f.weights = detail::get<std::vector<double>>(j, "weights", where);
  for (const auto& v : detail::field(j, "values", where)) {
    f.boxes.push_back(detail::get<BoxId>(v, "box", where + ".values"));
    f.centers.push_back(detail::get<Point>(v, "center", where + ".values"));
    f.values.push_back(detail::get<double>(v, "value", where + ".values"));
  }
  if (!std::is_sorted(f.boxes.begin(), f.boxes.end()))
    throw Error(ErrorKind::Ingestion, where + ": field 'values' must be sorted by box");
  return f;
}

/// CSV rows: box_id, center coordinates, value (17 significant digits).
inline std::string to_csv(const LyapunovField& f) {
  std::ostringstream os;
  const std::size_t d = f.centers.empty() ? 0 : f.centers.front().size();
  os << "box_id";
  for (std::size_t i = 0; i < d; ++i) os << ",x" << i;
  os << ",value\n";
  for (std::size_t k = 0; k < f.boxes.size(); ++k) {
    os << f.boxes[k];
    for (double c : f.centers[k]) os << "," << detail::fmt(c);
    os << "," << detail::fmt(f.values[k]) << "\n";
  }
  return os.str();
}

/// Reads the rows of a field CSV back into box ids, centers and values.
inline void field_rows_from_csv(const std::string& text, LyapunovField& f) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("box_id", 0) != 0)
    throw Error(ErrorKind::Ingestion, "field csv: missing header");
  f.boxes.clear();
  f.centers.clear();
  f.values.clear();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw Error(ErrorKind::Ingestion, "field csv: row " + std::to_string(row) + " is short");
    try {
      f.boxes.push_back(std::stoull(cells.front()));
      Point c;
      for (std::size_t i = 1; i + 1 < cells.size(); ++i) c.push_back(std::stod(cells[i]));
      f.centers.push_back(std::move(c));
      f.values.push_back(std::stod(cells.back()));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Ingestion, "field csv: row " + std::to_string(row) + " is not numeric");
    }
  }
}

/// Plot data on the full grid: one row per box with its center, and the
/// value or an empty cell outside N.
inline std::string plot_csv(const LyapunovField& f, const BoxGrid& grid) {
  std::ostringstream os;
  for (std::size_t i = 0; i < grid.dimension(); ++i) os << "x" << i << ",";
  os << "value\n";
  std::size_t k = 0;
  for (BoxId b = 0; b < grid.size(); ++b) {
    for (double c : grid.center(b)) os << detail::fmt(c) << ",";
    while (k < f.boxes.size() && f.boxes[k] < b) ++k;
    if (k < f.boxes.size() && f.boxes[k] == b) os << detail::fmt(f.values[k]);
    os << "\n";
  }
  return os.str();
}

inline json to_json(const LevelReport& r) {
  return {{"level", r.level},
          {"validation", to_json(r.validation)},
          {"regularity", to_json(r.regularity)},
          {"morse_set_inside", r.morse_set_inside},
          {"others_outside", r.others_outside},
          {"pass", r.ok()}};
}

inline json to_json(const Filtration& f) {
  json levels = json::array(), reports = json::array();
  for (const auto& l : f.levels) levels.push_back(to_json(l));
  for (const auto& r : f.reports) reports.push_back(to_json(r));
  return {{"levels", levels}, {"thresholds", f.thresholds}, {"nested", f.nested}, {"report", reports},
          {"pass", f.ok()}};
}

inline Filtration filtration_from_json(const json& j, std::size_t grid_size) {
  const std::string where = "filtration";
  Filtration f;
  const json& levels = detail::field(j, "levels", where);
  if (!levels.is_array()) throw Error(ErrorKind::Ingestion, where + ": field 'levels' must be an array");
  for (const auto& l : levels) {
    json wrap = {{"boxes", l}};
    f.levels.push_back(detail::boxes(wrap, "boxes", where + ".levels", grid_size));
  }
  f.thresholds = detail::get<std::vector<double>>(j, "thresholds", where);
  f.nested = detail::get<bool>(j, "nested", where);
  for (const auto& r : detail::field(j, "report", where)) {
    const std::string w = where + ".report";
    LevelReport lr;
    lr.level = detail::get<std::size_t>(r, "level", w);
    lr.validation = validation_from_json(detail::field(r, "validation", w), w + ".validation");
    lr.regularity = regularity_from_json(detail::field(r, "regularity", w), w + ".regularity");
    lr.morse_set_inside = detail::get<bool>(r, "morse_set_inside", w);
    lr.others_outside = detail::get<bool>(r, "others_outside", w);
    f.reports.push_back(std::move(lr));
  }
  return f;
}

}  // namespace conley::io
