#include <catch_amalgamated.hpp>

#include <cmath>

#include "conley/random.hpp"
#include "conley/recurrence.hpp"

using namespace conley;

namespace {

TransitionGraph synthetic(const std::vector<std::vector<BoxId>>& edges) {
  BoxGrid grid(Rect{{0.0}, {1.0}}, {edges.size()});
  return TransitionGraph(grid, 1.0, 0.0, 3, edges, std::vector<char>(edges.size(), 0));
}

TransitionGraph random_graph(Rng& rng, std::size_t n, double p) {
  std::vector<std::vector<BoxId>> e(n);
  for (BoxId a = 0; a < n; ++a)
    for (BoxId b = 0; b < n; ++b)
      if (uniform01(rng) < p) e[a].push_back(b);
  return synthetic(e);
}

// Reflexive-free transitive closure by Floyd-Warshall.
std::vector<std::vector<char>> closure(const TransitionGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (BoxId a = 0; a < n; ++a)
    for (BoxId b : g.successors(a)) r[a][b] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  return r;
}

TransitionGraph default_graph(const std::string& name) {
  auto sys = builtin_system(name);
  std::vector<std::size_t> counts(sys.dimension(), sys.dimension() == 1 ? 256 : 64);
  BoxGrid grid(sys.domain(), counts);
  return build_transition_graph(sys, grid, sys.dimension() == 1 ? 1.5 : 2.0, grid.diagonal(), 3);
}

}  // namespace

TEST_CASE("chain recurrent boxes agree with the transitive closure") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_graph(rng, 12, 0.12);
    auto r = closure(g);
    auto cr = chain_recurrent_boxes(g, g.grid().all());
    for (BoxId b = 0; b < g.size(); ++b) CHECK(cr.contains(b) == (r[b][b] != 0));

    // Two boxes share a Morse set iff they reach each other.
    auto mg = morse_graph(g, g.grid().all());
    for (BoxId a : cr)
      for (BoxId b : cr) CHECK((mg.index_of(a) == mg.index_of(b)) == (a == b || (r[a][b] && r[b][a])));

    // Admissible order: reachability between classes only runs downhill.
    for (std::size_t i = 1; i <= mg.size(); ++i)
      for (std::size_t j = 1; j <= mg.size(); ++j) {
        bool reach = r[mg.morse_sets[i - 1].front()][mg.morse_sets[j - 1].front()] != 0;
        if (i != j) CHECK(mg.above(i, j) == reach);
        if (reach && i != j) CHECK(i > j);
      }
  }
}

TEST_CASE("down-set enumeration matches brute force") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_graph(rng, 10, 0.15);
    auto mg = morse_graph(g, g.grid().all());
    const std::size_t n = mg.size();
    std::vector<DownSet> brute;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      DownSet d;
      for (std::size_t i = 1; i <= n; ++i)
        if (mask >> (i - 1) & 1) d.push_back(i);
      if (is_down_set(mg, d)) brute.push_back(d);
    }
    std::sort(brute.begin(), brute.end(), [](const DownSet& a, const DownSet& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    CHECK(enumerate_down_sets(mg) == brute);
  }
}

TEST_CASE("down-sets of a chain and of an antichain") {
  // 0 -> 1 -> 2 with self loops: a chain of three classes.
  auto chain = synthetic({{0, 1}, {1, 2}, {2}});
  auto mc = morse_graph(chain, chain.grid().all());
  REQUIRE(mc.size() == 3);
  CHECK(enumerate_down_sets(mc).size() == 4);
  CHECK(mc.morse_sets[0] == BoxSet{2});
  // Three isolated self loops: every subset is a down-set.
  auto anti = synthetic({{0}, {1}, {2}});
  CHECK(enumerate_down_sets(morse_graph(anti, anti.grid().all())).size() == 8);
  // Ties between sinks go to the smallest box index.
  auto m = morse_graph(anti, anti.grid().all());
  CHECK(m.morse_sets[0] == BoxSet{0});
}

TEST_CASE("doublewell Morse graph") {
  auto g = default_graph("doublewell1d");
  auto mg = morse_graph(g, g.grid().all());
  REQUIRE(mg.size() == 3);
  const BoxGrid& grid = g.grid();
  CHECK(mg.morse_sets[0].contains(grid.box_of(Point{-1.0})));
  CHECK(mg.morse_sets[1].contains(grid.box_of(Point{1.0})));
  CHECK(mg.morse_sets[2].contains(grid.box_of(Point{0.0})));
  CHECK(mg.above(3, 1));
  CHECK(mg.above(3, 2));
  CHECK_FALSE(mg.above(2, 1));
  CHECK(enumerate_down_sets(mg) == std::vector<DownSet>{{}, {1}, {2}, {1, 2}, {1, 2, 3}});
}

TEST_CASE("attractor-repeller pairs") {
  for (const std::string name : {"contract1d", "doublewell1d", "gradient2d", "hopf2d"}) {
    INFO(name);
    auto g = default_graph(name);
    const BoxSet all = g.grid().all();
    auto mg = morse_graph(g, all);
    auto active = all.mask(g.size());
    for (const auto& p : enumerate_ar_pairs(mg, g, all)) {
      CHECK((p.attractor & p.repeller).empty());
      // Forward invariance of the attractor inside the invariant part.
      BoxSet inv = invariant_part(g, all).boxes;
      for (BoxId b : p.attractor)
        for (BoxId t : g.successors(b))
          if (inv.contains(t)) CHECK(p.attractor.contains(t));
    }
    auto rep = check_R_equals_intersection(mg, g, all);
    CHECK(rep.equal);
    CHECK(rep.symmetric_difference.empty());
  }
}

TEST_CASE("ar_regions rejects sets that are not down-sets") {
  auto g = default_graph("doublewell1d");
  auto mg = morse_graph(g, g.grid().all());
  CHECK_THROWS_AS(ar_regions(mg, g, g.grid().all(), DownSet{3}), Error);
}

TEST_CASE("epsilon-chain oracle on small examples") {
  auto c = builtin_system("contract1d");
  std::vector<Point> pts;
  for (int k = 0; k <= 40; ++k) pts.push_back(Point{-2.0 + 0.1 * k});
  auto o = epsilon_chain_oracle(c, pts, 0.05, 10.0, 100);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK((o.flagged[k] != 0) == (std::abs(pts[k][0]) < 0.06));

  // On the Hopf cycle every sampled point is recurrent.
  auto h = builtin_system("hopf2d");
  std::vector<Point> ring;
  for (int k = 0; k < 24; ++k) ring.push_back(Point{std::cos(k * M_PI / 12), std::sin(k * M_PI / 12)});
  auto oh = epsilon_chain_oracle(h, ring, 0.3, 10.0, 200);
  for (char f : oh.flagged) CHECK(f);
}
