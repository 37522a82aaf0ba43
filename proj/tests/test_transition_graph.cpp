#include <catch_amalgamated.hpp>

#include <cmath>

#include "conley/random.hpp"
#include "conley/transition_graph.hpp"

using namespace conley;

namespace {

TransitionGraph default_graph(const std::string& name, std::vector<std::size_t> counts, double T) {
  auto sys = builtin_system(name);
  BoxGrid grid(sys.domain(), counts);
  return build_transition_graph(sys, grid, T, grid.diagonal(), 3);
}

}  // namespace

TEST_CASE("box images follow the closed form") {
  auto c = builtin_system("contract1d");
  BoxGrid grid(c.domain(), {4});
  // Box [1,2] under e^{-T} lands in [0,1] when 2e^{-T} < 1.
  auto img = box_image(c, grid, 3, 1.0, 0.0, 3);
  CHECK_FALSE(img.exit);
  for (BoxId t : img.targets) CHECK(t == 2);

  auto s = builtin_system("saddle1d");
  BoxGrid sg(s.domain(), {8});
  CHECK(box_image(s, sg, 7, 1.0, 0.0, 3).exit);
  CHECK(box_image(s, sg, 0, 1.0, 0.0, 3).exit);

  // Box around an equilibrium maps to itself under tiny padding.
  auto d = builtin_system("doublewell1d");
  BoxGrid dg(d.domain(), {5});
  auto eq = box_image(d, dg, 2, 1.0, 1e-9, 3);
  CHECK(std::find(eq.targets.begin(), eq.targets.end(), BoxId{2}) != eq.targets.end());
}

TEST_CASE("exit pseudo-node") {
  CHECK_FALSE(default_graph("contract1d", {64}, 1.5).has_exit_node());
  auto g = default_graph("saddle1d", {32}, 1.5);
  CHECK(g.has_exit_node());
  // Every box not containing 0 eventually reaches the exit.
  std::vector<char> reaches(g.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (BoxId b = 0; b < g.size(); ++b) {
      if (reaches[b]) continue;
      bool r = g.exits(b);
      for (BoxId t : g.successors(b)) r = r || reaches[t];
      if (r) reaches[b] = changed = true;
    }
  }
  for (BoxId b = 0; b < g.size(); ++b) {
    bool holds_zero = g.grid().lower(b)[0] <= 0.0 && 0.0 <= g.grid().upper(b)[0];
    if (!holds_zero) CHECK(reaches[b]);
  }
}

TEST_CASE("edge lists are canonical and the single-box case self-loops") {
  auto g = default_graph("hopf2d", {16, 16}, 2.0);
  for (BoxId b = 0; b < g.size(); ++b) {
    const auto& e = g.successors(b);
    CHECK(std::is_sorted(e.begin(), e.end()));
    CHECK(std::adjacent_find(e.begin(), e.end()) == e.end());
  }
  auto one = default_graph("contract1d", {1}, 1.0);
  CHECK(one.has_edge(0, 0));
}

TEST_CASE("outer approximation soundness on random probes") {
  Rng rng(5);
  for (const auto& name : builtin_names()) {
    auto sys = builtin_system(name);
    std::vector<std::size_t> counts(sys.dimension(), sys.dimension() == 1 ? 256 : 64);
    const double T = sys.dimension() == 1 ? 1.5 : 2.0;
    BoxGrid grid(sys.domain(), counts);
    auto g = build_transition_graph(sys, grid, T, grid.diagonal(), 3);
    std::size_t bad = 0;
    for (int k = 0; k < 1000; ++k) {
      BoxId b = uniform_index(rng, grid.size());
      Point x = uniform_in_box(grid, b, rng);
      FlowResult r = flow_map(sys, x, T);
      if (r.escaped) {
        bad += !g.exits(b);
        continue;
      }
      bad += !g.has_edge(b, grid.box_of(r.point));
    }
    INFO(name);
    CHECK(bad == 0);
  }
}

TEST_CASE("invariant part") {
  auto g = default_graph("doublewell1d", {256}, 1.5);
  auto inv = invariant_part(g, g.grid().all());
  for (double x : {-1.0, 0.0, 1.0}) CHECK(inv.boxes.contains(g.grid().box_of(Point{x})));
  CHECK(inv.isolated);
  // Idempotent.
  CHECK(invariant_part(g, inv.boxes).boxes == inv.boxes);

  // Boxes strictly between the equilibria carry no recurrence on their own.
  BoxSet slab;
  for (BoxId b = 0; b < g.size(); ++b)
    if (g.grid().lower(b)[0] > 0.3 && g.grid().upper(b)[0] < 0.7) slab = slab | BoxSet{b};
  CHECK(invariant_part(g, slab).boxes.empty());

  // A single self-looping box is invariant but touches its own boundary.
  BoxId eq = g.grid().box_of(Point{-1.0});
  REQUIRE(g.has_edge(eq, eq));
  auto single = invariant_part(g, BoxSet{eq});
  CHECK(single.boxes == BoxSet{eq});
  CHECK_FALSE(single.isolated);
}

TEST_CASE("refinement does not grow realized invariant regions") {
  auto coarse = default_graph("doublewell1d", {128}, 1.5);
  auto fine = default_graph("doublewell1d", {256}, 1.5);
  auto ic = invariant_part(coarse, coarse.grid().all()).boxes;
  auto iff = invariant_part(fine, fine.grid().all()).boxes;
  for (BoxId b : iff) {
    Point c = fine.grid().center(b);
    CHECK(ic.contains(coarse.grid().box_of(c)));
  }
}
