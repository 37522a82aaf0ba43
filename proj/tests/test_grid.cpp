#include <catch_amalgamated.hpp>

#include "conley/grid.hpp"
#include "conley/random.hpp"

using namespace conley;

TEST_CASE("grid construction") {
  auto g = build_grid(Rect{{-2.0}, {2.0}}, {4});
  CHECK(g.size() == 4);
  CHECK(g.widths()[0] == 1.0);
  CHECK(build_grid(Rect{{-1.0, -1.0}, {1.0, 1.0}}, {8, 8}).size() == 64);
  try {
    build_grid(Rect{{-1.0}, {1.0}}, {0});
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  try {
    build_grid(Rect{{0, 0, 0}, {1, 1, 1}}, {4096, 4096, 4096});
    FAIL("expected capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
  }
}

TEST_CASE("index and multi-index round trip, axis 0 fastest") {
  auto g = build_grid(Rect{{0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}}, {3, 4, 5});
  for (BoxId b = 0; b < g.size(); ++b) CHECK(g.id(g.multi_index(b)) == b);
  CHECK(g.id(std::vector<std::size_t>{1, 0, 0}) == 1);
  CHECK(g.id(std::vector<std::size_t>{0, 1, 0}) == 3);
  CHECK(g.id(std::vector<std::size_t>{0, 0, 1}) == 12);
}

TEST_CASE("boxes tile the domain") {
  auto g = build_grid(Rect{{-1.0, -2.0}, {1.0, 2.0}}, {7, 5});
  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    Point x{-1.0 + 2.0 * uniform01(rng), -2.0 + 4.0 * uniform01(rng)};
    BoxId b = g.box_of(x);
    CHECK(g.box_contains(b, x));
    int holders = 0;
    for (BoxId c = 0; c < g.size(); ++c) {
      Point lo = g.lower(c), hi = g.upper(c);
      bool inside = lo[0] < x[0] && x[0] < hi[0] && lo[1] < x[1] && x[1] < hi[1];
      holders += inside;
    }
    CHECK(holders <= 1);
  }
  // The upper domain face belongs to the last box.
  CHECK(g.box_of(Point{1.0, 2.0}) == g.size() - 1);
}

TEST_CASE("box set algebra") {
  BoxSet a{5, 1, 3, 3}, b{3, 4};
  CHECK(a.ids() == std::vector<BoxId>{1, 3, 5});
  CHECK((a | b).ids() == std::vector<BoxId>{1, 3, 4, 5});
  CHECK((a & b).ids() == std::vector<BoxId>{3});
  CHECK((a - b).ids() == std::vector<BoxId>{1, 5});
  CHECK(BoxSet{3}.is_subset_of(a));
  CHECK(BoxSet::from_mask(a.mask(8)) == a);
}

TEST_CASE("neighborhoods, dilation, boundary layer") {
  auto g = build_grid(Rect{{0.0, 0.0}, {5.0, 5.0}}, {5, 5});
  BoxSet center{g.id(std::vector<std::size_t>{2, 2})};
  BoxSet d = dilate(g, center);
  CHECK(d.size() == 9);
  CHECK(boundary_layer(g, d).size() == 8);
  CHECK(boundary_layer(g, dilate(g, d)).size() == 16);
  // A set touching the grid edge has its edge boxes on the boundary layer.
  BoxSet corner{g.id(std::vector<std::size_t>{0, 0})};
  CHECK(boundary_layer(g, corner) == corner);
  CHECK(distance_to_set(g, center, Point{0.5, 2.5}) == 1.5);
  CHECK(in_closed_union(g, center, Point{3.0, 3.0}));
  CHECK_FALSE(in_closed_union(g, center, Point{3.01, 3.0}));
}
