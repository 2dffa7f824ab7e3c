#include <doctest.h>

#include "support.hpp"

using namespace layoutgame;
using namespace testing;

TEST_CASE("is_downward follows screen coordinates and the angle threshold") {
  CHECK(is_downward({0, 0}, {0, 100}, 15));
  CHECK_FALSE(is_downward({0, 100}, {0, 0}, 15));
  CHECK_FALSE(is_downward({0, 0}, {100, 10}, 15));  // atan(0.1) = 5.71 degrees
  CHECK_FALSE(is_downward({5, 5}, {5, 5}, 15));
  CHECK_FALSE(is_downward({0, 0}, {100, 0}, 0));  // horizontal is never below

  // Threshold is inclusive: 45 degrees against theta = 45.
  CHECK(is_downward({0, 0}, {100, 100}, 45));
  CHECK(is_downward({0, 0}, {-100, 100}, 45));
}

TEST_CASE("an edge and its reverse are never both downward") {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Point a{rng.uniform(0, 100), rng.uniform(0, 100)};
    const Point b{rng.uniform(0, 100), rng.uniform(0, 100)};
    CHECK_FALSE((is_downward(a, b, 15) && is_downward(b, a, 15)));
  }
}

TEST_CASE("bounding box membership is closed") {
  const BoundingBox box;
  CHECK(box.diagonal() == doctest::Approx(7810.249675906654).epsilon(1e-15));
  CHECK(box.contains({2500, 3000}));
  CHECK(box.contains({5000, 6000}));
  CHECK(box.contains({0, 0}));
  CHECK_FALSE(box.contains({5001, 0}));
  CHECK_FALSE(box.contains({0, -0.5}));

  CHECK(in_bounds(make_layout({{2500, 3000}, {2500, 3000}})));
  CHECK_FALSE(in_bounds(make_layout({{5001, 0}, {0, 0}})));
  CHECK(in_bounds(make_layout({{5000, 6000}, {0, 0}})));
}

TEST_CASE("segment crossing examples") {
  CHECK(open_segments_intersect({0, 0}, {10, 10}, {0, 10}, {10, 0}));
  CHECK_FALSE(open_segments_intersect({0, 0}, {10, 0}, {0, 0}, {0, 10}));
  CHECK(open_segments_intersect({0, 0}, {10, 0}, {2, 0}, {8, 0}));
  // Collinear but only touching at a point.
  CHECK_FALSE(open_segments_intersect({0, 0}, {10, 0}, {10, 0}, {20, 0}));
  // T junction: an endpoint on the other segment's interior.
  CHECK_FALSE(open_segments_intersect({0, 0}, {10, 0}, {5, 0}, {5, 10}));
  // Vertical collinear overlap.
  CHECK(open_segments_intersect({0, 0}, {0, 10}, {0, 5}, {0, 15}));
  // Parallel, disjoint.
  CHECK_FALSE(open_segments_intersect({0, 0}, {10, 0}, {0, 1}, {10, 1}));

  // Edges sharing a network endpoint never cross, even when collinear.
  auto net = make_network({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}});
  CHECK_FALSE(segments_cross(*net, make_layout({{0, 0}, {10, 0}, {20, 0}}), 0, 1));
}

TEST_CASE("segment crossing agrees with an exact parametric oracle on a coarse grid") {
  Rng rng(11);
  int crossings = 0;
  for (int i = 0; i < 20000; ++i) {
    Point p[4];
    for (auto& q : p) q = {static_cast<double>(rng.index(6)), static_cast<double>(rng.index(6))};
    const bool got = open_segments_intersect(p[0], p[1], p[2], p[3]);
    CHECK(got == oracle::open_segments_meet(p[0], p[1], p[2], p[3]));
    CHECK(got == open_segments_intersect(p[2], p[3], p[0], p[1]));  // symmetry
    crossings += got;
  }
  CHECK(crossings > 1000);
}

TEST_CASE("point to segment distance") {
  CHECK(point_segment_distance({500, 500}, {0, 0}, {1000, 0}) == 500);
  CHECK(point_segment_distance({-300, 400}, {0, 0}, {1000, 0}) == 500);
  CHECK(point_segment_distance({0, 0}, {0, 0}, {10, 0}) == 0);
  CHECK(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == 5);

  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Point p{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Point a{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Point b{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const double d = point_segment_distance(p, a, b);
    CHECK(d >= 0);
    CHECK(d == doctest::Approx(oracle::segment_distance(p, a, b)).epsilon(1e-9));
  }
}

TEST_CASE("scale selection") {
  const std::vector<NodeIndex> both{0, 1};
  SUBCASE("doubling about the centroid, then clamping") {
    auto r = scale_selection(make_layout({{0, 0}, {100, 0}}), both, 2.0);
    CHECK(r.status == ScaleStatus::ok);
    CHECK(r.layout.positions[0] == Point{0, 0});
    CHECK(r.layout.positions[1] == Point{150, 0});
  }
  SUBCASE("factor one is the identity") {
    const Layout l = make_layout({{10, 20}, {300, 400}, {7, 7}});
    CHECK(scale_selection(l, both, 1.0).layout == l);
  }
  SUBCASE("a single node is its own centroid") {
    const Layout l = make_layout({{10, 20}, {300, 400}});
    const std::vector<NodeIndex> one{1};
    CHECK(scale_selection(l, one, 3.5).layout == l);
  }
  SUBCASE("unselected nodes stay put") {
    const Layout l = make_layout({{1000, 1000}, {2000, 1000}, {4000, 4000}});
    auto r = scale_selection(l, both, 0.5);
    CHECK(r.layout.positions[2] == l.positions[2]);
    CHECK(r.layout.positions[0] == Point{1250, 1000});
    CHECK(r.layout.positions[1] == Point{1750, 1000});
  }
  SUBCASE("empty selection is a no-op with a status") {
    const Layout l = make_layout({{1, 1}});
    auto r = scale_selection(l, std::vector<NodeIndex>{}, 2.0);
    CHECK(r.status == ScaleStatus::empty_selection);
    CHECK(r.layout == l);
  }
  SUBCASE("non-positive factor is rejected") {
    const Layout l = make_layout({{1, 1}});
    CHECK_THROWS_AS(scale_selection(l, std::vector<NodeIndex>{0}, 0.0), ContractViolation);
  }
  SUBCASE("f then 1/f restores interior selections") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      Layout l;
      for (int k = 0; k < 6; ++k) l.positions.push_back({rng.uniform(2000, 3000), rng.uniform(2500, 3500)});
      const std::vector<NodeIndex> sel{0, 2, 3, 5};
      const double f = rng.uniform(0.5, 2.0);
      auto back = scale_selection(scale_selection(l, sel, f).layout, sel, 1.0 / f).layout;
      for (int k = 0; k < 6; ++k) {
        CHECK(std::abs(back.positions[k].x - l.positions[k].x) <= 1e-9);
        CHECK(std::abs(back.positions[k].y - l.positions[k].y) <= 1e-9);
      }
    }
  }
}
