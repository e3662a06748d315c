#include <doctest.h>

#include "acons/geometry.hpp"
#include "acons/types.hpp"
#include "support/scenarios.hpp"

using namespace acons;

TEST_CASE("triangle hull keeps its vertices") {
  const Hull2D h = hull_2d({{0, 0}, {4, 0}, {0, 4}});
  REQUIRE(h.vertices.size() == 3);
  CHECK(h.vertices[0] == Point2(0, 0));
  CHECK(h.vertices[1] == Point2(4, 0));
  CHECK(h.vertices[2] == Point2(0, 4));
}

TEST_CASE("square with an interior point and edge midpoints") {
  const Hull2D h = hull_2d({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}, {1, 0}, {2, 1}});
  CHECK(h.vertices.size() == 4);
}

TEST_CASE("degenerate hulls") {
  const Hull2D point = hull_2d({{1, 1}, {1, 1}});
  CHECK(point.vertices.size() == 1);
  CHECK(contains(point, {1, 1}, 0.0));
  CHECK_FALSE(contains(point, {1, 1.1}, 0.05));

  const Hull2D segment = hull_2d({{0, 0}, {1, 1}, {3, 3}});
  CHECK(segment.vertices.size() == 2);
  CHECK(contains(segment, {2, 2}, 1e-12));
  CHECK_FALSE(contains(segment, {2, 2.1}, 1e-3));
  CHECK(outside_distance(segment, {4, 3}) > 0.0);

  CHECK_THROWS_AS(hull_2d({}), InvalidInput);
  CHECK_THROWS_AS(hull_2d({{0, NAN}}), InvalidInput);
}

TEST_CASE("membership at vertices, centroid and just outside an edge") {
  const Hull2D h = hull_2d({{0, 0}, {4, 0}, {3, 3}, {0, 4}});
  for (const Point2& v : h.vertices) CHECK(contains(h, v, 0.0));
  Point2 c(0, 0);
  for (const Point2& v : h.vertices) c += v / static_cast<double>(h.vertices.size());
  CHECK(contains(h, c, 0.0));

  const double tol = 1e-6;
  for (std::size_t i = 0; i < h.vertices.size(); ++i) {
    const Point2& a = h.vertices[i];
    const Point2& b = h.vertices[(i + 1) % h.vertices.size()];
    const Point2 edge = b - a;
    const Point2 outward = Point2(edge.y(), -edge.x()).normalized();
    const Point2 mid = 0.5 * (a + b);
    CHECK(contains(h, mid, tol));
    CHECK(contains(h, mid + 0.5 * tol * outward, tol));
    CHECK_FALSE(contains(h, mid + 2.0 * tol * outward, tol));
    CHECK(outside_distance(h, mid + 2.0 * tol * outward) == doctest::Approx(2.0 * tol).epsilon(1e-6));
  }
}

TEST_CASE("random clouds lie inside their hull") {
  testing::Rng rng(71);
  const std::vector<Point2> points = testing::random_points(rng, 1000);
  const Hull2D h = hull_2d(points);
  for (const Point2& p : points) CHECK(contains(h, p, 1e-9));
  for (std::size_t i = 0; i < h.vertices.size(); ++i) {
    const Point2 a = h.vertices[i];
    const Point2 b = h.vertices[(i + 1) % h.vertices.size()];
    const Point2 c = h.vertices[(i + 2) % h.vertices.size()];
    const Point2 u = b - a;
    const Point2 v = c - b;
    CHECK(u.x() * v.y() - u.y() * v.x() > 0.0);
  }
}

TEST_CASE("nested centroid") {
  const std::vector<Point2> pts{{0, 0}, {4, 0}, {0, 4}};
  CHECK(centroid(pts, {0, 1}) == Point2(2, 0));
  const Point2 x = nested_centroid(pts, {{0, 1}, {1, 2}});
  CHECK((x - Point2(2, 1)).norm() < 1e-15);
  CHECK(contains(hull_2d(pts), x, 0.0));
  CHECK((nested_centroid(pts, {{0, 1, 2}}) - Point2(4.0 / 3.0, 4.0 / 3.0)).norm() < 1e-15);
  CHECK(nested_centroid(pts, {{2}, {2}, {2}}) == pts[2]);
  CHECK_THROWS_AS(nested_centroid(pts, {{0}, {}}), InvalidInput);
  CHECK_THROWS_AS(nested_centroid(pts, {{5}}), InvalidInput);
}

TEST_CASE("nested centroid is not the plain centroid with overlapping subsets") {
  const std::vector<Point2> pts{{0, 0}, {6, 0}, {0, 6}};
  const Point2 nested = nested_centroid(pts, {{0, 1}, {0, 2}, {0}});
  const Point2 plain = centroid(pts, {0, 1, 2});
  CHECK((nested - plain).norm() > 0.5);
}
