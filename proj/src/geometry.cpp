#include "acons/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "acons/types.hpp"

namespace acons {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double segment_distance(const Point2& a, const Point2& b, const Point2& p) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

}  // namespace

Hull2D hull_2d(std::vector<Point2> points) {
  if (points.empty()) throw InvalidInput("convex hull needs at least one point");
  for (const Point2& p : points) {
    if (!p.allFinite()) throw InvalidInput("convex hull point has non-finite coordinates");
  }
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return Hull2D{points};

  std::vector<Point2> h(2 * points.size());
  std::size_t k = 0;
  for (const Point2& p : points) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (k >= lower && cross(h[k - 2], h[k - 1], *it) <= 0.0) --k;
    h[k++] = *it;
  }
  h.resize(k - 1);
  return Hull2D{h};
}

double outside_distance(const Hull2D& hull, const Point2& point) {
  const auto& v = hull.vertices;
  if (v.empty()) throw InvalidInput("empty hull");
  if (v.size() == 1) return (point - v[0]).norm();
  if (v.size() == 2) return segment_distance(v[0], v[1], point);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const double inward = cross(a, b, point) / (b - a).norm();
    worst = std::max(worst, -inward);
  }
  return worst;
}

bool contains(const Hull2D& hull, const Point2& point, double tol) {
  return outside_distance(hull, point) <= tol;
}

Point2 centroid(const std::vector<Point2>& points, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw InvalidInput("centroid of an empty subset");
  Point2 sum = Point2::Zero();
  for (std::size_t j : subset) {
    if (j >= points.size()) {
      std::ostringstream msg;
      msg << "point index " << j << " out of range (" << points.size() << " points)";
      throw InvalidInput(msg.str());
    }
    sum += points[j];
  }
  return sum / static_cast<double>(subset.size());
}

Point2 nested_centroid(const std::vector<Point2>& points,
                       const std::vector<std::vector<std::size_t>>& subsets) {
  if (subsets.empty()) throw InvalidInput("nested centroid needs at least one subset");
  Point2 sum = Point2::Zero();
  for (const auto& s : subsets) sum += centroid(points, s);
  return sum / static_cast<double>(subsets.size());
}

}  // namespace acons
