#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace acons {

using Point2 = Eigen::Vector2d;

/// Convex hull, vertices counterclockwise with collinear points dropped.
/// One vertex is a point hull, two vertices a segment hull.
struct Hull2D {
  std::vector<Point2> vertices;
};

/// Andrew's monotone chain. Throws InvalidInput on an empty or non-finite
/// point list.
Hull2D hull_2d(std::vector<Point2> points);

/// True iff the signed distance from `point` to every hull edge is >= -tol.
/// Point and segment hulls use the plain Euclidean distance.
bool contains(const Hull2D& hull, const Point2& point, double tol);

/// Largest outward distance from the hull (<= 0 inside).
double outside_distance(const Hull2D& hull, const Point2& point);

Point2 centroid(const std::vector<Point2>& points, const std::vector<std::size_t>& subset);

/// Mean of the subset centroids. Throws InvalidInput on an empty subset or an
/// out-of-range index.
Point2 nested_centroid(const std::vector<Point2>& points,
                       const std::vector<std::vector<std::size_t>>& subsets);

}  // namespace acons
