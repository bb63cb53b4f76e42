#pragma once

#include <array>
#include <vector>

#include "corrode/mesh.hpp"

namespace corrode {

// Incremental Bowyer-Watson triangulation of a point set. Returns
// counter-clockwise triangles covering the convex hull. Callers are expected
// to break exact cocircularity (the mesher jitters its points); degenerate
// cavities are still repaired so the result is always a valid triangulation.
std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Point>& points);

double orient2d(const Point& a, const Point& b, const Point& c);
double incircle(const Point& a, const Point& b, const Point& c, const Point& d);

}  // namespace corrode
