#pragma once

// Planar polygon helpers shared by the measurement and homogenization code.

#include "gfront/types.hpp"

#include <vector>

namespace gfront::geom {

using Polygon = std::vector<Vec2>;

struct Rect {
  Vec2 lo, hi;
  bool contains(const Vec2& p) const { return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all(); }
};

/// Signed area (positive for counter-clockwise order).
double signed_area(const Polygon& p);
double perimeter(const Polygon& p);

/// Counter-clockwise hull without collinear points (Andrew's monotone chain).
Polygon convex_hull(std::vector<Vec2> pts);

/// Sutherland–Hodgman clip of an arbitrary simple polygon against an axis box.
Polygon clip(const Polygon& p, const Rect& r);

/// Portion of segment [a, b] inside the box; false if empty.
bool clip_segment(Vec2& a, Vec2& b, const Rect& r);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// For a counter-clockwise convex polygon.
bool inside_convex(const Polygon& p, const Vec2& x, double tol = 0.0);
/// 0 inside, Euclidean distance to the boundary outside.
double distance_to_convex(const Polygon& p, const Vec2& x);

/// max over vertices of p·y.
double support(const Polygon& p, const Vec2& dir);

}  // namespace gfront::geom
