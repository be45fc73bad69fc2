#include "gfront/geometry.hpp"

#include <algorithm>

namespace gfront::geom {

double signed_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return 0.5 * a;
}

double perimeter(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) s += (p[(i + 1) % n] - p[i]).norm();
  return s;
}

namespace {
double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}
}  // namespace

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  Polygon h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Polygon clip(const Polygon& p, const Rect& r) {
  Polygon out = p;
  // edges: x ≥ lo.x, x ≤ hi.x, y ≥ lo.y, y ≤ hi.y
  for (int e = 0; e < 4 && !out.empty(); ++e) {
    const int axis = e / 2;
    const bool lower = e % 2 == 0;
    const double c = lower ? r.lo(axis) : r.hi(axis);
    auto in = [&](const Vec2& q) { return lower ? q(axis) >= c : q(axis) <= c; };
    Polygon next;
    next.reserve(out.size() + 4);
    for (std::size_t i = 0, n = out.size(); i < n; ++i) {
      const Vec2& a = out[i];
      const Vec2& b = out[(i + 1) % n];
      const bool ia = in(a), ib = in(b);
      if (ia) next.push_back(a);
      if (ia != ib) {
        const double s = (c - a(axis)) / (b(axis) - a(axis));
        Vec2 q = a + s * (b - a);
        q(axis) = c;
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

bool clip_segment(Vec2& a, Vec2& b, const Rect& r) {
  // Liang–Barsky
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  for (int axis = 0; axis < 2; ++axis) {
    const double p[2] = {-d(axis), d(axis)};
    const double q[2] = {a(axis) - r.lo(axis), r.hi(axis) - a(axis)};
    for (int k = 0; k < 2; ++k) {
      if (p[k] == 0.0) {
        if (q[k] < 0.0) return false;
      } else {
        const double s = q[k] / p[k];
        if (p[k] < 0.0)
          t0 = std::max(t0, s);
        else
          t1 = std::min(t1, s);
      }
    }
  }
  if (t0 > t1) return false;
  const Vec2 a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double l2 = d.squaredNorm();
  if (l2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(d) / l2, 0.0, 1.0);
  return (p - (a + s * d)).norm();
}

bool inside_convex(const Polygon& p, const Vec2& x, double tol) {
  if (p.size() < 3) return false;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    const double len = (b - a).norm();
    if (cross(a, b, x) < -tol * len) return false;
  }
  return true;
}

double distance_to_convex(const Polygon& p, const Vec2& x) {
  if (inside_convex(p, x)) return 0.0;
  double d = kInf;
  for (std::size_t i = 0, n = p.size(); i < n; ++i) d = std::min(d, point_segment_distance(x, p[i], p[(i + 1) % n]));
  return d;
}

double support(const Polygon& p, const Vec2& dir) {
  double s = -kInf;
  for (const auto& v : p) s = std::max(s, v.dot(dir));
  return s;
}

}  // namespace gfront::geom
