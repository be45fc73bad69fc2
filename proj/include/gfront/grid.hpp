#pragma once

// Uniform Cartesian grids, node-centred scalar fields and the upwind stencils
// shared by the solver and the measurement code.

#include "gfront/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <string>

namespace gfront {

/// Nodes origin + h·(i, j), 0 ≤ i ≤ nx, 0 ≤ j ≤ ny.  nx, ny count cells.
struct Grid {
  Vec2 origin = Vec2::Zero();
  double h = 1.0;
  int nx = 8;
  int ny = 8;

  Grid() = default;
  Grid(Vec2 origin_, double h_, int nx_, int ny_);

  /// Square [lo, hi]² split into `cells` cells per axis.
  static Grid square(double lo, double hi, int cells);
  /// Smallest node-aligned square around `center` containing B_radius(center),
  /// with nodes on the lattice h·Z² when `center` is.
  static Grid covering(const Vec2& center, double radius, double h);

  int nodes_x() const { return nx + 1; }
  int nodes_y() const { return ny + 1; }
  std::size_t size() const { return static_cast<std::size_t>(nodes_x()) * static_cast<std::size_t>(nodes_y()); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_x()) + static_cast<std::size_t>(i);
  }
  Vec2 node(int i, int j) const { return origin + h * Vec2(i, j); }
  Vec2 upper() const { return origin + h * Vec2(nx, ny); }
  bool contains(const Vec2& x, double tol = 1e-12) const;
  /// True if the closed ball lies inside the grid hull.
  bool contains_ball(const Vec2& c, double r) const;

  bool operator==(const Grid&) const = default;
};

/// Inclusive node-index box [i0, i1] × [j0, j1].
struct IndexBox {
  int i0 = 0, j0 = 0, i1 = -1, j1 = -1;

  static IndexBox full(const Grid& g) { return {0, 0, g.nx, g.ny}; }
  bool empty() const { return i1 < i0 || j1 < j0; }
  int width() const { return i1 - i0 + 1; }
  int height() const { return j1 - j0 + 1; }
  IndexBox padded(int p, const Grid& g) const {
    return {std::max(0, i0 - p), std::max(0, j0 - p), std::min(g.nx, i1 + p), std::min(g.ny, j1 + p)};
  }
  IndexBox united(const IndexBox& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    return {std::min(i0, o.i0), std::min(j0, o.j0), std::max(i1, o.i1), std::max(j1, o.j1)};
  }
  bool touches_boundary(const Grid& g) const { return i0 == 0 || j0 == 0 || i1 == g.nx || j1 == g.ny; }
};

struct ScalarField {
  Grid grid;
  Eigen::ArrayXd values;
  double time_stamp = 0.0;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0, double t = 0.0)
      : grid(g), values(Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(g.size()), fill)), time_stamp(t) {}

  double& operator()(int i, int j) { return values(static_cast<Eigen::Index>(grid.index(i, j))); }
  double operator()(int i, int j) const { return values(static_cast<Eigen::Index>(grid.index(i, j))); }

  bool all_finite() const { return values.isFinite().all(); }
};

/// Samples a function of position at every node.
template <class Fn>
ScalarField sample(const Grid& g, Fn&& fn, double t = 0.0) {
  ScalarField f(g, 0.0, t);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) f(i, j) = fn(g.node(i, j));
  return f;
}

namespace stencil {

/// One-sided differences along one axis at a node, with linear-extrapolation
/// ghosts at the ends (so D⁻ = D⁺ on the boundary).
struct OneSided {
  double minus, plus;
};

inline OneSided diff(const double* u, std::ptrdiff_t stride, int i, int n, double inv_h) {
  const double c = u[0];
  if (i == 0) {
    const double d = (u[stride] - c) * inv_h;
    return {d, d};
  }
  if (i == n) {
    const double d = (c - u[-stride]) * inv_h;
    return {d, d};
  }
  return {(c - u[-stride]) * inv_h, (u[stride] - c) * inv_h};
}

/// Godunov contribution of one axis to |∇u| when the front grows toward
/// increasing u (u_t = |∇u|):  max(−D⁻, D⁺, 0)².
inline double godunov_axis_sq(const OneSided& d) {
  const double m = std::max({-d.minus, d.plus, 0.0});
  return m * m;
}

/// First-order upwind product v·∂u along one axis.
inline double upwind_axis(double v, const OneSided& d) { return v > 0.0 ? v * d.minus : v * d.plus; }

}  // namespace stencil

/// Godunov approximation of |∇u| at node (i, j) for u_t = |∇u|.
double upwind_gradient_norm(const ScalarField& f, int i, int j);

/// First-order upwind approximation of V·∇u at every node.  vx, vy hold the
/// velocity components at nodes in the field's storage order.
Eigen::ArrayXd upwind_advection(const ScalarField& f, const Eigen::ArrayXd& vx, const Eigen::ArrayXd& vy);

/// Bilinear interpolation; throws Error outside the grid hull.
double interpolate(const ScalarField& f, const Vec2& x);

/// GFRONT1 snapshot format: magic "GFRONT1", u32 dim, u32 cells per axis,
/// f64 origin per axis, f64 spacing per axis, f64 time stamp, then the node
/// values as f64, x fastest.  All little endian.
void write_snapshot(std::ostream& os, const ScalarField& f);
ScalarField read_snapshot(std::istream& is);
void write_snapshot(const std::string& path, const ScalarField& f);
ScalarField read_snapshot(const std::string& path);

}  // namespace gfront
