#pragma once

// Geometric measurements of numerical reachable sets {u ≥ level}.
//
// Cells are resolved by marching squares: inside a cell the set is the
// polygon obtained by walking the cell boundary, keeping corners with
// u ≥ level and the linear crossing points (saddles are joined).  The
// union of these polygons is a polygon whose boundary is exactly the
// extracted contour, so areas and lengths below refer to one set.

#include "gfront/flow.hpp"
#include "gfront/geometry.hpp"
#include "gfront/gsolve.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace gfront {

/// I_r = center + [−r, r]².  r = ∞ stands for the whole grid.
struct CubeWindow {
  double r = kInf;
  Vec2 center = Vec2::Zero();

  bool bounded() const { return std::isfinite(r); }
  geom::Rect rect(const Grid& hull) const;
  double volume(const Grid& hull) const;
};

struct ReachMeasurement {
  double t = 0.0;  ///< elapsed time
  double r = kInf;
  double w = 0.0;     ///< |R_t ∩ I_r|
  double s = 0.0;     ///< contour length inside I_r
  double flux = 0.0;  ///< ∫ V·ν over R_t ∩ ∂I_r (0 for the unbounded window)
  double fill_fraction = 0.0;
};

using Segment = std::array<Vec2, 2>;

/// Contour {u = level} as segments, one or two per crossed cell.
std::vector<Segment> extract_contour(const ScalarField& u, double level);

/// Measures {u ≥ level}.  Points outside u's grid count as outside the set.
/// `hull` is the region the window must fit in (defaults to u's grid).
/// `flow`, evaluated at `flow_time`, is needed for the flux term.
ReachMeasurement measure(const ScalarField& u, double level, const CubeWindow& win, const VelocityField* flow = nullptr,
                         double flow_time = 0.0, const Grid* hull = nullptr);

/// A function whose {≥ 0} set is {arrival ≤ t}: t − arrival_time clamped to
/// ±10³.  At t_end, where unreached nodes carry no crossing time, the final
/// field minus the level, raised to 0 on reached nodes.
ScalarField arrival_set_function(const ScalarFieldSeries& series, double t);

/// Euclidean distance to the polygonal set {u ≥ level} (0 inside).
class SetDistance {
 public:
  SetDistance(ScalarField u, double level);
  double operator()(const Vec2& p) const;
  /// Negative inside: minus the distance to the contour.
  double signed_distance(const Vec2& p) const;

 private:
  ScalarField u_;
  double level_;
  std::vector<Segment> segments_;
};

/// Uses the snapshot at elapsed time t; without one, the arrival-time set
/// {arrival ≤ t} (ties inside).  Throws if the window leaves the grid.
ReachMeasurement measure(const ScalarFieldSeries& series, const CubeWindow& win, double t,
                         const VelocityField* flow = nullptr);

/// The calibrated slack constant for the volume-growth check (fit on V = 0).
inline constexpr double kVolumeGrowthCtol = 2.0;

struct VolumeGrowthRow {
  ReachMeasurement m;
  double lhs = std::numeric_limits<double>::quiet_NaN();  ///< w(t) − w(t_prev)
  double rhs = std::numeric_limits<double>::quiet_NaN();  ///< ∫ s − ∫ flux (trapezoid)
  double slack = std::numeric_limits<double>::quiet_NaN();
  bool violated = false;
};

struct VolumeGrowthReport {
  std::vector<VolumeGrowthRow> rows;
  int violations = 0;
  double worst_margin = kInf;  ///< min over intervals of lhs − rhs + slack
};

/// Integrated form of  dw/dt ≥ s − flux  on consecutive entries of t_list,
/// with slack C_tol·h·(2r)·Δt.  ∫(s − flux) is a composite trapezoid over
/// every sample inside the interval; `samples` is sorted by t and contains
/// the t_list times.  `side` is 2r.
VolumeGrowthReport check_volume_growth(const std::vector<ReachMeasurement>& samples, const std::vector<double>& t_list,
                                       double h, double side, double c_tol = kVolumeGrowthCtol);

/// Same, measuring the series at t_list and at every snapshot in between.
VolumeGrowthReport check_volume_growth(const ScalarFieldSeries& series, const CubeWindow& win,
                                       const std::vector<double>& t_list, const VelocityField& flow,
                                       double c_tol = kVolumeGrowthCtol);

/// SolveConfig observer appending measure(u) to `sink` (flow time = t_start + t).
std::function<void(const ScalarField&)> measurement_observer(std::vector<ReachMeasurement>& sink, double level,
                                                            const CubeWindow& win, const VelocityField* flow,
                                                            double t_start = 0.0);

void write_csv(std::ostream& os, const VolumeGrowthReport& report);

struct IsoperimetricRow {
  double t = 0.0, w = 0.0, s = 0.0;
  double bound = 0.0;  ///< 2√(π w)
  double ratio = 0.0;  ///< s / bound
  double slack = 0.0;
  bool violated = false;
  double relative_ratio = std::numeric_limits<double>::quiet_NaN();  ///< s(r)/√min(w, |I_r| − w), data only
};

struct IsoperimetricReport {
  std::vector<IsoperimetricRow> rows;
  int violations = 0;
  double min_ratio = kInf;
};

/// s(∞, t) ≥ 2√(π w(∞, t)) − slack, slack = (5h/t)·2√(π w).
IsoperimetricReport check_isoperimetric(const ScalarFieldSeries& series, const std::vector<double>& t_list,
                                        std::optional<CubeWindow> relative_window = std::nullopt);

struct FillingReport {
  double alpha = 0.0;  ///< π/(4M)²
  double T0 = 0.0;     ///< r/(2M)
  std::vector<std::pair<double, double>> curve;  ///< (t, fill_fraction) at snapshots
  std::optional<double> t_alpha, t_one_minus_alpha, t_half_covered;
};

FillingReport filling_diagnostic(const ScalarFieldSeries& series, const CubeWindow& win, double M);

struct ReversibilityTrial {
  Vec2 x0 = Vec2::Zero(), p = Vec2::Zero();
  double t0 = 0.0, t = 0.0;
  double d_forward = 0.0;   ///< signed distance of p to R_t(x0) under f
  double d_backward = 0.0;  ///< signed distance of x0 to R_t(p) under reverse(f, t0 + t)
  bool agree = false;       ///< same side, or either within tol of its boundary
};

/// Two point-source solves on grid spacing h.
ReversibilityTrial check_reversibility(const VelocityField& f, const Vec2& x0, const Vec2& p, double t0, double t,
                                       double h, double tol);

// ---------------------------------------------------------------------------

struct NodeMask {
  Grid grid;
  std::vector<std::uint8_t> in;

  static NodeMask threshold(const ScalarField& u, double level);
  /// Same nodes with coordinates multiplied by s (> 0).
  NodeMask scaled(double s) const;
  bool any() const;
};

/// Distance from each node to the nearest inside node (exact Euclidean,
/// separable squared-distance transform).  +∞ everywhere for an empty mask.
Eigen::ArrayXd distance_transform(const NodeMask& m);

/// Symmetric Hausdorff distance between the inside nodes and a convex polygon
/// (counter-clockwise).  Accurate to about h.
double hausdorff_distance(const NodeMask& a, const geom::Polygon& convex);
/// Both masks must share a grid.
double hausdorff_distance(const NodeMask& a, const NodeMask& b);

/// Regular n-gon inscribed in the circle of radius r.
geom::Polygon circle_polygon(const Vec2& center, double r, int n = 720);

}  // namespace gfront
