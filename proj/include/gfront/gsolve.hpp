#pragma once

// Time stepping of the G-equation  u_t + V_t·∇u = |∇u|.
//
// u is a "reached-ness" level-set function: the reachable set at elapsed time
// t is {u(·, t) ≥ reach_level}.  Space is discretized with the Godunov
// stencil for |∇u| plus first-order upwind advection; time with TVD-RK2 (or
// forward Euler).  Both are monotone under the CFL bound used here.

#include "gfront/flow.hpp"
#include "gfront/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gfront {

/// Point-source shape in units of h.
inline constexpr double kPointSourceEps = 2.0;
inline constexpr double kPointSourcePlateau = 2.0;

struct InitialData {
  enum class Kind { exp_cone, signed_profile, custom };

  Kind kind = Kind::signed_profile;
  Vec2 center = Vec2::Zero();
  double eps = 0.0;      ///< exp_cone scale
  double plateau = 0.0;  ///< exp_cone: u₀ = 1 on B_plateau(c)
  double radius = 0.0;   ///< signed_profile radius, or region radius for custom data
  /// Elapsed time the data stands for.  A positive value makes evolve start
  /// its clock there, with the center moved along the flow over that time.
  double head_start = 0.0;
  std::function<double(const Vec2&)> fn;
  double custom_level = 0.5;

  /// u₀(x) = exp(−max(|x − c| − plateau, 0) / ε).
  static InitialData exp_cone(double eps, const Vec2& center = Vec2::Zero(), double plateau = 0.0);
  /// u₀(x) = r − |x − c|.
  static InitialData signed_profile(double radius, const Vec2& center = Vec2::Zero());
  /// Point-like source: the reachable set after a head start δ of a few h,
  /// as an exp_cone with a plateau whose level-0.5 set is B_δ.  A one-node
  /// peak would be worn down by upwind advection.
  static InitialData point_source(const Vec2& center, double h);
  /// Arbitrary data; `region_radius` bounds the region around `center` whose
  /// values are read back (used for the containment check).
  static InitialData custom(std::function<double(const Vec2&)> fn, const Vec2& center, double region_radius,
                            double level = 0.5);
  /// Values sampled on a grid (bilinear in between, clamped at the hull).
  static InitialData custom_grid(const ScalarField& values, const Vec2& center, double region_radius,
                                 double level = 0.5);

  double operator()(const Vec2& x) const;
  /// 0.5 for exp_cone, 0 for signed profiles.
  double default_reach_level() const;
  /// Radius around `center` that must stay away from the grid boundary at t = 0.
  double initial_radius(double level) const;
};

struct SolveConfig {
  double cfl = 0.5;
  double t_final = 1.0;  ///< elapsed time horizon
  double t_start = 0.0;  ///< flow time at which the solve begins
  std::vector<double> snapshot_times;  ///< elapsed, within [0, t_final]
  std::optional<double> reach_level;   ///< defaults to the initial data's level
  int rk_stages = 2;                   ///< 1 = forward Euler, 2 = TVD-RK2

  /// Initial data is clamped below at reach_level − band.  A finite band lets
  /// the solver skip the untouched constant region (exact for this geometric
  /// equation: max(u, c) is again a solution).
  double band = kInf;
  bool crop_snapshots = false;  ///< store snapshots on the active box only

  std::vector<Vec2> probes;          ///< points whose first crossing is tracked
  std::vector<double> probe_times;   ///< elapsed times at which probe values are stored
  bool stop_when_probes_reached = false;

  /// Called with the full field (time_stamp = elapsed time) at each observe time.
  std::vector<double> observe_times;
  std::function<void(const ScalarField&)> observer;

  bool allow_truncation = false;  ///< skip the containment check (boundary becomes load-bearing)
  bool progress_log = true;
};

struct ProbeRecord {
  Vec2 point = Vec2::Zero();
  double first_crossing = kInf;    ///< elapsed time u(point) first reaches the level
  std::vector<double> values;      ///< u(point) at each probe time reached
};

struct ScalarFieldSeries {
  Grid grid;
  double reach_level = 0.0;
  double floor_value = -kInf;
  double t_start = 0.0;
  double t_end = 0.0;  ///< elapsed time actually reached
  std::vector<ScalarField> snapshots;
  ScalarField arrival_time;  ///< first elapsed time u ≥ level per node (+∞ if never)
  ScalarField final_field;   ///< u at t_end
  std::vector<double> probe_times;
  std::vector<ProbeRecord> probes;
  double init_min = 0.0, init_max = 0.0;
  double max_overshoot = 0.0;  ///< max(u) − max(init) over the run (≤ 0 for a monotone run)
  double min_undershoot = 0.0;  ///< min(init) − min(u) over the run
  long steps = 0;

  /// Snapshot with |time_stamp − t| ≤ tol, or nullptr.
  const ScalarField* snapshot_at(double t, double tol = 1e-9) const;
};

/// Runs the solve.  Throws ContainmentError if the grid does not contain
/// B_{r₀ + M·t_final + 4h}(init.center) (unless allow_truncation), and Error on
/// a non-finite value.
ScalarFieldSeries evolve(const VelocityField& f, const InitialData& init, const SolveConfig& cfg, const Grid& grid);

/// Evolves with the oscillatory field (t, x) ↦ f(t/ε, x/ε).
ScalarFieldSeries solve_scaled(const VelocityField& f, double eps, const InitialData& init, const SolveConfig& cfg,
                               const Grid& grid);

/// Smallest time step the solver would use for this flow and spacing.
double stable_time_step(const VelocityField& f, double h, double cfl = 0.5);

// ---------------------------------------------------------------------------
// Direct integration of admissible paths γ' = V_t(γ) + c(t), |c| ≤ 1.

using Control = std::function<Vec2(double)>;

/// RK4 with the control frozen on each step.
Vec2 integrate_path(const VelocityField& f, const Vec2& start, double t_start, double duration, const Control& control,
                    double max_step);

struct PathSampling {
  int max_switches = 8;     ///< piecewise-constant controls with up to this many switches
  int constant_every = 4;   ///< every k-th path uses a single constant direction
};

/// Endpoints at time t_start + duration of n_paths random bang-bang paths
/// (|c| = 1, piecewise constant).  RK4 step ≤ h / (2(M + 1)).  Path p is a pure
/// function of (rng_seed, p).
std::vector<Vec2> sample_admissible_paths(const VelocityField& f, const Vec2& start, double duration, int n_paths,
                                          std::uint64_t rng_seed, double h, double t_start = 0.0,
                                          const PathSampling& opts = {});

}  // namespace gfront
