#pragma once

// Travel times, the limit T̄, the effective reachable set W, its support
// function H̄, and the Hopf–Lax comparison for the oscillatory problem.

#include "gfront/ensemble.hpp"
#include "gfront/flow.hpp"
#include "gfront/geometry.hpp"
#include "gfront/gsolve.hpp"
#include "gfront/reach.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gfront {

/// Seeded flow constructor (a realization ω ↦ V(·, ω)).
using FlowFamily = std::function<VelocityField(std::uint64_t seed)>;

enum class Estimator {
  paper_point,         ///< mean of tau_paper/λ at the largest λ
  paper_inf,           ///< min over λ of those means
  paper_extrapolated,  ///< slope of E tau_paper between the two largest λ
  raw_point,           ///< mean of tau_raw/λ at the largest λ
  raw_extrapolated,    ///< slope of E tau_raw between the two largest λ
};

std::string to_string(Estimator e);
Estimator parse_estimator(const std::string& name);

struct HomogConfig {
  int tau0 = 2;
  double delta_hat = 0.0;
  std::vector<double> lambda_ladder{4.0, 8.0, 16.0};
  int n_seeds = 16;
  std::vector<Vec2> directions;  ///< offsets v (T̄(v) is estimated); unit vectors for shape sampling
  Vec2 x0 = Vec2::Zero();
  double t0 = 0.0;
  double h = 0.125;
  double cfl = 0.5;
  double band = 0.49;
  double horizon_margin = 1.0;
  std::uint64_t master_seed = 0;
  int parallelism = 1;
  Estimator estimator = Estimator::raw_extrapolated;

  double Lambda() const { return 2.0 / (1.0 - delta_hat); }
  void validate() const;
};

struct TravelTimeSample {
  Vec2 x0 = Vec2::Zero();
  double t0 = 0.0;
  Vec2 v = Vec2::Zero();  ///< the offset actually travelled (already scaled)
  double lambda = 1.0;
  std::uint64_t seed = 0;
  double tau_raw = kInf;    ///< continuous first crossing at x0 + v
  double tau_paper = kInf;  ///< first integer duration n with x0 + v ∈ R_n, plus τ₀
  bool flagged = false;     ///< not reached within the horizon
  std::size_t direction = 0;
};

struct TravelTarget {
  Vec2 v;
  double lambda = 1.0;
  std::size_t direction = 0;
};

struct TravelRun {
  std::vector<TravelTimeSample> samples;
  std::vector<ScalarField> snapshots;  ///< requested snapshot times, cropped
  double reach_level = 0.5;
  double horizon = 0.0;
};

/// One solve from a point source at (x0, t0) with a probe per target.
/// Horizon Λ·max|v| + 2τ₀ + margin (at least the last snapshot time).
TravelRun travel_times(const VelocityField& f, const std::vector<TravelTarget>& targets, std::uint64_t seed,
                       const HomogConfig& cfg, const std::vector<double>& snapshot_times = {});

TravelTimeSample travel_time(const VelocityField& f, const Vec2& x0, double t0, const Vec2& v, const HomogConfig& cfg);

struct SubadditivityReport {
  double tau12 = 0.0, tau1 = 0.0, tau2 = 0.0;
  double slack = 0.0;
  bool ok = false;
};

/// τ(x0, t0, v1+v2) ≤ τ(x0, t0, v1) + τ(x0+v1, t0+τ1, v2) + slack (paper times).
SubadditivityReport check_subadditivity(const VelocityField& f, const Vec2& x0, double t0, const Vec2& v1,
                                        const Vec2& v2, const HomogConfig& cfg);

struct TbarEstimate {
  Vec2 v = Vec2::Zero();
  std::vector<double> lambdas;
  std::vector<Aggregate> paper;  ///< tau_paper/λ per λ
  std::vector<Aggregate> raw;    ///< tau_raw/λ per λ
  int flagged = 0;

  double value(Estimator e) const;
  /// Standard error of the estimator (independent-sample formula).
  double ci(Estimator e) const;
  /// Per-λ paper means nonincreasing up to `k` standard errors.
  bool paper_means_nonincreasing(double k = 1.0) const;
};

struct TbarEnsemble {
  std::vector<TbarEstimate> estimates;  ///< one per cfg.directions entry
  std::vector<TravelTimeSample> samples;
  std::vector<std::string> failures;  ///< diagnostics of failed jobs
  /// Per seed, per shape time: the reached-node mask (unscaled), if requested.
  std::vector<std::vector<NodeMask>> masks;
  std::vector<double> shape_times;
  std::vector<std::uint64_t> seeds;
};

/// n_seeds solves (seed k = hash64(master, k)), each probing λ·v for every
/// direction v and λ in the ladder.
TbarEnsemble estimate_Tbar(const FlowFamily& family, const HomogConfig& cfg,
                           const std::vector<double>& shape_times = {});
TbarEstimate estimate_Tbar(const FlowFamily& family, const Vec2& direction, const HomogConfig& cfg);

struct EffectiveShape {
  std::vector<Vec2> directions;
  std::vector<double> Tbar, ci;
  std::vector<Vec2> raw_points;  ///< e/T̄(e)
  geom::Polygon W;               ///< convex hull of raw points and the origin, counter-clockwise
  bool convexified = false;      ///< some raw point lies strictly inside the hull
  double max_hull_gap = 0.0;     ///< largest distance of a raw point inside the hull boundary

  /// H̄(p) = max over vertices of p·y.
  double H(const Vec2& p) const;
  /// Gauge of W: the smallest t with v ∈ tW (positively 1-homogeneous, convex).
  double gauge(const Vec2& v) const;
  bool origin_interior() const;
};

EffectiveShape build_effective_shape(const std::vector<Vec2>& directions, const std::vector<double>& Tbar,
                                     const std::vector<double>& ci = {});
/// Uses only estimates with |v| = 1.
EffectiveShape build_effective_shape(const std::vector<TbarEstimate>& estimates, Estimator e);

struct HomogenizedSolution {
  EffectiveShape shape;
  std::function<double(const Vec2&)> u0;

  double Tbar(const Vec2& v) const { return shape.gauge(v); }
};

struct HopfLaxOptions {
  int boundary_points = 256;
  int lattice = 48;  ///< interior lattice per axis
  int refine = 16;   ///< local refinement lattice per axis
};

/// ū(t, x) = max{u₀(y) : y ∈ x − t·W}.
double hopf_lax(const HomogenizedSolution& sol, double t, const Vec2& x, const HopfLaxOptions& opts = {});

struct CompareConfig {
  std::vector<double> eps_list{0.25, 0.125, 0.0625};
  double T = 1.0;
  double R = 1.0;
  double h = 1.0 / 256.0;
  double cfl = 0.5;
  int time_samples = 4;      ///< probe times T·k/time_samples, k = 1..
  int space_samples = 16;    ///< lattice points per radius
  double tolerance = 0.0;    ///< trend slack (numerical floor)
  HopfLaxOptions hopf_lax;
};

struct CompareRow {
  double eps = 0.0;
  double sup_err = 0.0;
  double at_t = 0.0;
  Vec2 at_x = Vec2::Zero();
};

struct CompareReport {
  std::vector<CompareRow> rows;
  bool nonincreasing = false;  ///< sup_err(ε_{k+1}) ≤ sup_err(ε_k) + tolerance
};

/// For each ε: u^ε by solve_scaled from u0 at t = 0, then max |u^ε − ū| over
/// the (t, x) lattice in (0, T] × B_R.
CompareReport compare_homogenization(const VelocityField& f, const InitialData& u0, const HomogenizedSolution& sol,
                                     const CompareConfig& cfg);

struct ShapeRow {
  std::uint64_t seed = 0;
  std::vector<double> t;
  std::vector<double> dH;
  bool decreasing = false;
};

struct ShapeReport {
  std::vector<ShapeRow> rows;
  double fraction_decreasing = 0.0;
};

/// d_H(t⁻¹(R_t − x0), W) per seed and time from the masks of an ensemble.
ShapeReport shape_convergence(const TbarEnsemble& ens, const EffectiveShape& shape, const Vec2& x0);

/// Per-sample CSV: columns of TravelTimeSample.
ResultTable travel_time_table(const std::vector<TravelTimeSample>& samples);

}  // namespace gfront
