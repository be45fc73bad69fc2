#pragma once

// Time-dependent planar velocity fields V_t(x).
//
// Every field is an immutable value: a shared, read-only model plus certified
// metadata (speed bound, spatial Lipschitz bound).  Fields built from stream
// functions are divergence free by construction.

#include "gfront/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gfront {

enum class FlowKind { zero, constant, cellular, shear, bernoulli_tiling, composite, reversed, scaled, custom };

std::string to_string(FlowKind kind);

/// Evaluation backend of a VelocityField.
class FlowModel {
 public:
  virtual ~FlowModel() = default;

  virtual Vec2 evaluate(double t, const Vec2& x) const = 0;

  /// Samples the field on the tensor lattice xs × ys.  Output arrays are
  /// resized to (xs.size(), ys.size()); entry (i, j) holds V_t(xs[i], ys[j]).
  virtual void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys,
                              Eigen::ArrayXXd& vx, Eigen::ArrayXXd& vy) const;
};

struct FieldInfo {
  FlowKind kind = FlowKind::custom;
  double speed_bound = 0.0;      ///< sup |V_t(x)|
  double lipschitz_bound = 0.0;  ///< spatial Lipschitz constant
  double smoothness_scale = 0.0;  ///< bound on third spatial derivatives of V (0 if unknown)
  std::string description;
};

class VelocityField {
 public:
  VelocityField(std::shared_ptr<const FlowModel> model, FieldInfo info);

  Vec2 evaluate(double t, const Vec2& x) const { return model_->evaluate(t, x); }
  Vec2 operator()(double t, const Vec2& x) const { return model_->evaluate(t, x); }

  void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const {
    model_->sample_lattice(t, xs, ys, vx, vy);
  }

  int dim() const { return 2; }
  FlowKind kind() const { return info_.kind; }
  double speed_bound() const { return info_.speed_bound; }
  double lipschitz_bound() const { return info_.lipschitz_bound; }
  double smoothness_scale() const { return info_.smoothness_scale; }
  const std::string& description() const { return info_.description; }
  const FieldInfo& info() const { return info_; }

  /// M := 1 + sup |V|, the reach-speed bound of admissible paths.
  double M() const { return 1.0 + info_.speed_bound; }

  const FlowModel& model() const { return *model_; }
  const std::shared_ptr<const FlowModel>& model_ptr() const { return model_; }

 private:
  std::shared_ptr<const FlowModel> model_;
  FieldInfo info_;
};

/// Time modulation m(t) of a steady spatial pattern.
struct TimeModulation {
  enum class Kind { steady, sinusoidal };
  Kind kind = Kind::steady;
  double freq = 0.0;

  static TimeModulation steady() { return {}; }
  static TimeModulation sinusoidal(double f) { return {Kind::sinusoidal, f}; }

  /// m(t) = 1 (steady) or cos(2π f t).
  double operator()(double t) const;
  double max_abs() const { return 1.0; }
};

VelocityField make_zero();
VelocityField make_constant(const Vec2& c);

/// Cellular flow with stream function ψ = A sin(2πx/P) sin(2πy/P) m(t) and
/// V = (∂ψ/∂y, −∂ψ/∂x).
VelocityField make_cellular(double amplitude, double spatial_period, TimeModulation modulation = {});

/// Shear flow V = (A sin(2πy/P) m(t), 0).
VelocityField make_shear(double amplitude, double spatial_period, TimeModulation modulation = {});

/// Pointwise sum of fields.
VelocityField make_composite(std::vector<VelocityField> parts);

/// Wraps an arbitrary callable.  Bounds are taken on trust; used for
/// hand-built test fields.
VelocityField make_custom(std::function<Vec2(double, const Vec2&)> fn, double speed_bound, double lipschitz_bound,
                          std::string description = "custom");

/// V⁻_t(x) = −V_{t2−t}(x).
VelocityField reverse(const VelocityField& f, double t2);

/// (t, x) ↦ V_{t/ε}(x/ε).
VelocityField rescale(const VelocityField& f, double eps);

// ---------------------------------------------------------------------------
// Random Bernoulli tiling

/// Compactly supported block on the unit space-time cell with stream function
/// ψ(s, ξ, η) = amplitude · b(s) b(ξ) b(η), where b is the C³ bump
/// sin⁴(π (z − lo) / (hi − lo)) on (lo, hi) and zero elsewhere.
struct BumpBlock {
  double amplitude = 0.2;
  double support_lo = 0.1;
  double support_hi = 0.9;
};

/// Bump profile b and its derivatives up to order 4.
struct Bump {
  double lo, hi, omega;

  explicit Bump(double lo_, double hi_);
  bool inside(double z) const { return z > lo && z < hi; }
  double value(double z) const;
  double d1(double z) const;
  /// Derivative bounds max|b^(k)| for k = 0..4.
  static double derivative_bound(int k, double omega);
};

/// V_t(x, ω) = Σ_{j,k} ζ_{jk} V¹_{t+k}(x+j) + (1 − ζ_{jk}) V²_{t+k}(x+j) with
/// fair coins ζ derived from (seed, j, k).
class BernoulliTilingFlow final : public FlowModel {
 public:
  BernoulliTilingFlow(BumpBlock v1, BumpBlock v2, std::uint64_t seed);

  Vec2 evaluate(double t, const Vec2& x) const override;
  void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override;

  /// ζ for the space cell (jx, jy) and time cell k; a pure function of the seed.
  bool coin(std::int64_t jx, std::int64_t jy, std::int64_t k) const;

  std::uint64_t seed() const { return seed_; }
  const BumpBlock& block1() const { return v1_; }
  const BumpBlock& block2() const { return v2_; }

  double speed_bound() const;
  double lipschitz_bound() const;
  double smoothness_scale() const;

 private:
  BumpBlock v1_, v2_;
  std::uint64_t seed_;
  Bump bump_;
};

/// Throws Error if a block's support leaves the open unit interval or the two
/// blocks use different supports.
VelocityField make_bernoulli_tiling(const BumpBlock& v1, const BumpBlock& v2, std::uint64_t seed);

/// Default pair V¹ = block, V² = −V¹.
VelocityField make_bernoulli_tiling(std::uint64_t seed, double amplitude = BumpBlock{}.amplitude);

// ---------------------------------------------------------------------------
// Diagnostics

struct MeanDriftOptions {
  int samples = 128;          ///< number of (t, x) probes
  int points_per_axis = 64;   ///< midpoint rule resolution per cube axis
  std::uint64_t probe_seed = 0x5eed;
  double probe_extent = 8.0;  ///< probes drawn from [0, extent) × [−extent, extent)²
};

/// Sampled sup over probes of |L⁻² ∫_{[0,L]²} V_t(x + y) dy|.  A lower bound of
/// the true sup over all (t, x).
double estimate_mean_drift(const VelocityField& f, double L, const MeanDriftOptions& opts = {});

struct FlowBounds {
  double M = 1.0;
  double delta_hat = 0.0;
  double L0_hat = 0.0;
};

/// delta_hat = min over the tried cube sides of the sampled drift.
FlowBounds estimate_flow_bounds(const VelocityField& f, std::span<const double> cube_sides,
                                const MeanDriftOptions& opts = {});

struct DivergenceReport {
  double max_abs_div = 0.0;
  Vec2 argmax = Vec2::Zero();
  double t_at_max = 0.0;
};

/// Central-difference divergence at the interior nodes of the lattice
/// origin + h·(i, j), 0 < i, j < n.
DivergenceReport check_divergence_free(const VelocityField& f, const Vec2& origin, double h, int n,
                                       std::span<const double> t_samples);

/// div_tol = 10 h² · (third-derivative scale).
inline double divergence_tolerance(const VelocityField& f, double h) {
  return 10.0 * h * h * f.smoothness_scale();
}

}  // namespace gfront
