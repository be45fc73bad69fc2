#include "gfront/flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace gfront {

std::string to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::zero: return "zero";
    case FlowKind::constant: return "constant";
    case FlowKind::cellular: return "cellular";
    case FlowKind::shear: return "shear";
    case FlowKind::bernoulli_tiling: return "bernoulli_tiling";
    case FlowKind::composite: return "composite";
    case FlowKind::reversed: return "reversed";
    case FlowKind::scaled: return "scaled";
    case FlowKind::custom: return "custom";
  }
  return "unknown";
}

void FlowModel::sample_lattice(double t, std::span<const double> xs, std::span<const double> ys,
                               Eigen::ArrayXXd& vx, Eigen::ArrayXXd& vy) const {
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  vx.resize(nx, ny);
  vy.resize(nx, ny);
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      const Vec2 v = evaluate(t, Vec2(xs[i], ys[j]));
      vx(i, j) = v.x();
      vy(i, j) = v.y();
    }
  }
}

VelocityField::VelocityField(std::shared_ptr<const FlowModel> model, FieldInfo info)
    : model_(std::move(model)), info_(std::move(info)) {
  if (!model_) throw Error("VelocityField: null model");
  if (!(info_.speed_bound >= 0.0)) throw Error("VelocityField: speed bound must be nonnegative");
}

double TimeModulation::operator()(double t) const {
  return kind == Kind::steady ? 1.0 : std::cos(2.0 * kPi * freq * t);
}

namespace {

class ZeroModel final : public FlowModel {
 public:
  Vec2 evaluate(double, const Vec2&) const override { return Vec2::Zero(); }
  void sample_lattice(double, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override {
    vx.setZero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
    vy.setZero(vx.rows(), vx.cols());
  }
};

class ConstantModel final : public FlowModel {
 public:
  explicit ConstantModel(Vec2 c) : c_(std::move(c)) {}
  Vec2 evaluate(double, const Vec2&) const override { return c_; }
  void sample_lattice(double, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override {
    vx.setConstant(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()), c_.x());
    vy.setConstant(vx.rows(), vx.cols(), c_.y());
  }

 private:
  Vec2 c_;
};

class CellularModel final : public FlowModel {
 public:
  CellularModel(double a, double p, TimeModulation m) : a_(a), k_(2.0 * kPi / p), m_(m) {}

  Vec2 evaluate(double t, const Vec2& x) const override {
    const double s = a_ * k_ * m_(t);
    return {s * std::sin(k_ * x.x()) * std::cos(k_ * x.y()), -s * std::cos(k_ * x.x()) * std::sin(k_ * x.y())};
  }

  void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override {
    const auto nx = static_cast<Eigen::Index>(xs.size());
    const auto ny = static_cast<Eigen::Index>(ys.size());
    Eigen::ArrayXd sx(nx), cx(nx), sy(ny), cy(ny);
    for (Eigen::Index i = 0; i < nx; ++i) {
      sx(i) = std::sin(k_ * xs[i]);
      cx(i) = std::cos(k_ * xs[i]);
    }
    for (Eigen::Index j = 0; j < ny; ++j) {
      sy(j) = std::sin(k_ * ys[j]);
      cy(j) = std::cos(k_ * ys[j]);
    }
    const double s = a_ * k_ * m_(t);
    vx = s * (sx.matrix() * cy.matrix().transpose()).array();
    vy = -s * (cx.matrix() * sy.matrix().transpose()).array();
  }

 private:
  double a_, k_;
  TimeModulation m_;
};

class ShearModel final : public FlowModel {
 public:
  ShearModel(double a, double p, TimeModulation m) : a_(a), k_(2.0 * kPi / p), m_(m) {}
  Vec2 evaluate(double t, const Vec2& x) const override { return {a_ * m_(t) * std::sin(k_ * x.y()), 0.0}; }

 private:
  double a_, k_;
  TimeModulation m_;
};

class CompositeModel final : public FlowModel {
 public:
  explicit CompositeModel(std::vector<VelocityField> parts) : parts_(std::move(parts)) {}

  Vec2 evaluate(double t, const Vec2& x) const override {
    Vec2 v = Vec2::Zero();
    for (const auto& p : parts_) v += p.evaluate(t, x);
    return v;
  }

  void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override {
    vx.setZero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
    vy.setZero(vx.rows(), vx.cols());
    Eigen::ArrayXXd px, py;
    for (const auto& p : parts_) {
      p.sample_lattice(t, xs, ys, px, py);
      vx += px;
      vy += py;
    }
  }

 private:
  std::vector<VelocityField> parts_;
};

class CustomModel final : public FlowModel {
 public:
  explicit CustomModel(std::function<Vec2(double, const Vec2&)> fn) : fn_(std::move(fn)) {}
  Vec2 evaluate(double t, const Vec2& x) const override { return fn_(t, x); }

 private:
  std::function<Vec2(double, const Vec2&)> fn_;
};

class ReversedModel final : public FlowModel {
 public:
  ReversedModel(VelocityField inner, double t2) : inner_(std::move(inner)), t2_(t2) {}

  Vec2 evaluate(double t, const Vec2& x) const override { return -inner_.evaluate(t2_ - t, x); }

  void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override {
    inner_.sample_lattice(t2_ - t, xs, ys, vx, vy);
    vx = -vx;
    vy = -vy;
  }

 private:
  VelocityField inner_;
  double t2_;
};

class ScaledModel final : public FlowModel {
 public:
  ScaledModel(VelocityField inner, double eps) : inner_(std::move(inner)), eps_(eps) {}

  Vec2 evaluate(double t, const Vec2& x) const override { return inner_.evaluate(t / eps_, x / eps_); }

  void sample_lattice(double t, std::span<const double> xs, std::span<const double> ys, Eigen::ArrayXXd& vx,
                      Eigen::ArrayXXd& vy) const override {
    std::vector<double> sx(xs.begin(), xs.end()), sy(ys.begin(), ys.end());
    for (double& v : sx) v /= eps_;
    for (double& v : sy) v /= eps_;
    inner_.sample_lattice(t / eps_, sx, sy, vx, vy);
  }

 private:
  VelocityField inner_;
  double eps_;
};

}  // namespace

VelocityField make_zero() {
  return {std::make_shared<ZeroModel>(), {FlowKind::zero, 0.0, 0.0, 0.0, "zero"}};
}

VelocityField make_constant(const Vec2& c) {
  return {std::make_shared<ConstantModel>(c), {FlowKind::constant, c.norm(), 0.0, 0.0, "constant"}};
}

VelocityField make_cellular(double amplitude, double spatial_period, TimeModulation modulation) {
  if (!(amplitude >= 0.0)) throw Error("make_cellular: amplitude must be nonnegative");
  if (!(spatial_period > 0.0)) throw Error("make_cellular: spatial_period must be positive");
  if (amplitude == 0.0) return make_zero();
  const double k = 2.0 * kPi / spatial_period;
  const double m = modulation.max_abs();
  FieldInfo info{FlowKind::cellular, amplitude * k * m, amplitude * k * k * m, amplitude * k * k * k * k * m,
                 "cellular"};
  return {std::make_shared<CellularModel>(amplitude, spatial_period, modulation), info};
}

VelocityField make_shear(double amplitude, double spatial_period, TimeModulation modulation) {
  if (!(spatial_period > 0.0)) throw Error("make_shear: spatial_period must be positive");
  const double a = std::abs(amplitude);
  const double k = 2.0 * kPi / spatial_period;
  FieldInfo info{FlowKind::shear, a, a * k, a * k * k * k, "shear"};
  return {std::make_shared<ShearModel>(amplitude, spatial_period, modulation), info};
}

VelocityField make_composite(std::vector<VelocityField> parts) {
  FieldInfo info{FlowKind::composite, 0.0, 0.0, 0.0, "composite"};
  for (const auto& p : parts) {
    info.speed_bound += p.speed_bound();
    info.lipschitz_bound += p.lipschitz_bound();
    info.smoothness_scale += p.smoothness_scale();
  }
  return {std::make_shared<CompositeModel>(std::move(parts)), info};
}

VelocityField make_custom(std::function<Vec2(double, const Vec2&)> fn, double speed_bound, double lipschitz_bound,
                          std::string description) {
  return {std::make_shared<CustomModel>(std::move(fn)),
          {FlowKind::custom, speed_bound, lipschitz_bound, 0.0, std::move(description)}};
}

VelocityField reverse(const VelocityField& f, double t2) {
  FieldInfo info = f.info();
  info.kind = FlowKind::reversed;
  info.description = "reversed(" + f.description() + ")";
  return {std::make_shared<ReversedModel>(f, t2), info};
}

VelocityField rescale(const VelocityField& f, double eps) {
  if (!(eps > 0.0)) throw Error("rescale: eps must be positive");
  if (eps == 1.0) return f;
  FieldInfo info = f.info();
  info.kind = FlowKind::scaled;
  info.lipschitz_bound /= eps;
  info.smoothness_scale /= eps * eps * eps;
  info.description = "scaled(" + f.description() + ")";
  return {std::make_shared<ScaledModel>(f, eps), info};
}

// ---------------------------------------------------------------------------

Bump::Bump(double lo_, double hi_) : lo(lo_), hi(hi_), omega(kPi / (hi_ - lo_)) {}

// b = sin⁴θ = (3 − 4 cos 2θ + cos 4θ) / 8 with θ = ω (z − lo).
double Bump::value(double z) const {
  if (!inside(z)) return 0.0;
  const double s = std::sin(omega * (z - lo));
  const double s2 = s * s;
  return s2 * s2;
}

double Bump::d1(double z) const {
  if (!inside(z)) return 0.0;
  const double th = omega * (z - lo);
  return omega * (std::sin(2.0 * th) - 0.5 * std::sin(4.0 * th));
}

double Bump::derivative_bound(int k, double omega) {
  static constexpr double c[] = {1.0, 1.299038105676658, 4.0, 12.0, 40.0};  // 3√3/4 for k = 1
  return c[k] * std::pow(omega, k);
}

BernoulliTilingFlow::BernoulliTilingFlow(BumpBlock v1, BumpBlock v2, std::uint64_t seed)
    : v1_(v1), v2_(v2), seed_(seed), bump_(v1.support_lo, v1.support_hi) {
  for (const auto* b : {&v1_, &v2_}) {
    if (!(b->support_lo > 0.0 && b->support_hi < 1.0 && b->support_lo < b->support_hi))
      throw Error("make_bernoulli_tiling: block support must lie strictly inside the unit cell");
  }
  if (v1_.support_lo != v2_.support_lo || v1_.support_hi != v2_.support_hi)
    throw Error("make_bernoulli_tiling: blocks must share one support interval");
}

bool BernoulliTilingFlow::coin(std::int64_t jx, std::int64_t jy, std::int64_t k) const {
  std::uint64_t h = mix64(seed_);
  h = mix64(h ^ static_cast<std::uint64_t>(jx));
  h = mix64(h ^ static_cast<std::uint64_t>(jy) * 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(k) * 0xc2b2ae3d27d4eb4fULL);
  return (h >> 63) != 0;
}

Vec2 BernoulliTilingFlow::evaluate(double t, const Vec2& x) const {
  const double kf = std::floor(t), jxf = std::floor(x.x()), jyf = std::floor(x.y());
  const double s = t - kf, xi = x.x() - jxf, eta = x.y() - jyf;
  if (!bump_.inside(s) || !bump_.inside(xi) || !bump_.inside(eta)) return Vec2::Zero();
  const bool z = coin(static_cast<std::int64_t>(jxf), static_cast<std::int64_t>(jyf), static_cast<std::int64_t>(kf));
  const double a = (z ? v1_.amplitude : v2_.amplitude) * bump_.value(s);
  return {a * bump_.value(xi) * bump_.d1(eta), -a * bump_.d1(xi) * bump_.value(eta)};
}

void BernoulliTilingFlow::sample_lattice(double t, std::span<const double> xs, std::span<const double> ys,
                                         Eigen::ArrayXXd& vx, Eigen::ArrayXXd& vy) const {
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  vx.setZero(nx, ny);
  vy.setZero(nx, ny);
  if (nx == 0 || ny == 0) return;
  const double kf = std::floor(t);
  const double bs = bump_.value(t - kf);
  if (bs == 0.0) return;

  struct Axis {
    std::vector<std::int64_t> cell;
    std::vector<double> b, db;
  };
  auto tabulate = [&](std::span<const double> zs) {
    Axis a;
    a.cell.resize(zs.size());
    a.b.resize(zs.size());
    a.db.resize(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double c = std::floor(zs[i]);
      a.cell[i] = static_cast<std::int64_t>(c);
      a.b[i] = bump_.value(zs[i] - c);
      a.db[i] = bump_.d1(zs[i] - c);
    }
    return a;
  };
  const Axis ax = tabulate(xs), ay = tabulate(ys);
  const auto [cx0, cx1] = std::minmax_element(ax.cell.begin(), ax.cell.end());
  const auto [cy0, cy1] = std::minmax_element(ay.cell.begin(), ay.cell.end());
  const std::int64_t jx0 = *cx0, jy0 = *cy0;
  const std::int64_t ncx = *cx1 - jx0 + 1, ncy = *cy1 - jy0 + 1;
  const auto k = static_cast<std::int64_t>(kf);
  std::vector<double> amp(static_cast<std::size_t>(ncx * ncy));
  for (std::int64_t cy = 0; cy < ncy; ++cy)
    for (std::int64_t cx = 0; cx < ncx; ++cx)
      amp[static_cast<std::size_t>(cy * ncx + cx)] =
          bs * (coin(jx0 + cx, jy0 + cy, k) ? v1_.amplitude : v2_.amplitude);

  for (Eigen::Index j = 0; j < ny; ++j) {
    if (ay.b[j] == 0.0 && ay.db[j] == 0.0) continue;
    const std::size_t row = static_cast<std::size_t>((ay.cell[j] - jy0) * ncx);
    for (Eigen::Index i = 0; i < nx; ++i) {
      if (ax.b[i] == 0.0 && ax.db[i] == 0.0) continue;
      const double a = amp[row + static_cast<std::size_t>(ax.cell[i] - jx0)];
      vx(i, j) = a * ax.b[i] * ay.db[j];
      vy(i, j) = -a * ax.db[i] * ay.b[j];
    }
  }
}

double BernoulliTilingFlow::speed_bound() const {
  // |V| = A b(s) ω G(θ₁, θ₂), G² = B(θ₁)² β(θ₂)² + β(θ₁)² B(θ₂)², with
  // B = sin⁴θ and β = dB/dθ.  Sampled max of G plus a Lipschitz correction.
  constexpr int n = 1024;
  std::vector<double> B(n + 1), beta(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double th = kPi * i / n;
    const double s = std::sin(th);
    B[i] = s * s * s * s;
    beta[i] = std::sin(2.0 * th) - 0.5 * std::sin(4.0 * th);
  }
  double gmax = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      gmax = std::max(gmax, B[i] * B[i] * beta[j] * beta[j] + beta[i] * beta[i] * B[j] * B[j]);
  constexpr double lip_g = 1.299038105676658 * 1.299038105676658 + 4.0;
  const double g = std::sqrt(gmax) + lip_g * (kPi / n) * std::sqrt(2.0) * 0.5;
  return std::max(std::abs(v1_.amplitude), std::abs(v2_.amplitude)) * bump_.omega * g;
}

double BernoulliTilingFlow::lipschitz_bound() const {
  const double w = bump_.omega;
  const double b1 = Bump::derivative_bound(1, w), b2 = Bump::derivative_bound(2, w);
  return std::max(std::abs(v1_.amplitude), std::abs(v2_.amplitude)) * std::sqrt(2.0 * b1 * b1 * b1 * b1 + 2.0 * b2 * b2);
}

double BernoulliTilingFlow::smoothness_scale() const {
  const double w = bump_.omega;
  double worst = 0.0;
  for (int k = 0; k <= 3; ++k)
    worst = std::max(worst, Bump::derivative_bound(k, w) * Bump::derivative_bound(4 - k, w));
  return std::max(std::abs(v1_.amplitude), std::abs(v2_.amplitude)) * worst;
}

VelocityField make_bernoulli_tiling(const BumpBlock& v1, const BumpBlock& v2, std::uint64_t seed) {
  auto model = std::make_shared<BernoulliTilingFlow>(v1, v2, seed);
  FieldInfo info{FlowKind::bernoulli_tiling, model->speed_bound(), model->lipschitz_bound(),
                 model->smoothness_scale(), "bernoulli_tiling"};
  return {std::move(model), info};
}

VelocityField make_bernoulli_tiling(std::uint64_t seed, double amplitude) {
  BumpBlock v1;
  v1.amplitude = amplitude;
  BumpBlock v2 = v1;
  v2.amplitude = -amplitude;
  return make_bernoulli_tiling(v1, v2, seed);
}

// ---------------------------------------------------------------------------

double estimate_mean_drift(const VelocityField& f, double L, const MeanDriftOptions& opts) {
  if (!(L > 0.0)) throw Error("estimate_mean_drift: L must be positive");
  if (opts.samples < 1 || opts.points_per_axis < 1) throw Error("estimate_mean_drift: need samples >= 1");
  std::mt19937_64 rng(opts.probe_seed);
  std::uniform_real_distribution<double> ut(0.0, opts.probe_extent), ux(-opts.probe_extent, opts.probe_extent);
  const int n = opts.points_per_axis;
  std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
  Eigen::ArrayXXd vx, vy;
  double sup = 0.0;
  for (int p = 0; p < opts.samples; ++p) {
    const double t = ut(rng);
    const double x0 = ux(rng), y0 = ux(rng);
    for (int i = 0; i < n; ++i) {
      const double off = L * (i + 0.5) / n;
      xs[static_cast<std::size_t>(i)] = x0 + off;
      ys[static_cast<std::size_t>(i)] = y0 + off;
    }
    f.sample_lattice(t, xs, ys, vx, vy);
    const double norm = Vec2(vx.mean(), vy.mean()).norm();
    sup = std::max(sup, norm);
  }
  return sup;
}

FlowBounds estimate_flow_bounds(const VelocityField& f, std::span<const double> cube_sides,
                                const MeanDriftOptions& opts) {
  FlowBounds b;
  b.M = f.M();
  b.delta_hat = kInf;
  for (double L : cube_sides) {
    const double d = estimate_mean_drift(f, L, opts);
    if (d < b.delta_hat) {
      b.delta_hat = d;
      b.L0_hat = L;
    }
  }
  if (cube_sides.empty()) b.delta_hat = f.speed_bound();
  return b;
}

DivergenceReport check_divergence_free(const VelocityField& f, const Vec2& origin, double h, int n,
                                       std::span<const double> t_samples) {
  if (n < 2 || !(h > 0.0)) throw Error("check_divergence_free: need n >= 2 and h > 0");
  std::vector<double> xs(static_cast<std::size_t>(n + 1)), ys(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    xs[static_cast<std::size_t>(i)] = origin.x() + h * i;
    ys[static_cast<std::size_t>(i)] = origin.y() + h * i;
  }
  DivergenceReport rep;
  Eigen::ArrayXXd vx, vy;
  for (double t : t_samples) {
    f.sample_lattice(t, xs, ys, vx, vy);
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        const double div = (vx(i + 1, j) - vx(i - 1, j) + vy(i, j + 1) - vy(i, j - 1)) / (2.0 * h);
        if (std::abs(div) > rep.max_abs_div) {
          rep.max_abs_div = std::abs(div);
          rep.argmax = Vec2(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);
          rep.t_at_max = t;
        }
      }
    }
  }
  return rep;
}

}  // namespace gfront
