// Acceptance checks 1–11.  Prints one PASS/FAIL line per criterion; the exit
// code is the number of failed criteria.  `--only N` (repeatable) selects.

#include "gfront/homog.hpp"
#include "gfront/log.hpp"
#include "gfront/reach.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gfront;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

void info(const std::string& s) { std::printf("    %s\n", s.c_str()); }

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::vector<Vec2> unit_directions(int n) {
  std::vector<Vec2> d;
  for (int k = 0; k < n; ++k) d.emplace_back(std::cos(2.0 * kPi * k / n), std::sin(2.0 * kPi * k / n));
  return d;
}

/// τ with |v − c τ| = τ for a constant drift |c| < 1.
double drift_travel_time(const Vec2& c, const Vec2& v) {
  const double vc = v.dot(c), cc = c.squaredNorm();
  return (-vc + std::sqrt(vc * vc + v.squaredNorm() * (1.0 - cc))) / (1.0 - cc);
}

SolveConfig quiet(double t_final) {
  SolveConfig sc;
  sc.t_final = t_final;
  sc.progress_log = false;
  return sc;
}

// ---------------------------------------------------------------------------
// Shared runs for criteria 1, 3 and 4.

struct BallRun {
  ScalarFieldSeries series;
  std::vector<double> times;
  double seconds = 0.0;
};

BallRun zero_flow_ball() {
  const Grid g = Grid::square(-2.0, 2.0, 256);
  SolveConfig sc = quiet(1.5);
  for (int k = 1; k <= 6; ++k) sc.snapshot_times.push_back(0.25 * k);
  Stopwatch sw;
  BallRun r;
  r.series = evolve(make_zero(), InitialData::point_source(Vec2::Zero(), g.h), sc, g);
  r.seconds = sw.seconds();
  r.times = sc.snapshot_times;
  return r;
}

struct CellularRun {
  ScalarFieldSeries series;
  std::vector<ReachMeasurement> samples;
  std::vector<double> t_list, snapshot_times;
  double h = 0.0, seconds = 0.0;
};

// 256 cells across [−2, 2] fix h = 1/64; the grid is extended to contain the
// reachable set of the fast flow.
CellularRun cellular_volume_run() {
  CellularRun r;
  r.h = 4.0 / 256.0;
  const double T = 2.0;
  const VelocityField f = make_cellular(2.0, 1.0, TimeModulation::sinusoidal(1.0));
  const InitialData init = InitialData::point_source(Vec2::Zero(), r.h);
  const Grid g = Grid::covering(Vec2::Zero(), init.initial_radius(0.5) + f.M() * T + 5.0 * r.h, r.h);
  SolveConfig sc = quiet(T);
  sc.band = 0.49;
  sc.crop_snapshots = true;
  // Sets before the point source's head start are not computed, so the first
  // checked interval begins there.
  const int intervals = 40, sub = 10;
  const double t_first = init.head_start;
  r.t_list.push_back(t_first);
  sc.observe_times.push_back(t_first);
  for (int k = 1; k <= intervals; ++k)
    if (T * k / intervals > t_first) r.t_list.push_back(T * k / intervals);
  for (int k = 0; k <= intervals * sub; ++k)
    if (T * k / (intervals * sub) > t_first) sc.observe_times.push_back(T * k / (intervals * sub));
  for (int k = 1; k <= 8; ++k) sc.snapshot_times.push_back(0.25 * k);
  r.snapshot_times = sc.snapshot_times;
  sc.observer = measurement_observer(r.samples, 0.5, CubeWindow{1.0}, &f);
  Stopwatch sw;
  r.series = evolve(f, init, sc, g);
  r.seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------

Outcome criterion1(const BallRun& run) {
  const double t = 1.5, h = run.series.grid.h;
  const ReachMeasurement m = measure(run.series, CubeWindow{}, t);
  const double exact = kPi * t * t;
  const double area_err = std::abs(m.w - exact) / exact;
  // Contour against circle, both ways.
  const ScalarField& u = *run.series.snapshot_at(t);
  double dH = 0.0;
  for (const auto& seg : extract_contour(u, run.series.reach_level))
    for (const auto& p : seg) dH = std::max(dH, std::abs(p.norm() - t));
  const SetDistance to_set(u, run.series.reach_level);
  for (const auto& q : circle_polygon(Vec2::Zero(), t)) dH = std::max(dH, std::abs(to_set.signed_distance(q)));
  const bool pass = area_err < 0.02 && dH < 2.0 * h && run.seconds < 60.0;
  return {pass, fmt("area error %.3f%% (< 2%%), Hausdorff %.2fh (< 2h), runtime %.2f s (< 60 s)", 100.0 * area_err,
                    dH / h, run.seconds)};
}

Outcome criterion2() {
  const Vec2 c(0.5, 0.0);
  const VelocityField f = make_constant(c);
  HomogConfig hc;
  hc.h = 1.0 / 32.0;
  hc.delta_hat = c.norm();
  hc.horizon_margin = 0.5;
  Stopwatch sw;

  std::vector<TravelTarget> targets;
  const auto dirs = unit_directions(64);
  for (std::size_t k = 0; k < dirs.size(); ++k) targets.push_back({1.5 * dirs[k], 1.5, k});
  const TravelRun run = travel_times(f, targets, 0, hc);

  double worst_tau = 0.0;
  std::vector<double> tbar;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double exact = drift_travel_time(c, 1.5 * dirs[k]);
    const double tau = run.samples[k].tau_raw;
    if (k % 8 == 0) worst_tau = std::max(worst_tau, std::abs(tau - exact) / exact);
    tbar.push_back(tau / 1.5);
  }
  const EffectiveShape shape = build_effective_shape(dirs, tbar);
  double worst_H = 0.0;
  for (const auto& p : unit_directions(8)) {
    const Vec2 q = 0.75 * p + Vec2(0.1, 0.05);
    const double exact = q.norm() + c.dot(q);
    worst_H = std::max(worst_H, std::abs(shape.H(q) - exact) / exact);
  }
  info(fmt("64-direction solve in %.1f s", sw.seconds()));
  return {worst_tau < 0.03 && worst_H < 0.05,
          fmt("tau_raw worst relative error %.2f%% over 8 targets (< 3%%), H̄ worst %.2f%% over 8 momenta (< 5%%)",
              100.0 * worst_tau, 100.0 * worst_H)};
}

Outcome criterion3(const CellularRun& run) {
  const auto rep = check_volume_growth(run.samples, run.t_list, run.h, 2.0, kVolumeGrowthCtol);
  const double slack = kVolumeGrowthCtol * run.h * 2.0 * (run.t_list[2] - run.t_list[1]);
  double first_bad = -1.0;
  for (const auto& r : rep.rows)
    if (r.violated && first_bad < 0.0) first_bad = r.m.t;
  if (rep.violations > 0)
    info(fmt("first violated interval ends at t = %.2f; worst margin %.2f slack units", first_bad,
             rep.worst_margin / slack));
  const bool pass = rep.violations == 0 && run.seconds < 180.0;
  return {pass, fmt("%d of %zu intervals in [%.3f, 2] violate the slack (C_tol = %g), runtime %.1f s (< 180 s)",
                    rep.violations, run.t_list.size() - 1, run.t_list.front(), kVolumeGrowthCtol, run.seconds)};
}

Outcome criterion4(const BallRun& ball, const CellularRun& cell) {
  const auto a = check_isoperimetric(ball.series, ball.times);
  const auto b = check_isoperimetric(cell.series, cell.snapshot_times);
  const int v = a.violations + b.violations;
  return {v == 0, fmt("%d violations over %zu snapshots; min s/(2√(πw)) %.4f (zero flow), %.4f (cellular)", v,
                      a.rows.size() + b.rows.size(), a.min_ratio, b.min_ratio)};
}

Outcome criterion5() {
  const double h = 1.0 / 64.0, T = 1.0;
  const std::vector<std::pair<std::string, VelocityField>> flows{
      {"zero", make_zero()},
      {"constant", make_constant(Vec2(0.5, 0.0))},
      {"cellular", make_cellular(2.0, 1.0, TimeModulation::sinusoidal(1.0))},
      {"shear", make_shear(1.0, 1.0)},
      {"bernoulli", make_bernoulli_tiling(1)}};
  bool pass = true;
  for (const auto& [name, f] : flows) {
    const InitialData init = InitialData::point_source(Vec2::Zero(), h);
    const Grid g = Grid::covering(Vec2::Zero(), init.initial_radius(0.5) + f.M() * T + 5.0 * h, h);
    SolveConfig sc = quiet(T);
    sc.band = 0.49;
    std::vector<double> times;
    for (int k = 1; k <= 16; ++k) times.push_back(T * k / 16.0);
    sc.snapshot_times = times;
    const auto s = evolve(f, init, sc, g);
    double contain = -kInf, lower = kInf;
    for (double t : times) {
      const ScalarField& u = *s.snapshot_at(t);
      for (const auto& seg : extract_contour(u, s.reach_level))
        for (const auto& p : seg) contain = std::max(contain, (p.norm() - f.M() * t) / h);
      if (t < 5.0 * h) continue;
      // Slack: a 2h-wide annulus of the ball's perimeter.
      const double w = measure(u, s.reach_level, CubeWindow{}).w;
      lower = std::min(lower, (w - kPi * t * t) / (2.0 * kPi * t * 2.0 * h));
    }
    const bool ok = contain <= 2.0 && lower >= -1.0;
    pass = pass && ok;
    info(fmt("%-9s max(|x| − Mt) = %.2fh (≤ 2h); min (w − πt²)/slack = %.2f (≥ −1) %s", name.c_str(), contain, lower,
             ok ? "" : "FAIL"));
  }
  return {pass, "containment in B_{Mt+2h} and w ≥ πt² − slack on zero, constant, cellular, shear, bernoulli"};
}

Outcome criterion6() {
  const double h = 1.0 / 64.0, T = 1.0;
  const int n_paths = 10000;
  const std::vector<std::pair<std::string, VelocityField>> flows{
      {"zero", make_zero()},
      {"constant", make_constant(Vec2(0.5, 0.0))},
      {"shear", make_shear(1.0, 1.0)},
      {"cellular A=0.1", make_cellular(0.1, 1.0, TimeModulation::sinusoidal(1.0))},
      {"bernoulli", make_bernoulli_tiling(1)}};
  auto run = [&](const VelocityField& f, double& hull_fraction) {
    const InitialData init = InitialData::point_source(Vec2::Zero(), h);
    const Grid g = Grid::covering(Vec2::Zero(), init.initial_radius(0.5) + f.M() * T + 5.0 * h, h);
    SolveConfig sc = quiet(T);
    sc.band = 0.49;
    const auto s = evolve(f, init, sc, g);
    const SetDistance dist(arrival_set_function(s, T), 0.0);
    const auto pts = sample_admissible_paths(f, Vec2::Zero(), T, n_paths, 42, h);
    int outside = 0;
    double worst = 0.0;
    for (const auto& p : pts) {
      const double d = dist(p);
      worst = std::max(worst, d);
      outside += d > 2.0 * h;
    }
    hull_fraction = std::abs(geom::signed_area(geom::convex_hull(pts))) / kPi;
    return std::pair{outside, worst / h};
  };
  bool pass = true;
  double hull_zero = 0.0;
  for (const auto& [name, f] : flows) {
    double hull = 0.0;
    const auto [outside, worst] = run(f, hull);
    if (name == "zero") hull_zero = hull;
    pass = pass && outside == 0;
    info(fmt("%-15s %d/%d endpoints beyond 2h, farthest %.2fh", name.c_str(), outside, n_paths, worst));
  }
  {
    double hull = 0.0;
    const auto [outside, worst] = run(make_cellular(2.0, 1.0, TimeModulation::sinusoidal(1.0)), hull);
    info(fmt("cellular A=2 (not counted): %d/%d endpoints beyond 2h, farthest %.1fh", outside, n_paths, worst));
  }
  pass = pass && hull_zero >= 0.95;
  return {pass, fmt("all endpoints within the 2h dilation on %zu flows; V=0 hull covers %.2f%% of B₁ (≥ 95%%)",
                    flows.size(), 100.0 * hull_zero)};
}

Outcome criterion7() {
  const double h = 1.0 / 64.0;
  auto trials = [&](const VelocityField& f, bool verbose) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int agree = 0;
    for (int k = 0; k < 20; ++k) {
      const Vec2 x0(2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0);
      const double t = 0.2 + 0.4 * U(rng), t0 = U(rng);
      Vec2 p;
      if (k % 2 == 0) {
        p = sample_admissible_paths(f, x0, t, 1, static_cast<std::uint64_t>(k), h, t0)[0];
      } else {
        const double r = 0.5 * f.M() * t * std::sqrt(U(rng)), a = 2.0 * kPi * U(rng);
        p = x0 + r * Vec2(std::cos(a), std::sin(a));
      }
      const auto tr = check_reversibility(f, x0, p, t0, t, h, 2.0 * h);
      agree += tr.agree;
      if (verbose && !tr.agree) info(fmt("triple %d: forward %.2fh, backward %.2fh", k, tr.d_forward / h, tr.d_backward / h));
    }
    return agree;
  };
  const int agree = trials(make_cellular(0.3, 1.0, TimeModulation::sinusoidal(1.0)), true);
  const int fast = trials(make_cellular(2.0, 1.0, TimeModulation::sinusoidal(1.0)), false);
  info(fmt("cellular A=2 (not counted): %d/20 agree", fast));
  return {agree == 20, fmt("cellular A=0.3, sinusoidal: %d/20 triples agree within 2h", agree)};
}

// ---------------------------------------------------------------------------
// Criteria 8 and 9 share one Bernoulli ensemble.

struct BernoulliEnsemble {
  HomogConfig hc;
  TbarEnsemble ens;
  double M = 0.0;
  double seconds = 0.0;
};

BernoulliEnsemble bernoulli_ensemble() {
  BernoulliEnsemble b;
  const FlowFamily family = [](std::uint64_t seed) { return make_bernoulli_tiling(seed); };
  const VelocityField f0 = family(0);
  b.M = f0.M();
  const double sides[] = {1.0, 2.0, 4.0, 8.0};
  b.hc.delta_hat = estimate_flow_bounds(f0, sides).delta_hat;
  b.hc.h = 1.0 / 8.0;
  b.hc.n_seeds = 16;
  b.hc.lambda_ladder = {4.0, 8.0, 16.0};
  b.hc.x0 = Vec2(0.5, 0.5);
  b.hc.master_seed = 2024;
  b.hc.parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  // 32 unit directions resolve Ŵ (an octagon alone sits ≈ 0.07 from a round
  // shape); every fourth one and its double serve the T̄ checks.
  for (const auto& e : unit_directions(32)) b.hc.directions.push_back(e);
  for (const auto& e : unit_directions(8)) b.hc.directions.push_back(2.0 * e);
  Stopwatch sw;
  b.ens = estimate_Tbar(family, b.hc, {10.0, 20.0, 40.0});
  b.seconds = sw.seconds();
  return b;
}

Outcome criterion8(const BernoulliEnsemble& b) {
  const Estimator e = b.hc.estimator;
  int out_of_bounds = 0, not_monotone = 0, flagged = 0;
  double worst_homog = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto& est = b.ens.estimates[4 * k];
    const auto& dbl = b.ens.estimates[32 + k];
    const double v = est.v.norm(), val = est.value(e), ci = est.ci(e);
    const double lo = v / b.M - 3.0 * ci, hi = v / (1.0 - b.hc.delta_hat) + 3.0 * ci;
    out_of_bounds += !(val >= lo && val <= hi);
    not_monotone += !est.paper_means_nonincreasing(1.0);
    flagged += est.flagged + dbl.flagged;
    const double one = est.raw.back().mean, two = dbl.raw.back().mean / 2.0;
    worst_homog = std::max(worst_homog, std::abs(two - one) / one);
    info(fmt("dir %zu: T̄ %.4f ± %.4f in [%.4f, %.4f]; paper means %.4f %.4f %.4f; paper_point %.4f", k, val, ci,
             v / b.M, v / (1.0 - b.hc.delta_hat), est.paper[0].mean, est.paper[1].mean, est.paper[2].mean,
             est.value(Estimator::paper_point)));
  }
  const bool pass = out_of_bounds == 0 && not_monotone == 0 && worst_homog < 0.05 && flagged == 0 &&
                    b.ens.failures.empty() && b.seconds < 1800.0;
  return {pass, fmt("%d/8 outside bounds ± 3CI, %d/8 non-monotone λ-means, T̄(2v)/2 vs T̄(v) worst %.2f%% (< 5%%), "
                    "%d flagged, h = 1/8, 16 seeds in %.0f s (< 1800 s)",
                    out_of_bounds, not_monotone, 100.0 * worst_homog, flagged, b.seconds)};
}

Outcome criterion9(const BernoulliEnsemble& b) {
  const EffectiveShape shape = build_effective_shape(b.ens.estimates, b.hc.estimator);
  const ShapeReport rep = shape_convergence(b.ens, shape, b.hc.x0);
  for (const auto& r : rep.rows)
    info(fmt("seed %016llx: d_H %.4f %.4f %.4f %s", static_cast<unsigned long long>(r.seed), r.dH[0], r.dH[1], r.dH[2],
             r.decreasing ? "" : "(not decreasing)"));
  return {rep.fraction_decreasing >= 0.8,
          fmt("d_H(t⁻¹R_t, Ŵ) decreasing over t = 10, 20, 40 for %.0f%% of %zu seeds (≥ 80%%)",
              100.0 * rep.fraction_decreasing, rep.rows.size())};
}

// ---------------------------------------------------------------------------

InitialData gaussian(double sigma) {
  return InitialData::custom([sigma](const Vec2& x) { return std::exp(-x.squaredNorm() / (sigma * sigma)); },
                             Vec2::Zero(), sigma * std::sqrt(std::log(2.0)), 0.5);
}

Outcome criterion10() {
  const double sigma = 0.5;
  const InitialData u0 = gaussian(sigma);
  const double lip_u0 = std::sqrt(2.0) / sigma * std::exp(-0.5);

  // Constant drift: closed-form T̄.
  const Vec2 c(0.5, 0.0);
  HomogenizedSolution exact;
  exact.u0 = [u0](const Vec2& x) { return u0(x); };
  {
    const auto dirs = unit_directions(64);
    std::vector<double> tb;
    for (const auto& e : dirs) tb.push_back(drift_travel_time(c, e));
    exact.shape = build_effective_shape(dirs, tb);
  }
  CompareConfig cd;
  cd.h = 1.0 / 128.0;
  cd.eps_list = {1.0 / 16.0};
  Stopwatch sw;
  const auto drift = compare_homogenization(make_constant(c), u0, exact, cd);
  const double drift_err = drift.rows.front().sup_err;
  info(fmt("constant drift ε = 1/16: sup error %.4f (h = 1/128, %.1f s)", drift_err, sw.seconds()));

  // Cellular: T̄ estimated on the unit-period flow.  Its uncertainty, taken as
  // the spread between the point and extrapolated estimators, moves W by
  // η = max ΔT̄/T̄² and ū by at most Lip(u₀)·T·η.
  const VelocityField f = make_cellular(0.1, 1.0, TimeModulation::sinusoidal(1.0));
  HomogConfig hc;
  hc.h = 1.0 / 16.0;
  hc.n_seeds = 1;
  hc.directions = unit_directions(32);
  const auto ens = estimate_Tbar([f](std::uint64_t) { return f; }, hc);
  double eta = 0.0;
  for (const auto& est : ens.estimates) {
    const double tb = est.value(Estimator::raw_extrapolated);
    const double spread = std::abs(tb - est.value(Estimator::raw_point));
    eta = std::max(eta, spread / (tb * tb));
  }
  HomogenizedSolution sol;
  sol.u0 = exact.u0;
  sol.shape = build_effective_shape(ens.estimates, Estimator::raw_extrapolated);
  CompareConfig cc;
  cc.h = 1.0 / 256.0;
  cc.eps_list = {0.25, 0.125, 0.0625};
  cc.tolerance = 2.0 * lip_u0 * cc.T * eta;  // both compared errors carry the reference error
  const auto rep = compare_homogenization(f, u0, sol, cc);
  for (const auto& r : rep.rows) info(fmt("cellular A=0.1 ε = %g: sup error %.4f at t = %.2f", r.eps, r.sup_err, r.at_t));
  info(fmt("trend tolerance %.4f from T̄ uncertainty η = %.4f; total %.0f s", cc.tolerance, eta, sw.seconds()));
  return {rep.nonincreasing && drift_err < 0.05,
          fmt("cellular errors %.4f, %.4f, %.4f nonincreasing within %.4f: %s; constant drift at ε = 1/16 %.2f%% (< 5%%)",
              rep.rows[0].sup_err, rep.rows[1].sup_err, rep.rows[2].sup_err, cc.tolerance,
              rep.nonincreasing ? "yes" : "no", 100.0 * drift_err)};
}

Outcome criterion11() {
  const FlowFamily family = [](std::uint64_t seed) { return make_bernoulli_tiling(seed); };
  HomogConfig hc;
  hc.h = 1.0 / 8.0;
  hc.n_seeds = 6;
  hc.lambda_ladder = {2.0, 4.0};
  hc.delta_hat = 0.1;
  hc.master_seed = 99;
  hc.directions = unit_directions(4);
  auto table_text = [&](int parallelism) {
    HomogConfig c = hc;
    c.parallelism = parallelism;
    std::ostringstream os;
    travel_time_table(estimate_Tbar(family, c).samples).write(os);
    return os.str();
  };
  const std::string a = table_text(1), b = table_text(4), again = table_text(1);

  // Replay one row from its own (seed, config).
  const ResultTable t = [&] {
    std::istringstream is(a);
    return ResultTable::read(is);
  }();
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin());
  };
  const auto& row = t.rows.at(5);
  const std::uint64_t seed = std::stoull(row[col("seed")]);
  const Vec2 v(std::stod(row[col("v_x")]), std::stod(row[col("v_y")]));
  const auto smp = travel_time(family(seed), hc.x0, hc.t0, v, hc);
  const bool replay = format_double(smp.tau_raw) == row[col("tau_raw")];

  const bool pass = a == b && a == again && replay;
  return {pass, fmt("sample table identical across parallelism 1/4: %s, across reruns: %s; row replay from seed: %s",
                    a == b ? "yes" : "no", a == again ? "yes" : "no", replay ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (1–11, repeatable)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  log::set_level(log::Level::error);

  auto wanted = [&](int n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };
  std::optional<BallRun> ball;
  std::optional<CellularRun> cell;
  std::optional<BernoulliEnsemble> bern;
  if (wanted(1) || wanted(4)) ball = zero_flow_ball();
  if (wanted(3) || wanted(4)) cell = cellular_volume_run();
  if (wanted(8) || wanted(9)) bern = bernoulli_ensemble();

  int failed = 0;
  auto report = [&](int n, const Outcome& o) {
    std::printf("criterion %2d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  for (int n = 1; n <= 11; ++n) {
    if (!wanted(n)) continue;
    try {
      switch (n) {
        case 1: report(n, criterion1(*ball)); break;
        case 2: report(n, criterion2()); break;
        case 3: report(n, criterion3(*cell)); break;
        case 4: report(n, criterion4(*ball, *cell)); break;
        case 5: report(n, criterion5()); break;
        case 6: report(n, criterion6()); break;
        case 7: report(n, criterion7()); break;
        case 8: report(n, criterion8(*bern)); break;
        case 9: report(n, criterion9(*bern)); break;
        case 10: report(n, criterion10()); break;
        case 11: report(n, criterion11()); break;
      }
    } catch (const std::exception& e) {
      report(n, {false, std::string("error: ") + e.what()});
    }
  }
  return failed;
}
