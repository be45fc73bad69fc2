#include "gfront/homog.hpp"

#include "gfront/log.hpp"

#include <algorithm>
#include <cmath>

namespace gfront {

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::paper_point: return "paper_point";
    case Estimator::paper_inf: return "paper_inf";
    case Estimator::paper_extrapolated: return "paper_extrapolated";
    case Estimator::raw_point: return "raw_point";
    case Estimator::raw_extrapolated: return "raw_extrapolated";
  }
  return "?";
}

Estimator parse_estimator(const std::string& name) {
  for (Estimator e : {Estimator::paper_point, Estimator::paper_inf, Estimator::paper_extrapolated, Estimator::raw_point,
                      Estimator::raw_extrapolated})
    if (to_string(e) == name) return e;
  throw Error("unknown estimator '" + name + "'");
}

void HomogConfig::validate() const {
  if (tau0 < 1) throw Error("homog: tau0 must be a positive integer");
  if (!(delta_hat >= 0.0 && delta_hat < 1.0)) throw Error("homog: delta_hat must lie in [0, 1)");
  if (lambda_ladder.empty()) throw Error("homog: empty lambda ladder");
  for (double l : lambda_ladder)
    if (!(l > 0.0)) throw Error("homog: scales must be positive");
  if (!std::is_sorted(lambda_ladder.begin(), lambda_ladder.end())) throw Error("homog: lambda ladder must be sorted");
  if (n_seeds < 1) throw Error("homog: n_seeds must be >= 1");
  if (!(h > 0.0)) throw Error("homog: h must be positive");
}

// ---------------------------------------------------------------------------

TravelRun travel_times(const VelocityField& f, const std::vector<TravelTarget>& targets, std::uint64_t seed,
                       const HomogConfig& cfg, const std::vector<double>& snapshot_times) {
  cfg.validate();
  if (targets.empty()) throw Error("travel_times: no targets");
  double vmax = 0.0;
  for (const auto& t : targets) vmax = std::max(vmax, t.v.norm());
  TravelRun run;
  run.horizon = cfg.Lambda() * vmax + 2.0 * cfg.tau0 + cfg.horizon_margin;
  double t_final = run.horizon;
  for (double t : snapshot_times) t_final = std::max(t_final, t);

  const InitialData init = InitialData::point_source(cfg.x0, cfg.h);
  const double level = init.default_reach_level();
  const double reach = init.initial_radius(level) + f.M() * t_final + 5.0 * cfg.h;
  const Grid grid = Grid::covering(cfg.x0, reach, cfg.h);

  SolveConfig sc;
  sc.cfl = cfg.cfl;
  sc.t_final = t_final;
  sc.t_start = cfg.t0;
  sc.band = cfg.band;
  sc.crop_snapshots = true;
  sc.snapshot_times = snapshot_times;
  sc.stop_when_probes_reached = true;
  sc.progress_log = false;
  for (const auto& t : targets) sc.probes.push_back(cfg.x0 + t.v);
  for (int n = 0; n <= static_cast<int>(std::floor(run.horizon)); ++n) sc.probe_times.push_back(n);

  log::debug("travel_times: seed ", seed, " grid ", grid.nx, "x", grid.ny, " horizon ", run.horizon);
  ScalarFieldSeries s = evolve(f, init, sc, grid);
  run.reach_level = s.reach_level;
  run.snapshots = std::move(s.snapshots);

  for (std::size_t k = 0; k < targets.size(); ++k) {
    TravelTimeSample smp;
    smp.x0 = cfg.x0;
    smp.t0 = cfg.t0;
    smp.v = targets[k].v;
    smp.lambda = targets[k].lambda;
    smp.direction = targets[k].direction;
    smp.seed = seed;
    const auto& pr = s.probes[k];
    smp.tau_raw = pr.first_crossing;
    for (std::size_t n = 0; n < pr.values.size(); ++n)
      if (pr.values[n] >= s.reach_level) {
        smp.tau_paper = static_cast<double>(n) + cfg.tau0;
        break;
      }
    smp.flagged = !std::isfinite(smp.tau_raw) || !std::isfinite(smp.tau_paper);
    if (smp.flagged) log::error("travel_times: target ", k, " not reached within horizon ", run.horizon, " (seed ", seed, ")");
    run.samples.push_back(smp);
  }
  return run;
}

TravelTimeSample travel_time(const VelocityField& f, const Vec2& x0, double t0, const Vec2& v, const HomogConfig& cfg) {
  HomogConfig c = cfg;
  c.x0 = x0;
  c.t0 = t0;
  return travel_times(f, {TravelTarget{v, 1.0, 0}}, 0, c).samples.front();
}

SubadditivityReport check_subadditivity(const VelocityField& f, const Vec2& x0, double t0, const Vec2& v1,
                                        const Vec2& v2, const HomogConfig& cfg) {
  HomogConfig c = cfg;
  c.x0 = x0;
  c.t0 = t0;
  const auto first = travel_times(f, {TravelTarget{v1, 1.0, 0}, TravelTarget{v1 + v2, 1.0, 1}}, 0, c).samples;
  SubadditivityReport r;
  r.tau1 = first[0].tau_paper;
  r.tau12 = first[1].tau_paper;
  if (!std::isfinite(r.tau1)) throw Error("check_subadditivity: first leg not reached");
  c.x0 = x0 + v1;
  c.t0 = t0 + r.tau1;
  r.tau2 = travel_times(f, {TravelTarget{v2, 1.0, 0}}, 0, c).samples.front().tau_paper;
  r.slack = 2.0 * cfg.h;
  r.ok = r.tau12 <= r.tau1 + r.tau2 + r.slack;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double slope_value(const std::vector<double>& lambdas, const std::vector<Aggregate>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0].mean;
  const double la = lambdas[n - 2], lb = lambdas[n - 1];
  return (lb * a[n - 1].mean - la * a[n - 2].mean) / (lb - la);
}

double slope_ci(const std::vector<double>& lambdas, const std::vector<Aggregate>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0].stderr_mean();
  const double la = lambdas[n - 2], lb = lambdas[n - 1];
  const double sa = a[n - 2].stderr_mean(), sb = a[n - 1].stderr_mean();
  return std::sqrt(lb * lb * sb * sb + la * la * sa * sa) / (lb - la);
}

}  // namespace

double TbarEstimate::value(Estimator e) const {
  if (paper.empty()) return std::numeric_limits<double>::quiet_NaN();
  switch (e) {
    case Estimator::paper_point: return paper.back().mean;
    case Estimator::paper_inf: {
      double m = kInf;
      for (const auto& a : paper) m = std::min(m, a.mean);
      return m;
    }
    case Estimator::paper_extrapolated: return slope_value(lambdas, paper);
    case Estimator::raw_point: return raw.back().mean;
    case Estimator::raw_extrapolated: return slope_value(lambdas, raw);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double TbarEstimate::ci(Estimator e) const {
  if (paper.empty()) return std::numeric_limits<double>::quiet_NaN();
  switch (e) {
    case Estimator::paper_point: return paper.back().stderr_mean();
    case Estimator::paper_inf: {
      std::size_t k = 0;
      for (std::size_t i = 1; i < paper.size(); ++i)
        if (paper[i].mean < paper[k].mean) k = i;
      return paper[k].stderr_mean();
    }
    case Estimator::paper_extrapolated: return slope_ci(lambdas, paper);
    case Estimator::raw_point: return raw.back().stderr_mean();
    case Estimator::raw_extrapolated: return slope_ci(lambdas, raw);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool TbarEstimate::paper_means_nonincreasing(double k) const {
  for (std::size_t i = 1; i < paper.size(); ++i) {
    const double se = std::hypot(paper[i].stderr_mean(), paper[i - 1].stderr_mean());
    if (paper[i].mean > paper[i - 1].mean + k * se) return false;
  }
  return true;
}

TbarEnsemble estimate_Tbar(const FlowFamily& family, const HomogConfig& cfg, const std::vector<double>& shape_times) {
  cfg.validate();
  if (cfg.directions.empty()) throw Error("estimate_Tbar: no directions");
  if (!(cfg.delta_hat < 1.0)) throw Error("estimate_Tbar: needs delta_hat < 1");

  struct SeedJob {
    std::size_t index;
    std::uint64_t seed;
  };
  struct SeedResult {
    std::vector<TravelTimeSample> samples;
    std::vector<NodeMask> masks;
  };
  std::vector<SeedJob> jobs;
  for (int k = 0; k < cfg.n_seeds; ++k)
    jobs.push_back({static_cast<std::size_t>(k), derive_seed(cfg.master_seed, static_cast<std::uint64_t>(k))});
  duplicate_seeds(jobs);

  std::vector<TravelTarget> targets;
  for (std::size_t d = 0; d < cfg.directions.size(); ++d)
    for (double l : cfg.lambda_ladder) targets.push_back({l * cfg.directions[d], l, d});

  auto outcomes = run_ensemble(jobs, cfg.parallelism, [&](const SeedJob& job) {
    const VelocityField f = family(job.seed);
    TravelRun run = travel_times(f, targets, job.seed, cfg, shape_times);
    SeedResult r;
    r.samples = std::move(run.samples);
    for (const auto& snap : run.snapshots) r.masks.push_back(NodeMask::threshold(snap, run.reach_level));
    log::info("estimate_Tbar: seed ", job.index, " done");
    return r;
  });

  TbarEnsemble ens;
  ens.shape_times = shape_times;
  ens.estimates.resize(cfg.directions.size());
  for (std::size_t d = 0; d < cfg.directions.size(); ++d) {
    auto& e = ens.estimates[d];
    e.v = cfg.directions[d];
    e.lambdas = cfg.lambda_ladder;
    e.paper.resize(cfg.lambda_ladder.size());
    e.raw.resize(cfg.lambda_ladder.size());
  }
  for (auto& o : outcomes) {
    if (!o.ok) {
      ens.failures.push_back("seed " + std::to_string(o.seed) + ": " + o.diagnostic);
      continue;
    }
    ens.seeds.push_back(o.seed);
    ens.masks.push_back(std::move(o.value.masks));
    for (const auto& s : o.value.samples) {
      ens.samples.push_back(s);
      auto& e = ens.estimates[s.direction];
      if (s.flagged) {
        ++e.flagged;
        continue;
      }
      const auto li = static_cast<std::size_t>(
          std::find(cfg.lambda_ladder.begin(), cfg.lambda_ladder.end(), s.lambda) - cfg.lambda_ladder.begin());
      e.paper[li].add(s.tau_paper / s.lambda);
      e.raw[li].add(s.tau_raw / s.lambda);
    }
  }
  return ens;
}

TbarEstimate estimate_Tbar(const FlowFamily& family, const Vec2& direction, const HomogConfig& cfg) {
  HomogConfig c = cfg;
  c.directions = {direction};
  auto ens = estimate_Tbar(family, c);
  if (ens.estimates.front().flagged > 0)
    throw Error("estimate_Tbar: " + std::to_string(ens.estimates.front().flagged) + " unreached targets");
  return ens.estimates.front();
}

// ---------------------------------------------------------------------------

double EffectiveShape::H(const Vec2& p) const { return geom::support(W, p); }

bool EffectiveShape::origin_interior() const { return geom::inside_convex(W, Vec2::Zero(), -1e-12); }

double EffectiveShape::gauge(const Vec2& v) const {
  if (v.squaredNorm() == 0.0) return 0.0;
  double g = 0.0;
  for (std::size_t i = 0, n = W.size(); i < n; ++i) {
    const Vec2 a = W[i], b = W[(i + 1) % n];
    Vec2 nrm(b.y() - a.y(), a.x() - b.x());
    nrm.normalize();
    const double d = nrm.dot(a);
    const double p = nrm.dot(v);
    if (d <= 1e-14) {
      if (p > 0.0) return kInf;
      continue;
    }
    g = std::max(g, p / d);
  }
  return g;
}

EffectiveShape build_effective_shape(const std::vector<Vec2>& directions, const std::vector<double>& Tbar,
                                     const std::vector<double>& ci) {
  if (directions.size() != Tbar.size()) throw Error("build_effective_shape: size mismatch");
  if (directions.size() < 8) throw Error("build_effective_shape: need at least 8 directions");
  EffectiveShape s;
  s.directions = directions;
  s.Tbar = Tbar;
  s.ci = ci.empty() ? std::vector<double>(Tbar.size(), 0.0) : ci;
  std::vector<Vec2> pts{Vec2::Zero()};
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (!(Tbar[i] > 0.0) || !std::isfinite(Tbar[i])) throw Error("build_effective_shape: nonpositive T̄");
    s.raw_points.push_back(directions[i] / Tbar[i]);
    pts.push_back(s.raw_points.back());
  }
  s.W = geom::convex_hull(pts);
  for (const auto& p : s.raw_points) {
    double d = kInf;
    for (std::size_t i = 0, n = s.W.size(); i < n; ++i)
      d = std::min(d, geom::point_segment_distance(p, s.W[i], s.W[(i + 1) % n]));
    if (d > 1e-12) s.convexified = true;
    s.max_hull_gap = std::max(s.max_hull_gap, d);
  }
  if (s.convexified) log::info("build_effective_shape: raw directional data convexified, max gap ", s.max_hull_gap);
  return s;
}

EffectiveShape build_effective_shape(const std::vector<TbarEstimate>& estimates, Estimator e) {
  std::vector<Vec2> dirs;
  std::vector<double> tb, ci;
  for (const auto& est : estimates) {
    if (std::abs(est.v.norm() - 1.0) > 1e-12) continue;
    dirs.push_back(est.v);
    tb.push_back(est.value(e));
    ci.push_back(est.ci(e));
  }
  return build_effective_shape(dirs, tb, ci);
}

// ---------------------------------------------------------------------------

double hopf_lax(const HomogenizedSolution& sol, double t, const Vec2& x, const HopfLaxOptions& opts) {
  if (!sol.u0) throw Error("hopf_lax: missing u0");
  if (t <= 0.0) return sol.u0(x);
  const auto& W = sol.shape.W;
  double best = sol.u0(x);  // 0 ∈ W
  Vec2 best_w = Vec2::Zero();
  auto consider = [&](const Vec2& w) {
    const double v = sol.u0(x - t * w);
    if (v > best) {
      best = v;
      best_w = w;
    }
  };
  const double per = geom::perimeter(W);
  for (std::size_t i = 0, n = W.size(); i < n; ++i) {
    const Vec2 a = W[i], b = W[(i + 1) % n];
    const int m = std::max(1, static_cast<int>(std::ceil(opts.boundary_points * (b - a).norm() / per)));
    for (int k = 0; k < m; ++k) consider(a + (b - a) * (static_cast<double>(k) / m));
  }
  Vec2 lo = W.front(), hi = W.front();
  for (const auto& p : W) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 step = (hi - lo) / opts.lattice;
  for (int j = 0; j <= opts.lattice; ++j)
    for (int i = 0; i <= opts.lattice; ++i) {
      const Vec2 w = lo + Vec2(i * step.x(), j * step.y());
      if (geom::inside_convex(W, w)) consider(w);
    }
  // one refinement pass around the best sample
  const Vec2 c = best_w;
  for (int j = 0; j <= opts.refine; ++j)
    for (int i = 0; i <= opts.refine; ++i) {
      const Vec2 w = c + Vec2((2.0 * i / opts.refine - 1.0) * step.x(), (2.0 * j / opts.refine - 1.0) * step.y());
      if (geom::inside_convex(W, w)) consider(w);
    }
  return best;
}

CompareReport compare_homogenization(const VelocityField& f, const InitialData& u0, const HomogenizedSolution& sol,
                                     const CompareConfig& cfg) {
  if (cfg.eps_list.empty()) throw Error("compare_homogenization: empty eps list");
  for (std::size_t k = 1; k < cfg.eps_list.size(); ++k)
    if (!(cfg.eps_list[k] < cfg.eps_list[k - 1])) throw Error("compare_homogenization: eps list must decrease");
  CompareReport rep;
  const Grid grid = Grid::covering(Vec2::Zero(), cfg.R + f.M() * cfg.T + 5.0 * cfg.h, cfg.h);
  std::vector<double> times;
  for (int k = 1; k <= cfg.time_samples; ++k) times.push_back(cfg.T * k / cfg.time_samples);
  std::vector<Vec2> xs;
  const int n = cfg.space_samples;
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i)
      if (i * i + j * j <= n * n) xs.push_back(cfg.R * Vec2(i, j) / n);

  // ū does not depend on ε
  std::vector<std::vector<double>> ubar(times.size());
  for (std::size_t a = 0; a < times.size(); ++a)
    for (const auto& x : xs) ubar[a].push_back(hopf_lax(sol, times[a], x, cfg.hopf_lax));

  for (double eps : cfg.eps_list) {
    SolveConfig sc;
    sc.cfl = cfg.cfl;
    sc.t_final = cfg.T;
    sc.snapshot_times = times;
    sc.progress_log = false;
    const auto series = solve_scaled(f, eps, u0, sc, grid);
    CompareRow row;
    row.eps = eps;
    for (std::size_t a = 0; a < times.size(); ++a) {
      const ScalarField* snap = series.snapshot_at(times[a]);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double err = std::abs(interpolate(*snap, xs[k]) - ubar[a][k]);
        if (err > row.sup_err) {
          row.sup_err = err;
          row.at_t = times[a];
          row.at_x = xs[k];
        }
      }
    }
    log::info("compare_homogenization: eps ", eps, " sup_err ", row.sup_err);
    rep.rows.push_back(row);
  }
  rep.nonincreasing = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k)
    if (rep.rows[k].sup_err > rep.rows[k - 1].sup_err + cfg.tolerance) rep.nonincreasing = false;
  return rep;
}

ShapeReport shape_convergence(const TbarEnsemble& ens, const EffectiveShape& shape, const Vec2& x0) {
  ShapeReport rep;
  int decreasing = 0;
  for (std::size_t s = 0; s < ens.masks.size(); ++s) {
    ShapeRow row;
    row.seed = ens.seeds[s];
    for (std::size_t k = 0; k < ens.masks[s].size() && k < ens.shape_times.size(); ++k) {
      const double t = ens.shape_times[k];
      NodeMask m = ens.masks[s][k];
      m.grid.origin -= x0;
      row.t.push_back(t);
      row.dH.push_back(hausdorff_distance(m.scaled(1.0 / t), shape.W));
    }
    row.decreasing = row.dH.size() >= 2;
    for (std::size_t k = 1; k < row.dH.size(); ++k)
      if (!(row.dH[k] < row.dH[k - 1])) row.decreasing = false;
    decreasing += row.decreasing;
    rep.rows.push_back(row);
  }
  rep.fraction_decreasing = rep.rows.empty() ? 0.0 : static_cast<double>(decreasing) / rep.rows.size();
  return rep;
}

ResultTable travel_time_table(const std::vector<TravelTimeSample>& samples) {
  ResultTable t;
  t.columns = {"seed", "direction", "lambda", "x0_x", "x0_y", "t0", "v_x", "v_y", "tau_raw", "tau_paper", "flagged"};
  for (const auto& s : samples)
    t.add_row({std::to_string(s.seed), std::to_string(s.direction), format_double(s.lambda), format_double(s.x0.x()),
               format_double(s.x0.y()), format_double(s.t0), format_double(s.v.x()), format_double(s.v.y()),
               format_double(s.tau_raw), format_double(s.tau_paper), s.flagged ? "1" : "0"});
  return t;
}

}  // namespace gfront
