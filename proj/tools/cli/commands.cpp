#include "cli/commands.hpp"

#include "gfront/log.hpp"
#include "gfront/reach.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#ifndef GFRONT_VERSION
#define GFRONT_VERSION "0.0.0"
#endif

namespace gfront::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void add_flow_keys(KeyTable& t) {
  t.add({"flow.kind", ValueType::choice, "zero", {"zero", "constant", "cellular", "shear", "bernoulli"}, "velocity field"});
  t.add({"flow.drift", ValueType::vec2, "0.5,0", {}, "constant: the velocity c"});
  t.add({"flow.amplitude", ValueType::real, "", {}, "cellular/shear/bernoulli amplitude (default 2, 1, 0.2)"});
  t.add({"flow.period", ValueType::real, "1", {}, "cellular/shear spatial period"});
  t.add({"flow.modulation", ValueType::choice, "steady", {"steady", "sinusoidal"}, "time factor m(t)"});
  t.add({"flow.frequency", ValueType::real, "1", {}, "sinusoidal: m(t) = cos(2π f t)"});
  t.add({"flow.seed", ValueType::u64, "", {}, "bernoulli realization (default: derived from the master seed)"});
}

void add_homog_keys(KeyTable& t) {
  t.add({"homog.tau0", ValueType::integer, "2", {}, "integer start offset τ₀"});
  t.add({"homog.delta_hat", ValueType::real, "", {}, "mean-drift bound Δ (default: estimated)"});
  t.add({"homog.lambdas", ValueType::real_list, "4,8,16", {}, "scale ladder"});
  t.add({"homog.n_seeds", ValueType::integer, "16", {}, "realizations"});
  t.add({"homog.directions", ValueType::integer, "8", {}, "unit directions, evenly spaced from e₁"});
  t.add({"homog.targets", ValueType::vec2_list, "", {}, "explicit offsets v (replaces homog.directions)"});
  t.add({"homog.x0", ValueType::vec2, "0,0", {}, "start point"});
  t.add({"homog.t0", ValueType::real, "0", {}, "start time"});
  t.add({"homog.h", ValueType::real, "0.125", {}, "grid spacing"});
  t.add({"homog.cfl", ValueType::real, "0.5", {}, "CFL number"});
  t.add({"homog.band", ValueType::real, "0.49", {}, "clamp band below the reach level"});
  t.add({"homog.horizon_margin", ValueType::real, "1", {}, "extra solve time"});
  t.add({"homog.estimator", ValueType::choice, "raw_extrapolated",
         {"paper_point", "paper_inf", "paper_extrapolated", "raw_point", "raw_extrapolated"}, "T̄ estimator"});
}

std::vector<Vec2> even_directions(int n) {
  std::vector<Vec2> d;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    d.emplace_back(std::cos(a), std::sin(a));
  }
  return d;
}

std::string vec_text(const Vec2& v) { return format_double(v.x()) + "," + format_double(v.y()); }

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

struct RunDir {
  fs::path root;

  RunDir(const std::string& out, const ConfigFile& file, const Config& cfg) : root(out) {
    if (out.empty()) throw ConfigError("--out is required");
    fs::create_directories(root);
    write("config.txt", file.text);
    write("resolved.cfg", cfg.resolved_text());
  }
  std::string path(const std::string& name) const { return (root / name).string(); }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream os(path(name), std::ios::binary);
    if (!os) throw Error("cannot write " + path(name));
    os << content;
  }
};

void write_manifest(const RunDir& dir, const std::string& command, const Config& cfg, const RunOptions& opts,
                    const std::vector<std::uint64_t>& seeds, int exit_code, json extra = json::object()) {
  json m;
  m["tool"] = "gfront";
  m["version"] = GFRONT_VERSION;
  m["command"] = command;
  m["master_seed"] = std::to_string(opts.master_seed);
  m["parallelism"] = opts.parallelism;
  json s = json::array();
  for (auto v : seeds) s.push_back(std::to_string(v));
  m["seeds"] = s;
  m["config"] = cfg.values();
  m["exit_code"] = exit_code;
  m["results"] = std::move(extra);
  dir.write("manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

InitialData make_initial(const Config& cfg, double h) {
  const std::string kind = cfg.text("init.kind");
  const Vec2 c = cfg.vec2("init.center");
  if (kind == "point") return InitialData::point_source(c, h);
  if (kind == "exp_cone")
    return InitialData::exp_cone(cfg.has("init.eps") ? cfg.real("init.eps") : 2.0 * h, c, cfg.real("init.plateau"));
  if (kind == "disk") return InitialData::signed_profile(cfg.real("init.radius"), c);
  const double sigma = cfg.real("init.sigma");
  if (!(sigma > 0.0)) throw ConfigError("init.sigma must be positive");
  return InitialData::custom([c, sigma](const Vec2& x) { return std::exp(-(x - c).squaredNorm() / (sigma * sigma)); },
                             c, sigma * std::sqrt(std::log(2.0)), 0.5);
}

int cmd_simulate(const ConfigFile& file, const RunOptions& opts) {
  const KeyTable table = key_table("simulate");
  Config cfg(file, table);
  if (!cfg.has("flow.seed")) cfg.set("flow.seed", std::to_string(derive_seed(opts.master_seed, 0)));
  const VelocityField f = make_flow(cfg, cfg.u64("flow.seed"));
  const double h = cfg.real("grid.h");
  if (!(h > 0.0)) throw ConfigError("grid.h must be positive");
  const InitialData init = make_initial(cfg, h);

  SolveConfig sc;
  sc.cfl = cfg.real("solve.cfl");
  sc.t_final = cfg.real("solve.t_final");
  sc.t_start = cfg.real("solve.t_start");
  sc.band = cfg.real("solve.band");
  sc.rk_stages = static_cast<int>(cfg.integer("solve.rk_stages"));
  sc.progress_log = log::level() != log::Level::error;
  if (cfg.has("solve.reach_level")) sc.reach_level = cfg.real("solve.reach_level");
  if (!cfg.has("solve.snapshots")) cfg.set("solve.snapshots", format_double(sc.t_final));
  sc.snapshot_times = cfg.real_list("solve.snapshots");
  const double level = sc.reach_level.value_or(init.default_reach_level());
  if (!cfg.has("grid.radius"))
    cfg.set("grid.radius", format_double(init.initial_radius(level) + f.M() * sc.t_final + 5.0 * h));
  const Grid grid = Grid::covering(init.center, cfg.real("grid.radius"), h);

  CubeWindow win{cfg.real("measure.r"), cfg.vec2("measure.center")};
  if (!cfg.has("measure.times")) cfg.set("measure.times", cfg.text("solve.snapshots"));
  std::vector<double> times = cfg.real_list("measure.times");
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("measure.times must be sorted");
  // The solve starts at the head start; earlier sets are not computed.
  for (double& t : times) t = std::max(t, init.head_start);
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const int sub = static_cast<int>(cfg.integer("measure.substeps"));
  if (sub < 1) throw ConfigError("measure.substeps must be >= 1");
  std::vector<double> fine;
  for (std::size_t k = 0; k < times.size(); ++k) {
    fine.push_back(times[k]);
    if (k + 1 < times.size())
      for (int s = 1; s < sub; ++s) fine.push_back(times[k] + (times[k + 1] - times[k]) * s / sub);
  }
  std::vector<ReachMeasurement> samples;
  sc.observe_times = fine;
  sc.observer = measurement_observer(samples, level, win, &f, sc.t_start);

  RunDir dir(opts.out_dir, file, cfg);
  const ScalarFieldSeries series = evolve(f, init, sc, grid);
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.t < b.t; });

  json results;
  int exit_code = kExitOk;
  const double side = win.bounded() ? 2.0 * win.r : std::max(grid.nx, grid.ny) * h;
  {
    std::ofstream os(dir.path("measurements.csv"));
    if (times.size() >= 3) {
      const auto rep = check_volume_growth(samples, times, h, side, cfg.real("measure.c_tol"));
      os << kResultsHeader << '\n';
      write_csv(os, rep);
      results["volume_growth_violations"] = rep.violations;
      results["volume_growth_worst_margin"] = rep.worst_margin;
      if (rep.violations > 0) exit_code = kExitCheckFailed;
    } else {
      VolumeGrowthReport rep;
      for (double t : times)
        for (const auto& m : samples)
          if (std::abs(m.t - t) <= 1e-9) rep.rows.push_back({m});
      os << kResultsHeader << '\n';
      write_csv(os, rep);
    }
  }
  {
    const auto iso = check_isoperimetric(series, times, win.bounded() ? std::optional<CubeWindow>(win) : std::nullopt);
    ResultTable t;
    t.columns = {"t", "w", "s", "bound", "ratio", "slack", "violated", "relative_ratio"};
    for (const auto& r : iso.rows)
      t.add_row({format_double(r.t), format_double(r.w), format_double(r.s), format_double(r.bound),
                 format_double(r.ratio), format_double(r.slack), r.violated ? "1" : "0", format_double(r.relative_ratio)});
    t.write(dir.path("isoperimetric.csv"));
    results["isoperimetric_violations"] = iso.violations;
    results["isoperimetric_min_ratio"] = iso.min_ratio;
    if (iso.violations > 0) exit_code = kExitCheckFailed;
  }
  if (win.bounded()) {
    const auto fill = filling_diagnostic(series, win, f.M());
    ResultTable t;
    t.columns = {"t", "fill_fraction"};
    for (const auto& [tt, ff] : fill.curve) t.add_row({format_double(tt), format_double(ff)});
    t.write(dir.path("filling.csv"));
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    results["filling"] = {{"alpha", fill.alpha}, {"T0", fill.T0}, {"t_alpha", opt(fill.t_alpha)},
                          {"t_one_minus_alpha", opt(fill.t_one_minus_alpha)}, {"t_half_covered", opt(fill.t_half_covered)}};
  }
  if (cfg.boolean("output.snapshots")) {
    fs::create_directories(dir.root / "snapshots");
    for (std::size_t k = 0; k < series.snapshots.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "snapshots/u_%04zu.gfront1", k);
      write_snapshot(dir.path(name), series.snapshots[k]);
    }
    write_snapshot(dir.path("arrival.gfront1"), series.arrival_time);
  }
  results["steps"] = series.steps;
  results["head_start"] = init.head_start;
  results["max_overshoot"] = series.max_overshoot;
  write_manifest(dir, "simulate", cfg, opts, {cfg.u64("flow.seed")}, exit_code, results);
  std::cout << "simulate: " << series.steps << " steps, results in " << dir.root.string() << '\n';
  return exit_code;
}

// ---------------------------------------------------------------------------

double resolve_delta_hat(Config& cfg, const RunOptions& opts) {
  if (!cfg.has("homog.delta_hat")) {
    Config probe = cfg;
    const VelocityField f = make_flow(probe, derive_seed(opts.master_seed, 0));
    const double sides[] = {1.0, 2.0, 4.0, 8.0, 16.0};
    const double d = estimate_flow_bounds(f, sides).delta_hat;
    if (!(d < 1.0)) throw ConfigError("estimated mean drift " + format_double(d) + " is not below 1; set homog.delta_hat");
    cfg.set("homog.delta_hat", format_double(d));
  }
  return cfg.real("homog.delta_hat");
}

int cmd_travel(const std::string& command, const ConfigFile& file, const RunOptions& opts) {
  const KeyTable table = key_table(command);
  Config cfg(file, table);
  if (cfg.has("flow.seed")) throw ConfigError("flow.seed is not used by " + command + "; seeds derive from --master-seed");
  resolve_delta_hat(cfg, opts);
  const HomogConfig hc = make_homog_config(cfg, opts);
  const FlowFamily family = make_flow_family(cfg);
  RunDir dir(opts.out_dir, file, cfg);

  const TbarEnsemble ens = estimate_Tbar(family, hc);
  travel_time_table(ens.samples).write(dir.path("samples.csv"));
  int flagged = 0;
  for (const auto& s : ens.samples) flagged += s.flagged;
  json results;
  results["samples"] = ens.samples.size();
  results["flagged"] = flagged;
  results["failures"] = ens.failures;
  int exit_code = ens.failures.empty() ? kExitOk : kExitCheckFailed;

  if (command == "homogenize") {
    Config probe = cfg;
    const VelocityField f0 = make_flow(probe, derive_seed(opts.master_seed, 0));
    const double M = f0.M();
    ResultTable tb;
    tb.columns = {"direction", "v_x", "v_y", "estimator", "tbar", "ci", "lower", "upper", "paper_point", "paper_inf",
                  "paper_extrapolated", "raw_point", "raw_extrapolated", "flagged", "within_bounds"};
    json dirs = json::array();
    bool bounds_ok = true;
    for (std::size_t k = 0; k < ens.estimates.size(); ++k) {
      const auto& e = ens.estimates[k];
      const double v = e.v.norm();
      const double val = e.value(hc.estimator), ci = e.ci(hc.estimator);
      const double lo = v / M, hi = v / (1.0 - hc.delta_hat);
      const bool ok = val >= lo - 3.0 * ci && val <= hi + 3.0 * ci;
      bounds_ok = bounds_ok && ok;
      tb.add_row({std::to_string(k), format_double(e.v.x()), format_double(e.v.y()), to_string(hc.estimator),
                  format_double(val), format_double(ci), format_double(lo), format_double(hi),
                  format_double(e.value(Estimator::paper_point)), format_double(e.value(Estimator::paper_inf)),
                  format_double(e.value(Estimator::paper_extrapolated)), format_double(e.value(Estimator::raw_point)),
                  format_double(e.value(Estimator::raw_extrapolated)), std::to_string(e.flagged), ok ? "1" : "0"});
      dirs.push_back({{"v", vec_json(e.v)}, {"tbar", val}, {"ci", ci}, {"lower", lo}, {"upper", hi},
                      {"within_bounds", ok}, {"flagged", e.flagged}});
    }
    tb.write(dir.path("tbar.csv"));

    const EffectiveShape shape = build_effective_shape(ens.estimates, hc.estimator);
    json W = json::array();
    for (const auto& p : shape.W) W.push_back(vec_json(p));
    json H = json::array();
    for (const auto& p : even_directions(16)) H.push_back({{"p", vec_json(p)}, {"H", shape.H(p)}});
    json js;
    js["schema"] = "gfront-effective-shape v1";
    js["flow"] = cfg.text("flow.kind");
    js["estimator"] = to_string(hc.estimator);
    js["M"] = M;
    js["delta_hat"] = hc.delta_hat;
    js["n_seeds"] = hc.n_seeds;
    js["lambdas"] = hc.lambda_ladder;
    js["directions"] = dirs;
    js["W"] = W;
    js["convexified"] = shape.convexified;
    js["max_hull_gap"] = shape.max_hull_gap;
    js["origin_interior"] = shape.origin_interior();
    js["H"] = H;
    js["bounds_ok"] = bounds_ok;
    dir.write("shape.json", js.dump(2) + "\n");
    results["bounds_ok"] = bounds_ok;
    if (!bounds_ok) exit_code = kExitCheckFailed;
  }
  write_manifest(dir, command, cfg, opts, ens.seeds, exit_code, results);
  std::cout << command << ": " << ens.samples.size() << " samples, " << flagged << " flagged, "
            << ens.failures.size() << " failed jobs\n";
  return exit_code;
}

// ---------------------------------------------------------------------------

int cmd_compare(const ConfigFile& file, const RunOptions& opts) {
  const KeyTable table = key_table("compare");
  Config cfg(file, table);
  if (!cfg.has("flow.seed")) cfg.set("flow.seed", std::to_string(derive_seed(opts.master_seed, 0)));
  const VelocityField f = make_flow(cfg, cfg.u64("flow.seed"));

  CompareConfig cc;
  cc.eps_list = cfg.real_list("compare.eps");
  cc.T = cfg.real("compare.T");
  cc.R = cfg.real("compare.R");
  cc.h = cfg.real("compare.h");
  cc.cfl = cfg.real("compare.cfl");
  cc.time_samples = static_cast<int>(cfg.integer("compare.time_samples"));
  cc.space_samples = static_cast<int>(cfg.integer("compare.space_samples"));
  cc.tolerance = cfg.real("compare.tolerance");

  const double scale = cfg.real("compare.u0_scale");
  if (!(scale > 0.0)) throw ConfigError("compare.u0_scale must be positive");
  InitialData u0 = cfg.text("compare.u0") == "gaussian"
                       ? InitialData::custom([scale](const Vec2& x) { return std::exp(-x.squaredNorm() / (scale * scale)); },
                                             Vec2::Zero(), scale * std::sqrt(std::log(2.0)), 0.5)
                       : InitialData::exp_cone(scale);
  HomogenizedSolution sol;
  sol.u0 = [u0](const Vec2& x) { return u0(x); };

  const int nd = static_cast<int>(cfg.integer("compare.shape_directions"));
  std::vector<std::uint64_t> seeds{cfg.u64("flow.seed")};
  json results;
  if (cfg.text("compare.shape") == "closed_form") {
    const std::string kind = cfg.text("flow.kind");
    if (kind != "zero" && kind != "constant") throw ConfigError("compare.shape = closed_form needs flow.kind zero or constant");
    const Vec2 c = kind == "constant" ? cfg.vec2("flow.drift") : Vec2::Zero();
    if (!(c.norm() < 1.0)) throw ConfigError("closed-form shape needs |flow.drift| < 1");
    std::vector<Vec2> dirs = even_directions(nd);
    std::vector<double> tb;
    for (const auto& e : dirs) {
      const double vc = e.dot(c), cc2 = c.squaredNorm();
      tb.push_back((-vc + std::sqrt(vc * vc + (1.0 - cc2))) / (1.0 - cc2));
    }
    sol.shape = build_effective_shape(dirs, tb);
  } else {
    resolve_delta_hat(cfg, opts);
    Config hcfg = cfg;
    hcfg.set("homog.directions", std::to_string(nd));
    HomogConfig hc = make_homog_config(hcfg, opts);
    FlowFamily family = cfg.text("flow.kind") == "bernoulli" ? make_flow_family(cfg)
                                                              : FlowFamily([f](std::uint64_t) { return f; });
    const TbarEnsemble ens = estimate_Tbar(family, hc);
    if (!ens.failures.empty()) throw Error("compare: T̄ estimation failed: " + ens.failures.front());
    sol.shape = build_effective_shape(ens.estimates, hc.estimator);
    seeds = ens.seeds;
  }
  RunDir dir(opts.out_dir, file, cfg);
  const CompareReport rep = compare_homogenization(f, u0, sol, cc);

  ResultTable t;
  t.columns = {"eps", "sup_err", "at_t", "at_x", "at_y"};
  for (const auto& r : rep.rows)
    t.add_row({format_double(r.eps), format_double(r.sup_err), format_double(r.at_t), format_double(r.at_x.x()),
               format_double(r.at_x.y())});
  t.write(dir.path("compare.csv"));
  results["nonincreasing"] = rep.nonincreasing;
  const int exit_code = rep.nonincreasing ? kExitOk : kExitCheckFailed;
  write_manifest(dir, "compare", cfg, opts, seeds, exit_code, results);
  std::cout << "compare: nonincreasing=" << (rep.nonincreasing ? "true" : "false") << '\n';
  return exit_code;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "traveltime", "homogenize", "compare"};
  return names;
}

KeyTable key_table(const std::string& command) {
  KeyTable t;
  add_flow_keys(t);
  if (command == "simulate") {
    t.add({"grid.h", ValueType::real, "0.015625", {}, "grid spacing"});
    t.add({"grid.radius", ValueType::real, "", {}, "half-side of the square grid around init.center (default: containment radius)"});
    t.add({"init.kind", ValueType::choice, "point", {"point", "exp_cone", "disk", "gaussian"}, "initial data"});
    t.add({"init.center", ValueType::vec2, "0,0", {}, "center"});
    t.add({"init.eps", ValueType::real, "", {}, "exp_cone scale (default 2h)"});
    t.add({"init.plateau", ValueType::real, "0", {}, "exp_cone plateau radius"});
    t.add({"init.radius", ValueType::real, "0.25", {}, "disk radius"});
    t.add({"init.sigma", ValueType::real, "0.5", {}, "gaussian width"});
    t.add({"solve.cfl", ValueType::real, "0.5", {}, "CFL number"});
    t.add({"solve.t_final", ValueType::real, "1", {}, "elapsed-time horizon"});
    t.add({"solve.t_start", ValueType::real, "0", {}, "flow time at the start"});
    t.add({"solve.snapshots", ValueType::real_list, "", {}, "snapshot times (default: t_final)"});
    t.add({"solve.reach_level", ValueType::real, "", {}, "threshold defining the reachable set"});
    t.add({"solve.band", ValueType::real, "inf", {}, "clamp band below the reach level"});
    t.add({"solve.rk_stages", ValueType::choice, "2", {"1", "2"}, "forward Euler or TVD-RK2"});
    t.add({"measure.r", ValueType::real, "1", {}, "window half-side (inf: whole grid)"});
    t.add({"measure.center", ValueType::vec2, "0,0", {}, "window center"});
    t.add({"measure.times", ValueType::real_list, "", {}, "measurement times (default: snapshots)"});
    t.add({"measure.substeps", ValueType::integer, "10", {}, "quadrature samples per interval"});
    t.add({"measure.c_tol", ValueType::real, format_double(kVolumeGrowthCtol), {}, "volume-growth slack constant"});
    t.add({"output.snapshots", ValueType::boolean, "true", {}, "write GFRONT1 snapshots"});
  } else if (command == "traveltime" || command == "homogenize") {
    add_homog_keys(t);
  } else if (command == "compare") {
    add_homog_keys(t);
    t.add({"compare.eps", ValueType::real_list, "0.25,0.125,0.0625", {}, "decreasing ε list"});
    t.add({"compare.T", ValueType::real, "1", {}, "time horizon"});
    t.add({"compare.R", ValueType::real, "1", {}, "ball radius"});
    t.add({"compare.h", ValueType::real, "0.00390625", {}, "grid spacing"});
    t.add({"compare.cfl", ValueType::real, "0.5", {}, "CFL number"});
    t.add({"compare.time_samples", ValueType::integer, "4", {}, "probe times"});
    t.add({"compare.space_samples", ValueType::integer, "16", {}, "lattice points per radius"});
    t.add({"compare.tolerance", ValueType::real, "0", {}, "trend slack"});
    t.add({"compare.u0", ValueType::choice, "gaussian", {"gaussian", "exp_cone"}, "initial data"});
    t.add({"compare.u0_scale", ValueType::real, "0.5", {}, "gaussian width or cone scale"});
    t.add({"compare.shape", ValueType::choice, "estimated", {"estimated", "closed_form"}, "source of T̄"});
    t.add({"compare.shape_directions", ValueType::integer, "32", {}, "directions for the effective shape"});
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return t;
}

VelocityField make_flow(Config& cfg, std::uint64_t seed) {
  const std::string kind = cfg.text("flow.kind");
  if (!cfg.has("flow.amplitude"))
    cfg.set("flow.amplitude", kind == "cellular" ? "2" : kind == "bernoulli" ? format_double(BumpBlock{}.amplitude) : "1");
  const double A = cfg.real("flow.amplitude");
  const TimeModulation m = cfg.text("flow.modulation") == "steady" ? TimeModulation::steady()
                                                                     : TimeModulation::sinusoidal(cfg.real("flow.frequency"));
  try {
    if (kind == "zero") return make_zero();
    if (kind == "constant") return make_constant(cfg.vec2("flow.drift"));
    if (kind == "cellular") return make_cellular(A, cfg.real("flow.period"), m);
    if (kind == "shear") return make_shear(A, cfg.real("flow.period"), m);
    return make_bernoulli_tiling(seed, A);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

FlowFamily make_flow_family(const Config& cfg) {
  Config c = cfg;
  if (c.text("flow.kind") == "bernoulli") {
    make_flow(c, 0);  // resolves the amplitude
    const double A = c.real("flow.amplitude");
    return [A](std::uint64_t seed) { return make_bernoulli_tiling(seed, A); };
  }
  const VelocityField f = make_flow(c, 0);
  return [f](std::uint64_t) { return f; };
}

HomogConfig make_homog_config(const Config& cfg, const RunOptions& opts) {
  HomogConfig hc;
  hc.tau0 = static_cast<int>(cfg.integer("homog.tau0"));
  hc.delta_hat = cfg.has("homog.delta_hat") ? cfg.real("homog.delta_hat") : 0.0;
  hc.lambda_ladder = cfg.real_list("homog.lambdas");
  hc.n_seeds = static_cast<int>(cfg.integer("homog.n_seeds"));
  hc.directions = cfg.has("homog.targets") ? cfg.vec2_list("homog.targets")
                                           : even_directions(static_cast<int>(cfg.integer("homog.directions")));
  hc.x0 = cfg.vec2("homog.x0");
  hc.t0 = cfg.real("homog.t0");
  hc.h = cfg.real("homog.h");
  hc.cfl = cfg.real("homog.cfl");
  hc.band = cfg.real("homog.band");
  hc.horizon_margin = cfg.real("homog.horizon_margin");
  hc.estimator = parse_estimator(cfg.text("homog.estimator"));
  hc.master_seed = opts.master_seed;
  hc.parallelism = opts.parallelism;
  try {
    hc.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (hc.directions.size() < 1) throw ConfigError("homog: need at least one direction");
  return hc;
}

int run_command(const std::string& command, const ConfigFile& file, const RunOptions& opts) {
  if (opts.parallelism < 1) throw ConfigError("--parallelism must be >= 1");
  if (command == "simulate") return cmd_simulate(file, opts);
  if (command == "traveltime" || command == "homogenize") return cmd_travel(command, file, opts);
  if (command == "compare") return cmd_compare(file, opts);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace gfront::cli
