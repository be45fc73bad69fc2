#include "gfront/gsolve.hpp"

#include "gfront/log.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gfront {

InitialData InitialData::exp_cone(double eps, const Vec2& center, double plateau) {
  if (!(eps > 0.0)) throw Error("exp_cone: eps must be positive");
  if (!(plateau >= 0.0)) throw Error("exp_cone: plateau must be nonnegative");
  InitialData d;
  d.kind = Kind::exp_cone;
  d.eps = eps;
  d.plateau = plateau;
  d.center = center;
  return d;
}

InitialData InitialData::signed_profile(double radius, const Vec2& center) {
  if (!(radius >= 0.0)) throw Error("signed_profile: radius must be nonnegative");
  InitialData d;
  d.kind = Kind::signed_profile;
  d.radius = radius;
  d.center = center;
  return d;
}

InitialData InitialData::point_source(const Vec2& center, double h) {
  if (!(h > 0.0)) throw Error("point_source: h must be positive");
  InitialData d = exp_cone(kPointSourceEps * h, center, kPointSourcePlateau * h);
  d.head_start = d.initial_radius(0.5);
  return d;
}

InitialData InitialData::custom(std::function<double(const Vec2&)> fn, const Vec2& center, double region_radius,
                                double level) {
  InitialData d;
  d.kind = Kind::custom;
  d.fn = std::move(fn);
  d.center = center;
  d.radius = region_radius;
  d.custom_level = level;
  return d;
}

InitialData InitialData::custom_grid(const ScalarField& values, const Vec2& center, double region_radius,
                                     double level) {
  auto fn = [values](const Vec2& x) {
    const Vec2 lo = values.grid.origin, hi = values.grid.upper();
    return interpolate(values, x.cwiseMax(lo).cwiseMin(hi));
  };
  return custom(fn, center, region_radius, level);
}

double InitialData::operator()(const Vec2& x) const {
  switch (kind) {
    case Kind::exp_cone: return std::exp(-std::max((x - center).norm() - plateau, 0.0) / eps);
    case Kind::signed_profile: return radius - (x - center).norm();
    case Kind::custom: return fn(x);
  }
  return 0.0;
}

double InitialData::default_reach_level() const {
  switch (kind) {
    case Kind::exp_cone: return 0.5;
    case Kind::signed_profile: return 0.0;
    case Kind::custom: return custom_level;
  }
  return 0.0;
}

double InitialData::initial_radius(double level) const {
  switch (kind) {
    case Kind::exp_cone: return plateau + (level > 0.0 && level < 1.0 ? eps * std::log(1.0 / level) : 0.0);
    case Kind::signed_profile: return std::max(0.0, radius - level);
    case Kind::custom: return radius;
  }
  return 0.0;
}

const ScalarField* ScalarFieldSeries::snapshot_at(double t, double tol) const {
  for (const auto& s : snapshots)
    if (std::abs(s.time_stamp - t) <= tol) return &s;
  return nullptr;
}

double stable_time_step(const VelocityField& f, double h, double cfl) { return cfl * h / (f.M() + 1.0); }

namespace {

// Applies x ↦ src + dt·(|∇src| − V·∇src) on the box and hands each result to
// `sink(k, value)`.  vx, vy are box-shaped.
template <class Sink>
void sweep(const Grid& g, const double* src, const IndexBox& box, const Eigen::ArrayXXd& vx,
           const Eigen::ArrayXXd& vy, double dt, Sink&& sink) {
  const double inv_h = 1.0 / g.h;
  const std::ptrdiff_t sy = g.nodes_x();
  for (int j = box.j0; j <= box.j1; ++j) {
    const int bj = j - box.j0;
    const std::size_t row = g.index(0, j);
    for (int i = box.i0; i <= box.i1; ++i) {
      const std::size_t k = row + static_cast<std::size_t>(i);
      const double* p = src + k;
      const auto dx = stencil::diff(p, 1, i, g.nx, inv_h);
      const auto dy = stencil::diff(p, sy, j, g.ny, inv_h);
      const double grad = std::sqrt(stencil::godunov_axis_sq(dx) + stencil::godunov_axis_sq(dy));
      const int bi = i - box.i0;
      const double adv = stencil::upwind_axis(vx(bi, bj), dx) + stencil::upwind_axis(vy(bi, bj), dy);
      sink(k, p[0] + dt * (grad - adv));
    }
  }
}

struct Lattice {
  std::vector<double> xs, ys;
};

Lattice box_lattice(const Grid& g, const IndexBox& box) {
  Lattice l;
  l.xs.resize(static_cast<std::size_t>(box.width()));
  l.ys.resize(static_cast<std::size_t>(box.height()));
  for (int i = box.i0; i <= box.i1; ++i) l.xs[static_cast<std::size_t>(i - box.i0)] = g.origin.x() + g.h * i;
  for (int j = box.j0; j <= box.j1; ++j) l.ys[static_cast<std::size_t>(j - box.j0)] = g.origin.y() + g.h * j;
  return l;
}

IndexBox active_bbox(const Grid& g, const Eigen::ArrayXd& u, double floor_value, const IndexBox& within) {
  IndexBox bb{within.i1 + 1, within.j1 + 1, within.i0 - 1, within.j0 - 1};
  for (int j = within.j0; j <= within.j1; ++j) {
    const std::size_t row = g.index(0, j);
    for (int i = within.i0; i <= within.i1; ++i) {
      if (u(static_cast<Eigen::Index>(row + static_cast<std::size_t>(i))) > floor_value) {
        bb.i0 = std::min(bb.i0, i);
        bb.i1 = std::max(bb.i1, i);
        bb.j0 = std::min(bb.j0, j);
        bb.j1 = std::max(bb.j1, j);
      }
    }
  }
  return bb;
}

ScalarField crop(const ScalarField& f, IndexBox box) {
  const Grid& g = f.grid;
  // keep at least 8 cells per axis
  while (box.i1 - box.i0 < 8) {
    if (box.i0 > 0) --box.i0;
    if (box.i1 < g.nx) ++box.i1;
  }
  while (box.j1 - box.j0 < 8) {
    if (box.j0 > 0) --box.j0;
    if (box.j1 < g.ny) ++box.j1;
  }
  ScalarField out(Grid(g.node(box.i0, box.j0), g.h, box.i1 - box.i0, box.j1 - box.j0), 0.0, f.time_stamp);
  for (int j = box.j0; j <= box.j1; ++j)
    for (int i = box.i0; i <= box.i1; ++i) out(i - box.i0, j - box.j0) = f(i, j);
  return out;
}

}  // namespace

ScalarFieldSeries evolve(const VelocityField& f, const InitialData& init_in, const SolveConfig& cfg, const Grid& grid) {
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw Error("evolve: cfl must lie in (0, 1]");
  if (!(cfg.t_final >= 0.0)) throw Error("evolve: t_final must be nonnegative");
  if (cfg.rk_stages != 1 && cfg.rk_stages != 2) throw Error("evolve: rk_stages must be 1 or 2");

  InitialData init = init_in;
  const double t0 = std::clamp(init.head_start, 0.0, cfg.t_final);
  if (t0 > 0.0) {
    // midpoint rule for the center's drift over the head start
    const Vec2 mid = init.center + 0.5 * t0 * f.evaluate(cfg.t_start, init.center);
    init.center += t0 * f.evaluate(cfg.t_start + 0.5 * t0, mid);
  }

  const double level = cfg.reach_level.value_or(init.default_reach_level());
  const double r0 = init.initial_radius(level);
  const double need = r0 + f.M() * cfg.t_final + 4.0 * grid.h;
  if (!cfg.allow_truncation && !grid.contains_ball(init_in.center, need))
    throw ContainmentError("evolve: grid does not contain B_" + std::to_string(need) +
                           " around the initial data; enlarge the grid or shorten t_final");
  for (const auto& p : cfg.probes)
    if (!grid.contains(p)) throw Error("evolve: probe outside grid");

  ScalarFieldSeries out;
  out.grid = grid;
  out.reach_level = level;
  out.t_start = cfg.t_start;
  out.floor_value = std::isfinite(cfg.band) ? level - cfg.band : -kInf;
  const double floor_value = out.floor_value;

  ScalarField u(grid, 0.0, 0.0);
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i) u(i, j) = std::max(init(grid.node(i, j)), floor_value);
  if (!u.all_finite()) throw Error("evolve: initial data is not finite");
  out.init_min = u.values.minCoeff();
  out.init_max = u.values.maxCoeff();

  // Inside at the start: reached by the head start (at unit speed).
  auto initial_arrival = [&](const Vec2& x) { return std::min((x - init.center).norm(), t0); };
  out.arrival_time = ScalarField(grid, kInf, 0.0);
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i)
      if (u(i, j) >= level) out.arrival_time(i, j) = initial_arrival(grid.node(i, j));

  Eigen::ArrayXd u1 = u.values;

  // Event times the stepper must land on exactly.
  std::vector<double> events = cfg.snapshot_times;
  events.insert(events.end(), cfg.probe_times.begin(), cfg.probe_times.end());
  if (cfg.observer) events.insert(events.end(), cfg.observe_times.begin(), cfg.observe_times.end());
  events.push_back(cfg.t_final);
  std::erase_if(events, [&](double t) { return t < 0.0 || t > cfg.t_final; });
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  std::vector<double> snap_times = cfg.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::erase_if(snap_times, [&](double t) { return t < 0.0 || t > cfg.t_final; });
  std::vector<double> probe_times = cfg.probe_times;
  std::sort(probe_times.begin(), probe_times.end());
  std::erase_if(probe_times, [&](double t) { return t < 0.0 || t > cfg.t_final; });
  out.probe_times = probe_times;
  std::vector<double> observe_times = cfg.observer ? cfg.observe_times : std::vector<double>{};
  std::sort(observe_times.begin(), observe_times.end());
  std::erase_if(observe_times, [&](double t) { return t < 0.0 || t > cfg.t_final; });

  out.probes.resize(cfg.probes.size());
  std::vector<double> probe_prev(cfg.probes.size());
  for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
    out.probes[p].point = cfg.probes[p];
    probe_prev[p] = interpolate(u, cfg.probes[p]);
    if (probe_prev[p] >= level) out.probes[p].first_crossing = initial_arrival(cfg.probes[p]);
  }

  IndexBox box = IndexBox::full(grid);
  if (std::isfinite(floor_value)) {
    const IndexBox bb = active_bbox(grid, u.values, floor_value, box);
    box = bb.empty() ? IndexBox{} : bb.padded(3, grid);
  }

  std::size_t next_snap = 0, next_probe_time = 0, next_observe = 0;
  // Steps land on every event time; times inside the head start fire at once.
  auto record_events = [&](double t) {
    const double tol = 1e-12 * std::max(1.0, t);
    while (next_observe < observe_times.size() && observe_times[next_observe] <= t + tol) {
      u.time_stamp = observe_times[next_observe];
      cfg.observer(u);
      ++next_observe;
    }
    while (next_snap < snap_times.size() && snap_times[next_snap] <= t + tol) {
      ScalarField s = cfg.crop_snapshots && !box.empty() ? crop(u, box) : u;
      s.time_stamp = snap_times[next_snap];
      out.snapshots.push_back(std::move(s));
      ++next_snap;
    }
    while (next_probe_time < probe_times.size() && probe_times[next_probe_time] <= t + tol) {
      for (std::size_t p = 0; p < cfg.probes.size(); ++p) out.probes[p].values.push_back(interpolate(u, cfg.probes[p]));
      ++next_probe_time;
    }
  };
  record_events(t0);

  auto probes_done = [&] {
    if (cfg.probes.empty() || next_snap < snap_times.size() || next_observe < observe_times.size()) return false;
    for (const auto& pr : out.probes) {
      if (!std::isfinite(pr.first_crossing)) return false;
      if (!probe_times.empty() && std::none_of(pr.values.begin(), pr.values.end(), [&](double v) { return v >= level; }))
        return false;
    }
    return true;
  };

  Eigen::ArrayXXd vx, vy;
  double t = t0;
  std::size_t next_event = 0;
  double next_log = 0.1 * cfg.t_final;
  const Grid& g = grid;
  double* uv = u.values.data();
  double* u1v = u1.data();
  double* arr = out.arrival_time.values.data();

  while (t < cfg.t_final && !box.empty()) {
    if (cfg.stop_when_probes_reached && probes_done()) break;
    while (next_event < events.size() && events[next_event] <= t) ++next_event;
    const double target = next_event < events.size() ? events[next_event] : cfg.t_final;

    Lattice lat = box_lattice(g, box);
    f.sample_lattice(cfg.t_start + t, lat.xs, lat.ys, vx, vy);
    const double vmax = std::sqrt((vx.square() + vy.square()).maxCoeff());
    double dt = cfg.cfl * g.h / (1.0 + vmax + 1.0);
    bool lands = false;
    if (t + dt >= target - 1e-12 * std::max(1.0, target)) {
      dt = target - t;
      lands = true;
    }

    IndexBox touched{box.i1 + 1, box.j1 + 1, box.i0 - 1, box.j0 - 1};
    double umax = -kInf, umin = kInf;
    bool finite = true;
    const double t_next = lands ? target : t + dt;
    auto finish_node = [&](std::size_t k, double unew) {
      const double uold = uv[k];
      if (!std::isfinite(unew)) finite = false;
      uv[k] = unew;
      if (unew >= level && !std::isfinite(arr[k])) {
        const double frac = uold < level ? (level - uold) / (unew - uold) : 0.0;
        arr[k] = t + dt * std::clamp(frac, 0.0, 1.0);
      }
      umax = std::max(umax, unew);
      umin = std::min(umin, unew);
      if (unew > floor_value) {
        const int j = static_cast<int>(k / static_cast<std::size_t>(g.nodes_x()));
        const int i = static_cast<int>(k % static_cast<std::size_t>(g.nodes_x()));
        touched.i0 = std::min(touched.i0, i);
        touched.i1 = std::max(touched.i1, i);
        touched.j0 = std::min(touched.j0, j);
        touched.j1 = std::max(touched.j1, j);
      }
    };

    if (cfg.rk_stages == 1) {
      sweep(g, uv, box, vx, vy, dt, [&](std::size_t k, double v) { u1v[k] = v; });
      for (int j = box.j0; j <= box.j1; ++j)
        for (int i = box.i0; i <= box.i1; ++i) {
          const std::size_t k = g.index(i, j);
          finish_node(k, u1v[k]);
        }
    } else {
      sweep(g, uv, box, vx, vy, dt, [&](std::size_t k, double v) { u1v[k] = v; });
      f.sample_lattice(cfg.t_start + t + dt, lat.xs, lat.ys, vx, vy);
      sweep(g, u1v, box, vx, vy, dt, [&](std::size_t k, double v) { finish_node(k, 0.5 * uv[k] + 0.5 * v); });
    }
    if (!finite) throw Error("evolve: non-finite value at t = " + std::to_string(t_next));

    t = t_next;
    ++out.steps;
    out.max_overshoot = std::max(out.max_overshoot, umax - out.init_max);
    out.min_undershoot = std::max(out.min_undershoot, out.init_min - umin);

    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
      const double v = interpolate(u, cfg.probes[p]);
      auto& pr = out.probes[p];
      if (!std::isfinite(pr.first_crossing) && v >= level) {
        const double frac = probe_prev[p] < level ? (level - probe_prev[p]) / (v - probe_prev[p]) : 0.0;
        pr.first_crossing = t - dt + dt * std::clamp(frac, 0.0, 1.0);
      }
      probe_prev[p] = v;
    }
    if (std::isfinite(floor_value) && !touched.empty()) box = box.united(touched.padded(3, g));
    record_events(t);

    if (cfg.progress_log && t >= next_log) {
      log::info("evolve step ", out.steps, " t=", t, " box=", box.width(), "x", box.height(),
                " max|u| drift=", out.max_overshoot);
      next_log += 0.1 * cfg.t_final;
    }
  }
  out.t_end = t;
  // With an empty active set nothing changes any more; remaining events see the final state.
  if (box.empty()) record_events(t);
  u.time_stamp = t;
  out.final_field = std::move(u);
  return out;
}

ScalarFieldSeries solve_scaled(const VelocityField& f, double eps, const InitialData& init, const SolveConfig& cfg,
                               const Grid& grid) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("solve_scaled: eps must lie in (0, 1]");
  return evolve(rescale(f, eps), init, cfg, grid);
}

// ---------------------------------------------------------------------------

Vec2 integrate_path(const VelocityField& f, const Vec2& start, double t_start, double duration, const Control& control,
                    double max_step) {
  if (!(max_step > 0.0)) throw Error("integrate_path: max_step must be positive");
  const long n = std::max(1L, static_cast<long>(std::ceil(duration / max_step)));
  const double dt = duration / static_cast<double>(n);
  Vec2 x = start;
  for (long s = 0; s < n; ++s) {
    const double t = t_start + dt * static_cast<double>(s);
    Vec2 c = control(dt * static_cast<double>(s));
    if (c.norm() > 1.0) c.normalize();
    const Vec2 k1 = f.evaluate(t, x) + c;
    const Vec2 k2 = f.evaluate(t + 0.5 * dt, x + 0.5 * dt * k1) + c;
    const Vec2 k3 = f.evaluate(t + 0.5 * dt, x + 0.5 * dt * k2) + c;
    const Vec2 k4 = f.evaluate(t + dt, x + dt * k3) + c;
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

std::vector<Vec2> sample_admissible_paths(const VelocityField& f, const Vec2& start, double duration, int n_paths,
                                          std::uint64_t rng_seed, double h, double t_start,
                                          const PathSampling& opts) {
  if (n_paths < 1) throw Error("sample_admissible_paths: n_paths must be >= 1");
  const double max_step = h / (2.0 * (f.M() + 1.0));
  const long n = std::max(1L, static_cast<long>(std::ceil(duration / max_step)));
  const double dt = duration / static_cast<double>(n);
  std::vector<Vec2> ends(static_cast<std::size_t>(n_paths));
  for (int p = 0; p < n_paths; ++p) {
    std::mt19937_64 rng(hash64(rng_seed, static_cast<std::uint64_t>(p)));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    int switches = 0;
    if (opts.constant_every <= 0 || p % opts.constant_every != 0)
      switches = std::uniform_int_distribution<int>(1, std::max(1, opts.max_switches))(rng);
    std::vector<long> at(static_cast<std::size_t>(switches));
    std::uniform_int_distribution<long> when(1, std::max(1L, n - 1));
    for (auto& a : at) a = when(rng);
    std::sort(at.begin(), at.end());
    std::vector<Vec2> dirs(static_cast<std::size_t>(switches) + 1);
    for (auto& d : dirs) {
      const double th = angle(rng);
      d = Vec2(std::cos(th), std::sin(th));
    }
    Vec2 x = start;
    std::size_t seg = 0;
    for (long s = 0; s < n; ++s) {
      while (seg < at.size() && at[seg] <= s) ++seg;
      const Vec2& c = dirs[seg];
      const double t = t_start + dt * static_cast<double>(s);
      const Vec2 k1 = f.evaluate(t, x) + c;
      const Vec2 k2 = f.evaluate(t + 0.5 * dt, x + 0.5 * dt * k1) + c;
      const Vec2 k3 = f.evaluate(t + 0.5 * dt, x + 0.5 * dt * k2) + c;
      const Vec2 k4 = f.evaluate(t + dt, x + dt * k3) + c;
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    ends[static_cast<std::size_t>(p)] = x;
  }
  return ends;
}

}  // namespace gfront
