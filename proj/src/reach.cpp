#include "gfront/reach.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace gfront {

geom::Rect CubeWindow::rect(const Grid& hull) const {
  if (!bounded()) return {hull.origin, hull.upper()};
  return {center - Vec2::Constant(r), center + Vec2::Constant(r)};
}

double CubeWindow::volume(const Grid& hull) const {
  const auto rc = rect(hull);
  return (rc.hi - rc.lo).prod();
}

namespace {

struct CellGeometry {
  geom::Polygon poly;
  int n_segments = 0;
  Segment seg[2];
  bool full = false;
  bool empty = false;
};

CellGeometry cell_geometry(const ScalarField& u, double level, int i, int j) {
  const Grid& g = u.grid;
  const double phi[4] = {u(i, j) - level, u(i + 1, j) - level, u(i + 1, j + 1) - level, u(i, j + 1) - level};
  const Vec2 p[4] = {g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
  CellGeometry c;
  int n_in = 0;
  for (double v : phi) n_in += v >= 0.0;
  if (n_in == 0) {
    c.empty = true;
    return c;
  }
  if (n_in == 4) {
    c.full = true;
    c.poly.assign(p, p + 4);
    return c;
  }
  Vec2 exits[2], entries[2];
  int ne = 0, nn = 0;
  int first_is_entry = -1;
  for (int k = 0; k < 4; ++k) {
    const int l = (k + 1) % 4;
    const bool ik = phi[k] >= 0.0, il = phi[l] >= 0.0;
    if (ik) c.poly.push_back(p[k]);
    if (ik != il) {
      const double s = phi[k] / (phi[k] - phi[l]);
      const Vec2 q = p[k] + s * (p[l] - p[k]);
      c.poly.push_back(q);
      if (ik) {
        exits[ne++] = q;
        if (first_is_entry < 0) first_is_entry = 0;
      } else {
        entries[nn++] = q;
        if (first_is_entry < 0) first_is_entry = 1;
      }
    }
  }
  // Along the walk exits and entries alternate; each exit joins the next entry.
  c.n_segments = ne;
  for (int m = 0; m < ne; ++m) {
    const int e = first_is_entry == 1 ? (m + 1) % nn : m;
    c.seg[m] = {exits[m], entries[e]};
  }
  return c;
}

double value_or_outside(const ScalarField& u, const Vec2& x, double outside) {
  if (!u.grid.contains(x)) return outside;
  return interpolate(u, x);
}

// Length of the part of [0, len] where the linear interpolant of (a, b) is ≥ 0.
double inside_length(double a, double b, double len) {
  if (a >= 0.0 && b >= 0.0) return len;
  if (a < 0.0 && b < 0.0) return 0.0;
  const double s = a / (a - b);
  return a >= 0.0 ? s * len : (1.0 - s) * len;
}

}  // namespace

std::vector<Segment> extract_contour(const ScalarField& u, double level) {
  std::vector<Segment> out;
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      const auto c = cell_geometry(u, level, i, j);
      for (int m = 0; m < c.n_segments; ++m) out.push_back(c.seg[m]);
    }
  return out;
}

ReachMeasurement measure(const ScalarField& u, double level, const CubeWindow& win, const VelocityField* flow,
                         double flow_time, const Grid* hull) {
  const Grid& H = hull != nullptr ? *hull : u.grid;
  const geom::Rect rc = win.rect(H);
  if (win.bounded()) {
    if (!(win.r > 0.0)) throw Error("measure: window half-side must be positive");
    if (!H.contains(rc.lo) || !H.contains(rc.hi)) throw Error("measure: window exceeds the grid hull");
  }
  const Grid& g = u.grid;
  ReachMeasurement m;
  m.t = u.time_stamp;
  m.r = win.r;

  const int i0 = std::max(0, static_cast<int>(std::floor((rc.lo.x() - g.origin.x()) / g.h)));
  const int j0 = std::max(0, static_cast<int>(std::floor((rc.lo.y() - g.origin.y()) / g.h)));
  const int i1 = std::min(g.nx, static_cast<int>(std::ceil((rc.hi.x() - g.origin.x()) / g.h)));
  const int j1 = std::min(g.ny, static_cast<int>(std::ceil((rc.hi.y() - g.origin.y()) / g.h)));
  const double cell_area = g.h * g.h;
  for (int j = j0; j < j1; ++j) {
    for (int i = i0; i < i1; ++i) {
      const auto c = cell_geometry(u, level, i, j);
      if (c.empty) continue;
      const geom::Rect cell{g.node(i, j), g.node(i + 1, j + 1)};
      const bool interior = rc.contains(cell.lo) && rc.contains(cell.hi);
      if (c.full && interior)
        m.w += cell_area;
      else if (interior)
        m.w += std::abs(geom::signed_area(c.poly));
      else
        m.w += std::abs(geom::signed_area(geom::clip(c.poly, rc)));
      for (int k = 0; k < c.n_segments; ++k) {
        Vec2 a = c.seg[k][0], b = c.seg[k][1];
        if (interior || geom::clip_segment(a, b, rc)) m.s += (b - a).norm();
      }
    }
  }

  if (win.bounded() && flow != nullptr) {
    const double outside = -1.0;  // any negative value: outside the set
    const Vec2 corners[4] = {rc.lo, Vec2(rc.hi.x(), rc.lo.y()), rc.hi, Vec2(rc.lo.x(), rc.hi.y())};
    const Vec2 normals[4] = {Vec2(0, -1), Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0)};
    for (int f = 0; f < 4; ++f) {
      const Vec2 a = corners[f], b = corners[(f + 1) % 4];
      const double len = (b - a).norm();
      const int n = std::max(1, static_cast<int>(std::ceil(len / (0.25 * g.h))));
      const double dl = len / n;
      double prev = value_or_outside(u, a, outside + level) - level;
      for (int k = 0; k < n; ++k) {
        const Vec2 q1 = a + (b - a) * (static_cast<double>(k + 1) / n);
        const double next = value_or_outside(u, q1, outside + level) - level;
        const double in_len = inside_length(prev, next, dl);
        if (in_len > 0.0) {
          const Vec2 mid = a + (b - a) * ((k + 0.5) / n);
          m.flux += flow->evaluate(flow_time, mid).dot(normals[f]) * in_len;
        }
        prev = next;
      }
    }
  }
  m.fill_fraction = m.w / win.volume(H);
  return m;
}

ScalarField arrival_set_function(const ScalarFieldSeries& series, double t) {
  ScalarField level_fn(series.grid, 0.0, t);
  if (t >= series.t_end - 1e-9 && series.final_field.values.size() == level_fn.values.size()) {
    for (Eigen::Index k = 0; k < level_fn.values.size(); ++k) {
      const double v = series.final_field.values(k) - series.reach_level;
      level_fn.values(k) = series.arrival_time.values(k) <= t ? std::max(v, 0.0) : std::min(v, -1e-300);
    }
    return level_fn;
  }
  const double cap = 1e3;
  for (Eigen::Index k = 0; k < level_fn.values.size(); ++k)
    level_fn.values(k) = std::clamp(t - series.arrival_time.values(k), -cap, cap);
  return level_fn;
}

SetDistance::SetDistance(ScalarField u, double level)
    : u_(std::move(u)), level_(level), segments_(extract_contour(u_, level)) {}

double SetDistance::operator()(const Vec2& p) const {
  if (u_.grid.contains(p) && interpolate(u_, p) >= level_) return 0.0;
  double d = kInf;
  for (const auto& sg : segments_) d = std::min(d, geom::point_segment_distance(p, sg[0], sg[1]));
  return d;
}

double SetDistance::signed_distance(const Vec2& p) const {
  const bool inside = u_.grid.contains(p) && interpolate(u_, p) >= level_;
  double d = kInf;
  for (const auto& sg : segments_) d = std::min(d, geom::point_segment_distance(p, sg[0], sg[1]));
  return inside ? -d : d;
}

ReversibilityTrial check_reversibility(const VelocityField& f, const Vec2& x0, const Vec2& p, double t0, double t,
                                       double h, double tol) {
  ReversibilityTrial r{x0, p, t0, t};
  auto reach_distance = [&](const VelocityField& flow, const Vec2& from, double start, const Vec2& to) {
    const auto init = InitialData::point_source(from, h);
    const Grid g = Grid::covering(from, init.initial_radius(0.5) + flow.M() * t + 6.0 * h, h);
    SolveConfig cfg;
    cfg.t_final = t;
    cfg.t_start = start;
    cfg.band = 0.49;
    cfg.progress_log = false;
    const auto series = evolve(flow, init, cfg, g);
    return SetDistance(arrival_set_function(series, t), 0.0).signed_distance(to);
  };
  r.d_forward = reach_distance(f, x0, t0, p);
  r.d_backward = reach_distance(reverse(f, t0 + t), p, 0.0, x0);
  r.agree = (r.d_forward <= 0.0) == (r.d_backward <= 0.0) || std::min(std::abs(r.d_forward), std::abs(r.d_backward)) <= tol;
  return r;
}

ReachMeasurement measure(const ScalarFieldSeries& series, const CubeWindow& win, double t, const VelocityField* flow) {
  ReachMeasurement m;
  if (const ScalarField* snap = series.snapshot_at(t)) {
    m = measure(*snap, series.reach_level, win, flow, series.t_start + t, &series.grid);
  } else {
    if (t > series.t_end + 1e-12) throw Error("measure: t beyond the solved horizon");
    m = measure(arrival_set_function(series, t), 0.0, win, flow, series.t_start + t, &series.grid);
  }
  m.t = t;
  return m;
}

VolumeGrowthReport check_volume_growth(const std::vector<ReachMeasurement>& samples, const std::vector<double>& t_list,
                                       double h, double side, double c_tol) {
  if (t_list.size() < 3) throw Error("check_volume_growth: need at least 3 times");
  if (!std::is_sorted(t_list.begin(), t_list.end())) throw Error("check_volume_growth: times must be sorted");
  auto at = [&](double t) -> std::size_t {
    for (std::size_t k = 0; k < samples.size(); ++k)
      if (std::abs(samples[k].t - t) <= 1e-9 * std::max(1.0, t)) return k;
    throw Error("check_volume_growth: no sample at t = " + std::to_string(t));
  };
  VolumeGrowthReport rep;
  std::size_t prev = 0;
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    const std::size_t cur = at(t_list[k]);
    VolumeGrowthRow row;
    row.m = samples[cur];
    if (k > 0) {
      const auto& p = samples[prev];
      const double dt = row.m.t - p.t;
      row.lhs = row.m.w - p.w;
      row.rhs = 0.0;
      for (std::size_t i = prev; i < cur; ++i) {
        const auto& a = samples[i];
        const auto& b = samples[i + 1];
        row.rhs += 0.5 * (b.t - a.t) * ((a.s - a.flux) + (b.s - b.flux));
      }
      row.slack = c_tol * h * side * dt;
      const double margin = row.lhs - row.rhs + row.slack;
      row.violated = margin < 0.0;
      rep.violations += row.violated;
      rep.worst_margin = std::min(rep.worst_margin, margin);
    }
    prev = cur;
    rep.rows.push_back(row);
  }
  return rep;
}

VolumeGrowthReport check_volume_growth(const ScalarFieldSeries& series, const CubeWindow& win,
                                       const std::vector<double>& t_list, const VelocityField& flow, double c_tol) {
  if (t_list.empty()) throw Error("check_volume_growth: need at least 3 times");
  std::vector<double> times = t_list;
  for (const auto& snap : series.snapshots)
    if (snap.time_stamp >= t_list.front() && snap.time_stamp <= t_list.back()) times.push_back(snap.time_stamp);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(), [](double a, double b) { return std::abs(a - b) <= 1e-9; }),
              times.end());
  std::vector<ReachMeasurement> samples;
  for (double t : times) samples.push_back(measure(series, win, t, &flow));
  const double side = win.bounded() ? 2.0 * win.r : std::max(series.grid.nx, series.grid.ny) * series.grid.h;
  return check_volume_growth(samples, t_list, series.grid.h, side, c_tol);
}

std::function<void(const ScalarField&)> measurement_observer(std::vector<ReachMeasurement>& sink, double level,
                                                            const CubeWindow& win, const VelocityField* flow,
                                                            double t_start) {
  return [&sink, level, win, flow, t_start](const ScalarField& u) {
    sink.push_back(measure(u, level, win, flow, t_start + u.time_stamp));
  };
}

void write_csv(std::ostream& os, const VolumeGrowthReport& report) {
  os << "t,r,w,s,flux,fill_fraction,lhs,rhs,slack\n";
  auto num = [&](double v) {
    if (std::isnan(v)) return;
    if (std::isinf(v))
      os << (v > 0 ? "inf" : "-inf");
    else
      os << v;
  };
  const auto prec = os.precision(17);
  for (const auto& row : report.rows) {
    const auto& m = row.m;
    num(m.t), os << ',', num(m.r), os << ',', num(m.w), os << ',', num(m.s), os << ',', num(m.flux), os << ',';
    num(m.fill_fraction), os << ',', num(row.lhs), os << ',', num(row.rhs), os << ',', num(row.slack), os << '\n';
  }
  os.precision(prec);
}

IsoperimetricReport check_isoperimetric(const ScalarFieldSeries& series, const std::vector<double>& t_list,
                                        std::optional<CubeWindow> relative_window) {
  IsoperimetricReport rep;
  const double h = series.grid.h;
  for (double t : t_list) {
    IsoperimetricRow row;
    const auto m = measure(series, CubeWindow{}, t);
    row.t = t;
    row.w = m.w;
    row.s = m.s;
    row.bound = 2.0 * std::sqrt(kPi * m.w);
    row.ratio = row.bound > 0.0 ? m.s / row.bound : kInf;
    row.slack = t > 0.0 ? 5.0 * h / t * row.bound : row.bound;
    row.violated = m.s < row.bound - row.slack;
    if (relative_window) {
      const auto mr = measure(series, *relative_window, t);
      const double denom = std::min(mr.w, relative_window->volume(series.grid) - mr.w);
      if (denom > 0.0) row.relative_ratio = mr.s / std::sqrt(denom);
    }
    rep.violations += row.violated;
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

FillingReport filling_diagnostic(const ScalarFieldSeries& series, const CubeWindow& win, double M) {
  if (!win.bounded()) throw Error("filling_diagnostic: needs a bounded window");
  FillingReport rep;
  rep.alpha = kPi / ((4.0 * M) * (4.0 * M));
  rep.T0 = win.r / (2.0 * M);
  const CubeWindow half{0.5 * win.r, win.center};
  const geom::Rect hr = half.rect(series.grid);
  for (const auto& snap : series.snapshots) {
    const auto m = measure(snap, series.reach_level, win, nullptr, 0.0, &series.grid);
    const double t = snap.time_stamp;
    rep.curve.emplace_back(t, m.fill_fraction);
    if (!rep.t_alpha && m.fill_fraction >= rep.alpha) rep.t_alpha = t;
    if (!rep.t_one_minus_alpha && m.fill_fraction >= 1.0 - rep.alpha) rep.t_one_minus_alpha = t;
    if (!rep.t_half_covered && snap.grid.contains(hr.lo) && snap.grid.contains(hr.hi)) {
      const Grid& g = snap.grid;
      bool all = true;
      const int i0 = static_cast<int>(std::floor((hr.lo.x() - g.origin.x()) / g.h));
      const int i1 = static_cast<int>(std::ceil((hr.hi.x() - g.origin.x()) / g.h));
      const int j0 = static_cast<int>(std::floor((hr.lo.y() - g.origin.y()) / g.h));
      const int j1 = static_cast<int>(std::ceil((hr.hi.y() - g.origin.y()) / g.h));
      for (int j = std::max(0, j0); j <= std::min(g.ny, j1) && all; ++j)
        for (int i = std::max(0, i0); i <= std::min(g.nx, i1) && all; ++i) all = snap(i, j) >= series.reach_level;
      if (all) rep.t_half_covered = t;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

NodeMask NodeMask::threshold(const ScalarField& u, double level) {
  NodeMask m;
  m.grid = u.grid;
  m.in.resize(static_cast<std::size_t>(u.values.size()));
  for (Eigen::Index k = 0; k < u.values.size(); ++k) m.in[static_cast<std::size_t>(k)] = u.values(k) >= level;
  return m;
}

NodeMask NodeMask::scaled(double s) const {
  if (!(s > 0.0)) throw Error("NodeMask::scaled: factor must be positive");
  NodeMask m = *this;
  m.grid.origin *= s;
  m.grid.h *= s;
  return m;
}

bool NodeMask::any() const { return std::any_of(in.begin(), in.end(), [](std::uint8_t v) { return v != 0; }); }

namespace {

// 1D squared distance transform of f (Felzenszwalb–Huttenlocher), unit spacing.
void dt1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (!std::isfinite(f[static_cast<std::size_t>(q)])) continue;
    if (!std::isfinite(f[static_cast<std::size_t>(v[0])])) {
      v[0] = q;
      continue;
    }
    double s;
    while (true) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((f[static_cast<std::size_t>(q)] + 1.0 * q * q) - (f[static_cast<std::size_t>(p)] + 1.0 * p * p)) /
          (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)] && k > 0)
        --k;
      else
        break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (!std::isfinite(f[static_cast<std::size_t>(v[0])])) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[static_cast<std::size_t>(q)] = 1.0 * (q - p) * (q - p) + f[static_cast<std::size_t>(p)];
  }
}

}  // namespace

Eigen::ArrayXd distance_transform(const NodeMask& m) {
  const int nx = m.grid.nodes_x(), ny = m.grid.nodes_y();
  Eigen::ArrayXd d2(static_cast<Eigen::Index>(m.in.size()));
  for (std::size_t k = 0; k < m.in.size(); ++k) d2(static_cast<Eigen::Index>(k)) = m.in[k] ? 0.0 : kInf;
  const int n = std::max(nx, ny);
  std::vector<double> f, d;
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  f.resize(static_cast<std::size_t>(ny));
  d.resize(static_cast<std::size_t>(ny));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) f[static_cast<std::size_t>(j)] = d2(static_cast<Eigen::Index>(m.grid.index(i, j)));
    dt1d(f, d, v, z);
    for (int j = 0; j < ny; ++j) d2(static_cast<Eigen::Index>(m.grid.index(i, j))) = d[static_cast<std::size_t>(j)];
  }
  f.resize(static_cast<std::size_t>(nx));
  d.resize(static_cast<std::size_t>(nx));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) f[static_cast<std::size_t>(i)] = d2(static_cast<Eigen::Index>(m.grid.index(i, j)));
    dt1d(f, d, v, z);
    for (int i = 0; i < nx; ++i) d2(static_cast<Eigen::Index>(m.grid.index(i, j))) = d[static_cast<std::size_t>(i)];
  }
  return d2.sqrt() * m.grid.h;
}

namespace {

// Distance from an arbitrary point to the mask, through the surrounding cell's corners.
double distance_to_mask(const Grid& g, const Eigen::ArrayXd& dist, const Vec2& x) {
  const Vec2 c = x.cwiseMax(g.origin).cwiseMin(g.upper());
  const Vec2 q = (c - g.origin) / g.h;
  const int i = std::clamp(static_cast<int>(std::floor(q.x())), 0, g.nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor(q.y())), 0, g.ny - 1);
  double best = kInf;
  for (int dj = 0; dj <= 1; ++dj)
    for (int di = 0; di <= 1; ++di) {
      const double dn = dist(static_cast<Eigen::Index>(g.index(i + di, j + dj)));
      best = std::min(best, dn + (x - g.node(i + di, j + dj)).norm());
    }
  return best;
}

}  // namespace

double hausdorff_distance(const NodeMask& a, const geom::Polygon& convex) {
  if (!a.any() || convex.size() < 3) throw Error("hausdorff_distance: empty set");
  const Grid& g = a.grid;
  double d_ab = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (a.in[g.index(i, j)]) d_ab = std::max(d_ab, geom::distance_to_convex(convex, g.node(i, j)));

  const Eigen::ArrayXd dist = distance_transform(a);
  double d_ba = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (geom::inside_convex(convex, g.node(i, j)))
        d_ba = std::max(d_ba, dist(static_cast<Eigen::Index>(g.index(i, j))));
  for (std::size_t k = 0, n = convex.size(); k < n; ++k) {
    const Vec2 p = convex[k], q = convex[(k + 1) % n];
    const int steps = std::max(1, static_cast<int>(std::ceil((q - p).norm() / (0.5 * g.h))));
    for (int s = 0; s < steps; ++s) d_ba = std::max(d_ba, distance_to_mask(g, dist, p + (q - p) * (1.0 * s / steps)));
  }
  return std::max(d_ab, d_ba);
}

double hausdorff_distance(const NodeMask& a, const NodeMask& b) {
  if (!(a.grid == b.grid)) throw Error("hausdorff_distance: masks must share a grid");
  if (!a.any() || !b.any()) throw Error("hausdorff_distance: empty set");
  const Eigen::ArrayXd da = distance_transform(a), db = distance_transform(b);
  double d = 0.0;
  for (std::size_t k = 0; k < a.in.size(); ++k) {
    const auto e = static_cast<Eigen::Index>(k);
    if (a.in[k]) d = std::max(d, db(e));
    if (b.in[k]) d = std::max(d, da(e));
  }
  return d;
}

geom::Polygon circle_polygon(const Vec2& center, double r, int n) {
  geom::Polygon p(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * kPi * k / n;
    p[static_cast<std::size_t>(k)] = center + r * Vec2(std::cos(th), std::sin(th));
  }
  return p;
}

}  // namespace gfront
