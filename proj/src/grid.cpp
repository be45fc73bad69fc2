#include "gfront/grid.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace gfront {

Grid::Grid(Vec2 origin_, double h_, int nx_, int ny_) : origin(std::move(origin_)), h(h_), nx(nx_), ny(ny_) {
  if (!(h > 0.0)) throw Error("Grid: spacing must be positive");
  if (nx < 8 || ny < 8) throw Error("Grid: need at least 8 cells per axis");
}

Grid Grid::square(double lo, double hi, int cells) {
  if (!(hi > lo)) throw Error("Grid::square: empty interval");
  return Grid(Vec2(lo, lo), (hi - lo) / cells, cells, cells);
}

Grid Grid::covering(const Vec2& center, double radius, double h) {
  if (!(h > 0.0) || !(radius >= 0.0)) throw Error("Grid::covering: bad arguments");
  const double lox = std::floor((center.x() - radius) / h), hix = std::ceil((center.x() + radius) / h);
  const double loy = std::floor((center.y() - radius) / h), hiy = std::ceil((center.y() + radius) / h);
  const int n = std::max({8, static_cast<int>(hix - lox), static_cast<int>(hiy - loy)});
  return Grid(Vec2(lox * h, loy * h), h, n, n);
}

bool Grid::contains(const Vec2& x, double tol) const {
  const Vec2 u = upper();
  return x.x() >= origin.x() - tol && x.y() >= origin.y() - tol && x.x() <= u.x() + tol && x.y() <= u.y() + tol;
}

bool Grid::contains_ball(const Vec2& c, double r) const {
  const Vec2 u = upper();
  return c.x() - r >= origin.x() && c.y() - r >= origin.y() && c.x() + r <= u.x() && c.y() + r <= u.y();
}

double upwind_gradient_norm(const ScalarField& f, int i, int j) {
  const Grid& g = f.grid;
  const double* p = f.values.data() + g.index(i, j);
  const double inv_h = 1.0 / g.h;
  const auto dx = stencil::diff(p, 1, i, g.nx, inv_h);
  const auto dy = stencil::diff(p, g.nodes_x(), j, g.ny, inv_h);
  return std::sqrt(stencil::godunov_axis_sq(dx) + stencil::godunov_axis_sq(dy));
}

Eigen::ArrayXd upwind_advection(const ScalarField& f, const Eigen::ArrayXd& vx, const Eigen::ArrayXd& vy) {
  const Grid& g = f.grid;
  if (vx.size() != f.values.size() || vy.size() != f.values.size())
    throw Error("upwind_advection: velocity must be sampled on the field's grid");
  Eigen::ArrayXd out(f.values.size());
  const double inv_h = 1.0 / g.h;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double* p = f.values.data() + k;
      const auto dx = stencil::diff(p, 1, i, g.nx, inv_h);
      const auto dy = stencil::diff(p, g.nodes_x(), j, g.ny, inv_h);
      const auto e = static_cast<Eigen::Index>(k);
      out(e) = stencil::upwind_axis(vx(e), dx) + stencil::upwind_axis(vy(e), dy);
    }
  }
  return out;
}

double interpolate(const ScalarField& f, const Vec2& x) {
  const Grid& g = f.grid;
  if (!g.contains(x)) throw Error("interpolate: point outside grid hull");
  const Vec2 q = (x - g.origin) / g.h;
  const int i = std::clamp(static_cast<int>(std::floor(q.x())), 0, g.nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor(q.y())), 0, g.ny - 1);
  const double a = std::clamp(q.x() - i, 0.0, 1.0), b = std::clamp(q.y() - j, 0.0, 1.0);
  return (1 - a) * (1 - b) * f(i, j) + a * (1 - b) * f(i + 1, j) + (1 - a) * b * f(i, j + 1) + a * b * f(i + 1, j + 1);
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[7] = {'G', 'F', 'R', 'O', 'N', 'T', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw Error("read_snapshot: truncated stream");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid;
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(os, 2);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny));
  put_le<double>(os, g.origin.x());
  put_le<double>(os, g.origin.y());
  put_le<double>(os, g.h);
  put_le<double>(os, g.h);
  put_le<double>(os, f.time_stamp);
  for (Eigen::Index k = 0; k < f.values.size(); ++k) put_le<double>(os, f.values(k));
  if (!os) throw Error("write_snapshot: write failed");
}

ScalarField read_snapshot(std::istream& is) {
  char magic[sizeof(kMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error("read_snapshot: bad magic");
  if (get_le<std::uint32_t>(is) != 2) throw Error("read_snapshot: only dim = 2 is supported");
  const auto nx = get_le<std::uint32_t>(is);
  const auto ny = get_le<std::uint32_t>(is);
  const double ox = get_le<double>(is), oy = get_le<double>(is);
  const double hx = get_le<double>(is), hy = get_le<double>(is);
  if (hx != hy) throw Error("read_snapshot: anisotropic spacing is not supported");
  const double t = get_le<double>(is);
  ScalarField f(Grid(Vec2(ox, oy), hx, static_cast<int>(nx), static_cast<int>(ny)), 0.0, t);
  for (Eigen::Index k = 0; k < f.values.size(); ++k) f.values(k) = get_le<double>(is);
  return f;
}

void write_snapshot(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("write_snapshot: cannot open " + path);
  write_snapshot(os, f);
}

ScalarField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_snapshot: cannot open " + path);
  return read_snapshot(is);
}

}  // namespace gfront
