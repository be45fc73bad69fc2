#include "gfront/reach.hpp"

#include <doctest.h>

using namespace gfront;

namespace {

SolveConfig quiet(double t_final, std::vector<double> snaps = {}) {
  SolveConfig sc;
  sc.t_final = t_final;
  sc.snapshot_times = std::move(snaps);
  sc.progress_log = false;
  return sc;
}

}  // namespace

TEST_CASE("point source data") {
  const double h = 1.0 / 32.0;
  const auto d = InitialData::point_source(Vec2(0.5, 0.25), h);
  CHECK(d(Vec2(0.5, 0.25)) == 1.0);
  CHECK(d(Vec2(0.5 + kPointSourcePlateau * h, 0.25)) == doctest::Approx(1.0));
  // Level 1/2 sits ε ln 2 beyond the plateau, and that radius is the head start.
  const double r = (kPointSourcePlateau + kPointSourceEps * std::log(2.0)) * h;
  CHECK(d(Vec2(0.5 + r, 0.25)) == doctest::Approx(0.5));
  CHECK(d.head_start == doctest::Approx(r));
  CHECK(d.default_reach_level() == 0.5);
}

TEST_CASE("zero flow: a disk grows at unit normal speed") {
  const Grid g = Grid::square(-1.0, 1.0, 128);
  const auto s = evolve(make_zero(), InitialData::signed_profile(0.25), quiet(0.5, {0.5}), g);
  const ScalarField& u = *s.snapshot_at(0.5);
  // Exact solution 0.75 − |x|; the scheme is exact on radial cones up to O(h).
  CHECK(interpolate(u, Vec2(0.75, 0.0)) == doctest::Approx(0.0).epsilon(2.0 * g.h));
  const auto m = measure(u, 0.0, CubeWindow{});
  CHECK(m.w == doctest::Approx(kPi * 0.75 * 0.75).epsilon(0.01));
  CHECK(s.max_overshoot <= 1e-12);
}

TEST_CASE("constant drift: the set is a disk of radius t around c·t") {
  const double h = 1.0 / 64.0, T = 1.0;
  const Vec2 c(0.5, 0.0);
  const auto f = make_constant(c);
  const auto init = InitialData::point_source(Vec2::Zero(), h);
  const Grid g = Grid::covering(Vec2::Zero(), init.initial_radius(0.5) + f.M() * T + 5.0 * h, h);
  auto sc = quiet(T, {T});
  sc.band = 0.49;
  const auto s = evolve(f, init, sc, g);
  const ScalarField& u = *s.snapshot_at(T);
  double worst = 0.0;
  for (const auto& seg : extract_contour(u, s.reach_level))
    for (const auto& p : seg) worst = std::max(worst, std::abs((p - c * T).norm() - T));
  CHECK(worst < 2.0 * h);
  const auto m = measure(u, s.reach_level, CubeWindow{});
  CHECK(m.w == doctest::Approx(kPi * T * T).epsilon(0.02));
}

TEST_CASE("the band clamp moves the front by less than a cell") {
  const double h = 1.0 / 32.0;
  const auto f = make_cellular(0.3, 1.0, TimeModulation::sinusoidal(1.0));
  const auto init = InitialData::point_source(Vec2::Zero(), h);
  const Grid g = Grid::covering(Vec2::Zero(), init.initial_radius(0.5) + f.M() * 0.5 + 5.0 * h, h);
  auto a = quiet(0.5, {0.5});
  auto b = a;
  b.band = 0.49;
  const auto sa = evolve(f, init, a, g), sb = evolve(f, init, b, g);
  const auto ma = measure(*sa.snapshot_at(0.5), 0.5, CubeWindow{});
  const auto mb = measure(*sb.snapshot_at(0.5), 0.5, CubeWindow{});
  CHECK(std::abs(ma.w - mb.w) < g.h * g.h);
}

TEST_CASE("containment is enforced") {
  const Grid g = Grid::square(-0.5, 0.5, 32);
  CHECK_THROWS_AS(evolve(make_zero(), InitialData::point_source(Vec2::Zero(), g.h), quiet(1.0), g), ContainmentError);
}

TEST_CASE("probes record the first crossing") {
  const Grid g = Grid::square(-2.0, 2.0, 128);
  auto sc = quiet(1.5);
  sc.probes = {Vec2(1.0, 0.0), Vec2(0.0, -0.5)};
  const auto s = evolve(make_zero(), InitialData::point_source(Vec2::Zero(), g.h), sc, g);
  CHECK(s.probes[0].first_crossing == doctest::Approx(1.0).epsilon(0.03));
  CHECK(s.probes[1].first_crossing == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("admissible paths") {
  const auto f = make_constant(Vec2(0.5, 0.0));
  const Vec2 end = integrate_path(f, Vec2::Zero(), 0.0, 2.0, [](double) { return Vec2(0.0, 1.0); }, 0.01);
  CHECK((end - Vec2(1.0, 2.0)).norm() < 1e-12);

  const auto g = make_cellular(1.0, 1.0);
  const auto a = sample_admissible_paths(g, Vec2::Zero(), 1.0, 50, 7, 1.0 / 32.0);
  const auto b = sample_admissible_paths(g, Vec2::Zero(), 1.0, 50, 7, 1.0 / 32.0);
  CHECK(a == b);
  for (const auto& p : a) CHECK(p.norm() <= g.M() * 1.0 + 1e-9);
}

TEST_CASE("stable time step") {
  const auto f = make_constant(Vec2(0.6, 0.8));
  CHECK(stable_time_step(f, 0.1, 0.5) == doctest::Approx(0.5 * 0.1 / 3.0));
}
