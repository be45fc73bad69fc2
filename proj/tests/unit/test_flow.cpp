#include "gfront/flow.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gfront;

TEST_CASE("cellular flow matches its stream function") {
  const double A = 2.0, P = 1.0;
  const auto f = make_cellular(A, P, TimeModulation::sinusoidal(1.0));
  const double k = 2.0 * kPi / P;
  auto expected = [&](double t, const Vec2& x) {
    const double m = std::cos(2.0 * kPi * t);
    return Vec2(A * k * std::sin(k * x.x()) * std::cos(k * x.y()) * m,
                -A * k * std::cos(k * x.x()) * std::sin(k * x.y()) * m);
  };
  // Cell centre at a zero of the modulation: no motion.
  CHECK(f(0.25, Vec2(0.25, 0.25)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& [t, x] : {std::pair{0.0, Vec2(0.1, 0.3)}, {0.4, Vec2(-0.7, 1.2)}, {1.3, Vec2(2.05, -0.4)}}) {
    const Vec2 v = f(t, x), e = expected(t, x);
    CHECK(v.x() == doctest::Approx(e.x()).epsilon(1e-12));
    CHECK(v.y() == doctest::Approx(e.y()).epsilon(1e-12));
  }
  CHECK(f.speed_bound() == doctest::Approx(A * k));
  CHECK(f.M() == doctest::Approx(1.0 + A * k));
}

TEST_CASE("shear and constant fields") {
  const auto s = make_shear(1.5, 2.0);
  CHECK(s(0.3, Vec2(0.0, 0.5)).x() == doctest::Approx(1.5 * std::sin(kPi * 0.5)));
  CHECK(s(0.3, Vec2(0.0, 0.5)).y() == 0.0);
  const auto c = make_constant(Vec2(0.5, -0.25));
  CHECK(c(7.0, Vec2(3.0, 1.0)) == Vec2(0.5, -0.25));
  CHECK(c.M() == doctest::Approx(1.0 + std::hypot(0.5, 0.25)));
}

TEST_CASE("reverse and rescale") {
  const auto f = make_cellular(1.0, 1.0, TimeModulation::sinusoidal(1.0));
  const auto r = reverse(f, 0.8);
  const Vec2 x(0.13, -0.42);
  CHECK((r(0.3, x) + f(0.5, x)).norm() < 1e-14);
  const auto s = rescale(f, 0.25);
  CHECK((s(0.1, x) - f(0.4, 4.0 * x)).norm() < 1e-14);
}

TEST_CASE("lattice sampling agrees with pointwise evaluation") {
  for (const auto& f : {make_cellular(2.0, 1.0, TimeModulation::sinusoidal(1.0)), make_bernoulli_tiling(3)}) {
    const std::vector<double> xs{-1.3, -0.2, 0.45, 2.7}, ys{-0.9, 0.0, 0.61};
    Eigen::ArrayXXd vx, vy;
    f.sample_lattice(0.37, xs, ys, vx, vy);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const Vec2 v = f(0.37, Vec2(xs[i], ys[j]));
        CHECK(vx(i, j) == doctest::Approx(v.x()).epsilon(1e-13));
        CHECK(vy(i, j) == doctest::Approx(v.y()).epsilon(1e-13));
      }
  }
}

TEST_CASE("fields are divergence free to discretization accuracy") {
  const double h = 1.0 / 64.0;
  const double ts[] = {0.0, 0.3, 1.7};
  for (const auto& f : {make_cellular(2.0, 1.0, TimeModulation::sinusoidal(1.0)), make_shear(1.0, 1.0),
                        make_bernoulli_tiling(11)}) {
    const auto rep = check_divergence_free(f, Vec2(-1.0, -1.0), h, 128, ts);
    CHECK(rep.max_abs_div <= divergence_tolerance(f, h) + 1e-12);
  }
}

TEST_CASE("Bernoulli tiling: coins are a pure function of the seed, bounds hold") {
  const BernoulliTilingFlow a(BumpBlock{}, BumpBlock{-BumpBlock{}.amplitude}, 5), b(BumpBlock{}, BumpBlock{-0.2}, 5);
  int heads = 0;
  for (int j = -20; j < 20; ++j)
    for (int k = 0; k < 25; ++k) {
      CHECK(a.coin(j, -j, k) == b.coin(j, -j, k));
      heads += a.coin(j, 3, k);
    }
  CHECK(heads > 400);  // fair coin over 1000 cells
  CHECK(heads < 600);

  const auto f = make_bernoulli_tiling(5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  double vmax = 0.0, lip = 0.0;
  for (int n = 0; n < 20000; ++n) {
    const double t = U(rng);
    const Vec2 x(U(rng), U(rng)), dx = 1e-6 * Vec2(U(rng), U(rng));
    vmax = std::max(vmax, f(t, x).norm());
    lip = std::max(lip, (f(t, x + dx) - f(t, x)).norm() / dx.norm());
  }
  CHECK(vmax <= f.speed_bound());
  CHECK(lip <= f.lipschitz_bound() * (1.0 + 1e-6));
  // Support strictly inside the unit cell: V vanishes on cell edges.
  CHECK(f(0.5, Vec2(3.0, 0.37)).norm() == 0.0);
  CHECK(f(2.0, Vec2(0.37, 0.2)).norm() == 0.0);
}

TEST_CASE("Bernoulli blocks must share a support inside the unit interval") {
  CHECK_THROWS_AS(make_bernoulli_tiling(BumpBlock{0.2, 0.0, 0.9}, BumpBlock{-0.2, 0.0, 0.9}, 1), Error);
  CHECK_THROWS_AS(make_bernoulli_tiling(BumpBlock{0.2, 0.1, 0.9}, BumpBlock{-0.2, 0.2, 0.9}, 1), Error);
}

TEST_CASE("mean drift of a cellular flow vanishes over whole periods") {
  const auto f = make_cellular(2.0, 1.0);
  CHECK(estimate_mean_drift(f, 4.0) < 1e-3);
  CHECK(estimate_mean_drift(make_constant(Vec2(0.3, 0.4)), 2.0) == doctest::Approx(0.5));
}
