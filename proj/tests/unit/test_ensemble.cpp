#include "gfront/ensemble.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace gfront;

TEST_CASE("aggregate merge: {1} and {3}") {
  Aggregate a, b;
  a.add(1.0);
  b.add(3.0);
  const Aggregate m = merge_aggregates(a, b);
  CHECK(m.count == 2);
  CHECK(m.mean == 2.0);
  CHECK(m.variance() == 2.0);
  CHECK(m.min == 1.0);
  CHECK(m.max == 3.0);
}

TEST_CASE("three-way split merges to the sequential statistics") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = N(rng);
  Aggregate all, p[3];
  for (std::size_t k = 0; k < xs.size(); ++k) {
    all.add(xs[k]);
    p[k < 300 ? 0 : k < 650 ? 1 : 2].add(xs[k]);
  }
  const Aggregate m = merge_aggregates(merge_aggregates(p[0], p[1]), p[2]);
  CHECK(m.count == 1000);
  CHECK(m.mean == doctest::Approx(all.mean).epsilon(1e-12));
  CHECK(m.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  // Two-pass oracle.
  double mean = 0.0, ss = 0.0;
  for (double x : xs) mean += x / 1000.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  CHECK(m.variance() == doctest::Approx(ss / 999.0).epsilon(1e-12));
  CHECK(merge_aggregates(Aggregate{}, all).mean == all.mean);
}

TEST_CASE("run_ensemble: results keyed by job, failures kept") {
  std::vector<Job> jobs(40);
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    jobs[k].id = k;
    jobs[k].seed = derive_seed(123, k);
  }
  auto fn = [](const Job& j) {
    if (j.id == 7) throw Error("boom");
    std::mt19937_64 rng(j.seed);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  const auto serial = run_ensemble(jobs, 1, fn);
  const auto parallel = run_ensemble(jobs, 8, fn);
  REQUIRE(serial.size() == jobs.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    CHECK(serial[k].ok == parallel[k].ok);
    CHECK(serial[k].value == parallel[k].value);
    CHECK(serial[k].seed == jobs[k].seed);
  }
  CHECK_FALSE(serial[7].ok);
  CHECK(serial[7].diagnostic == "boom");
  CHECK_THROWS_AS(run_ensemble(std::vector<Job>{}, 1, fn), Error);
}

TEST_CASE("seeds") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  std::vector<Job> jobs(3);
  jobs[0].seed = 5;
  jobs[1].seed = 6;
  jobs[2].seed = 5;
  CHECK(duplicate_seeds(jobs) == std::vector<std::size_t>{2});
}

TEST_CASE("result tables round-trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, kInf, 0.0})
    CHECK(std::stod(format_double(v)) == v);
  ResultTable t;
  t.columns = {"a", "b"};
  t.add_row({"1", format_double(0.1)});
  t.add_row({"x", "inf"});
  CHECK_THROWS(t.add_row({"too", "many", "cells"}));
  std::stringstream ss;
  t.write(ss);
  CHECK(ss.str().rfind(kResultsHeader, 0) == 0);
  const ResultTable r = ResultTable::read(ss);
  CHECK(r.columns == t.columns);
  CHECK(r.rows == t.rows);
}
