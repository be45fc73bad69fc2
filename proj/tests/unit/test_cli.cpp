#include "cli/commands.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gfront;
using namespace gfront::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gfront_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string error_of(const std::string& command, const std::string& text) {
  try {
    Config(parse_config_text(text), key_table(command));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto f = parse_config_text("# header\nflow.kind = cellular   # trailing\n\n  grid.h=0.25\n");
  REQUIRE(f.entries.size() == 2);
  CHECK(f.entries[0] == std::pair<std::string, std::string>{"flow.kind", "cellular"});
  CHECK(f.entries[1] == std::pair<std::string, std::string>{"grid.h", "0.25"});
  CHECK_THROWS_AS(parse_config_text("flow.kind cellular\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("= 3\n"), ConfigError);
}

TEST_CASE("unknown, duplicate and malformed keys name the key") {
  CHECK(error_of("simulate", "flow.colour = red\n").find("flow.colour") != std::string::npos);
  CHECK(error_of("simulate", "grid.h = 0.1\ngrid.h = 0.2\n").find("grid.h") != std::string::npos);
  CHECK(error_of("simulate", "grid.h = fast\n").find("grid.h") != std::string::npos);
  CHECK(error_of("simulate", "flow.kind = vortex\n").find("flow.kind") != std::string::npos);
  CHECK(error_of("simulate", "measure.center = 1\n").find("measure.center") != std::string::npos);
  CHECK(error_of("traveltime", "grid.h = 0.1\n").find("grid.h") != std::string::npos);
  CHECK(error_of("simulate", "grid.h = 0.1\n").empty());
  CHECK_THROWS_AS(key_table("frobnicate"), ConfigError);
}

TEST_CASE("typed accessors and defaults") {
  Config c(parse_config_text("flow.drift = 0.25, -1\nmeasure.r = inf\nsolve.snapshots = 0.5,1\n"), key_table("simulate"));
  CHECK(c.vec2("flow.drift") == Vec2(0.25, -1.0));
  CHECK(std::isinf(c.real("measure.r")));
  CHECK(c.real_list("solve.snapshots") == std::vector<double>{0.5, 1.0});
  CHECK(c.text("flow.kind") == "zero");
  CHECK(c.real("grid.h") == 0.015625);
  CHECK_FALSE(c.has("flow.amplitude"));
  make_flow(c, 1);
  CHECK(c.text("flow.amplitude") == "1");
  CHECK(c.resolved_text().find("flow.drift = 0.25, -1\n") != std::string::npos);
}

TEST_CASE("flow factory resolves the per-kind amplitude") {
  Config cell(parse_config_text("flow.kind = cellular\n"), key_table("simulate"));
  CHECK(make_flow(cell, 0).speed_bound() == doctest::Approx(4.0 * kPi));
  Config bern(parse_config_text("flow.kind = bernoulli\n"), key_table("simulate"));
  make_flow(bern, 0);
  CHECK(bern.real("flow.amplitude") == BumpBlock{}.amplitude);
}

TEST_CASE("simulate writes a complete run directory") {
  const fs::path out = scratch("simulate");
  const std::string cfg =
      "flow.kind = constant\ngrid.h = 0.0625\nsolve.t_final = 0.5\nsolve.snapshots = 0.25, 0.5\n"
      "measure.r = inf\nmeasure.times = 0.1, 0.2, 0.3, 0.4, 0.5\n";
  RunOptions o{out.string(), 1, 3};
  CHECK(run_command("simulate", parse_config_text(cfg), o) == kExitOk);
  for (const char* f : {"config.txt", "resolved.cfg", "manifest.json", "measurements.csv", "isoperimetric.csv",
                        "arrival.gfront1", "snapshots/u_0001.gfront1"})
    CHECK(fs::exists(out / f));
  CHECK(slurp(out / "config.txt") == cfg);
  const std::string first = slurp(out / "measurements.csv");
  CHECK(run_command("simulate", parse_config_text(cfg), o) == kExitOk);
  CHECK(slurp(out / "measurements.csv") == first);
  fs::remove_all(out);
}

TEST_CASE("traveltime output is independent of parallelism") {
  const std::string cfg = "flow.kind = bernoulli\nhomog.n_seeds = 4\nhomog.lambdas = 2, 4\nhomog.directions = 4\n";
  const fs::path a = scratch("tt1"), b = scratch("tt4");
  CHECK(run_command("traveltime", parse_config_text(cfg), {a.string(), 1, 11}) == kExitOk);
  CHECK(run_command("traveltime", parse_config_text(cfg), {b.string(), 4, 11}) == kExitOk);
  CHECK(slurp(a / "samples.csv") == slurp(b / "samples.csv"));
  CHECK(slurp(a / "samples.csv").size() > 100);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("homogenize checks T̄ against its bounds") {
  const fs::path out = scratch("homog");
  const std::string common = "homog.n_seeds = 1\nhomog.lambdas = 2, 4\nhomog.h = 0.0625\n";
  // Shear with |V| ≤ 1/2: T̄ lies strictly between |v|/M and |v|/(1 − 1/2).
  const std::string shear = "flow.kind = shear\nflow.amplitude = 0.5\nhomog.delta_hat = 0.5\n";
  CHECK(run_command("homogenize", parse_config_text(shear + common), {out.string(), 1, 0}) == kExitOk);
  CHECK(fs::exists(out / "shape.json"));
  CHECK(fs::exists(out / "tbar.csv"));
  // A wrong drift bound: upstream against c = (1/2, 0), T̄ = 2 exceeds |v|/(1 − 0).
  const std::string drift = "flow.kind = constant\nhomog.delta_hat = 0\n";
  CHECK(run_command("homogenize", parse_config_text(drift + common), {out.string(), 1, 0}) == kExitCheckFailed);
  fs::remove_all(out);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(run_command("simulate", parse_config_text(""), {"", 1, 0}), ConfigError);
  CHECK_THROWS_AS(run_command("simulate", parse_config_text(""), {"x", 0, 0}), ConfigError);
  CHECK_THROWS_AS(run_command("compare", parse_config_text("flow.kind = cellular\ncompare.shape = closed_form\n"),
                              {scratch("cmp").string(), 1, 0}),
                  ConfigError);
}
