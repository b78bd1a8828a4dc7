#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hbvm/experiments.hpp"

using namespace hbvm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hbvm_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.N = 60;
  c.h = 0.1;
  c.steps = 20;
  c.stride = 5;
  c.out = out.string();
  return c;
}

}  // namespace

TEST_CASE("method names parse in several spellings") {
  const auto a = MethodSpec::parse("HBVM(5,1)");
  CHECK(a.kind == MethodSpec::Kind::hbvm);
  CHECK(a.k == 5);
  CHECK(a.s == 1);
  CHECK(MethodSpec::parse("hbvm 9, 3").name() == "HBVM(9,3)");
  CHECK(MethodSpec::parse("sv6").name() == "SV6");
  CHECK(MethodSpec::parse("SV4").order == 4);
  CHECK_THROWS_AS(MethodSpec::parse("HBVM(1,2)"), ConfigError);
  CHECK_THROWS_AS(MethodSpec::parse("SV3"), ConfigError);
  CHECK_THROWS_AS(MethodSpec::parse("rk4"), ConfigError);
}

TEST_CASE("config: JSON round trip, unknown keys and validation") {
  RunConfig c;
  c.problem = "quartic-wave";
  c.h = 0.05;
  c.methods = {"SV2"};
  const RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.problem == "quartic-wave");
  CHECK(back.h == 0.05);
  CHECK(back.methods == c.methods);
  CHECK(back.resolved_n() == 400);

  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"stepz", 3}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"steps", -3}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"h", "big"}}), ConfigError);
  CHECK(RunConfig::from_json(nlohmann::json{{"methods", "SV2;HBVM(2,1)"}}).methods.size() == 2);

  RunConfig bad;
  bad.scheme = "fd4";
  bad.bc = "dirichlet";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.h = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.scheme = "fourier";
  bad.m = 150;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.problem = "kdv";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.problem = "nls";
  bad.bc = "neumann";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = RunConfig{};
  bad.solver = "magic";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  RunConfig fourier;
  fourier.scheme = "fourier";
  CHECK(fourier.resolved_n() == 100);
  CHECK_NOTHROW(fourier.validate());
}

TEST_CASE("work-precision step grids hit T exactly and are log-spaced") {
  const auto cells = default_wpd_cells();
  CHECK(cells.size() == 6);
  for (const auto& cell : cells) {
    const auto grid = wpd_steps(cell, 100.0);
    CHECK(grid.size() == cell.points);
    for (const auto& [h, n] : grid) CHECK(h * static_cast<double>(n) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(grid.front().first == doctest::Approx(cell.h_max).epsilon(0.01));
    CHECK(grid.back().first == doctest::Approx(cell.h_min).epsilon(0.02));
  }
  // h = 0.3 does not divide 100: nearest mesh point gives 333 steps.
  const auto g = wpd_steps(WpdCell{MethodSpec::parse("SV2"), 0.3, 0.3, 1}, 100.0);
  CHECK(g[0].second == 333);
}

TEST_CASE("problems are constructed by name") {
  for (const char* name : {"sine-gordon", "quartic-wave", "nls", "harmonic", "quartic", "pendulum"}) {
    CAPTURE(name);
    RunConfig c;
    c.problem = name;
    c.N = 50;
    const ProblemInstance p = make_problem(c);
    CHECK(p.y0.size() == p.system->dim());
    std::vector<double> u(p.points.size());
    p.nodal(p.y0, u);
  }
  RunConfig f;
  f.scheme = "fourier";
  const ProblemInstance p = make_problem(f);
  CHECK(p.projection_error < 1e-10);
  CHECK(p.projection_l2_error == doctest::Approx(p.projection_error * std::sqrt(40.0)));
}

TEST_CASE("solve: zero steps gives a single row; runs are deterministic") {
  const fs::path out = scratch("solve0");
  RunConfig c = small_config(out);
  c.steps = 0;
  CHECK(cmd_solve(c, std::cout) == 0);
  const std::string traj = slurp(out / "trajectory.csv");
  CHECK(line_count(traj) == 2);
  CHECK(traj.rfind("step,time,H,H_augmented,drift,augmented_drift,iterations,residual\n", 0) == 0);
  CHECK(traj.find(",0.0000000000000000e+00,0,") != std::string::npos);

  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  RunConfig ca = small_config(a);
  RunConfig cb = small_config(b);
  CHECK(cmd_solve(ca, std::cout) == 0);
  CHECK(cmd_solve(cb, std::cout) == 0);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "snapshots.csv") == slurp(b / "snapshots.csv"));
  // 5 stored states (0,5,10,15,20) of 60 points each, plus the header.
  CHECK(line_count(slurp(a / "snapshots.csv")) == 1 + 5 * 60);
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(summary["status"] == "ok");
  CHECK(summary["result"]["steps"] == 20);
}

TEST_CASE("solve: a solver failure returns 3 and still writes the partial report") {
  const fs::path out = scratch("fail");
  RunConfig c = small_config(out);
  c.solver = "fixed-point";
  c.max_iter = 1;
  c.tol = 1e-16;
  CHECK(cmd_solve(c, std::cout) == 3);
  CHECK(line_count(slurp(out / "trajectory.csv")) == 2);
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary["status"] == "failed");
}

TEST_CASE("drift: empty method list gives a header-only CSV; rows per method otherwise") {
  const fs::path out = scratch("drift");
  RunConfig c = small_config(out);
  CHECK(cmd_drift(c, std::cout) == 0);
  CHECK(slurp(out / "drift.csv") == "method,step,time,H_drift,H_augmented_drift\n");
  c.methods = {"HBVM(2,1)", "SV2"};
  CHECK(cmd_drift(c, std::cout) == 0);
  CHECK(line_count(slurp(out / "drift.csv")) == 1 + 2 * 21);
}

TEST_CASE("convergence: small FD study has rate close to 2") {
  const fs::path out = scratch("conv");
  RunConfig c;
  c.out = out.string();
  c.ells = {200, 400};
  const auto rows = convergence_study(c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 200);
  CHECK(rows[1].h == doctest::Approx(0.1));
  CHECK(rows[1].rate == doctest::Approx(2.0).epsilon(0.1));
  CHECK(cmd_convergence(c, std::cout) == 0);
  CHECK(line_count(slurp(out / "convergence.csv")) == 3);

  RunConfig none;
  none.problem = "quartic-wave";
  CHECK_THROWS_AS(cmd_convergence(none, std::cout), ConfigError);
}
