#include <cmath>
#include <vector>

#include "doctest.h"
#include "hbvm/errors.hpp"
#include "hbvm/integrator.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/wave_fd.hpp"
#include "hbvm/wave_fourier.hpp"
#include "support/oracles.hpp"

using namespace hbvm;

namespace {

oracle::Field field_of(const SemiDiscreteSystem& sys) {
  return [&sys](const oracle::Vec& y) { return rhs(sys, y); };
}

oracle::Tableau tableau_of(const HbvmMethod& m) {
  const RkTableau t = rk_tableau(m);
  oracle::Tableau o;
  const auto k = static_cast<std::size_t>(t.b.size());
  o.a.assign(k, oracle::Vec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) o.a[i][j] = t.a(i, j);
  o.b.assign(t.b.data(), t.b.data() + k);
  o.c.assign(t.c.data(), t.c.data() + k);
  return o;
}

std::unique_ptr<FdWaveSystem> small_sine_gordon(BoundaryKind bc, std::size_t n = 24) {
  SineGordon sg(1.0);
  sg.a = -6.0;
  sg.b = 6.0;
  switch (bc) {
    case BoundaryKind::dirichlet:
      return build_dirichlet(n, sg.a, sg.b, SineGordon::nonlinearity(), sg.boundary_data(bc));
    case BoundaryKind::neumann:
      return build_neumann(n, sg.a, sg.b, SineGordon::nonlinearity(), sg.boundary_data(bc));
    default: return build_periodic(n, 2, sg.a, sg.b, SineGordon::nonlinearity());
  }
}

State sine_gordon_start(const FdWaveSystem& sys) {
  const SineGordon sg(1.0);
  return sys.initial_state([&](double x) { return sg.psi0(x); }, [&](double x) { return sg.psi1(x); });
}

}  // namespace

TEST_CASE("HBVM(s,s) tableau is the Gauss tableau") {
  for (std::size_t s : {1, 2}) {
    const RkTableau t = rk_tableau(HbvmMethod::make(s, s));
    const oracle::Tableau g = oracle::gauss_tableau(s);
    for (std::size_t i = 0; i < s; ++i) {
      CHECK(std::fabs(t.b(i) - g.b[i]) < 1e-13);
      CHECK(std::fabs(t.c(i) - g.c[i]) < 1e-13);
      for (std::size_t j = 0; j < s; ++j) CHECK(std::fabs(t.a(i, j) - g.a[i][j]) < 1e-13);
    }
  }
  const RkTableau t = rk_tableau(HbvmMethod::make(5, 2));
  CHECK(t.a.rows() == 5);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.a);
  CHECK(svd.singularValues()(2) < 1e-13);
}

TEST_CASE("HBVM step equals a direct solve of its Runge-Kutta form") {
  const auto pend = pendulum();
  const State y0 = {1.2, 0.3};
  const auto per = small_sine_gordon(BoundaryKind::periodic, 12);
  const State w0 = sine_gordon_start(*per);
  for (auto [k, s] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 1}, {4, 2}, {6, 3}}) {
    CAPTURE(k);
    CAPTURE(s);
    const HbvmMethod m = HbvmMethod::make(k, s);
    const auto [y1, d1] = step(*pend, y0, 0.2, m);
    CHECK(oracle::max_abs_diff(y1, oracle::irk_step(field_of(*pend), tableau_of(m), y0, 0.2)) < 1e-12);
    const auto [w1, d2] = step(*per, w0, 0.05, m);
    CHECK(oracle::max_abs_diff(w1, oracle::irk_step(field_of(*per), tableau_of(m), w0, 0.05)) < 1e-12);
  }
}

TEST_CASE("solvers agree: fixed point, blended and dense Newton") {
  for (BoundaryKind bc : {BoundaryKind::periodic, BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    const auto sys = small_sine_gordon(bc);
    const State y0 = sine_gordon_start(*sys);
    const HbvmMethod m = HbvmMethod::make(6, 3);
    SolverConfig c;
    const auto fp = solve_gamma_fixed_point(*sys, y0, 0.1, m, c);
    const auto bl = solve_gamma_blended(*sys, y0, 0.1, m, c);
    const auto nw = solve_gamma_newton(*sys, y0, 0.1, m, c);
    CHECK(oracle::max_abs_diff(fp.gamma, bl.gamma) < 100 * c.tol);
    CHECK(oracle::max_abs_diff(fp.gamma, nw.gamma) < 100 * c.tol);
    CHECK(bl.diagnostics.iterations <= fp.diagnostics.iterations);

    c.preconditioner = PreconditionerKind::exact;
    const auto ex = solve_gamma_blended(*sys, y0, 0.1, m, c);
    CHECK(oracle::max_abs_diff(fp.gamma, ex.gamma) < 100 * c.tol);
  }
}

TEST_CASE("reduced and full formulations give the same step") {
  const auto sys = small_sine_gordon(BoundaryKind::dirichlet);
  const State y0 = sine_gordon_start(*sys);
  const HbvmMethod m = HbvmMethod::make(5, 2);
  SolverConfig full;
  full.full_formulation = true;
  full.mode = SolverMode::fixed_point;
  const auto [a, da] = step(*sys, y0, 0.1, m);
  const auto [b, db] = step(*sys, y0, 0.1, m, full);
  CHECK(oracle::max_abs_diff(a, b) < 1e-12);
  HbvmIntegrator it(*sys, m, full);
  CHECK_FALSE(it.reduced());
}

TEST_CASE("augmented time coordinate advances by h") {
  const auto sys = small_sine_gordon(BoundaryKind::neumann);
  const State y0 = sine_gordon_start(*sys);
  const auto rec = integrate(*sys, y0, 0.1, 7, HbvmMethod::make(3, 1));
  CHECK(rec.augmented);
  CHECK(rec.final_state[2 * sys->size()] == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(rec.times.back() == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("non-separable NLS: fixed point only, quartic energy conserved exactly by HBVM(2,1)") {
  const auto nls = build_nls_periodic(64, -8.0, 8.0, 1.0);
  const State y0 = nls->soliton_state(0.0);
  CHECK_THROWS_AS(HbvmIntegrator(*nls, HbvmMethod::make(2, 1), SolverConfig{SolverMode::blended}),
                  UnsupportedMode);
  CHECK_THROWS_AS(solve_gamma_blended(*nls, y0, 0.05, HbvmMethod::make(2, 1)), UnsupportedMode);
  const auto rec = integrate(*nls, y0, 0.02, 100, HbvmMethod::make(2, 1));
  CHECK(rec.max_abs_drift() < 1e-12);
  const auto mid = integrate(*nls, y0, 0.02, 100, HbvmMethod::make(1, 1));
  CHECK(mid.max_abs_drift() > 1e-9);
}

TEST_CASE("NLS plane wave: exact semi-discrete solution reproduced at order 2s") {
  const auto nls = build_nls_periodic(16, 0.0, 2.0 * std::numbers::pi, 0.5);
  const State y0 = nls->plane_wave_state(0.7, 2, 0.0);
  const double T = 0.5;
  std::vector<double> errs;
  for (std::size_t steps : {20, 40}) {
    const auto rec = integrate(*nls, y0, T / static_cast<double>(steps), steps, HbvmMethod::make(4, 2));
    errs.push_back(oracle::max_abs_diff(rec.final_state, nls->plane_wave_state(0.7, 2, T)));
  }
  CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("gamma coefficients scale like h^j") {
  const auto pend = pendulum();
  const State y0 = {1.0, 0.5};
  const HbvmMethod m = HbvmMethod::make(6, 3);
  SolverConfig c;
  c.full_formulation = true;
  const auto g1 = solve_gamma_fixed_point(*pend, y0, 0.02, m, c);
  const auto g2 = solve_gamma_fixed_point(*pend, y0, 0.01, m, c);
  for (std::size_t j = 0; j < 3; ++j) {
    auto norm = [&](const GammaSolution& g) {
      double s = 0.0;
      for (double v : g.coefficient(j)) s = std::max(s, std::fabs(v));
      return s;
    };
    CHECK(std::log2(norm(g1) / norm(g2)) == doctest::Approx(static_cast<double>(j)).epsilon(0.15));
  }
}

TEST_CASE("failures: non-convergence and blow-up surface as IntegrationFailure with partial data") {
  const auto sys = small_sine_gordon(BoundaryKind::periodic);
  const State y0 = sine_gordon_start(*sys);
  SolverConfig c;
  c.mode = SolverMode::fixed_point;
  c.max_iter = 2;
  c.stall_tol = 1e-14;
  try {
    integrate(*sys, y0, 0.1, 10, HbvmMethod::make(5, 1), c);
    FAIL("expected a failure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.step_index() == 1);
    CHECK(e.partial().times.size() == 1);
    CHECK(e.diagnostics().iterations == 2);
  }

  SolverConfig bad;
  bad.tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_THROWS_AS(HbvmIntegrator(*sys, HbvmMethod::make(2, 1), bad), InvalidArgument);
  CHECK_THROWS_AS(parse_solver_mode("gauss-seidel"), InvalidArgument);
  CHECK(parse_solver_mode("fixed-point") == SolverMode::fixed_point);
  CHECK(parse_solver_mode("newton") == SolverMode::dense_newton);
  CHECK(parse_solver_mode("auto") == SolverMode::automatic);
}

TEST_CASE("trajectory record: zero steps, strides and observer") {
  const auto osc = harmonic_oscillator(2.0);
  const State y0 = {1.0, 0.0};
  const auto rec0 = integrate(*osc, y0, 0.1, 0, HbvmMethod::make(2, 1));
  CHECK(rec0.times.size() == 1);
  CHECK(rec0.max_abs_drift() == 0.0);
  CHECK(rec0.final_state == y0);

  std::vector<std::size_t> seen;
  IntegrateOptions opts;
  opts.stride = 3;
  opts.observer = [&](std::size_t i, double, std::span<const double>) { seen.push_back(i); };
  const auto rec = integrate(*osc, y0, 0.1, 10, HbvmMethod::make(2, 1), {}, opts);
  CHECK(rec.times.size() == 11);
  CHECK(rec.state_steps == std::vector<std::size_t>{0, 3, 6, 9, 10});
  CHECK(seen == rec.state_steps);
  // Quadratic H: conserved by every HBVM.
  CHECK(rec.max_abs_drift() < 1e-14);
  CHECK_THROWS_AS(integrate(*osc, y0, -0.1, 3, HbvmMethod::make(2, 1)), InvalidArgument);
}

TEST_CASE("Fourier system: blended iteration with the diagonal preconditioner") {
  const auto sys = build_fourier(16, 40, -20.0, 20.0, SineGordon::nonlinearity());
  const SineGordon sg(1.0);
  const State y0 = sys->initial_state([&](double x) { return sg.psi0(x); },
                                      [&](double x) { return sg.psi1(x); });
  const HbvmMethod m = HbvmMethod::make(5, 1);
  const auto fp = solve_gamma_fixed_point(*sys, y0, 0.1, m);
  const auto bl = solve_gamma_blended(*sys, y0, 0.1, m);
  CHECK(oracle::max_abs_diff(fp.gamma, bl.gamma) < 1e-12);
  const auto rec = integrate(*sys, y0, 0.1, 200, m);
  CHECK(rec.max_abs_drift() < 1e-12);
}
