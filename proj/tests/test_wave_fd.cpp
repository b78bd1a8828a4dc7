#include <cmath>
#include <vector>

#include "doctest.h"
#include "hbvm/errors.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/wave_fd.hpp"
#include "support/oracles.hpp"

using namespace hbvm;

namespace {

// Smooth, non-trivial boundary data with exact time derivatives.
BoundaryData wavy(BoundaryKind kind) {
  return {kind,
          [](double t) { return 0.3 * std::sin(1.3 * t) + 0.1; },
          [](double t) { return -0.2 * std::cos(0.7 * t); },
          [](double t) { return 0.39 * std::cos(1.3 * t); },
          [](double t) { return 0.14 * std::sin(0.7 * t); }};
}

std::unique_ptr<FdWaveSystem> make(BoundaryKind bc, std::size_t n = 12) {
  const Nonlinearity f = pendulum_nonlinearity();
  switch (bc) {
    case BoundaryKind::dirichlet: return build_dirichlet(n, -2.0, 3.0, f, wavy(bc));
    case BoundaryKind::neumann: return build_neumann(n, -2.0, 3.0, f, wavy(bc));
    default: return build_periodic(n, 2, -2.0, 3.0, f);
  }
}

State sample_state(const FdWaveSystem& sys) {
  State y = oracle::sample_vector(sys.dim(), 41);
  if (sys.augmented()) y[2 * sys.size()] = 0.8;
  return y;
}

// d/de g(y + e v) at e = 0, fourth-order central difference.
double directional(const std::function<double(const State&)>& g, const State& y, const State& v) {
  const double e = 1e-4;
  auto at = [&](double s) { return g(oracle::axpy(y, s, v)); };
  return (8.0 * (at(e) - at(-e)) - (at(2 * e) - at(-2 * e))) / (12.0 * e);
}

}  // namespace

TEST_CASE("gradient agrees with a numerical gradient of H") {
  for (BoundaryKind bc : {BoundaryKind::periodic, BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    const auto sys = make(bc);
    const State y = sample_state(*sys);
    State g(sys->dim());
    sys->gradient(y, g);
    const auto ng = oracle::numeric_gradient([&](const State& z) { return sys->hamiltonian(z); }, y);
    CHECK(oracle::max_abs_diff(g, ng) < 1e-7);
  }
}

TEST_CASE("vector field equals J grad H and conserves the (augmented) Hamiltonian") {
  for (BoundaryKind bc : {BoundaryKind::periodic, BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    const auto sys = make(bc);
    const State y = sample_state(*sys);
    State f(sys->dim());
    sys->vector_field(y, f);
    CHECK(oracle::max_abs_diff(f, rhs(*sys, y)) < 1e-12);
    const double dh = directional([&](const State& z) { return sys->hamiltonian(z); }, y, f);
    CHECK(std::fabs(dh) < 1e-7);
  }
}

TEST_CASE("physical energy changes at the rate of the boundary flux") {
  for (BoundaryKind bc : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    const auto sys = make(bc);
    const State y = sample_state(*sys);
    State f(sys->dim());
    sys->vector_field(y, f);
    const double de = directional([&](const State& z) { return sys->physical_hamiltonian(z); }, y, f);
    CHECK(de == doctest::Approx(sys->energy_flux(y)).epsilon(1e-7));
    CHECK(std::fabs(sys->energy_flux(y)) > 1e-3);
  }
}

TEST_CASE("Neumann: velocity-form rate differs from the canonical rate by d/dt of q'phi") {
  const auto sys = make(BoundaryKind::neumann);
  const std::size_t n = sys->size();
  const State y = sample_state(*sys);
  State f(sys->dim());
  sys->vector_field(y, f);
  const auto& bd = sys->boundary();
  auto coupling = [&](const State& z) {
    const double t = z[2 * n];
    return z[0] * bd.left(t) - z[n - 1] * bd.right(t);
  };
  const double t = y[2 * n];
  const double velocity_form =
      sys->neumann_velocity_form_rate(std::span<const double>(y).subspan(0, n),
                                      std::span<const double>(y).subspan(n, n), t);
  const double canonical = sys->boundary_rate(std::span<const double>(y).subspan(0, n), t);
  const double d_coupling = directional(coupling, y, f);
  CHECK(canonical == doctest::Approx(velocity_form - d_coupling).epsilon(1e-8));
}

TEST_CASE("grids, dimensions and initial states") {
  const auto per = make(BoundaryKind::periodic, 10);
  CHECK(per->dim() == 20);
  CHECK(per->dx() == doctest::Approx(0.5));
  CHECK(per->grid()[0] == -2.0);
  CHECK_FALSE(per->augmented());

  const auto dir = make(BoundaryKind::dirichlet, 9);
  CHECK(dir->dim() == 20);
  CHECK(dir->dx() == doctest::Approx(0.5));
  CHECK(dir->grid()[0] == doctest::Approx(-1.5));
  CHECK(dir->grid()[8] == doctest::Approx(2.5));
  const State y0 = dir->initial_state([](double x) { return x; }, [](double) { return 1.0; }, 2.5);
  CHECK(y0[0] == doctest::Approx(-1.5));
  CHECK(y0[9] == 1.0);
  CHECK(y0[18] == 2.5);
  CHECK(y0[19] == 0.0);

  CHECK_THROWS_AS(build_dirichlet(5, 1.0, 0.0, zero_nonlinearity(), wavy(BoundaryKind::dirichlet)),
                  InvalidArgument);
  CHECK_THROWS_AS(build_dirichlet(5, 0.0, 1.0, zero_nonlinearity(), wavy(BoundaryKind::neumann)),
                  InvalidArgument);
  CHECK_THROWS_AS(build_periodic(4, 4, 0.0, 1.0, zero_nonlinearity()), InvalidArgument);
  State bad(3);
  CHECK_THROWS_AS(per->hamiltonian(bad), InvalidArgument);
}

TEST_CASE("sine-Gordon semi-discretization is second-order consistent with the exact solution") {
  for (BoundaryKind bc : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    const SineGordon sg(1.0);
    std::vector<double> errs;
    for (std::size_t n : {199, 399}) {
      const auto sys = bc == BoundaryKind::dirichlet
                           ? build_dirichlet(n, sg.a, sg.b, SineGordon::nonlinearity(), sg.boundary_data(bc))
                           : build_neumann(n, sg.a, sg.b, SineGordon::nonlinearity(), sg.boundary_data(bc));
      const double t = 1.7;
      std::vector<double> q(n), acc(n);
      for (std::size_t i = 0; i < n; ++i) q[i] = sg.u(sys->grid()[i], t);
      sys->acceleration(q, t, acc);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = sys->grid()[i];
        const double e = 1e-4;
        const double uxx = (sg.u_x(x + e, t) - sg.u_x(x - e, t)) / (2.0 * e);
        err = std::max(err, std::fabs(acc[i] - (uxx - std::sin(q[i]))));
      }
      errs.push_back(err);
    }
    CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
  }
}
