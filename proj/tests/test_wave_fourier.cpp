#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hbvm/errors.hpp"
#include "hbvm/integrator.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/wave_fourier.hpp"
#include "support/oracles.hpp"

using namespace hbvm;

TEST_CASE("basis ordering, normalization and Gram identity") {
  const FourierBasis basis(5, -3.0, 2.0);
  const double L = 5.0;
  CHECK(basis.size() == 11);
  CHECK(FourierBasis::cos_slot(0) == 0);
  CHECK(FourierBasis::cos_slot(1) == 1);
  CHECK(FourierBasis::sin_slot(1) == 2);
  CHECK(FourierBasis::cos_slot(5) == 9);
  CHECK(FourierBasis::sin_slot(5) == 10);
  const double x = 0.37;
  CHECK(basis.value(0, x) == doctest::Approx(std::sqrt(1.0 / L)));
  CHECK(basis.value(FourierBasis::cos_slot(3), x) ==
        doctest::Approx(std::sqrt(2.0 / L) * std::cos(6.0 * std::numbers::pi * (x + 3.0) / L)));
  CHECK(basis.value(FourierBasis::sin_slot(2), x) ==
        doctest::Approx(std::sqrt(2.0 / L) * std::sin(4.0 * std::numbers::pi * (x + 3.0) / L)));
  CHECK(basis.wavenumber(FourierBasis::sin_slot(2)) == doctest::Approx(4.0 * std::numbers::pi / L));

  for (std::size_t m : {11, 12, 40}) {
    const auto phi = basis.sample_matrix(m);
    const double w = L / static_cast<double>(m);
    for (std::size_t i = 0; i < 11; ++i)
      for (std::size_t j = 0; j < 11; ++j) {
        double g = 0.0;
        for (std::size_t r = 0; r < m; ++r) g += w * phi[r * 11 + i] * phi[r * 11 + j];
        CHECK(std::fabs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("projection of a basis function is a unit vector") {
  const FourierBasis basis(6, -20.0, 20.0);
  const std::size_t slot = FourierBasis::cos_slot(3);
  const auto pr = project_initial(
      basis, 64, [&](double x) { return basis.value(slot, x); }, [](double) { return 0.0; });
  for (std::size_t j = 0; j < basis.size(); ++j)
    CHECK(std::fabs(pr.q[j] - (j == slot ? 1.0 : 0.0)) < 1e-13);
  CHECK(pr.error < 1e-13);
  CHECK(pr.l2_error < 1e-13);

  const std::vector<double> xs = {-20.0, -3.3, 0.0, 11.1};
  const auto vals = eval_solution(basis, pr.q, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(vals[i] == doctest::Approx(basis.value(slot, xs[i])));
  CHECK_THROWS_AS(project_initial(basis, 5, [](double) { return 0.0; }, [](double) { return 0.0; }),
                  InvalidArgument);
}

TEST_CASE("round trip eval then project is the identity") {
  const FourierBasis basis(8, 0.0, 3.0);
  const auto q = oracle::sample_vector(basis.size(), 51);
  const auto pr = project_initial(
      basis, 17,
      [&](double x) { return eval_solution(basis, q, std::vector<double>{x})[0]; },
      [](double) { return 0.0; });
  CHECK(oracle::max_abs_diff(pr.q, q) < 1e-12);
}

TEST_CASE("nonlinear term: zero, linear and trapezoidal exactness for polynomials") {
  const auto q = oracle::sample_vector(5, 61);
  const auto zero = build_fourier(2, 9, -1.0, 1.0, zero_nonlinearity());
  for (double v : nonlinear_term(*zero, q)) CHECK(v == 0.0);

  const auto lin = build_fourier(2, 5, -1.0, 1.0, polynomial_nonlinearity({0.0, 0.0, 0.5}));
  CHECK(oracle::max_abs_diff(nonlinear_term(*lin, q), q) < 1e-12);

  const Nonlinearity quartic = quartic_nonlinearity();
  const auto coarse = build_fourier(2, 9, -1.0, 1.0, quartic);
  const auto fine = build_fourier(2, 200, -1.0, 1.0, quartic);
  CHECK(oracle::max_abs_diff(nonlinear_term(*coarse, q), nonlinear_term(*fine, q)) < 1e-13);
  const auto under = build_fourier(2, 8, -1.0, 1.0, quartic);
  CHECK(oracle::max_abs_diff(nonlinear_term(*under, q), nonlinear_term(*fine, q)) > 1e-8);
}

TEST_CASE("nonlinear term converges spectrally for an analytic nonlinearity") {
  const std::size_t n = 4;
  auto q = oracle::sample_vector(2 * n + 1, 71);
  for (double& v : q) v *= 0.4;
  auto term = [&](std::size_t m) {
    return nonlinear_term(*build_fourier(n, m, 0.0, 1.0, SineGordon::nonlinearity()), q);
  };
  const auto ref = term(400);
  const double e1 = oracle::max_abs_diff(term(16), ref);
  const double e2 = oracle::max_abs_diff(term(32), ref);
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(e1 / e2 > 256.0);
}

TEST_CASE("Fourier system: gradient, stiffness and Hamiltonian") {
  const auto sys = build_fourier(4, 16, -2.0, 2.0, SineGordon::nonlinearity());
  CHECK(sys->dim() == 18);
  const auto d = sys->stiffness_diagonal();
  CHECK(d[0] == 0.0);
  for (std::size_t k = 1; k <= 4; ++k) {
    const double expected = std::pow(2.0 * k * std::numbers::pi / 4.0, 2);
    CHECK(d[FourierBasis::cos_slot(k)] == doctest::Approx(expected));
    CHECK(d[FourierBasis::sin_slot(k)] == d[FourierBasis::cos_slot(k)]);
  }
  auto y = oracle::sample_vector(sys->dim(), 81);
  State g(sys->dim());
  sys->gradient(y, g);
  const auto ng = oracle::numeric_gradient([&](const State& z) { return sys->hamiltonian(z); }, y);
  CHECK(oracle::max_abs_diff(g, ng) < 1e-7);
  State f(sys->dim());
  sys->vector_field(y, f);
  CHECK(oracle::max_abs_diff(f, rhs(*sys, y)) < 1e-12);
  CHECK_THROWS_AS(build_fourier(10, 19, 0.0, 1.0, zero_nonlinearity()), InvalidArgument);
  CHECK_NOTHROW(build_fourier(10, 20, 0.0, 1.0, zero_nonlinearity()));
}

TEST_CASE("linear Fourier system: a single excited mode oscillates at 2 k pi / L") {
  const double L = 10.0;
  const auto sys = build_fourier(3, 7, 0.0, L, zero_nonlinearity());
  State y(sys->dim(), 0.0);
  const std::size_t slot = FourierBasis::sin_slot(2);
  y[slot] = 1.0;
  const double w = 4.0 * std::numbers::pi / L;
  const double h = 0.05;
  const std::size_t steps = 200;
  const auto rec = integrate(*sys, y, h, steps, HbvmMethod::make(4, 2));
  const double t = h * static_cast<double>(steps);
  // Gauss methods are order 4 here; error well below 1e-5 at this step.
  CHECK(rec.final_state[slot] == doctest::Approx(std::cos(w * t)).epsilon(1e-5));
  CHECK(rec.final_state[sys->size() + slot] == doctest::Approx(-w * std::sin(w * t)).epsilon(1e-5));
  for (std::size_t j = 0; j < sys->size(); ++j)
    if (j != slot) CHECK(std::fabs(rec.final_state[j]) < 1e-14);
}
