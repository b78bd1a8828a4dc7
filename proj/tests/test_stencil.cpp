#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "hbvm/errors.hpp"
#include "hbvm/preconditioner.hpp"
#include "hbvm/stencil.hpp"
#include "support/oracles.hpp"

using namespace hbvm;

namespace {

Eigen::MatrixXd second_difference(std::size_t n, BoundaryKind bc) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i > 0) t(i, i - 1) = -1.0;
    if (i + 1 < n) t(i, i + 1) = -1.0;
  }
  if (bc == BoundaryKind::periodic) {
    t(0, n - 1) = -1.0;
    t(n - 1, 0) = -1.0;
  }
  if (bc == BoundaryKind::neumann) {
    t(0, 0) = 1.0;
    t(n - 1, n - 1) = 1.0;
  }
  return t;
}

}  // namespace

TEST_CASE("order-2 operators match the hand-built matrices") {
  for (BoundaryKind bc : {BoundaryKind::periodic, BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    const std::size_t n = 9;
    StencilOperator op(n, bc, 2, 0.1);
    const Eigen::MatrixXd ref = second_difference(n, bc);
    CHECK((op.dense() - ref).cwiseAbs().maxCoeff() == 0.0);
    const auto q = oracle::sample_vector(n, 11);
    std::vector<double> out(n);
    op.apply(q, out, 3.0);
    const Eigen::VectorXd expected = 3.0 * ref * Eigen::Map<const Eigen::VectorXd>(q.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(expected(i)).epsilon(1e-14));
  }
}

TEST_CASE("higher-order weights, symmetry and zero row sums") {
  CHECK(stencil_weights(4) == std::vector<double>{30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0});
  const auto w6 = stencil_weights(6);
  const double ref6[4] = {490.0 / 180.0, -270.0 / 180.0, 27.0 / 180.0, -2.0 / 180.0};
  for (int i = 0; i < 4; ++i) CHECK(w6[i] == doctest::Approx(ref6[i]).epsilon(1e-15));
  for (int order : {2, 4, 6}) {
    StencilOperator op(16, BoundaryKind::periodic, order, 0.5);
    const Eigen::MatrixXd d = op.dense();
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(stencil_weights(3), InvalidArgument);
}

TEST_CASE("periodic stencils converge at their nominal order") {
  const double L = 2.0 * std::numbers::pi;
  for (int order : {2, 4, 6}) {
    CAPTURE(order);
    double prev = 0.0;
    double rate = 0.0;
    for (std::size_t n : {32, 64}) {
      const double dx = L / static_cast<double>(n);
      StencilOperator op(n, BoundaryKind::periodic, order, dx);
      std::vector<double> u(n), out(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(static_cast<double>(i) * dx);
      op.apply(u, out, 1.0 / (dx * dx));
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::fabs(out[i] - u[i]));
      if (prev > 0.0) rate = std::log2(prev / err);
      prev = err;
    }
    CHECK(rate == doctest::Approx(order).epsilon(0.05));
  }
}

TEST_CASE("stencil operator preconditions") {
  CHECK_THROWS_AS(StencilOperator(10, BoundaryKind::dirichlet, 4, 0.1), UnsupportedMode);
  CHECK_THROWS_AS(StencilOperator(10, BoundaryKind::neumann, 6, 0.1), UnsupportedMode);
  CHECK_THROWS_AS(StencilOperator(4, BoundaryKind::periodic, 4, 0.1), InvalidArgument);
  CHECK_THROWS_AS(StencilOperator(10, BoundaryKind::periodic, 2, 0.0), InvalidArgument);
  StencilOperator op(5, BoundaryKind::periodic, 2, 0.1);
  std::vector<double> q(4), out(5);
  CHECK_THROWS_AS(op.apply(q, out), InvalidArgument);
}

TEST_CASE("tridiagonal solver matches a dense solve") {
  const std::size_t n = 12;
  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 3.0 + 0.1 * static_cast<double>(i);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = -1.0 + 0.05 * static_cast<double>(i);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off[i];
  const auto rhs = oracle::sample_vector(n, 21);
  const Eigen::VectorXd ref = m.lu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n));
  TridiagonalSolver solver(diag, off);
  auto x = rhs;
  solver.solve(x);
  for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref(i)).epsilon(1e-13));
}

TEST_CASE("shifted solvers: exact kind inverts I + alpha K, tridiagonal kind drops the wrap") {
  const std::size_t n = 20;
  const double dx = 0.2;
  const double alpha = 0.3;
  for (BoundaryKind bc : {BoundaryKind::periodic, BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    CAPTURE(to_string(bc));
    StencilOperator op(n, bc, 2, dx);
    const Stiffness k = StencilStiffness{&op, 1.0 / (dx * dx)};
    const Eigen::MatrixXd m =
        Eigen::MatrixXd::Identity(n, n) + alpha / (dx * dx) * op.dense();
    const auto rhs = oracle::sample_vector(n, 31);
    const Eigen::VectorXd ref = m.lu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n));

    auto x = rhs;
    make_shifted_solver(k, n, alpha, PreconditionerKind::exact)->solve(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref(i)).epsilon(1e-12));

    Eigen::MatrixXd band = m;
    band(0, n - 1) = band(n - 1, 0) = 0.0;
    const Eigen::VectorXd ref_band =
        band.lu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n));
    x = rhs;
    make_shifted_solver(k, n, alpha, PreconditionerKind::tridiagonal)->solve(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref_band(i)).epsilon(1e-12));
  }

  const std::vector<double> d = {0.0, 1.0, 1.0, 4.0, 4.0};
  auto x = std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0};
  make_shifted_solver(DiagonalStiffness{d}, 5, 0.5, PreconditionerKind::tridiagonal)->solve(x);
  for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(1.0 / (1.0 + 0.5 * d[i])));
}
