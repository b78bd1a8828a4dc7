#include "hbvm/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hbvm/errors.hpp"
#include "hbvm/kernels.hpp"

namespace hbvm {

std::vector<double> stencil_weights(int order) {
  switch (order) {
    case 2: return {2.0, -1.0};
    case 4: return {5.0 / 2.0, -4.0 / 3.0, 1.0 / 12.0};
    case 6: return {49.0 / 18.0, -3.0 / 2.0, 3.0 / 20.0, -1.0 / 90.0};
    default: break;
  }
  throw InvalidArgument("stencil order must be 2, 4 or 6, got " + std::to_string(order));
}

StencilOperator::StencilOperator(std::size_t n, BoundaryKind bc, int order, double dx)
    : n_(n), bc_(bc), order_(order), dx_(dx), weights_(stencil_weights(order)) {
  if (bc == BoundaryKind::none) throw InvalidArgument("StencilOperator: boundary kind required");
  if (order != 2 && bc != BoundaryKind::periodic)
    throw UnsupportedMode("StencilOperator: order " + std::to_string(order) +
                          " is only available with periodic boundaries");
  if (!(dx > 0.0)) throw InvalidArgument("StencilOperator: dx must be positive");
  const std::size_t min_n = bc == BoundaryKind::periodic ? static_cast<std::size_t>(order) + 1 : 2;
  if (n < min_n)
    throw InvalidArgument("StencilOperator: need at least " + std::to_string(min_n) +
                          " points, got " + std::to_string(n));
}

void StencilOperator::apply(std::span<const double> q, std::span<double> out, double scale) const {
  if (q.size() != n_ || out.size() != n_)
    throw InvalidArgument("StencilOperator::apply: expected length " + std::to_string(n_));
  kernels::symmetric_stencil(weights_, q, out, scale, bc_ == BoundaryKind::periodic);
  if (bc_ == BoundaryKind::neumann) {
    // corner diagonal entries are 1 instead of 2
    out[0] -= scale * q[0];
    out[n_ - 1] -= scale * q[n_ - 1];
  }
}

double StencilOperator::entry(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InvalidArgument("StencilOperator::entry: index out of range");
  std::size_t d = i > j ? i - j : j - i;
  if (bc_ == BoundaryKind::periodic) d = std::min(d, n_ - d);
  double value = 0.0;
  if (d < weights_.size()) value = weights_[d];
  if (bc_ == BoundaryKind::neumann && i == j && (i == 0 || i == n_ - 1)) value -= 1.0;
  return value;
}

Eigen::MatrixXd StencilOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      t(i, j) = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return t;
}

std::vector<double> apply_stencil(const StencilOperator& op, std::span<const double> q) {
  std::vector<double> out(op.size());
  op.apply(q, out);
  return out;
}

TridiagonalSolver::TridiagonalSolver(std::vector<double> diag, std::vector<double> off)
    : off_(std::move(off)) {
  const std::size_t n = diag.size();
  if (n == 0 || off_.size() + 1 != n)
    throw InvalidArgument("TridiagonalSolver: band lengths do not match");
  inv_pivot_.resize(n);
  upper_.resize(n > 0 ? n - 1 : 0);
  double pivot = diag[0];
  for (std::size_t i = 0;; ++i) {
    if (pivot == 0.0 || !std::isfinite(pivot))
      throw NumericalError("TridiagonalSolver: zero pivot");
    inv_pivot_[i] = 1.0 / pivot;
    if (i + 1 == n) break;
    upper_[i] = off_[i] * inv_pivot_[i];
    pivot = diag[i + 1] - off_[i] * upper_[i];
  }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
  const std::size_t n = inv_pivot_.size();
  if (rhs.size() != n) throw InvalidArgument("TridiagonalSolver::solve: length mismatch");
  rhs[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - off_[i - 1] * rhs[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];
}

}  // namespace hbvm
