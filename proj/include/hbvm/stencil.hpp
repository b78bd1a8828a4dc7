#pragma once
// Symmetric second-difference operators T (so that -T/dx^2 approximates d2/dx2)
// for periodic, Dirichlet and Neumann grids.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hbvm/system.hpp"

namespace hbvm {

class StencilOperator {
 public:
  // order 2 for every boundary kind; 4 and 6 only for periodic grids.
  StencilOperator(std::size_t n, BoundaryKind bc, int order, double dx);

  std::size_t size() const { return n_; }
  BoundaryKind boundary() const { return bc_; }
  int order() const { return order_; }
  double dx() const { return dx_; }
  // w[0] is the diagonal, w[d] the weight of the neighbours at distance d.
  std::span<const double> weights() const { return weights_; }
  std::size_t half_bandwidth() const { return weights_.size() - 1; }

  // out = scale * T q
  void apply(std::span<const double> q, std::span<double> out, double scale = 1.0) const;
  // T(i,j), including periodic wrap and the Neumann corner entries.
  double entry(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd dense() const;

 private:
  std::size_t n_;
  BoundaryKind bc_;
  int order_;
  double dx_;
  std::vector<double> weights_;
};

// Interior weights of the order-2/4/6 stencils.
std::vector<double> stencil_weights(int order);

std::vector<double> apply_stencil(const StencilOperator& op, std::span<const double> q);

// Symmetric tridiagonal system with constant-free bands, factored once and
// solved many times (Thomas algorithm).
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;
  // diag has n entries, off has n-1 (sub = super).
  TridiagonalSolver(std::vector<double> diag, std::vector<double> off);
  std::size_t size() const { return inv_pivot_.size(); }
  void solve(std::span<double> rhs) const;

 private:
  std::vector<double> off_;
  std::vector<double> inv_pivot_;
  std::vector<double> upper_;  // modified super-diagonal
};

}  // namespace hbvm
