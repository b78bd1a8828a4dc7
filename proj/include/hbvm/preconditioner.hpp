#pragma once
// Solvers for M = I + alpha K, the coefficient matrix of the blended
// iteration, where K is the linear part of the acceleration.

#include <memory>
#include <span>
#include <string>

#include "hbvm/system.hpp"

namespace hbvm {

enum class PreconditionerKind {
  tridiagonal,  // keep the |i-j| <= 1 bands of M, no periodic wrap
  exact,        // full banded/circulant M, sparse Cholesky
};

std::string to_string(PreconditionerKind kind);

class ShiftedSolver {
 public:
  virtual ~ShiftedSolver() = default;
  // rhs <- M^{-1} rhs (exactly or approximately, per kind)
  virtual void solve(std::span<double> rhs) const = 0;
  virtual std::size_t size() const = 0;
};

// alpha = (h rho_s)^2.
std::unique_ptr<ShiftedSolver> make_shifted_solver(const Stiffness& stiffness, std::size_t n,
                                                   double alpha, PreconditionerKind kind);

}  // namespace hbvm
