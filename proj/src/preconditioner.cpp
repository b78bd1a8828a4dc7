#include "hbvm/preconditioner.hpp"

#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "hbvm/errors.hpp"
#include "hbvm/stencil.hpp"

namespace hbvm {

std::string to_string(PreconditionerKind kind) {
  return kind == PreconditionerKind::exact ? "exact" : "tridiagonal";
}

namespace {

class DiagonalSolver final : public ShiftedSolver {
 public:
  DiagonalSolver(std::span<const double> d, double alpha) : inv_(d.size()) {
    for (std::size_t i = 0; i < d.size(); ++i) inv_[i] = 1.0 / (1.0 + alpha * d[i]);
  }
  void solve(std::span<double> rhs) const override {
    for (std::size_t i = 0; i < inv_.size(); ++i) rhs[i] *= inv_[i];
  }
  std::size_t size() const override { return inv_.size(); }

 private:
  std::vector<double> inv_;
};

class BandSolver final : public ShiftedSolver {
 public:
  BandSolver(const StencilOperator& op, double alpha) {
    const std::size_t n = op.size();
    std::vector<double> diag(n);
    std::vector<double> off(n - 1);
    for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 + alpha * op.entry(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = alpha * op.entry(i, i + 1);
    solver_ = TridiagonalSolver(std::move(diag), std::move(off));
  }
  void solve(std::span<double> rhs) const override { solver_.solve(rhs); }
  std::size_t size() const override { return solver_.size(); }

 private:
  TridiagonalSolver solver_;
};

class SparseSolver final : public ShiftedSolver {
 public:
  SparseSolver(const StencilOperator& op, double alpha) : n_(op.size()) {
    const auto n = static_cast<Eigen::Index>(n_);
    const std::size_t w = op.half_bandwidth();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(n_ * (2 * w + 1));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t d = 0; d <= w; ++d) {
        const std::size_t jp = (i + d) % n_;
        const std::size_t jm = (i + n_ - d) % n_;
        if (d == 0) {
          entries.emplace_back(i, i, 1.0 + alpha * op.entry(i, i));
          continue;
        }
        for (std::size_t j : {jp, jm}) {
          const double v = op.entry(i, j);
          const bool in_band = (j == i + d) || (j + d == i);
          if (v != 0.0 && (in_band || op.boundary() == BoundaryKind::periodic))
            entries.emplace_back(i, j, alpha * v);
        }
      }
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    ldlt_.compute(m);
    if (ldlt_.info() != Eigen::Success)
      throw NumericalError("exact preconditioner: factorization failed");
  }
  void solve(std::span<double> rhs) const override {
    Eigen::Map<Eigen::VectorXd> v(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::VectorXd x = ldlt_.solve(v);
    v = x;
  }
  std::size_t size() const override { return n_; }

 private:
  std::size_t n_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

}  // namespace

std::unique_ptr<ShiftedSolver> make_shifted_solver(const Stiffness& stiffness, std::size_t n,
                                                   double alpha, PreconditionerKind kind) {
  if (const auto* diag = std::get_if<DiagonalStiffness>(&stiffness)) {
    if (diag->diagonal.size() != n) throw InvalidArgument("make_shifted_solver: size mismatch");
    return std::make_unique<DiagonalSolver>(diag->diagonal, alpha);
  }
  const auto& st = std::get<StencilStiffness>(stiffness);
  if (st.op == nullptr || st.op->size() != n)
    throw InvalidArgument("make_shifted_solver: size mismatch");
  const double scaled = alpha * st.scale;
  if (kind == PreconditionerKind::exact) return std::make_unique<SparseSolver>(*st.op, scaled);
  return std::make_unique<BandSolver>(*st.op, scaled);
}

}  // namespace hbvm
