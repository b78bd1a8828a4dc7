#pragma once
// Fourier-Galerkin semi-discretization of the periodic wave equation on [a,b]
// in the orthonormal basis (c_0, c_1, s_1, ..., c_N, s_N), with the nonlinear
// term integrated by the m-point periodic trapezoidal rule.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbvm/system.hpp"

namespace hbvm {

class FourierBasis {
 public:
  FourierBasis(std::size_t n_modes, double a, double b);

  std::size_t modes() const { return n_; }
  std::size_t size() const { return 2 * n_ + 1; }
  double a() const { return a_; }
  double b() const { return b_; }
  double period() const { return b_ - a_; }

  // All basis functions at x, in basis order.
  void evaluate(double x, std::span<double> out) const;
  double value(std::size_t index, double x) const;
  // Wavenumber 2 k pi / L of basis slot `index` (0 for c_0).
  double wavenumber(std::size_t index) const;
  // Slot of c_k (k >= 0) and s_k (k >= 1).
  static std::size_t cos_slot(std::size_t k) { return k == 0 ? 0 : 2 * k - 1; }
  static std::size_t sin_slot(std::size_t k) { return 2 * k; }

  // Row-major m x (2N+1) matrix of basis values at x_i = a + i L / m.
  std::vector<double> sample_matrix(std::size_t m) const;

 private:
  std::size_t n_;
  double a_;
  double b_;
};

struct Projection {
  State q;
  State p;
  // Residual of both fields in L2(a,b), and the same norm after mapping
  // [a,b] onto [0,1] (l2_error / sqrt(L)).
  double l2_error = 0.0;
  double error = 0.0;
};

// Default point count for projecting initial data.
inline constexpr std::size_t kInitialProjectionPoints = 4096;

// Trapezoidal projection of (psi0, psi1) on m_proj points; the residual is
// measured on the same points.
Projection project_initial(const FourierBasis& basis, std::size_t m_proj,
                           const std::function<double(double)>& psi0,
                           const std::function<double(double)>& psi1);

std::vector<double> eval_solution(const FourierBasis& basis, std::span<const double> coefficients,
                                  std::span<const double> xs);

class FourierWaveSystem final : public SemiDiscreteSystem, public SeparableForm {
 public:
  FourierWaveSystem(std::string problem, std::size_t n_modes, std::size_t m, double a, double b,
                    Nonlinearity f);

  std::size_t dim() const override { return skew_.dim(); }
  const SkewStructure& skew() const override { return skew_; }
  const Descriptor& descriptor() const override { return descriptor_; }
  double hamiltonian(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> g) const override;
  const SeparableForm* separable() const override { return this; }
  void vector_field(std::span<const double> y, std::span<double> out) const override;

  std::size_t size() const override { return basis_.size(); }
  void acceleration(std::span<const double> q, double t, std::span<double> out) const override;
  Stiffness stiffness() const override { return DiagonalStiffness{stiffness_}; }

  const FourierBasis& basis() const { return basis_; }
  std::size_t quadrature_points() const { return m_; }
  std::span<const double> quadrature_nodes() const { return descriptor_.grid; }
  std::span<const double> stiffness_diagonal() const { return stiffness_; }

  // (L/m) sum_i omega(x_i) f'(omega(x_i)' q)
  void nonlinear_term(std::span<const double> q, std::span<double> out) const;
  // u_N at the quadrature nodes.
  void nodal_values(std::span<const double> q, std::span<double> u) const;

  // Projection on kInitialProjectionPoints points (more if N is large).
  State initial_state(const std::function<double(double)>& psi0,
                      const std::function<double(double)>& psi1) const;

 private:
  FourierBasis basis_;
  std::size_t m_;
  Nonlinearity f_;
  std::vector<double> phi_;        // m x K, row-major
  std::vector<double> stiffness_;  // D
  SkewStructure skew_;
  Descriptor descriptor_;
};

// Throws InvalidArgument when m < 2N.
std::unique_ptr<FourierWaveSystem> build_fourier(std::size_t n_modes, std::size_t m, double a,
                                                 double b, Nonlinearity f,
                                                 std::string problem = "wave");

std::vector<double> nonlinear_term(const FourierWaveSystem& system, std::span<const double> q);

}  // namespace hbvm
