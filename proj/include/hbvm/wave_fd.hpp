#pragma once
// Finite-difference semi-discretizations of u_tt = u_xx - f'(u) on [a,b].
//
// Periodic grids use x_i = a + i dx, i = 0..N-1, dx = (b-a)/N. Dirichlet and
// Neumann grids hold the interior nodes x_i = a + i dx, i = 1..N,
// dx = (b-a)/(N+1), and carry the augmented pair (q~, p~).

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbvm/stencil.hpp"
#include "hbvm/system.hpp"

namespace hbvm {

using ScalarFunction = std::function<double(double)>;

// Dirichlet: left/right are u(a,t), u(b,t). Neumann: u_x(a,t), u_x(b,t).
// The *_rate members are their time derivatives.
struct BoundaryData {
  BoundaryKind kind = BoundaryKind::none;
  ScalarFunction left;
  ScalarFunction right;
  ScalarFunction left_rate;
  ScalarFunction right_rate;

  static BoundaryData homogeneous(BoundaryKind kind);
  // Throws InvalidArgument if any function is missing.
  void validate() const;
};

class FdWaveSystem final : public SemiDiscreteSystem, public SeparableForm {
 public:
  FdWaveSystem(std::string problem, std::size_t n, double a, double b, BoundaryKind bc, int order,
               Nonlinearity f, BoundaryData boundary);

  // SemiDiscreteSystem
  std::size_t dim() const override { return skew_.dim(); }
  const SkewStructure& skew() const override { return skew_; }
  const Descriptor& descriptor() const override { return descriptor_; }
  double hamiltonian(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> g) const override;
  double physical_hamiltonian(std::span<const double> y) const override;
  const SeparableForm* separable() const override { return this; }
  void vector_field(std::span<const double> y, std::span<double> out) const override;

  // SeparableForm
  std::size_t size() const override { return n_; }
  void acceleration(std::span<const double> q, double t, std::span<double> out) const override;
  Stiffness stiffness() const override { return StencilStiffness{&stencil_, 1.0 / (dx_ * dx_)}; }
  bool augmented() const override { return skew_.augmented(); }
  double boundary_rate(std::span<const double> q, double t) const override;

  const StencilOperator& stencil() const { return stencil_; }
  const Nonlinearity& nonlinearity() const { return f_; }
  const BoundaryData& boundary() const { return boundary_; }
  double dx() const { return dx_; }
  std::span<const double> grid() const { return descriptor_.grid; }

  // Samples psi0/psi1 on the grid; q~ = t0, p~ = 0 for augmented systems.
  State initial_state(const ScalarFunction& psi0, const ScalarFunction& psi1, double t0 = 0.0) const;

  // dx [p'p/2 + q'Tq/(2 dx^2) + sum f(q)], without any boundary term.
  double bulk_energy(std::span<const double> q, std::span<const double> p) const;

  // Rate of change of the physical energy, d/dt physical_hamiltonian, along
  // the exact flow (boundary flux).
  double energy_flux(std::span<const double> y) const;

  // Neumann only: the time derivative of the augmentation momentum written
  // with the ghost-point velocities (it involves p). It differs from
  // boundary_rate() by d/dt of the coupling term q'phi.
  double neumann_velocity_form_rate(std::span<const double> q, std::span<const double> p,
                                    double t) const;

 private:
  // Boundary forcing added to the acceleration at nodes 0 and n-1.
  void forcing(double t, double& first, double& last) const;

  std::size_t n_;
  double dx_;
  Nonlinearity f_;
  BoundaryData boundary_;
  StencilOperator stencil_;
  SkewStructure skew_;
  Descriptor descriptor_;
};

std::unique_ptr<FdWaveSystem> build_periodic(std::size_t n, int order, double a, double b,
                                             Nonlinearity f, std::string problem = "wave");
std::unique_ptr<FdWaveSystem> build_dirichlet(std::size_t n, double a, double b, Nonlinearity f,
                                              BoundaryData boundary, std::string problem = "wave");
std::unique_ptr<FdWaveSystem> build_neumann(std::size_t n, double a, double b, Nonlinearity f,
                                            BoundaryData boundary, std::string problem = "wave");

}  // namespace hbvm
