#pragma once
// Concrete problems: sine-Gordon solitons with closed-form references, a
// quartic-nonlinearity wave, small oscillators, and the periodic NLS.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbvm/system.hpp"
#include "hbvm/wave_fd.hpp"

namespace hbvm {

// u_tt = u_xx - sin u on [-20, 20], u(x,0) = 0, u_t(x,0) = (4/gamma) sech(x/gamma).
struct SineGordon {
  double gamma = 1.0;
  double a = -20.0;
  double b = 20.0;

  explicit SineGordon(double g = 1.0);

  enum class Regime { breather, double_pole, kink_antikink };
  Regime regime() const;
  std::string regime_name() const;

  static Nonlinearity nonlinearity();  // f = 1 - cos u
  double psi0(double x) const { return 0.0 * x; }
  double psi1(double x) const;

  // Closed-form solution and its derivatives.
  double u(double x, double t) const;
  double u_t(double x, double t) const;
  double u_x(double x, double t) const;
  double u_xt(double x, double t) const;

  // Dirichlet: traces of u at a and b; Neumann: traces of u_x.
  BoundaryData boundary_data(BoundaryKind kind) const;
};

// phi(t; gamma) and its derivative, continuous across gamma = 1.
double sine_gordon_phi(double gamma, double t);
double sine_gordon_phi_rate(double gamma, double t);
double sine_gordon_exact(double gamma, double x, double t);
BoundaryData sine_gordon_boundary_data(double gamma, BoundaryKind kind, double a = -20.0,
                                       double b = 20.0);

// f(u) = u^4 / 4
Nonlinearity quartic_nonlinearity();
// f(u) = 1 - cos u
Nonlinearity pendulum_nonlinearity();

// H = sum p_i^2/2 + sum k_i q_i^2/2 + sum f(q_i), independent degrees of freedom.
class OscillatorSystem final : public SemiDiscreteSystem, public SeparableForm {
 public:
  OscillatorSystem(std::string name, std::vector<double> stiffness, Nonlinearity f);

  std::size_t dim() const override { return skew_.dim(); }
  const SkewStructure& skew() const override { return skew_; }
  const Descriptor& descriptor() const override { return descriptor_; }
  double hamiltonian(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> g) const override;
  const SeparableForm* separable() const override { return this; }
  void vector_field(std::span<const double> y, std::span<double> out) const override;

  std::size_t size() const override { return stiffness_.size(); }
  void acceleration(std::span<const double> q, double t, std::span<double> out) const override;
  Stiffness stiffness() const override { return DiagonalStiffness{stiffness_}; }

 private:
  std::vector<double> stiffness_;
  Nonlinearity f_;
  SkewStructure skew_;
  Descriptor descriptor_;
};

std::unique_ptr<OscillatorSystem> harmonic_oscillator(double omega = 1.0);
// H = p^2/2 + q^4/4
std::unique_ptr<OscillatorSystem> quartic_oscillator();
// H = p^2/2 + 1 - cos q
std::unique_ptr<OscillatorSystem> pendulum();

// Periodic order-2 FD wave with f = u^4/4; initial data u = sech x, u_t = 0.
struct QuarticWave {
  double a = -20.0;
  double b = 20.0;
  double psi0(double x) const;
  double psi1(double x) const { return 0.0 * x; }
};

// i psi_t + psi_xx + 2 kappa |psi|^2 psi = 0, psi = u + i v, periodic FD.
class NlsSystem final : public SemiDiscreteSystem {
 public:
  NlsSystem(std::size_t n, double a, double b, double kappa);

  std::size_t dim() const override { return skew_.dim(); }
  const SkewStructure& skew() const override { return skew_; }
  const Descriptor& descriptor() const override { return descriptor_; }
  double hamiltonian(std::span<const double> y) const override;
  void gradient(std::span<const double> y, std::span<double> g) const override;

  double kappa() const { return kappa_; }
  double dx() const { return dx_; }
  std::span<const double> grid() const { return descriptor_.grid; }

  // Bright soliton psi = kappa^{-1/2} sech(x) e^{it} (kappa > 0).
  State soliton_state(double t) const;
  // Plane wave A e^{i(k x - w t)} with the FD-consistent frequency, k = 2 pi j / L.
  State plane_wave_state(double amplitude, int wave_index, double t) const;
  double plane_wave_frequency(double amplitude, int wave_index) const;

 private:
  std::size_t n_;
  double dx_;
  double kappa_;
  StencilOperator stencil_;
  SkewStructure skew_;
  Descriptor descriptor_;
};

std::unique_ptr<NlsSystem> build_nls_periodic(std::size_t n, double a, double b, double kappa);

}  // namespace hbvm
