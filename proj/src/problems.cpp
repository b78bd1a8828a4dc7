#include "hbvm/problems.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "hbvm/errors.hpp"
#include "hbvm/kernels.hpp"

namespace hbvm {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// sin(z)/z and sinh(z)/z without the 0/0 at z = 0.
double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }
double sinhc(double z) { return z == 0.0 ? 1.0 : std::sinh(z) / z; }

}  // namespace

double sine_gordon_phi(double gamma, double t) {
  if (!(gamma > 0.0)) throw InvalidArgument("sine-Gordon: gamma must be positive");
  if (gamma > 1.0) {
    const double a = std::sqrt(gamma * gamma - 1.0);
    return t / gamma * sinc(a * t / gamma);
  }
  const double a = std::sqrt(1.0 - gamma * gamma);
  return t / gamma * sinhc(a * t / gamma);
}

double sine_gordon_phi_rate(double gamma, double t) {
  if (!(gamma > 0.0)) throw InvalidArgument("sine-Gordon: gamma must be positive");
  if (gamma > 1.0) return std::cos(std::sqrt(gamma * gamma - 1.0) * t / gamma) / gamma;
  return std::cosh(std::sqrt(1.0 - gamma * gamma) * t / gamma) / gamma;
}

double sine_gordon_exact(double gamma, double x, double t) {
  return 4.0 * std::atan(sine_gordon_phi(gamma, t) * sech(x / gamma));
}

SineGordon::SineGordon(double g) : gamma(g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("sine-Gordon: gamma must be positive");
}

SineGordon::Regime SineGordon::regime() const {
  if (gamma > 1.0) return Regime::breather;
  if (gamma < 1.0) return Regime::kink_antikink;
  return Regime::double_pole;
}

std::string SineGordon::regime_name() const {
  switch (regime()) {
    case Regime::breather: return "breather";
    case Regime::kink_antikink: return "kink-antikink";
    case Regime::double_pole: break;
  }
  return "double-pole";
}

Nonlinearity SineGordon::nonlinearity() { return pendulum_nonlinearity(); }

double SineGordon::psi1(double x) const { return 4.0 / gamma * sech(x / gamma); }

double SineGordon::u(double x, double t) const { return sine_gordon_exact(gamma, x, t); }

double SineGordon::u_t(double x, double t) const {
  const double s = sech(x / gamma);
  const double ph = sine_gordon_phi(gamma, t);
  return 4.0 * sine_gordon_phi_rate(gamma, t) * s / (1.0 + ph * ph * s * s);
}

double SineGordon::u_x(double x, double t) const {
  const double s = sech(x / gamma);
  const double ds = -s * std::tanh(x / gamma) / gamma;
  const double ph = sine_gordon_phi(gamma, t);
  return 4.0 * ph * ds / (1.0 + ph * ph * s * s);
}

double SineGordon::u_xt(double x, double t) const {
  const double s = sech(x / gamma);
  const double ds = -s * std::tanh(x / gamma) / gamma;
  const double ph = sine_gordon_phi(gamma, t);
  const double w = ph * ph * s * s;
  return 4.0 * ds * sine_gordon_phi_rate(gamma, t) * (1.0 - w) / ((1.0 + w) * (1.0 + w));
}

BoundaryData SineGordon::boundary_data(BoundaryKind kind) const {
  const SineGordon sg = *this;
  BoundaryData bd;
  bd.kind = kind;
  if (kind == BoundaryKind::dirichlet) {
    bd.left = [sg](double t) { return sg.u(sg.a, t); };
    bd.right = [sg](double t) { return sg.u(sg.b, t); };
    bd.left_rate = [sg](double t) { return sg.u_t(sg.a, t); };
    bd.right_rate = [sg](double t) { return sg.u_t(sg.b, t); };
  } else if (kind == BoundaryKind::neumann) {
    bd.left = [sg](double t) { return sg.u_x(sg.a, t); };
    bd.right = [sg](double t) { return sg.u_x(sg.b, t); };
    bd.left_rate = [sg](double t) { return sg.u_xt(sg.a, t); };
    bd.right_rate = [sg](double t) { return sg.u_xt(sg.b, t); };
  } else {
    throw InvalidArgument("sine-Gordon boundary data exist for dirichlet and neumann only");
  }
  return bd;
}

BoundaryData sine_gordon_boundary_data(double gamma, BoundaryKind kind, double a, double b) {
  SineGordon sg(gamma);
  sg.a = a;
  sg.b = b;
  return sg.boundary_data(kind);
}

Nonlinearity quartic_nonlinearity() { return polynomial_nonlinearity({0.0, 0.0, 0.0, 0.0, 0.25}); }

Nonlinearity pendulum_nonlinearity() {
  return {[](double u) { return 1.0 - std::cos(u); }, [](double u) { return std::sin(u); }, -1};
}

OscillatorSystem::OscillatorSystem(std::string name, std::vector<double> stiffness, Nonlinearity f)
    : stiffness_(std::move(stiffness)),
      f_(std::move(f)),
      skew_(SkewStructure::canonical(stiffness_.size(), 1.0)) {
  if (stiffness_.empty()) throw InvalidArgument("OscillatorSystem: need at least one degree of freedom");
  descriptor_.problem = std::move(name);
  descriptor_.n = stiffness_.size();
}

double OscillatorSystem::hamiltonian(std::span<const double> y) const {
  check_dimension(*this, y.size(), "OscillatorSystem::hamiltonian");
  const std::size_t n = stiffness_.size();
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    h += 0.5 * y[n + i] * y[n + i] + 0.5 * stiffness_[i] * y[i] * y[i] + f_.f(y[i]);
  return h;
}

void OscillatorSystem::gradient(std::span<const double> y, std::span<double> g) const {
  check_dimension(*this, y.size(), "OscillatorSystem::gradient");
  check_dimension(*this, g.size(), "OscillatorSystem::gradient");
  const std::size_t n = stiffness_.size();
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = stiffness_[i] * y[i] + f_.df(y[i]);
    g[n + i] = y[n + i];
  }
}

void OscillatorSystem::vector_field(std::span<const double> y, std::span<double> out) const {
  check_dimension(*this, y.size(), "OscillatorSystem::vector_field");
  const std::size_t n = stiffness_.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = y[n + i];
  acceleration(y.subspan(0, n), 0.0, out.subspan(n, n));
}

void OscillatorSystem::acceleration(std::span<const double> q, double /*t*/,
                                    std::span<double> out) const {
  for (std::size_t i = 0; i < stiffness_.size(); ++i)
    out[i] = -stiffness_[i] * q[i] - f_.df(q[i]);
}

std::unique_ptr<OscillatorSystem> harmonic_oscillator(double omega) {
  return std::make_unique<OscillatorSystem>("harmonic", std::vector<double>{omega * omega},
                                            zero_nonlinearity());
}

std::unique_ptr<OscillatorSystem> quartic_oscillator() {
  return std::make_unique<OscillatorSystem>("quartic", std::vector<double>{0.0},
                                            quartic_nonlinearity());
}

std::unique_ptr<OscillatorSystem> pendulum() {
  return std::make_unique<OscillatorSystem>("pendulum", std::vector<double>{0.0},
                                            pendulum_nonlinearity());
}

double QuarticWave::psi0(double x) const { return sech(x); }

NlsSystem::NlsSystem(std::size_t n, double a, double b, double kappa)
    : n_(n),
      dx_((b - a) / static_cast<double>(n)),
      kappa_(kappa),
      stencil_(n, BoundaryKind::periodic, 2, (b - a) / static_cast<double>(n)),
      skew_(SkewStructure::canonical(n, 1.0 / dx_)) {
  if (!(b > a)) throw InvalidArgument("nls: domain must satisfy a < b");
  if (n < 3) throw InvalidArgument("nls: need N >= 3");
  descriptor_.problem = "nls";
  descriptor_.boundary = BoundaryKind::periodic;
  descriptor_.scheme = SpatialScheme::fd2;
  descriptor_.a = a;
  descriptor_.b = b;
  descriptor_.n = n;
  descriptor_.grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) descriptor_.grid[i] = a + static_cast<double>(i) * dx_;
}

double NlsSystem::hamiltonian(std::span<const double> y) const {
  check_dimension(*this, y.size(), "NlsSystem::hamiltonian");
  const auto u = y.subspan(0, n_);
  const auto v = y.subspan(n_, n_);
  std::vector<double> tu(n_);
  std::vector<double> tv(n_);
  stencil_.apply(u, tu);
  stencil_.apply(v, tv);
  double quartic = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double r = u[i] * u[i] + v[i] * v[i];
    quartic += r * r;
  }
  return (kernels::dot(u, tu) + kernels::dot(v, tv)) / (2.0 * dx_) - 0.5 * kappa_ * dx_ * quartic;
}

void NlsSystem::gradient(std::span<const double> y, std::span<double> g) const {
  check_dimension(*this, y.size(), "NlsSystem::gradient");
  check_dimension(*this, g.size(), "NlsSystem::gradient");
  const auto u = y.subspan(0, n_);
  const auto v = y.subspan(n_, n_);
  auto gu = g.subspan(0, n_);
  auto gv = g.subspan(n_, n_);
  stencil_.apply(u, gu, 1.0 / dx_);
  stencil_.apply(v, gv, 1.0 / dx_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double c = 2.0 * kappa_ * dx_ * (u[i] * u[i] + v[i] * v[i]);
    gu[i] -= c * u[i];
    gv[i] -= c * v[i];
  }
}

State NlsSystem::soliton_state(double t) const {
  if (!(kappa_ > 0.0)) throw InvalidArgument("nls: the bright soliton needs kappa > 0");
  State y(dim());
  const double amp = 1.0 / std::sqrt(kappa_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double s = amp * sech(descriptor_.grid[i]);
    y[i] = s * std::cos(t);
    y[n_ + i] = s * std::sin(t);
  }
  return y;
}

double NlsSystem::plane_wave_frequency(double amplitude, int wave_index) const {
  const double k = 2.0 * std::numbers::pi * wave_index / (descriptor_.b - descriptor_.a);
  const double lambda = 2.0 - 2.0 * std::cos(k * dx_);
  return lambda / (dx_ * dx_) - 2.0 * kappa_ * amplitude * amplitude;
}

State NlsSystem::plane_wave_state(double amplitude, int wave_index, double t) const {
  const double k = 2.0 * std::numbers::pi * wave_index / (descriptor_.b - descriptor_.a);
  const double w = plane_wave_frequency(amplitude, wave_index);
  State y(dim());
  for (std::size_t i = 0; i < n_; ++i) {
    const double arg = k * (descriptor_.grid[i] - descriptor_.a) - w * t;
    y[i] = amplitude * std::cos(arg);
    y[n_ + i] = amplitude * std::sin(arg);
  }
  return y;
}

std::unique_ptr<NlsSystem> build_nls_periodic(std::size_t n, double a, double b, double kappa) {
  return std::make_unique<NlsSystem>(n, a, b, kappa);
}

}  // namespace hbvm
