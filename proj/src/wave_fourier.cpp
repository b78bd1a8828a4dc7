#include "hbvm/wave_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "hbvm/errors.hpp"
#include "hbvm/kernels.hpp"

namespace hbvm {

FourierBasis::FourierBasis(std::size_t n_modes, double a, double b) : n_(n_modes), a_(a), b_(b) {
  if (!(b > a)) throw InvalidArgument("FourierBasis: domain must satisfy a < b");
}

void FourierBasis::evaluate(double x, std::span<double> out) const {
  if (out.size() != size()) throw InvalidArgument("FourierBasis::evaluate: wrong output length");
  const double l = period();
  const double theta = 2.0 * std::numbers::pi * (x - a_) / l;
  const double c0 = std::sqrt(1.0 / l);
  const double ck = std::sqrt(2.0 / l);
  out[0] = c0;
  for (std::size_t k = 1; k <= n_; ++k) {
    const double arg = static_cast<double>(k) * theta;
    out[cos_slot(k)] = ck * std::cos(arg);
    out[sin_slot(k)] = ck * std::sin(arg);
  }
}

double FourierBasis::value(std::size_t index, double x) const {
  if (index >= size()) throw InvalidArgument("FourierBasis::value: index out of range");
  const double l = period();
  if (index == 0) return std::sqrt(1.0 / l);
  const std::size_t k = (index + 1) / 2;
  const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) * (x - a_) / l;
  return std::sqrt(2.0 / l) * (index % 2 == 1 ? std::cos(arg) : std::sin(arg));
}

double FourierBasis::wavenumber(std::size_t index) const {
  const std::size_t k = (index + 1) / 2;
  return 2.0 * std::numbers::pi * static_cast<double>(k) / period();
}

std::vector<double> FourierBasis::sample_matrix(std::size_t m) const {
  if (m == 0) throw InvalidArgument("FourierBasis::sample_matrix: m must be positive");
  const std::size_t kdim = size();
  std::vector<double> phi(m * kdim);
  const double step = period() / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i)
    evaluate(a_ + static_cast<double>(i) * step,
             std::span<double>(phi).subspan(i * kdim, kdim));
  return phi;
}

Projection project_initial(const FourierBasis& basis, std::size_t m_proj,
                           const std::function<double(double)>& psi0,
                           const std::function<double(double)>& psi1) {
  if (m_proj < basis.size())
    throw InvalidArgument("project_initial: need at least 2N+1 projection points");
  const std::size_t kdim = basis.size();
  const std::vector<double> phi = basis.sample_matrix(m_proj);
  const double w = basis.period() / static_cast<double>(m_proj);
  std::vector<double> f0(m_proj);
  std::vector<double> f1(m_proj);
  for (std::size_t i = 0; i < m_proj; ++i) {
    const double x = basis.a() + static_cast<double>(i) * w;
    f0[i] = psi0(x);
    f1[i] = psi1(x);
  }
  Projection out;
  out.q.assign(kdim, 0.0);
  out.p.assign(kdim, 0.0);
  kernels::gemv_t(phi, m_proj, kdim, f0, out.q);
  kernels::gemv_t(phi, m_proj, kdim, f1, out.p);
  for (std::size_t j = 0; j < kdim; ++j) {
    out.q[j] *= w;
    out.p[j] *= w;
  }

  std::vector<double> r0(m_proj);
  std::vector<double> r1(m_proj);
  kernels::gemv(phi, m_proj, kdim, out.q, r0);
  kernels::gemv(phi, m_proj, kdim, out.p, r1);
  double sq = 0.0;
  for (std::size_t i = 0; i < m_proj; ++i) {
    const double d0 = f0[i] - r0[i];
    const double d1 = f1[i] - r1[i];
    sq += d0 * d0 + d1 * d1;
  }
  out.l2_error = std::sqrt(w * sq);
  out.error = out.l2_error / std::sqrt(basis.period());
  return out;
}

std::vector<double> eval_solution(const FourierBasis& basis, std::span<const double> coefficients,
                                  std::span<const double> xs) {
  if (coefficients.size() != basis.size())
    throw InvalidArgument("eval_solution: coefficient vector has the wrong length");
  std::vector<double> row(basis.size());
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    basis.evaluate(xs[i], row);
    out[i] = kernels::dot(row, coefficients);
  }
  return out;
}

FourierWaveSystem::FourierWaveSystem(std::string problem, std::size_t n_modes, std::size_t m,
                                     double a, double b, Nonlinearity f)
    : basis_(n_modes, a, b),
      m_(m),
      f_(std::move(f)),
      skew_(SkewStructure::canonical(2 * n_modes + 1, 1.0)) {
  // m = 2N aliases only s_N, which vanishes at every node.
  if (m < 2 * n_modes || m == 0)
    throw InvalidArgument("build_fourier: m = " + std::to_string(m) +
                          " quadrature points under-resolve N = " + std::to_string(n_modes) +
                          " modes (need m >= 2N)");
  if (!f_.f || !f_.df) throw InvalidArgument("build_fourier: nonlinearity f and f' are required");
  phi_ = basis_.sample_matrix(m);
  stiffness_.resize(basis_.size());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    const double k = basis_.wavenumber(j);
    stiffness_[j] = k * k;
  }
  descriptor_.problem = std::move(problem);
  descriptor_.boundary = BoundaryKind::periodic;
  descriptor_.scheme = SpatialScheme::fourier;
  descriptor_.a = a;
  descriptor_.b = b;
  descriptor_.n = basis_.size();
  descriptor_.grid.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    descriptor_.grid[i] = a + static_cast<double>(i) * basis_.period() / static_cast<double>(m);
}

void FourierWaveSystem::nodal_values(std::span<const double> q, std::span<double> u) const {
  kernels::gemv(phi_, m_, basis_.size(), q, u);
}

void FourierWaveSystem::nonlinear_term(std::span<const double> q, std::span<double> out) const {
  if (q.size() != basis_.size() || out.size() != basis_.size())
    throw InvalidArgument("nonlinear_term: expected length " + std::to_string(basis_.size()));
  std::vector<double> u(m_);
  nodal_values(q, u);
  for (double& v : u) v = f_.df(v);
  kernels::gemv_t(phi_, m_, basis_.size(), u, out);
  const double w = basis_.period() / static_cast<double>(m_);
  for (double& v : out) v *= w;
}

double FourierWaveSystem::hamiltonian(std::span<const double> y) const {
  check_dimension(*this, y.size(), "FourierWaveSystem::hamiltonian");
  const std::size_t kdim = basis_.size();
  const auto q = y.subspan(0, kdim);
  const auto p = y.subspan(kdim, kdim);
  double quad = 0.0;
  for (std::size_t j = 0; j < kdim; ++j) quad += stiffness_[j] * q[j] * q[j];
  std::vector<double> u(m_);
  nodal_values(q, u);
  double fsum = 0.0;
  for (double v : u) fsum += f_.f(v);
  return 0.5 * kernels::dot(p, p) + 0.5 * quad +
         basis_.period() / static_cast<double>(m_) * fsum;
}

void FourierWaveSystem::acceleration(std::span<const double> q, double /*t*/,
                                     std::span<double> out) const {
  nonlinear_term(q, out);
  for (std::size_t j = 0; j < basis_.size(); ++j) out[j] = -stiffness_[j] * q[j] - out[j];
}

void FourierWaveSystem::gradient(std::span<const double> y, std::span<double> g) const {
  check_dimension(*this, y.size(), "FourierWaveSystem::gradient");
  check_dimension(*this, g.size(), "FourierWaveSystem::gradient");
  const std::size_t kdim = basis_.size();
  auto gq = g.subspan(0, kdim);
  nonlinear_term(y.subspan(0, kdim), gq);
  for (std::size_t j = 0; j < kdim; ++j) {
    gq[j] += stiffness_[j] * y[j];
    g[kdim + j] = y[kdim + j];
  }
}

void FourierWaveSystem::vector_field(std::span<const double> y, std::span<double> out) const {
  check_dimension(*this, y.size(), "FourierWaveSystem::vector_field");
  check_dimension(*this, out.size(), "FourierWaveSystem::vector_field");
  const std::size_t kdim = basis_.size();
  for (std::size_t j = 0; j < kdim; ++j) out[j] = y[kdim + j];
  acceleration(y.subspan(0, kdim), 0.0, out.subspan(kdim, kdim));
}

State FourierWaveSystem::initial_state(const std::function<double(double)>& psi0,
                                       const std::function<double(double)>& psi1) const {
  const Projection pr =
      project_initial(basis_, std::max(kInitialProjectionPoints, 2 * basis_.size()), psi0, psi1);
  State y(pr.q);
  y.insert(y.end(), pr.p.begin(), pr.p.end());
  return y;
}

std::unique_ptr<FourierWaveSystem> build_fourier(std::size_t n_modes, std::size_t m, double a,
                                                 double b, Nonlinearity f, std::string problem) {
  return std::make_unique<FourierWaveSystem>(std::move(problem), n_modes, m, a, b, std::move(f));
}

std::vector<double> nonlinear_term(const FourierWaveSystem& system, std::span<const double> q) {
  std::vector<double> out(system.size());
  system.nonlinear_term(q, out);
  return out;
}

}  // namespace hbvm
