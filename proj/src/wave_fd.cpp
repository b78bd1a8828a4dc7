#include "hbvm/wave_fd.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hbvm/errors.hpp"
#include "hbvm/kernels.hpp"

namespace hbvm {

namespace {

double grid_step(std::size_t n, double a, double b, BoundaryKind bc) {
  if (!(b > a)) throw InvalidArgument("wave_fd: domain must satisfy a < b");
  if (n == 0) throw InvalidArgument("wave_fd: N must be positive");
  const double cells = bc == BoundaryKind::periodic ? static_cast<double>(n)
                                                    : static_cast<double>(n) + 1.0;
  return (b - a) / cells;
}

SpatialScheme scheme_for(int order) {
  switch (order) {
    case 2: return SpatialScheme::fd2;
    case 4: return SpatialScheme::fd4;
    case 6: return SpatialScheme::fd6;
    default: break;
  }
  throw InvalidArgument("wave_fd: unsupported order " + std::to_string(order));
}

}  // namespace

BoundaryData BoundaryData::homogeneous(BoundaryKind kind) {
  auto zero = [](double) { return 0.0; };
  return {kind, zero, zero, zero, zero};
}

void BoundaryData::validate() const {
  if (!left || !right) throw InvalidArgument("BoundaryData: boundary values are missing");
  if (!left_rate || !right_rate)
    throw InvalidArgument("BoundaryData: time derivatives of the boundary data are missing");
}

FdWaveSystem::FdWaveSystem(std::string problem, std::size_t n, double a, double b,
                           BoundaryKind bc, int order, Nonlinearity f, BoundaryData boundary)
    : n_(n),
      dx_(grid_step(n, a, b, bc)),
      f_(std::move(f)),
      boundary_(std::move(boundary)),
      stencil_(n, bc, order, dx_),
      skew_(bc == BoundaryKind::periodic ? SkewStructure::canonical(n, 1.0 / dx_)
                                         : SkewStructure::canonical_augmented(n, 1.0 / dx_)) {
  if (!f_.f || !f_.df) throw InvalidArgument("wave_fd: nonlinearity f and f' are required");
  if (bc != BoundaryKind::periodic) {
    if (boundary_.kind != bc)
      throw InvalidArgument("wave_fd: boundary data kind does not match the boundary condition");
    boundary_.validate();
  }
  descriptor_.problem = std::move(problem);
  descriptor_.boundary = bc;
  descriptor_.scheme = scheme_for(order);
  descriptor_.a = a;
  descriptor_.b = b;
  descriptor_.n = n;
  descriptor_.grid.resize(n);
  const std::size_t offset = bc == BoundaryKind::periodic ? 0 : 1;
  for (std::size_t i = 0; i < n; ++i)
    descriptor_.grid[i] = a + static_cast<double>(i + offset) * dx_;
}

double FdWaveSystem::bulk_energy(std::span<const double> q, std::span<const double> p) const {
  std::vector<double> tq(n_);
  stencil_.apply(q, tq);
  double fsum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) fsum += f_.f(q[i]);
  return dx_ * (0.5 * kernels::dot(p, p) + kernels::dot(q, tq) / (2.0 * dx_ * dx_) + fsum);
}

double FdWaveSystem::hamiltonian(std::span<const double> y) const {
  check_dimension(*this, y.size(), "FdWaveSystem::hamiltonian");
  const auto q = y.subspan(0, n_);
  const auto p = y.subspan(n_, n_);
  double h = bulk_energy(q, p);
  switch (descriptor_.boundary) {
    case BoundaryKind::dirichlet: {
      const double t = y[2 * n_];
      const double l = boundary_.left(t);
      const double r = boundary_.right(t);
      h += (l * l + r * r) / (2.0 * dx_) - (q[0] * l + q[n_ - 1] * r) / dx_ + y[2 * n_ + 1];
      break;
    }
    case BoundaryKind::neumann: {
      const double t = y[2 * n_];
      const double l = boundary_.left(t);
      const double r = boundary_.right(t);
      h += 0.5 * dx_ * (l * l + r * r) + q[0] * l - q[n_ - 1] * r + y[2 * n_ + 1];
      break;
    }
    default: break;
  }
  return h;
}

double FdWaveSystem::physical_hamiltonian(std::span<const double> y) const {
  check_dimension(*this, y.size(), "FdWaveSystem::physical_hamiltonian");
  switch (descriptor_.boundary) {
    case BoundaryKind::dirichlet: return hamiltonian(y) - y[2 * n_ + 1];
    case BoundaryKind::neumann: {
      const double t = y[2 * n_];
      const double l = boundary_.left(t);
      const double r = boundary_.right(t);
      return bulk_energy(y.subspan(0, n_), y.subspan(n_, n_)) + 0.5 * dx_ * (l * l + r * r);
    }
    default: return hamiltonian(y);
  }
}

void FdWaveSystem::forcing(double t, double& first, double& last) const {
  first = 0.0;
  last = 0.0;
  if (descriptor_.boundary == BoundaryKind::dirichlet) {
    first = boundary_.left(t) / (dx_ * dx_);
    last = boundary_.right(t) / (dx_ * dx_);
  } else if (descriptor_.boundary == BoundaryKind::neumann) {
    first = -boundary_.left(t) / dx_;
    last = boundary_.right(t) / dx_;
  }
}

void FdWaveSystem::acceleration(std::span<const double> q, double t, std::span<double> out) const {
  if (q.size() != n_ || out.size() != n_)
    throw InvalidArgument("FdWaveSystem::acceleration: expected length " + std::to_string(n_));
  stencil_.apply(q, out, -1.0 / (dx_ * dx_));
  for (std::size_t i = 0; i < n_; ++i) out[i] -= f_.df(q[i]);
  double first = 0.0;
  double last = 0.0;
  forcing(t, first, last);
  out[0] += first;
  out[n_ - 1] += last;
}

double FdWaveSystem::boundary_rate(std::span<const double> q, double t) const {
  switch (descriptor_.boundary) {
    case BoundaryKind::dirichlet: {
      const double l = boundary_.left(t);
      const double r = boundary_.right(t);
      return -((l - q[0]) * boundary_.left_rate(t) + (r - q[n_ - 1]) * boundary_.right_rate(t)) /
             dx_;
    }
    case BoundaryKind::neumann: {
      const double l = boundary_.left(t);
      const double r = boundary_.right(t);
      const double lr = boundary_.left_rate(t);
      const double rr = boundary_.right_rate(t);
      return -q[0] * lr + q[n_ - 1] * rr - dx_ * (l * lr + r * rr);
    }
    default: return 0.0;
  }
}

void FdWaveSystem::gradient(std::span<const double> y, std::span<double> g) const {
  check_dimension(*this, y.size(), "FdWaveSystem::gradient");
  check_dimension(*this, g.size(), "FdWaveSystem::gradient");
  const auto q = y.subspan(0, n_);
  auto gq = g.subspan(0, n_);
  stencil_.apply(q, gq, 1.0 / dx_);
  for (std::size_t i = 0; i < n_; ++i) {
    gq[i] += dx_ * f_.df(q[i]);
    g[n_ + i] = dx_ * y[n_ + i];
  }
  if (skew_.augmented()) {
    const double t = y[2 * n_];
    double first = 0.0;
    double last = 0.0;
    forcing(t, first, last);
    // g_q = -dx * (forcing part of the acceleration)
    gq[0] -= dx_ * first;
    gq[n_ - 1] -= dx_ * last;
    g[2 * n_] = -boundary_rate(q, t);
    g[2 * n_ + 1] = 1.0;
  }
}

void FdWaveSystem::vector_field(std::span<const double> y, std::span<double> out) const {
  check_dimension(*this, y.size(), "FdWaveSystem::vector_field");
  check_dimension(*this, out.size(), "FdWaveSystem::vector_field");
  const auto q = y.subspan(0, n_);
  const double t = skew_.augmented() ? y[2 * n_] : 0.0;
  for (std::size_t i = 0; i < n_; ++i) out[i] = y[n_ + i];
  acceleration(q, t, out.subspan(n_, n_));
  if (skew_.augmented()) {
    out[2 * n_] = 1.0;
    out[2 * n_ + 1] = boundary_rate(q, t);
  }
}

State FdWaveSystem::initial_state(const ScalarFunction& psi0, const ScalarFunction& psi1,
                                  double t0) const {
  State y(dim(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    y[i] = psi0(descriptor_.grid[i]);
    y[n_ + i] = psi1(descriptor_.grid[i]);
  }
  if (skew_.augmented()) y[2 * n_] = t0;
  return y;
}

double FdWaveSystem::energy_flux(std::span<const double> y) const {
  check_dimension(*this, y.size(), "FdWaveSystem::energy_flux");
  switch (descriptor_.boundary) {
    case BoundaryKind::dirichlet: {
      const double t = y[2 * n_];
      return ((boundary_.left(t) - y[0]) * boundary_.left_rate(t) +
              (boundary_.right(t) - y[n_ - 1]) * boundary_.right_rate(t)) /
             dx_;
    }
    case BoundaryKind::neumann:
      return -neumann_velocity_form_rate(y.subspan(0, n_), y.subspan(n_, n_), y[2 * n_]);
    default: return 0.0;
  }
}

double FdWaveSystem::neumann_velocity_form_rate(std::span<const double> /*q*/,
                                                std::span<const double> p, double t) const {
  if (descriptor_.boundary != BoundaryKind::neumann)
    throw UnsupportedMode("neumann_velocity_form_rate: system is not a Neumann system");
  const double l = boundary_.left(t);
  const double r = boundary_.right(t);
  return l * (p[0] - dx_ * boundary_.left_rate(t)) - r * (p[n_ - 1] + dx_ * boundary_.right_rate(t));
}

std::unique_ptr<FdWaveSystem> build_periodic(std::size_t n, int order, double a, double b,
                                             Nonlinearity f, std::string problem) {
  return std::make_unique<FdWaveSystem>(std::move(problem), n, a, b, BoundaryKind::periodic, order,
                                        std::move(f), BoundaryData{});
}

std::unique_ptr<FdWaveSystem> build_dirichlet(std::size_t n, double a, double b, Nonlinearity f,
                                              BoundaryData boundary, std::string problem) {
  return std::make_unique<FdWaveSystem>(std::move(problem), n, a, b, BoundaryKind::dirichlet, 2,
                                        std::move(f), std::move(boundary));
}

std::unique_ptr<FdWaveSystem> build_neumann(std::size_t n, double a, double b, Nonlinearity f,
                                            BoundaryData boundary, std::string problem) {
  return std::make_unique<FdWaveSystem>(std::move(problem), n, a, b, BoundaryKind::neumann, 2,
                                        std::move(f), std::move(boundary));
}

}  // namespace hbvm
