#include "hbvm/system.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hbvm/errors.hpp"

namespace hbvm {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::dirichlet: return "dirichlet";
    case BoundaryKind::neumann: return "neumann";
    case BoundaryKind::none: break;
  }
  return "none";
}

std::string to_string(SpatialScheme scheme) {
  switch (scheme) {
    case SpatialScheme::fd2: return "fd2";
    case SpatialScheme::fd4: return "fd4";
    case SpatialScheme::fd6: return "fd6";
    case SpatialScheme::fourier: return "fourier";
    case SpatialScheme::none: break;
  }
  return "none";
}

Nonlinearity zero_nonlinearity() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, 0};
}

Nonlinearity polynomial_nonlinearity(std::vector<double> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  const int degree = coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1;
  auto f = [coeffs](double u) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
    return acc;
  };
  auto df = [coeffs](double u) {
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 1;) acc = acc * u + static_cast<double>(j) * coeffs[j];
    return acc;
  };
  return {std::move(f), std::move(df), degree};
}

SkewStructure SkewStructure::canonical(std::size_t n, double scale) {
  return SkewStructure(n, scale, false);
}

SkewStructure SkewStructure::canonical_augmented(std::size_t n, double scale) {
  return SkewStructure(n, scale, true);
}

void SkewStructure::apply(std::span<const double> g, std::span<double> out) const {
  if (g.size() != dim() || out.size() != dim())
    throw InvalidArgument("SkewStructure::apply: dimension mismatch");
  const std::size_t n = block_;
  for (std::size_t i = 0; i < n; ++i) {
    const double gq = g[i];
    out[i] = scale_ * g[n + i];
    out[n + i] = -scale_ * gq;
  }
  if (augmented_) {
    const double gt = g[2 * n];
    out[2 * n] = g[2 * n + 1];
    out[2 * n + 1] = -gt;
  }
}

void SemiDiscreteSystem::vector_field(std::span<const double> y, std::span<double> out) const {
  State g(dim());
  gradient(y, g);
  skew().apply(g, out);
}

void check_dimension(const SemiDiscreteSystem& system, std::size_t length, const char* where) {
  if (length != system.dim())
    throw InvalidArgument(std::string(where) + ": state has length " + std::to_string(length) +
                          ", system dimension is " + std::to_string(system.dim()));
}

State rhs(const SemiDiscreteSystem& system, std::span<const double> y) {
  check_dimension(system, y.size(), "rhs");
  State g(system.dim());
  State out(system.dim());
  system.gradient(y, g);
  system.skew().apply(g, out);
  return out;
}

std::vector<double> hamiltonian_drift(const SemiDiscreteSystem& system,
                                      const std::vector<State>& trajectory) {
  if (trajectory.empty()) throw InvalidArgument("hamiltonian_drift: empty trajectory");
  const double h0 = system.hamiltonian(trajectory.front());
  std::vector<double> drift;
  drift.reserve(trajectory.size());
  for (const State& y : trajectory) drift.push_back(system.hamiltonian(y) - h0);
  return drift;
}

}  // namespace hbvm
