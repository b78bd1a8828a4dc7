#include "hbvm/comparators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbvm/errors.hpp"
#include "hbvm/kernels.hpp"

namespace hbvm {

CompositionScheme CompositionScheme::make(int order) {
  CompositionScheme c;
  c.order = order;
  switch (order) {
    case 2:
      c.coefficients = {1.0};
      break;
    case 4: {
      const double cbrt2 = std::cbrt(2.0);
      const double g1 = 1.0 / (2.0 - cbrt2);
      c.coefficients = {g1, 1.0 - 2.0 * g1, g1};
      break;
    }
    case 6: {
      // Kahan & Li, nine-stage symmetric composition
      const double g[4] = {0.39216144400731413927925056, 0.33259913678935943859974864,
                           -0.70624617255763935980996482, 0.08221359629355080023149045};
      const double middle = 1.0 - 2.0 * (g[0] + g[1] + g[2] + g[3]);
      c.coefficients = {g[0], g[1], g[2], g[3], middle, g[3], g[2], g[1], g[0]};
      break;
    }
    default:
      throw InvalidArgument("composition order must be 2, 4 or 6, got " + std::to_string(order));
  }
  return c;
}

std::string CompositionScheme::name() const { return "SV" + std::to_string(order); }

namespace {

const SeparableForm& require_plain_separable(const SemiDiscreteSystem& system) {
  const SeparableForm* sep = system.separable();
  if (sep == nullptr)
    throw UnsupportedMode("Stormer-Verlet needs a separable Hamiltonian H = T(p) + V(q)");
  if (sep->augmented())
    throw UnsupportedMode("Stormer-Verlet is not applied to augmented (time-dependent) systems");
  return *sep;
}

void kick_drift_kick(const SeparableForm& sep, std::span<double> y, double h,
                     std::vector<double>& acc) {
  const std::size_t n = sep.size();
  auto q = y.subspan(0, n);
  auto p = y.subspan(n, n);
  sep.acceleration(q, 0.0, acc);
  kernels::axpy(0.5 * h, acc, p);
  kernels::axpy(h, p, q);
  sep.acceleration(q, 0.0, acc);
  kernels::axpy(0.5 * h, acc, p);
}

}  // namespace

void stormer_verlet_step(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                         std::span<double> y1) {
  composition_step(system, y0, h, CompositionScheme::make(2), y1);
}

void composition_step(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                      const CompositionScheme& scheme, std::span<double> y1) {
  const SeparableForm& sep = require_plain_separable(system);
  check_dimension(system, y0.size(), "composition_step");
  check_dimension(system, y1.size(), "composition_step");
  std::copy(y0.begin(), y0.end(), y1.begin());
  std::vector<double> acc(sep.size());
  for (double g : scheme.coefficients) kick_drift_kick(sep, y1, g * h, acc);
}

TrajectoryRecord integrate(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                           std::size_t n_steps, const CompositionScheme& scheme,
                           const IntegrateOptions& options) {
  require_plain_separable(system);
  Stepper stepper = [&system, &scheme](std::span<const double> a, double hh, std::span<double> b) {
    composition_step(system, a, hh, scheme, b);
    return StepDiagnostics{};
  };
  return integrate_with(system, y0, h, n_steps, stepper, options);
}

}  // namespace hbvm
