#pragma once
// Explicit symplectic baselines: Stormer-Verlet (kick-drift-kick) and its
// symmetric compositions of order 4 (triple jump) and 6 (nine stages).

#include <span>
#include <string>
#include <vector>

#include "hbvm/integrator.hpp"
#include "hbvm/system.hpp"

namespace hbvm {

struct CompositionScheme {
  int order = 2;
  std::vector<double> coefficients;

  // order 2, 4 or 6
  static CompositionScheme make(int order);
  std::string name() const;  // "SV2", "SV4", "SV6"
};

// Requires a non-augmented separable system; throws UnsupportedMode otherwise.
void stormer_verlet_step(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                         std::span<double> y1);

void composition_step(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                      const CompositionScheme& scheme, std::span<double> y1);

TrajectoryRecord integrate(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                           std::size_t n_steps, const CompositionScheme& scheme,
                           const IntegrateOptions& options = {});

}  // namespace hbvm
