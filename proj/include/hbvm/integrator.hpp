#pragma once
// HBVM(k,s) one-step integrator in the coefficient (gamma) formulation.
//
// For separable systems q' = p, p' = a(q,t) only the s acceleration
// coefficients are unknown; the q-coefficients follow in closed form. Other
// systems are solved in the full formulation by fixed-point iteration.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hbvm/errors.hpp"
#include "hbvm/legendre.hpp"
#include "hbvm/preconditioner.hpp"
#include "hbvm/system.hpp"

namespace hbvm {

struct HbvmMethod {
  std::size_t k = 1;
  std::size_t s = 1;
  std::shared_ptr<const HbvmTables> tables;

  static HbvmMethod make(std::size_t k, std::size_t s);
  std::string name() const;
};

enum class SolverMode { automatic, fixed_point, blended, dense_newton };

std::string to_string(SolverMode mode);
// Accepts "auto", "fixed-point", "blended", "newton" (and "dense").
SolverMode parse_solver_mode(std::string_view text);

struct SolverConfig {
  SolverMode mode = SolverMode::automatic;
  // Converged when |delta gamma|_inf <= tol * (1 + |y0|_inf).
  double tol = 1e-14;
  std::size_t max_iter = 100;
  // An iteration whose increment stops decreasing is accepted if the
  // increment is already below stall_tol * (1 + |y0|_inf).
  double stall_tol = 1e-10;
  PreconditionerKind preconditioner = PreconditionerKind::tridiagonal;
  bool warm_start = false;
  // Solve separable systems in the full (q,p) formulation as well.
  bool full_formulation = false;

  void validate() const;
};

struct StepDiagnostics {
  std::size_t iterations = 0;
  double residual = 0.0;
  SolverMode mode = SolverMode::fixed_point;
  bool stalled = false;
};

class StepFailure : public NumericalError {
 public:
  StepFailure(const std::string& what, StepDiagnostics diagnostics)
      : NumericalError(what), diagnostics_(diagnostics) {}
  const StepDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  StepDiagnostics diagnostics_;
};

struct GammaSolution {
  std::vector<double> gamma;  // s consecutive blocks
  std::size_t block = 0;
  // true: blocks are the acceleration coefficients of a separable system
  // (length n); false: blocks are full-state coefficients (length dim).
  bool reduced = false;
  StepDiagnostics diagnostics;

  std::span<const double> coefficient(std::size_t j) const {
    return std::span<const double>(gamma).subspan(j * block, block);
  }
};

class HbvmIntegrator {
 public:
  HbvmIntegrator(const SemiDiscreteSystem& system, HbvmMethod method, SolverConfig config = {});

  const HbvmMethod& method() const { return method_; }
  const SolverConfig& config() const { return config_; }
  SolverMode mode() const { return mode_; }
  bool reduced() const { return sep_ != nullptr; }

  GammaSolution solve(std::span<const double> y0, double h);
  // Assembles y1 from a converged gamma.
  void advance(std::span<const double> y0, double h, const GammaSolution& gamma,
               std::span<double> y1) const;
  StepDiagnostics step(std::span<const double> y0, double h, std::span<double> y1);

 private:
  void stage_positions(std::span<const double> y0, double h, std::span<const double> gamma,
                       std::size_t i, std::span<double> out) const;
  void evaluate_reduced(std::span<const double> y0, double h, std::span<const double> gamma,
                        std::span<double> phi);
  void evaluate_full(std::span<const double> y0, double h, std::span<const double> gamma,
                     std::span<double> phi);
  void prepare_linear_solvers(double h);

  const SemiDiscreteSystem& system_;
  const SeparableForm* sep_;
  HbvmMethod method_;
  SolverConfig config_;
  SolverMode mode_;

  std::vector<double> pt_omega_;  // s x k row-major
  std::vector<double> ixs_;       // k x s row-major
  std::vector<double> ifull_;     // k x s row-major
  std::vector<double> stage_;     // k blocks
  std::vector<double> eval_;      // k blocks
  std::vector<double> warm_;

  double cached_h_ = -1.0;
  std::unique_ptr<ShiftedSolver> shifted_;
  Eigen::PartialPivLU<Eigen::MatrixXd> newton_lu_;
};

std::pair<State, StepDiagnostics> step(const SemiDiscreteSystem& system,
                                       std::span<const double> y0, double h,
                                       const HbvmMethod& method, const SolverConfig& config = {});

GammaSolution solve_gamma_fixed_point(const SemiDiscreteSystem& system, std::span<const double> y0,
                                      double h, const HbvmMethod& method,
                                      SolverConfig config = {});
// Throws UnsupportedMode for systems without a separable form.
GammaSolution solve_gamma_blended(const SemiDiscreteSystem& system, std::span<const double> y0,
                                  double h, const HbvmMethod& method, SolverConfig config = {});
GammaSolution solve_gamma_newton(const SemiDiscreteSystem& system, std::span<const double> y0,
                                 double h, const HbvmMethod& method, SolverConfig config = {});

struct RkTableau {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

// A = I P^T Omega, b, c from the Gauss rule.
RkTableau rk_tableau(const HbvmMethod& method);

struct TrajectoryRecord {
  bool augmented = false;
  std::vector<double> times;                  // every step, starting at t0
  std::vector<double> hamiltonian;            // physical energy
  std::vector<double> augmented_hamiltonian;  // conserved H~ (equal to the above if autonomous)
  std::vector<std::size_t> iterations;        // 0 for the initial entry
  std::vector<double> residuals;
  std::vector<std::size_t> state_steps;       // indices of stored states
  std::vector<State> states;
  std::size_t stalled_steps = 0;
  State final_state;

  std::vector<double> drift() const;
  std::vector<double> augmented_drift() const;
  double max_abs_drift() const;
  double max_abs_augmented_drift() const;
  std::size_t total_iterations() const;
};

class IntegrationFailure : public NumericalError {
 public:
  IntegrationFailure(const std::string& what, std::size_t step_index, StepDiagnostics diagnostics,
                     TrajectoryRecord partial)
      : NumericalError(what),
        step_index_(step_index),
        diagnostics_(diagnostics),
        partial_(std::move(partial)) {}
  std::size_t step_index() const { return step_index_; }
  const StepDiagnostics& diagnostics() const { return diagnostics_; }
  const TrajectoryRecord& partial() const { return partial_; }

 private:
  std::size_t step_index_;
  StepDiagnostics diagnostics_;
  TrajectoryRecord partial_;
};

using Stepper = std::function<StepDiagnostics(std::span<const double> y0, double h,
                                              std::span<double> y1)>;
// Called for every stored state (step index, time, state).
using Observer = std::function<void(std::size_t, double, std::span<const double>)>;

struct IntegrateOptions {
  std::size_t stride = 1;  // store every stride-th state; the last one is always stored
  bool store_states = true;
  Observer observer;
};

// Runs n_steps of `stepper`; throws IntegrationFailure (with the partial
// record) when a step fails.
TrajectoryRecord integrate_with(const SemiDiscreteSystem& system, std::span<const double> y0,
                                double h, std::size_t n_steps, const Stepper& stepper,
                                const IntegrateOptions& options = {});

TrajectoryRecord integrate(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                           std::size_t n_steps, const HbvmMethod& method,
                           const SolverConfig& config = {}, const IntegrateOptions& options = {});

}  // namespace hbvm
