#pragma once
// Experiment harness behind the command-line tool: configuration, problem
// construction by name, and the solve / drift / convergence / work-precision
// runs with their CSV and JSON reports.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hbvm/comparators.hpp"
#include "hbvm/integrator.hpp"
#include "hbvm/system.hpp"

namespace hbvm {

// Error raised for invalid configurations (exit code 2).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct MethodSpec {
  enum class Kind { hbvm, composition } kind = Kind::hbvm;
  std::size_t k = 5;
  std::size_t s = 1;
  int order = 2;  // composition schemes

  // "HBVM(5,1)", "hbvm5,1", "SV2", "sv4", ...
  static MethodSpec parse(const std::string& text);
  std::string name() const;
};

struct RunConfig {
  std::string problem = "sine-gordon";
  double gamma = 1.0;
  double kappa = 1.0;
  std::string bc = "periodic";
  std::string scheme = "fd2";
  std::size_t N = 0;  // 0: 400 grid points, or 100 modes for fourier
  std::size_t m = 200;
  std::size_t k = 5;
  std::size_t s = 1;
  double h = 0.1;
  std::size_t steps = 1000;
  std::string solver = "auto";
  double tol = 1e-14;
  std::size_t max_iter = 100;
  std::string preconditioner = "tridiagonal";
  std::string out = ".";
  std::size_t stride = 10;
  std::vector<std::string> methods;
  std::vector<std::size_t> ells = {400, 800, 1600, 3200};
  double T = 100.0;
  double a = -20.0;
  double b = 20.0;

  // Flat keys named like the fields above; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // Throws ConfigError.
  void validate() const;

  BoundaryKind boundary() const;
  SpatialScheme spatial_scheme() const;
  SolverConfig solver_config() const;
  std::size_t resolved_n() const;
};

struct ProblemInstance {
  std::unique_ptr<SemiDiscreteSystem> system;
  State y0;
  // Points where the solution is reported and compared.
  std::vector<double> points;
  // u at `points` from a state.
  std::function<void(std::span<const double>, std::span<double>)> nodal;
  // Closed-form u(x,t); empty when the problem has none.
  std::function<double(double, double)> exact;
  // Fourier only: initial-data residual on the unit interval and on [a,b].
  double projection_error = std::numeric_limits<double>::quiet_NaN();
  double projection_l2_error = std::numeric_limits<double>::quiet_NaN();
};

ProblemInstance make_problem(const RunConfig& config);

// Result of one timed run measured against the closed-form solution.
struct ErrorRun {
  std::string method;
  double h = 0.0;
  std::size_t steps = 0;
  double max_error = std::numeric_limits<double>::quiet_NaN();
  double max_drift = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  std::size_t iterations = 0;
  std::string status = "ok";
};

// Max over all steps and all report points of |u - u_exact|.
ErrorRun run_with_error(const RunConfig& config, const MethodSpec& method, double h,
                        std::size_t steps);

TrajectoryRecord run_method(const ProblemInstance& problem, const RunConfig& config,
                            const MethodSpec& method, double h, std::size_t steps,
                            const IntegrateOptions& options = {});

struct ConvergenceRow {
  std::size_t ell = 0;
  double h = 0.0;
  std::size_t n = 0;
  double max_error = 0.0;
  double rate = std::numeric_limits<double>::quiet_NaN();
};

// Table-1 style study: h = (b-a)/ell, ell steps; FD uses ell grid points.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config);

struct WpdCell {
  MethodSpec method;
  double h_max = 0.0;
  double h_min = 0.0;
  std::size_t points = 0;
};
std::vector<WpdCell> default_wpd_cells();
// Log-spaced step sizes, rounded so that n_steps * h = T exactly.
std::vector<std::pair<double, std::size_t>> wpd_steps(const WpdCell& cell, double T);

// Commands; each returns the process exit code and writes into config.out.
int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_drift(const RunConfig& config, std::ostream& log);
int cmd_convergence(const RunConfig& config, std::ostream& log);
int cmd_wpd(const RunConfig& config, std::ostream& log);

// "%.16e"
std::string format_number(double value);

}  // namespace hbvm
