#include "hbvm/integrator.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "hbvm/kernels.hpp"
#include "hbvm/stencil.hpp"

namespace hbvm {

HbvmMethod HbvmMethod::make(std::size_t k, std::size_t s) {
  HbvmMethod m;
  m.k = k;
  m.s = s;
  m.tables = hbvm_tables(k, s);
  return m;
}

std::string HbvmMethod::name() const {
  return "HBVM(" + std::to_string(k) + "," + std::to_string(s) + ")";
}

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::automatic: return "auto";
    case SolverMode::fixed_point: return "fixed-point";
    case SolverMode::blended: return "blended";
    case SolverMode::dense_newton: return "newton";
  }
  return "auto";
}

SolverMode parse_solver_mode(std::string_view text) {
  if (text == "auto") return SolverMode::automatic;
  if (text == "fixed-point" || text == "fixed_point" || text == "picard") return SolverMode::fixed_point;
  if (text == "blended") return SolverMode::blended;
  if (text == "newton" || text == "dense") return SolverMode::dense_newton;
  throw InvalidArgument("unknown solver mode '" + std::string(text) +
                        "' (expected auto, fixed-point, blended or newton)");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (!(stall_tol >= tol)) throw InvalidArgument("stall tolerance must be at least tol");
  if (max_iter == 0) throw InvalidArgument("max_iter must be at least 1");
}

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return out;
}

Eigen::MatrixXd dense_stiffness(const Stiffness& stiffness, std::size_t n) {
  if (const auto* d = std::get_if<DiagonalStiffness>(&stiffness)) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d->diagonal.data(),
                                                          static_cast<Eigen::Index>(n));
    return v.asDiagonal();
  }
  const auto& st = std::get<StencilStiffness>(stiffness);
  return st.scale * st.op->dense();
}

}  // namespace

HbvmIntegrator::HbvmIntegrator(const SemiDiscreteSystem& system, HbvmMethod method,
                               SolverConfig config)
    : system_(system), sep_(system.separable()), method_(std::move(method)), config_(config) {
  config_.validate();
  if (!method_.tables) method_ = HbvmMethod::make(method_.k, method_.s);
  if (config_.full_formulation) sep_ = nullptr;

  mode_ = config_.mode;
  if (mode_ == SolverMode::automatic)
    mode_ = sep_ != nullptr ? SolverMode::blended : SolverMode::fixed_point;
  if (sep_ == nullptr && (mode_ == SolverMode::blended || mode_ == SolverMode::dense_newton))
    throw UnsupportedMode(to_string(mode_) +
                          " solver needs a separable system with a known linear part; use "
                          "fixed-point");

  const HbvmTables& t = *method_.tables;
  pt_omega_ = row_major(t.PtOmega);
  ixs_ = row_major(t.IXs);
  ifull_ = row_major(t.I);
  const std::size_t block = sep_ != nullptr ? sep_->size() : system_.dim();
  stage_.assign(t.k * block, 0.0);
  eval_.assign(t.k * block, 0.0);
}

void HbvmIntegrator::stage_positions(std::span<const double> y0, double h,
                                     std::span<const double> gamma, std::size_t i,
                                     std::span<double> out) const {
  const std::size_t s = method_.s;
  const std::size_t n = sep_->size();
  double coeffs[kMaxDegree];
  for (std::size_t j = 0; j < s; ++j) coeffs[j] = h * h * ixs_[i * s + j];
  kernels::lincomb(out, y0.subspan(0, n), std::span<const double>(coeffs, s), gamma);
  kernels::axpy(h * method_.tables->rule.nodes[i], y0.subspan(n, n), out);
}

void HbvmIntegrator::evaluate_reduced(std::span<const double> y0, double h,
                                      std::span<const double> gamma, std::span<double> phi) {
  const std::size_t k = method_.k;
  const std::size_t s = method_.s;
  const std::size_t n = sep_->size();
  const double t0 = sep_->augmented() ? y0[2 * n] : 0.0;
  const auto& nodes = method_.tables->rule.nodes;
  std::span<double> stages(stage_);
  std::span<double> evals(eval_);
  for (std::size_t i = 0; i < k; ++i) {
    auto qi = stages.subspan(i * n, n);
    stage_positions(y0, h, gamma, i, qi);
    sep_->acceleration(qi, t0 + nodes[i] * h, evals.subspan(i * n, n));
  }
  const std::vector<double> zero(n, 0.0);
  for (std::size_t j = 0; j < s; ++j)
    kernels::lincomb(phi.subspan(j * n, n), zero,
                     std::span<const double>(pt_omega_).subspan(j * k, k), eval_);
}

void HbvmIntegrator::evaluate_full(std::span<const double> y0, double h,
                                   std::span<const double> gamma, std::span<double> phi) {
  const std::size_t k = method_.k;
  const std::size_t s = method_.s;
  const std::size_t d = system_.dim();
  std::span<double> stages(stage_);
  std::span<double> evals(eval_);
  double coeffs[kMaxDegree];
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < s; ++j) coeffs[j] = h * ifull_[i * s + j];
    auto yi = stages.subspan(i * d, d);
    kernels::lincomb(yi, y0, std::span<const double>(coeffs, s), gamma);
    system_.vector_field(yi, evals.subspan(i * d, d));
  }
  const std::vector<double> zero(d, 0.0);
  for (std::size_t j = 0; j < s; ++j)
    kernels::lincomb(phi.subspan(j * d, d), zero,
                     std::span<const double>(pt_omega_).subspan(j * k, k), eval_);
}

void HbvmIntegrator::prepare_linear_solvers(double h) {
  if (h == cached_h_) return;
  const HbvmTables& t = *method_.tables;
  const std::size_t n = sep_->size();
  if (mode_ == SolverMode::blended) {
    const double alpha = (h * t.rho) * (h * t.rho);
    shifted_ = make_shifted_solver(sep_->stiffness(), n, alpha, config_.preconditioner);
  } else if (mode_ == SolverMode::dense_newton) {
    const std::size_t s = method_.s;
    const Eigen::MatrixXd kmat = dense_stiffness(sep_->stiffness(), n);
    const Eigen::MatrixXd x2 = t.Xs * t.Xs;
    const auto nn = static_cast<Eigen::Index>(n);
    const auto total = static_cast<Eigen::Index>(s * n);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(total, total);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(s); ++j)
      for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(s); ++l)
        jac.block(j * nn, l * nn, nn, nn) += h * h * x2(j, l) * kmat;
    newton_lu_.compute(jac);
  }
  cached_h_ = h;
}

GammaSolution HbvmIntegrator::solve(std::span<const double> y0, double h) {
  check_dimension(system_, y0.size(), "HbvmIntegrator::solve");
  if (!(h != 0.0) || !std::isfinite(h)) throw InvalidArgument("step size must be finite and non-zero");
  const std::size_t s = method_.s;
  const std::size_t block = sep_ != nullptr ? sep_->size() : system_.dim();
  const std::size_t total = s * block;

  GammaSolution sol;
  sol.block = block;
  sol.reduced = sep_ != nullptr;
  sol.diagnostics.mode = mode_;
  sol.gamma.assign(total, 0.0);
  if (config_.warm_start && warm_.size() == total) sol.gamma = warm_;

  if (sep_ != nullptr && mode_ != SolverMode::fixed_point) prepare_linear_solvers(h);

  std::vector<double> phi(total);
  std::vector<double> delta(total);
  std::vector<double> eta1(total);
  const Eigen::MatrixXd& blend = method_.tables->blend;
  const double scale = 1.0 + kernels::max_abs(y0);
  double previous = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= config_.max_iter; ++it) {
    if (sep_ != nullptr)
      evaluate_reduced(y0, h, sol.gamma, phi);
    else
      evaluate_full(y0, h, sol.gamma, phi);

    switch (mode_) {
      case SolverMode::fixed_point:
        for (std::size_t i = 0; i < total; ++i) delta[i] = phi[i] - sol.gamma[i];
        sol.gamma.swap(phi);
        break;
      case SolverMode::blended: {
        for (std::size_t i = 0; i < total; ++i) phi[i] -= sol.gamma[i];  // eta
        for (std::size_t j = 0; j < s; ++j) {
          auto e1 = std::span<double>(eta1).subspan(j * block, block);
          std::fill(e1.begin(), e1.end(), 0.0);
          for (std::size_t l = 0; l < s; ++l)
            kernels::axpy(blend(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)),
                          std::span<const double>(phi).subspan(l * block, block), e1);
        }
        for (std::size_t j = 0; j < s; ++j) {
          auto d = std::span<double>(delta).subspan(j * block, block);
          for (std::size_t i = 0; i < block; ++i) d[i] = phi[j * block + i] - eta1[j * block + i];
          shifted_->solve(d);
          for (std::size_t i = 0; i < block; ++i) d[i] += eta1[j * block + i];
          shifted_->solve(d);
        }
        for (std::size_t i = 0; i < total; ++i) sol.gamma[i] += delta[i];
        break;
      }
      case SolverMode::dense_newton: {
        for (std::size_t i = 0; i < total; ++i) phi[i] -= sol.gamma[i];
        Eigen::Map<const Eigen::VectorXd> eta(phi.data(), static_cast<Eigen::Index>(total));
        Eigen::Map<Eigen::VectorXd>(delta.data(), static_cast<Eigen::Index>(total)) =
            newton_lu_.solve(eta);
        for (std::size_t i = 0; i < total; ++i) sol.gamma[i] += delta[i];
        break;
      }
      case SolverMode::automatic: break;
    }

    const double err = kernels::max_abs(delta);
    sol.diagnostics.iterations = it;
    sol.diagnostics.residual = err;
    if (!std::isfinite(err))
      throw StepFailure(method_.name() + " " + to_string(mode_) +
                            " iteration produced a non-finite update after " + std::to_string(it) +
                            " iterations; reduce h",
                        sol.diagnostics);
    if (err <= config_.tol * scale) {
      if (config_.warm_start) warm_ = sol.gamma;
      return sol;
    }
    if (err >= previous && err <= config_.stall_tol * scale) {
      sol.diagnostics.stalled = true;
      if (config_.warm_start) warm_ = sol.gamma;
      return sol;
    }
    previous = err;
  }
  std::ostringstream msg;
  msg << method_.name() << " " << to_string(mode_) << " iteration did not converge in "
      << config_.max_iter << " iterations (last increment " << sol.diagnostics.residual
      << "); reduce h" << (mode_ == SolverMode::fixed_point && sep_ != nullptr
                               ? " or use the blended solver"
                               : "");
  throw StepFailure(msg.str(), sol.diagnostics);
}

void HbvmIntegrator::advance(std::span<const double> y0, double h, const GammaSolution& gamma,
                             std::span<double> y1) const {
  check_dimension(system_, y1.size(), "HbvmIntegrator::advance");
  if (!gamma.reduced) {
    const std::size_t d = system_.dim();
    for (std::size_t i = 0; i < d; ++i) y1[i] = y0[i] + h * gamma.gamma[i];
    return;
  }
  const HbvmTables& t = *method_.tables;
  const std::size_t s = method_.s;
  const std::size_t n = sep_->size();
  const auto q0 = y0.subspan(0, n);
  const auto p0 = y0.subspan(n, n);
  double coeffs[kMaxDegree];
  for (std::size_t j = 0; j < s; ++j) coeffs[j] = h * h * t.Xs(0, static_cast<Eigen::Index>(j));
  auto q1 = y1.subspan(0, n);
  auto p1 = y1.subspan(n, n);
  kernels::lincomb(q1, q0, std::span<const double>(coeffs, s), gamma.gamma);
  kernels::axpy(h, p0, q1);
  for (std::size_t i = 0; i < n; ++i) p1[i] = p0[i] + h * gamma.gamma[i];

  if (sep_->augmented()) {
    const double t0 = y0[2 * n];
    std::vector<double> qi(n);
    double rate = 0.0;
    for (std::size_t i = 0; i < t.k; ++i) {
      stage_positions(y0, h, gamma.gamma, i, qi);
      rate += t.rule.weights[i] * sep_->boundary_rate(qi, t0 + t.rule.nodes[i] * h);
    }
    y1[2 * n] = t0 + h;
    y1[2 * n + 1] = y0[2 * n + 1] + h * rate;
  }
}

StepDiagnostics HbvmIntegrator::step(std::span<const double> y0, double h, std::span<double> y1) {
  const GammaSolution g = solve(y0, h);
  advance(y0, h, g, y1);
  return g.diagnostics;
}

std::pair<State, StepDiagnostics> step(const SemiDiscreteSystem& system,
                                       std::span<const double> y0, double h,
                                       const HbvmMethod& method, const SolverConfig& config) {
  HbvmIntegrator integrator(system, method, config);
  State y1(system.dim());
  const StepDiagnostics d = integrator.step(y0, h, y1);
  return {std::move(y1), d};
}

GammaSolution solve_gamma_fixed_point(const SemiDiscreteSystem& system, std::span<const double> y0,
                                      double h, const HbvmMethod& method, SolverConfig config) {
  config.mode = SolverMode::fixed_point;
  HbvmIntegrator integrator(system, method, config);
  return integrator.solve(y0, h);
}

GammaSolution solve_gamma_blended(const SemiDiscreteSystem& system, std::span<const double> y0,
                                  double h, const HbvmMethod& method, SolverConfig config) {
  config.mode = SolverMode::blended;
  HbvmIntegrator integrator(system, method, config);
  return integrator.solve(y0, h);
}

GammaSolution solve_gamma_newton(const SemiDiscreteSystem& system, std::span<const double> y0,
                                 double h, const HbvmMethod& method, SolverConfig config) {
  config.mode = SolverMode::dense_newton;
  HbvmIntegrator integrator(system, method, config);
  return integrator.solve(y0, h);
}

RkTableau rk_tableau(const HbvmMethod& method) {
  const auto tables = method.tables ? method.tables : hbvm_tables(method.k, method.s);
  RkTableau rk;
  rk.a = tables->I * tables->PtOmega;
  const auto k = static_cast<Eigen::Index>(tables->k);
  rk.b = Eigen::Map<const Eigen::VectorXd>(tables->rule.weights.data(), k);
  rk.c = Eigen::Map<const Eigen::VectorXd>(tables->rule.nodes.data(), k);
  return rk;
}

namespace {

double max_abs_series(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isnan(x) ? x : std::max(m, std::fabs(x));
  return m;
}

std::vector<double> relative_to_first(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(x - v.front());
  return out;
}

}  // namespace

std::vector<double> TrajectoryRecord::drift() const { return relative_to_first(hamiltonian); }

std::vector<double> TrajectoryRecord::augmented_drift() const {
  return relative_to_first(augmented_hamiltonian);
}

double TrajectoryRecord::max_abs_drift() const { return max_abs_series(drift()); }

double TrajectoryRecord::max_abs_augmented_drift() const {
  return max_abs_series(augmented_drift());
}

std::size_t TrajectoryRecord::total_iterations() const {
  std::size_t total = 0;
  for (std::size_t it : iterations) total += it;
  return total;
}

TrajectoryRecord integrate_with(const SemiDiscreteSystem& system, std::span<const double> y0,
                                double h, std::size_t n_steps, const Stepper& stepper,
                                const IntegrateOptions& options) {
  check_dimension(system, y0.size(), "integrate");
  if (options.stride == 0) throw InvalidArgument("integrate: stride must be at least 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("integrate: h must be positive");

  TrajectoryRecord rec;
  rec.augmented = system.augmented();
  const std::size_t n = system.skew().block();
  const double t0 = rec.augmented ? y0[2 * n] : 0.0;
  rec.times.reserve(n_steps + 1);
  rec.hamiltonian.reserve(n_steps + 1);
  rec.augmented_hamiltonian.reserve(n_steps + 1);

  State y(y0.begin(), y0.end());
  State y1(y.size());
  auto record = [&](std::size_t index, std::span<const double> state, const StepDiagnostics& d) {
    const double t = rec.augmented ? state[2 * n] : t0 + static_cast<double>(index) * h;
    rec.times.push_back(t);
    rec.hamiltonian.push_back(system.physical_hamiltonian(state));
    rec.augmented_hamiltonian.push_back(system.hamiltonian(state));
    rec.iterations.push_back(d.iterations);
    rec.residuals.push_back(d.residual);
    if (d.stalled) ++rec.stalled_steps;
    if (index % options.stride == 0 || index == n_steps) {
      if (options.store_states) {
        rec.state_steps.push_back(index);
        rec.states.emplace_back(state.begin(), state.end());
      }
      if (options.observer) options.observer(index, t, state);
    }
  };

  record(0, y, StepDiagnostics{});
  for (std::size_t i = 1; i <= n_steps; ++i) {
    StepDiagnostics d;
    try {
      d = stepper(y, h, y1);
    } catch (const StepFailure& e) {
      rec.final_state = y;
      throw IntegrationFailure("step " + std::to_string(i) + " failed: " + e.what(), i,
                               e.diagnostics(), std::move(rec));
    }
    if (!std::isfinite(kernels::max_abs(y1))) {
      rec.final_state = y;
      throw IntegrationFailure("step " + std::to_string(i) + " produced a non-finite state (unstable step size)",
                               i, d, std::move(rec));
    }
    y.swap(y1);
    record(i, y, d);
  }
  rec.final_state = std::move(y);
  return rec;
}

TrajectoryRecord integrate(const SemiDiscreteSystem& system, std::span<const double> y0, double h,
                           std::size_t n_steps, const HbvmMethod& method,
                           const SolverConfig& config, const IntegrateOptions& options) {
  HbvmIntegrator integrator(system, method, config);
  Stepper stepper = [&integrator](std::span<const double> a, double hh, std::span<double> b) {
    return integrator.step(a, hh, b);
  };
  return integrate_with(system, y0, h, n_steps, stepper, options);
}

}  // namespace hbvm
