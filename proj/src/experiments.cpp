#include "hbvm/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>
#include <utility>

#include "hbvm/kernels.hpp"
#include "hbvm/problems.hpp"
#include "hbvm/wave_fd.hpp"
#include "hbvm/wave_fourier.hpp"

namespace hbvm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

MethodSpec MethodSpec::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(c));
  static const std::regex hbvm_re(R"(hbvm\(?(\d+),(\d+)\)?)");
  static const std::regex sv_re(R"(sv(\d+))");
  std::smatch match;
  MethodSpec spec;
  if (std::regex_match(t, match, hbvm_re)) {
    spec.kind = Kind::hbvm;
    spec.k = std::stoul(match[1].str());
    spec.s = std::stoul(match[2].str());
    if (spec.s == 0 || spec.k < spec.s || spec.k > kMaxQuadratureNodes || spec.s > kMaxDegree)
      throw ConfigError("invalid method " + text + " (need 1 <= s <= k, k <= 20, s <= 6)");
    return spec;
  }
  if (std::regex_match(t, match, sv_re)) {
    spec.kind = Kind::composition;
    spec.order = std::stoi(match[1].str());
    if (spec.order != 2 && spec.order != 4 && spec.order != 6)
      throw ConfigError("invalid method " + text + " (SV2, SV4 or SV6)");
    return spec;
  }
  throw ConfigError("cannot parse method '" + text + "' (expected e.g. HBVM(5,1) or SV4)");
}

std::string MethodSpec::name() const {
  if (kind == Kind::composition) return "SV" + std::to_string(order);
  return "HBVM(" + std::to_string(k) + "," + std::to_string(s) + ")";
}

namespace {

template <class T>
T read_field(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

std::size_t read_count(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::string> read_methods(const json& j) {
  if (j.is_string()) {
    std::vector<std::string> out;
    std::stringstream ss(j.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!item.empty()) out.push_back(item);
    return out;
  }
  return read_field<std::vector<std::string>>(j, "methods");
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "problem") c.problem = read_field<std::string>(v, "problem");
    else if (key == "gamma") c.gamma = read_field<double>(v, "gamma");
    else if (key == "kappa") c.kappa = read_field<double>(v, "kappa");
    else if (key == "bc") c.bc = read_field<std::string>(v, "bc");
    else if (key == "scheme") c.scheme = read_field<std::string>(v, "scheme");
    else if (key == "N") c.N = read_count(v, "N");
    else if (key == "m") c.m = read_count(v, "m");
    else if (key == "k") c.k = read_count(v, "k");
    else if (key == "s") c.s = read_count(v, "s");
    else if (key == "h") c.h = read_field<double>(v, "h");
    else if (key == "steps") c.steps = read_count(v, "steps");
    else if (key == "solver") c.solver = read_field<std::string>(v, "solver");
    else if (key == "tol") c.tol = read_field<double>(v, "tol");
    else if (key == "max_iter") c.max_iter = read_count(v, "max_iter");
    else if (key == "preconditioner") c.preconditioner = read_field<std::string>(v, "preconditioner");
    else if (key == "out") c.out = read_field<std::string>(v, "out");
    else if (key == "stride") c.stride = read_count(v, "stride");
    else if (key == "methods") c.methods = read_methods(v);
    else if (key == "ells") c.ells = read_field<std::vector<std::size_t>>(v, "ells");
    else if (key == "T") c.T = read_field<double>(v, "T");
    else if (key == "a") c.a = read_field<double>(v, "a");
    else if (key == "b") c.b = read_field<double>(v, "b");
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

json RunConfig::to_json() const {
  return json{{"problem", problem}, {"gamma", gamma},   {"kappa", kappa},
              {"bc", bc},           {"scheme", scheme}, {"N", resolved_n()},
              {"m", m},             {"k", k},           {"s", s},
              {"h", h},             {"steps", steps},   {"solver", solver},
              {"tol", tol},         {"max_iter", max_iter}, {"preconditioner", preconditioner},
              {"out", out},         {"stride", stride}, {"methods", methods},
              {"ells", ells},       {"T", T},           {"a", a},
              {"b", b}};
}

BoundaryKind RunConfig::boundary() const {
  if (bc == "periodic") return BoundaryKind::periodic;
  if (bc == "dirichlet") return BoundaryKind::dirichlet;
  if (bc == "neumann") return BoundaryKind::neumann;
  throw ConfigError("unknown boundary condition '" + bc + "' (periodic, dirichlet, neumann)");
}

SpatialScheme RunConfig::spatial_scheme() const {
  if (scheme == "fd2") return SpatialScheme::fd2;
  if (scheme == "fd4") return SpatialScheme::fd4;
  if (scheme == "fd6") return SpatialScheme::fd6;
  if (scheme == "fourier") return SpatialScheme::fourier;
  throw ConfigError("unknown spatial scheme '" + scheme + "' (fd2, fd4, fd6, fourier)");
}

std::size_t RunConfig::resolved_n() const {
  if (N != 0) return N;
  return scheme == "fourier" ? 100 : 400;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig sc;
  try {
    sc.mode = parse_solver_mode(solver);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  sc.tol = tol;
  sc.stall_tol = std::max(sc.stall_tol, tol);
  sc.max_iter = max_iter;
  if (preconditioner == "tridiagonal") sc.preconditioner = PreconditionerKind::tridiagonal;
  else if (preconditioner == "exact") sc.preconditioner = PreconditionerKind::exact;
  else throw ConfigError("unknown preconditioner '" + preconditioner + "' (tridiagonal, exact)");
  return sc;
}

namespace {

bool is_oscillator(const std::string& p) {
  return p == "harmonic" || p == "quartic" || p == "pendulum";
}

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> problems = {"sine-gordon", "quartic-wave", "nls",
                                                    "harmonic",    "quartic",      "pendulum"};
  if (std::find(problems.begin(), problems.end(), problem) == problems.end())
    throw ConfigError("unknown problem '" + problem +
                      "' (sine-gordon, quartic-wave, nls, harmonic, quartic, pendulum)");
  const BoundaryKind kind = boundary();
  const SpatialScheme sch = spatial_scheme();
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive");
  if (!std::isfinite(kappa)) throw ConfigError("kappa must be finite");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("h must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter == 0) throw ConfigError("max_iter must be at least 1");
  if (stride == 0) throw ConfigError("stride must be at least 1");
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  if (!(b > a)) throw ConfigError("domain must satisfy a < b");
  if (s == 0 || k < s || k > kMaxQuadratureNodes || s > kMaxDegree)
    throw ConfigError("invalid method HBVM(" + std::to_string(k) + "," + std::to_string(s) +
                      "): need 1 <= s <= k, k <= 20, s <= 6");
  if ((sch == SpatialScheme::fd4 || sch == SpatialScheme::fd6 || sch == SpatialScheme::fourier) &&
      kind != BoundaryKind::periodic)
    throw ConfigError("scheme " + scheme + " requires periodic boundary conditions");
  if (problem == "nls" && (kind != BoundaryKind::periodic || sch != SpatialScheme::fd2))
    throw ConfigError("nls is available with periodic fd2 only");
  if (problem == "sine-gordon" && kind != BoundaryKind::periodic && sch != SpatialScheme::fd2)
    throw ConfigError("dirichlet and neumann problems use fd2");
  const std::size_t n = resolved_n();
  if (!is_oscillator(problem)) {
    if (sch == SpatialScheme::fourier) {
      if (m < 2 * n || m == 0)
        throw ConfigError("m = " + std::to_string(m) + " must be at least 2N = " +
                          std::to_string(2 * n));
    } else {
      const std::size_t order = sch == SpatialScheme::fd2 ? 2 : sch == SpatialScheme::fd4 ? 4 : 6;
      const std::size_t min_n = kind == BoundaryKind::periodic ? std::max<std::size_t>(order + 1, 3) : 2;
      if (n < min_n) throw ConfigError("N must be at least " + std::to_string(min_n));
    }
  }
  for (std::size_t ell : ells)
    if (ell < 3) throw ConfigError("convergence levels must be at least 3");
  for (const std::string& mth : methods) MethodSpec::parse(mth);
  solver_config();
}

ProblemInstance make_problem(const RunConfig& config) {
  config.validate();
  ProblemInstance inst;
  const BoundaryKind kind = config.boundary();
  const SpatialScheme sch = config.spatial_scheme();
  const std::size_t n = config.resolved_n();
  const int order = sch == SpatialScheme::fd4 ? 4 : sch == SpatialScheme::fd6 ? 6 : 2;

  if (is_oscillator(config.problem)) {
    std::unique_ptr<OscillatorSystem> sys;
    if (config.problem == "harmonic") {
      sys = harmonic_oscillator(1.0);
      inst.exact = [](double, double t) { return std::cos(t); };
    } else if (config.problem == "quartic") {
      sys = quartic_oscillator();
    } else {
      sys = pendulum();
    }
    inst.y0 = {1.0, 0.0};
    inst.points = {0.0};
    inst.nodal = [](std::span<const double> y, std::span<double> u) { u[0] = y[0]; };
    inst.system = std::move(sys);
    return inst;
  }

  if (config.problem == "nls") {
    auto sys = build_nls_periodic(n, config.a, config.b, config.kappa);
    if (config.kappa > 0.0) {
      inst.y0 = sys->soliton_state(0.0);
      const double amp = 1.0 / std::sqrt(config.kappa);
      inst.exact = [amp](double x, double t) { return amp / std::cosh(x) * std::cos(t); };
    } else {
      inst.y0 = sys->plane_wave_state(1.0, 1, 0.0);
    }
    inst.points.assign(sys->grid().begin(), sys->grid().end());
    inst.nodal = [n](std::span<const double> y, std::span<double> u) {
      std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), u.begin());
    };
    inst.system = std::move(sys);
    return inst;
  }

  Nonlinearity f;
  ScalarFunction psi0;
  ScalarFunction psi1;
  BoundaryData boundary = BoundaryData::homogeneous(kind);
  if (config.problem == "sine-gordon") {
    SineGordon sg(config.gamma);
    sg.a = config.a;
    sg.b = config.b;
    f = SineGordon::nonlinearity();
    psi0 = [sg](double x) { return sg.psi0(x); };
    psi1 = [sg](double x) { return sg.psi1(x); };
    inst.exact = [sg](double x, double t) { return sg.u(x, t); };
    if (kind != BoundaryKind::periodic) boundary = sg.boundary_data(kind);
  } else {
    QuarticWave qw;
    f = quartic_nonlinearity();
    psi0 = [qw](double x) { return qw.psi0(x); };
    psi1 = [qw](double x) { return qw.psi1(x); };
  }

  if (sch == SpatialScheme::fourier) {
    auto sys = build_fourier(n, config.m, config.a, config.b, f, config.problem);
    inst.y0 = sys->initial_state(psi0, psi1);
    const Projection pr = project_initial(sys->basis(), kInitialProjectionPoints, psi0, psi1);
    inst.projection_error = pr.error;
    inst.projection_l2_error = pr.l2_error;
    inst.points.assign(sys->quadrature_nodes().begin(), sys->quadrature_nodes().end());
    const FourierWaveSystem* raw = sys.get();
    const std::size_t kdim = sys->size();
    inst.nodal = [raw, kdim](std::span<const double> y, std::span<double> u) {
      raw->nodal_values(y.subspan(0, kdim), u);
    };
    inst.system = std::move(sys);
    return inst;
  }

  std::unique_ptr<FdWaveSystem> sys;
  if (kind == BoundaryKind::periodic)
    sys = build_periodic(n, order, config.a, config.b, f, config.problem);
  else if (kind == BoundaryKind::dirichlet)
    sys = build_dirichlet(n, config.a, config.b, f, boundary, config.problem);
  else
    sys = build_neumann(n, config.a, config.b, f, boundary, config.problem);
  inst.y0 = sys->initial_state(psi0, psi1);
  inst.points.assign(sys->grid().begin(), sys->grid().end());
  inst.nodal = [n](std::span<const double> y, std::span<double> u) {
    std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), u.begin());
  };
  inst.system = std::move(sys);
  return inst;
}

TrajectoryRecord run_method(const ProblemInstance& problem, const RunConfig& config,
                            const MethodSpec& method, double h, std::size_t steps,
                            const IntegrateOptions& options) {
  if (method.kind == MethodSpec::Kind::composition)
    return integrate(*problem.system, problem.y0, h, steps,
                     CompositionScheme::make(method.order), options);
  return integrate(*problem.system, problem.y0, h, steps, HbvmMethod::make(method.k, method.s),
                   config.solver_config(), options);
}

ErrorRun run_with_error(const RunConfig& config, const MethodSpec& method, double h,
                        std::size_t steps) {
  const ProblemInstance problem = make_problem(config);
  if (!problem.exact)
    throw ConfigError("problem '" + config.problem + "' has no closed-form reference solution");
  ErrorRun run;
  run.method = method.name();
  run.h = h;
  run.steps = steps;

  std::vector<double> u(problem.points.size());
  double max_error = 0.0;
  IntegrateOptions options;
  options.store_states = false;
  options.observer = [&](std::size_t, double t, std::span<const double> y) {
    problem.nodal(y, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = std::fabs(u[i] - problem.exact(problem.points[i], t));
      max_error = std::isnan(e) ? e : std::max(max_error, e);
    }
  };
  const auto start = std::chrono::steady_clock::now();
  try {
    const TrajectoryRecord rec = run_method(problem, config, method, h, steps, options);
    run.max_drift = rec.max_abs_drift();
    run.iterations = rec.total_iterations();
    run.max_error = max_error;
  } catch (const IntegrationFailure& e) {
    run.status = "failed at step " + std::to_string(e.step_index());
    run.iterations = e.partial().total_iterations();
  }
  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config) {
  const MethodSpec method{MethodSpec::Kind::hbvm, config.k, config.s, 2};
  const bool fd = config.spatial_scheme() != SpatialScheme::fourier;
  if (fd && config.boundary() != BoundaryKind::periodic)
    throw ConfigError("the convergence study uses periodic boundary conditions");
  std::vector<ConvergenceRow> rows;
  for (std::size_t ell : config.ells) {
    RunConfig c = config;
    if (fd) c.N = ell;
    ConvergenceRow row;
    row.ell = ell;
    row.h = (config.b - config.a) / static_cast<double>(ell);
    row.n = c.resolved_n();
    const ErrorRun run = run_with_error(c, method, row.h, ell);
    if (run.status != "ok")
      throw StepFailure("convergence run l=" + std::to_string(ell) + " " + run.status,
                        StepDiagnostics{});
    row.max_error = run.max_error;
    if (!rows.empty()) row.rate = std::log2(rows.back().max_error / row.max_error);
    rows.push_back(row);
  }
  return rows;
}

std::vector<WpdCell> default_wpd_cells() {
  using K = MethodSpec::Kind;
  return {
      {{K::hbvm, 5, 1, 2}, 0.5, 0.003, 10},       {{K::hbvm, 6, 2, 2}, 0.5, 0.1, 4},
      {{K::hbvm, 9, 3, 2}, 1.0, 0.25, 4},         {{K::composition, 1, 1, 2}, 0.1, 0.0006, 13},
      {{K::composition, 1, 1, 4}, 0.1, 0.007, 7}, {{K::composition, 1, 1, 6}, 0.1, 0.01, 5},
  };
}

std::vector<std::pair<double, std::size_t>> wpd_steps(const WpdCell& cell, double T) {
  std::vector<std::pair<double, std::size_t>> out;
  const std::size_t n = cell.points;
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    const double h = std::exp(std::log(cell.h_max) + frac * (std::log(cell.h_min) - std::log(cell.h_max)));
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(T / h)));
    out.emplace_back(T / static_cast<double>(steps), steps);
  }
  return out;
}

namespace {

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out);
  const fs::path path = fs::path(config.out) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  return out;
}

void write_json(const RunConfig& config, const std::string& name, const json& j) {
  std::ofstream out = open_output(config, name);
  out << j.dump(2) << '\n';
}

void write_trajectory(std::ostream& out, const TrajectoryRecord& rec) {
  out << "step,time,H,H_augmented,drift,augmented_drift,iterations,residual\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << i << ',' << format_number(rec.times[i]) << ',' << format_number(rec.hamiltonian[i])
        << ',' << format_number(rec.augmented_hamiltonian[i]) << ','
        << format_number(rec.hamiltonian[i] - rec.hamiltonian.front()) << ','
        << format_number(rec.augmented_hamiltonian[i] - rec.augmented_hamiltonian.front()) << ','
        << rec.iterations[i] << ',' << format_number(rec.residuals[i]) << '\n';
  }
}

json record_summary(const TrajectoryRecord& rec) {
  return json{{"steps", rec.times.empty() ? 0 : rec.times.size() - 1},
              {"max_abs_drift", rec.max_abs_drift()},
              {"max_abs_augmented_drift", rec.max_abs_augmented_drift()},
              {"total_iterations", rec.total_iterations()},
              {"stalled_steps", rec.stalled_steps},
              {"augmented", rec.augmented}};
}

MethodSpec primary_method(const RunConfig& config) {
  if (!config.methods.empty()) return MethodSpec::parse(config.methods.front());
  return MethodSpec{MethodSpec::Kind::hbvm, config.k, config.s, 2};
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& log) {
  const ProblemInstance problem = make_problem(config);
  const MethodSpec method = primary_method(config);

  std::ofstream snapshots = open_output(config, "snapshots.csv");
  snapshots << "step,time,x,u\n";
  std::vector<double> u(problem.points.size());
  IntegrateOptions options;
  options.stride = config.stride;
  options.store_states = false;
  options.observer = [&](std::size_t step, double t, std::span<const double> y) {
    problem.nodal(y, u);
    for (std::size_t i = 0; i < u.size(); ++i)
      snapshots << step << ',' << format_number(t) << ',' << format_number(problem.points[i])
                << ',' << format_number(u[i]) << '\n';
  };

  json summary{{"command", "solve"},
               {"config", config.to_json()},
               {"method", method.name()},
               {"kernels", std::string(kernels::active().name)}};
  if (!std::isnan(problem.projection_error)) {
    summary["projection_error"] = problem.projection_error;
    summary["projection_l2_error"] = problem.projection_l2_error;
  }

  int status = 0;
  TrajectoryRecord rec;
  try {
    rec = run_method(problem, config, method, config.h, config.steps, options);
    summary["status"] = "ok";
  } catch (const IntegrationFailure& e) {
    rec = e.partial();
    summary["status"] = "failed";
    summary["error"] = e.what();
    summary["failed_step"] = e.step_index();
    log << "error: " << e.what() << '\n';
    status = 3;
  }
  std::ofstream traj = open_output(config, "trajectory.csv");
  write_trajectory(traj, rec);
  summary["result"] = record_summary(rec);
  write_json(config, "summary.json", summary);
  if (status == 0)
    log << method.name() << ": " << config.steps << " steps, max |H drift| "
        << rec.max_abs_drift() << ", max |H~ drift| " << rec.max_abs_augmented_drift() << '\n';
  return status;
}

int cmd_drift(const RunConfig& config, std::ostream& log) {
  const ProblemInstance problem = make_problem(config);
  std::ofstream out = open_output(config, "drift.csv");
  out << "method,step,time,H_drift,H_augmented_drift\n";
  json results = json::array();
  int status = 0;
  for (const std::string& text : config.methods) {
    const MethodSpec method = MethodSpec::parse(text);
    TrajectoryRecord rec;
    json entry{{"method", method.name()}};
    IntegrateOptions options;
    options.store_states = false;
    try {
      rec = run_method(problem, config, method, config.h, config.steps, options);
      entry["status"] = "ok";
    } catch (const IntegrationFailure& e) {
      rec = e.partial();
      entry["status"] = "failed";
      entry["error"] = e.what();
      log << "error: " << method.name() << ": " << e.what() << '\n';
      status = 3;
    } catch (const UnsupportedMode& e) {
      throw ConfigError(method.name() + ": " + e.what());
    }
    const auto d = rec.drift();
    const auto da = rec.augmented_drift();
    for (std::size_t i = 0; i < d.size(); ++i)
      out << method.name() << ',' << i << ',' << format_number(rec.times[i]) << ','
          << format_number(d[i]) << ',' << format_number(da[i]) << '\n';
    entry["result"] = record_summary(rec);
    results.push_back(entry);
    log << method.name() << ": max |H drift| " << rec.max_abs_drift() << ", max |H~ drift| "
        << rec.max_abs_augmented_drift() << '\n';
  }
  write_json(config, "drift_summary.json",
             json{{"command", "drift"}, {"config", config.to_json()}, {"runs", results}});
  return status;
}

int cmd_convergence(const RunConfig& config, std::ostream& log) {
  const ProblemInstance probe = make_problem(config);
  if (!probe.exact)
    throw ConfigError("problem '" + config.problem + "' has no closed-form reference solution");
  std::vector<ConvergenceRow> rows;
  try {
    rows = convergence_study(config);
  } catch (const StepFailure& e) {
    log << "error: " << e.what() << '\n';
    return 3;
  }
  std::ofstream out = open_output(config, "convergence.csv");
  out << "ell,h,N,max_error,rate\n";
  json table = json::array();
  for (const ConvergenceRow& r : rows) {
    out << r.ell << ',' << format_number(r.h) << ',' << r.n << ',' << format_number(r.max_error)
        << ',' << (std::isnan(r.rate) ? std::string() : format_number(r.rate)) << '\n';
    table.push_back(json{{"ell", r.ell}, {"h", r.h}, {"N", r.n}, {"max_error", r.max_error}});
    log << "l=" << r.ell << " error " << r.max_error;
    if (!std::isnan(r.rate)) log << " rate " << r.rate;
    log << '\n';
  }
  write_json(config, "convergence.json",
             json{{"command", "convergence"}, {"config", config.to_json()}, {"rows", table}});
  return 0;
}

int cmd_wpd(const RunConfig& config, std::ostream& log) {
  const ProblemInstance probe = make_problem(config);
  if (!probe.exact)
    throw ConfigError("problem '" + config.problem + "' has no closed-form reference solution");
  std::vector<WpdCell> cells = default_wpd_cells();
  if (!config.methods.empty()) {
    std::vector<WpdCell> kept;
    for (const std::string& text : config.methods) {
      const std::string name = MethodSpec::parse(text).name();
      bool found = false;
      for (const WpdCell& c : cells)
        if (c.method.name() == name) {
          kept.push_back(c);
          found = true;
        }
      if (!found) throw ConfigError("no work-precision parameters for method " + name);
    }
    cells = std::move(kept);
  }
  std::ofstream out = open_output(config, "wpd.csv");
  out << "method,h,steps,max_error,max_h_drift,iterations,status,wall_seconds\n";
  for (const WpdCell& cell : cells) {
    for (const auto& [h, steps] : wpd_steps(cell, config.T)) {
      const ErrorRun r = run_with_error(config, cell.method, h, steps);
      out << r.method << ',' << format_number(r.h) << ',' << r.steps << ','
          << format_number(r.max_error) << ',' << format_number(r.max_drift) << ','
          << r.iterations << ',' << r.status << ',' << format_number(r.wall_seconds) << '\n';
      out.flush();
      log << r.method << " h=" << r.h << " error " << r.max_error << " drift " << r.max_drift
          << " " << r.status << '\n';
    }
  }
  return 0;
}

}  // namespace hbvm
