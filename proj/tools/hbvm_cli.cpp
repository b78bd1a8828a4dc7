// hbvm: command-line front end (solve, drift, convergence, wpd).
//
// Values come from the subcommand defaults, then an optional JSON config
// file, then any flags given explicitly on the command line.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hbvm/experiments.hpp"
#include "hbvm/kernels.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;

struct Flags {
  hbvm::RunConfig values;
  std::string config_file;
  std::string methods;
  std::string kernels;
  std::vector<std::pair<std::string, CLI::Option*>> given;
  CLI::Option* methods_opt = nullptr;
};

template <class T>
void add(CLI::App* app, Flags& f, const std::string& name, T& target, const std::string& help) {
  f.given.emplace_back(name, app->add_option(name, target, help));
}

void register_flags(CLI::App* app, Flags& f) {
  auto& v = f.values;
  add(app, f, "--problem", v.problem, "sine-gordon, quartic-wave, nls, harmonic, quartic, pendulum");
  add(app, f, "--gamma", v.gamma, "sine-Gordon soliton parameter");
  add(app, f, "--kappa", v.kappa, "NLS coupling");
  add(app, f, "--bc", v.bc, "periodic, dirichlet or neumann");
  add(app, f, "--scheme", v.scheme, "fd2, fd4, fd6 or fourier");
  add(app, f, "-N", v.N, "grid points (FD) or modes (fourier)");
  add(app, f, "-m", v.m, "Fourier quadrature points");
  add(app, f, "-k", v.k, "HBVM quadrature nodes");
  add(app, f, "-s", v.s, "HBVM polynomial degree");
  add(app, f, "--h", v.h, "time step");
  add(app, f, "--steps", v.steps, "number of steps");
  add(app, f, "--solver", v.solver, "auto, fixed-point, blended or newton");
  add(app, f, "--tol", v.tol, "nonlinear solver tolerance");
  add(app, f, "--max-iter", v.max_iter, "nonlinear solver iteration cap");
  add(app, f, "--preconditioner", v.preconditioner, "tridiagonal or exact");
  add(app, f, "--out", v.out, "output directory");
  add(app, f, "--stride", v.stride, "snapshot stride");
  add(app, f, "-T", v.T, "final time of the wpd sweep");
  add(app, f, "--a", v.a, "left end of the domain");
  add(app, f, "--b", v.b, "right end of the domain");
  f.given.emplace_back("--ells", app->add_option("--ells", v.ells, "convergence levels")->delimiter(','));
  f.methods_opt = app->add_option("--methods", f.methods, "';'-separated list, e.g. 'HBVM(5,1);SV4'");
  app->add_option("--config", f.config_file, "JSON config file with flat keys");
  app->add_option("--kernels", f.kernels, "scalar, avx2 or auto");
}

std::vector<std::string> split_methods(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(item);
  return out;
}

hbvm::RunConfig resolve(const Flags& f, hbvm::RunConfig base) {
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw hbvm::ConfigError("cannot read config file " + f.config_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw hbvm::ConfigError("config file " + f.config_file + ": " + e.what());
    }
    const hbvm::RunConfig file = hbvm::RunConfig::from_json(j);
    nlohmann::json merged = base.to_json();
    merged["N"] = base.N;
    for (const auto& [key, value] : j.items()) merged[key] = file.to_json()[key];
    if (j.contains("N")) merged["N"] = file.N;
    if (j.contains("methods")) merged["methods"] = file.methods;
    base = hbvm::RunConfig::from_json(merged);
  }
  // Explicit flags win over the file.
  const nlohmann::json flag_values = f.values.to_json();
  nlohmann::json merged = base.to_json();
  merged["N"] = base.N;
  for (const auto& [name, opt] : f.given) {
    if (opt->count() == 0) continue;
    std::string key = name.substr(name.find_first_not_of('-'));
    if (key == "max-iter") key = "max_iter";
    merged[key] = key == "N" ? nlohmann::json(f.values.N) : flag_values[key];
  }
  hbvm::RunConfig out = hbvm::RunConfig::from_json(merged);
  if (f.methods_opt->count() > 0) out.methods = split_methods(f.methods);
  return out;
}

void select_kernels(const std::string& name) {
  using hbvm::kernels::Backend;
  if (name.empty() || name == "auto") return;
  if (name == "scalar") hbvm::kernels::select_backend(Backend::scalar);
  else if (name == "avx2") hbvm::kernels::select_backend(Backend::avx2);
  else throw hbvm::ConfigError("unknown kernel backend '" + name + "' (scalar, avx2, auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-conserving HBVM integration of semi-discrete Hamiltonian wave equations"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    Flags flags;
    hbvm::RunConfig defaults;
    int (*run)(const hbvm::RunConfig&, std::ostream&);
  };
  std::vector<Command> commands(4);
  commands[0].app = app.add_subcommand("solve", "single run: trajectory.csv, snapshots.csv, summary.json");
  commands[0].run = hbvm::cmd_solve;
  commands[1].app = app.add_subcommand("drift", "Hamiltonian drift of several methods: drift.csv");
  commands[1].run = hbvm::cmd_drift;
  commands[1].defaults.methods = {"HBVM(1,1)", "HBVM(5,1)"};
  commands[2].app = app.add_subcommand("convergence", "error table over h = (b-a)/l: convergence.csv");
  commands[2].run = hbvm::cmd_convergence;
  commands[3].app = app.add_subcommand("wpd", "work-precision sweep: wpd.csv");
  commands[3].run = hbvm::cmd_wpd;
  commands[3].defaults.scheme = "fourier";
  for (Command& c : commands) {
    c.flags.values = c.defaults;
    register_flags(c.app, c.flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  for (Command& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      select_kernels(c.flags.kernels);
      const hbvm::RunConfig config = resolve(c.flags, c.defaults);
      config.validate();
      return c.run(config, std::cout);
    } catch (const hbvm::InvalidArgument& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kConfigError;
    } catch (const hbvm::NumericalError& e) {
      std::cerr << "solver failure: " << e.what() << '\n';
      return kSolverFailure;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kConfigError;
    }
  }
  return kConfigError;
}
