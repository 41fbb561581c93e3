#include "mottlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "mottlab/ccg_analytic.hpp"
#include "mottlab/entanglement.hpp"
#include "mottlab/errors.hpp"
#include "mottlab/fock_basis.hpp"
#include "mottlab/solvers.hpp"
#include "mottlab/sweep.hpp"

namespace mottlab {

namespace {

// Raised for invalid option values found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string short_num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6e", value);
  return buffer;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

struct GroundOptions {
  int n = 3;
  int m = 3;
  std::string geometry = "chain";
  std::string method = "dense";
  double lambda = 0.1;
  std::string state_path;
  std::string operator_path;
};

GroundStateResult solve(const std::shared_ptr<const FockBasis>& basis, const HamiltonianParams& params,
                        SolverMethod method) {
  switch (method) {
    case SolverMethod::dense: return solve_dense(assemble_hamiltonian(basis, params));
    case SolverMethod::lanczos: return solve_lanczos(assemble_hamiltonian(basis, params));
    case SolverMethod::perturb1: return perturbative_state(basis, params, 1);
    case SolverMethod::perturb2: return perturbative_state(basis, params, 2);
  }
  throw DomainError("unknown solver");
}

SolverMethod parse_solver(const std::string& name) {
  for (auto m : {SolverMethod::dense, SolverMethod::lanczos, SolverMethod::perturb1, SolverMethod::perturb2})
    if (to_string(m) == name) return m;
  throw UsageError("unknown method '" + name + "' (expected dense, lanczos, perturb1 or perturb2)");
}

// Splices `key = value` lines from the sweep config file into the argument
// list as `--key value`, skipping keys already given as flags.
std::vector<std::string> expand_sweep_config(std::vector<std::string> args) {
  const auto sweep = std::find(args.begin(), args.end(), "sweep");
  if (sweep == args.end()) return args;
  std::string path;
  for (auto it = sweep + 1; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end()) path = *(it + 1);
    if (it->rfind("--config=", 0) == 0) path = it->substr(9);
  }
  if (path.empty()) return args;

  std::ifstream file(path);
  if (!file) throw UsageError("cannot read config file '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(file);
  } catch (const CLI::ParseError& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && item.parents != std::vector<std::string>{"sweep"}) {
      throw UsageError("config file '" + path + "': unexpected section for key '" + item.name + "'");
    }
    std::string flag = "--" + item.name;
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    if (flag == "--config" || given(flag)) continue;
    extra.push_back(flag);
    extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

GeometryKind geometry_or_usage(const std::string& name) {
  try {
    return parse_geometry(name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

void print_observables(std::ostream& out, const EntanglementReport& report) {
  out << "linear_entropy=" << num(report.linear_entropy) << '\n';
  for (const auto& [label, value] : report.negativities) out << "negativity_" << label << '=' << num(value) << '\n';
  out << "delta_n2=" << num(report.delta_n2) << '\n';
}

int run_basis(int n, int m, const std::string& dump_path, std::ostream& out) {
  if (n < 0 || m < 1) throw UsageError("basis: need --n >= 0 and --m >= 1");
  const auto dim = basis_dimension(n, m);
  const auto f = partition_count(n, n);
  out << "N=" << n << '\n' << "M=" << m << '\n';
  out << "D=" << (dim ? std::to_string(*dim) : std::string("overflow")) << '\n';
  out << "f(N)=" << (f ? std::to_string(*f) : std::string("overflow")) << '\n';
  if (!dump_path.empty()) {
    auto file = open_output(dump_path);
    FockBasis(n, m).dump(file);
  }
  return 0;
}

int run_ground(const GroundOptions& opt, std::ostream& out) {
  const auto method = parse_solver(opt.method);
  const auto geometry = make_geometry(geometry_or_usage(opt.geometry), opt.m);
  if (!(opt.lambda >= 0.0) || !std::isfinite(opt.lambda)) throw UsageError("ground: --lambda must be >= 0");
  auto basis = std::make_shared<const FockBasis>(opt.n, opt.m);
  const HamiltonianParams params{opt.lambda, geometry};
  const auto result = solve(basis, params, method);
  const std::vector<std::string> labels{"nn", "nnn"};
  const auto report = analyze(result.state, representative_pairs(geometry, labels));

  out << "method=" << to_string(result.method) << '\n';
  out << "D=" << basis->dimension() << '\n';
  out << "energy=" << num(result.energy) << '\n';
  out << "residual=" << short_num(result.residual) << '\n';
  out << "iterations=" << result.iterations << '\n';
  print_observables(out, report);
  if (geometry.kind() == GeometryKind::complete_graph && opt.n >= 1) {
    try {
      const auto coeffs = project_to_symmetric(result.state);
      out << "alpha_hierarchy=" << (alpha_hierarchy_holds(coeffs) ? "holds" : "violated") << '\n';
    } catch (const AsymmetryError&) {
      out << "alpha_hierarchy=not-symmetric\n";
    }
  }
  if (!opt.state_path.empty()) {
    auto file = open_output(opt.state_path);
    dump_state(file, result);
  }
  if (!opt.operator_path.empty()) {
    auto file = open_output(opt.operator_path);
    assemble_hamiltonian(basis, params).dump(file);
  }
  return 0;
}

struct CompareOptions {
  int n = 2;
  int m = 2;
  std::string geometry = "chain";
  std::string method = "perturb2";
  double lambda_min = 0.0;
  double lambda_max = 0.1;
  int steps = 11;
};

int run_compare(const CompareOptions& opt, std::ostream& out) {
  const auto method = parse_solver(opt.method);
  if (method != SolverMethod::perturb1 && method != SolverMethod::perturb2) {
    throw UsageError("compare: --method must be perturb1 or perturb2");
  }
  if (opt.steps < 2 || !(opt.lambda_min >= 0.0) || !(opt.lambda_min < opt.lambda_max)) {
    throw UsageError("compare: need 0 <= lambda-min < lambda-max and steps >= 2");
  }
  const auto geometry = make_geometry(geometry_or_usage(opt.geometry), opt.m);
  auto basis = std::make_shared<const FockBasis>(opt.n, opt.m);
  const int order = method == SolverMethod::perturb1 ? 1 : 2;

  double max_de = 0.0;
  double max_ds = 0.0;
  double max_dn2 = 0.0;
  out << "lambda,energy_exact,energy_pert,abs_dE,abs_dS,abs_dN2\n";
  for (int i = 0; i < opt.steps; ++i) {
    const double lambda =
        i + 1 == opt.steps ? opt.lambda_max : opt.lambda_min + (opt.lambda_max - opt.lambda_min) * i / (opt.steps - 1);
    const HamiltonianParams params{lambda, geometry};
    const auto h = assemble_hamiltonian(basis, params);
    const auto exact = basis->dimension() <= kDefaultDenseCap || basis->dimension() < 2 ? solve_dense(h)
                                                                                        : solve_lanczos(h);
    const auto pert = perturbative_state(basis, params, order);
    const int site0[] = {0};
    const auto rho_exact = partial_trace(exact.state, site0);
    const auto rho_pert = partial_trace(pert.state, site0);
    const double de = std::abs(exact.energy - pert.energy);
    const double ds = std::abs(linear_entropy(rho_exact) - linear_entropy(rho_pert));
    const double dn2 = std::abs(delta_n2(rho_exact) - delta_n2(rho_pert));
    max_de = std::max(max_de, de);
    max_ds = std::max(max_ds, ds);
    max_dn2 = std::max(max_dn2, dn2);
    out << num(lambda) << ',' << num(exact.energy) << ',' << num(pert.energy) << ',' << short_num(de) << ','
        << short_num(ds) << ',' << short_num(dn2) << '\n';
  }
  out << "max_abs_dE=" << short_num(max_de) << '\n';
  out << "max_abs_dS=" << short_num(max_ds) << '\n';
  out << "max_abs_dN2=" << short_num(max_dn2) << '\n';
  return 0;
}

int run_sweep_command(SweepConfig config, const std::string& method, const std::string& geometry,
                      const std::vector<std::string>& columns, std::ostream& out, std::ostream& err) {
  try {
    config.method = parse_sweep_method(method);
    config.geometry = parse_geometry(geometry);
    validate(config);
    for (const auto& c : columns) (void)column_value(SweepRecord{}, c);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const auto outcome = run_sweep(config);
  for (const auto& w : outcome.warnings) err << "warning: " << w << '\n';

  if (config.csv_path.empty() && config.plot_path.empty()) {
    out << format_csv(outcome.records, outcome.error);
  } else {
    if (!config.csv_path.empty()) emit_csv(outcome.records, config.csv_path, outcome.error);
    if (!config.plot_path.empty() && !outcome.records.empty()) {
      emit_plot(outcome.records, config.plot_path, columns);
    }
    out << "points=" << outcome.records.size() << '\n';
    out << "derivative_step=" << num(outcome.derivative_step) << '\n';
    int symmetric = 0;
    int violated = 0;
    for (const auto& r : outcome.records) {
      if (!r.alpha_hierarchy) continue;
      ++symmetric;
      if (!*r.alpha_hierarchy) ++violated;
    }
    if (symmetric > 0) out << "alpha_hierarchy_violations=" << violated << '/' << symmetric << '\n';
  }
  if (outcome.error) {
    err << "error: " << *outcome.error << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bose-Hubbard / complete-graph lattice ground states and entanglement across the Mott transition",
               "mottlab"};
  app.require_subcommand(1);

  int basis_n = 0;
  int basis_m = 1;
  std::string basis_dump;
  auto* basis_cmd = app.add_subcommand("basis", "Print N, M, basis dimension D and partition count f(N)");
  basis_cmd->add_option("--n", basis_n, "Number of particles")->required();
  basis_cmd->add_option("--m", basis_m, "Number of sites")->required();
  basis_cmd->add_option("--dump", basis_dump, "Write the basis in text form to PATH");

  SweepConfig sweep;
  std::string sweep_method = "dense";
  std::string sweep_geometry = "chain";
  std::vector<std::string> plot_columns{"linear_entropy", "negativity_nn", "negativity_nnn", "delta_n2"};
  auto* sweep_cmd = app.add_subcommand("sweep", "Observables on a uniform lambda grid");
  std::string sweep_config;
  sweep_cmd->add_option("--config", sweep_config, "key = value configuration file; flags override it");
  sweep_cmd->add_option("--n", sweep.n_particles, "Number of particles")->required();
  sweep_cmd->add_option("--m", sweep.n_sites, "Number of sites")->required();
  sweep_cmd->add_option("--geometry", sweep_geometry, "chain or ccg")->capture_default_str();
  sweep_cmd->add_option("--method", sweep_method, "dense, lanczos, perturb1, perturb2 or ccg-analytic")
      ->capture_default_str();
  sweep_cmd->add_option("--lambda-min", sweep.lambda_min, "First grid point")->capture_default_str();
  sweep_cmd->add_option("--lambda-max", sweep.lambda_max, "Last grid point")->capture_default_str();
  sweep_cmd->add_option("--steps", sweep.steps, "Number of grid points")->capture_default_str();
  sweep_cmd->add_option("--pairs", sweep.pairs, "Pair labels to evaluate (nn, nnn)")->delimiter(',');
  sweep_cmd->add_option("--workers", sweep.workers, "Worker threads (0: MOTTLAB_WORKERS or all cores)")
      ->capture_default_str();
  sweep_cmd->add_option("--csv", sweep.csv_path, "Write records as CSV to PATH");
  sweep_cmd->add_option("--plot", sweep.plot_path, "Write an SVG plot to PATH");
  sweep_cmd->add_option("--columns", plot_columns, "Columns drawn in the plot")->delimiter(',');

  GroundOptions ground;
  auto* ground_cmd = app.add_subcommand("ground", "Single-point ground state and observables");
  ground_cmd->add_option("--n", ground.n, "Number of particles")->required();
  ground_cmd->add_option("--m", ground.m, "Number of sites")->required();
  ground_cmd->add_option("--geometry", ground.geometry, "chain or ccg")->capture_default_str();
  ground_cmd->add_option("--method", ground.method, "dense, lanczos, perturb1 or perturb2")->capture_default_str();
  ground_cmd->add_option("--lambda", ground.lambda, "J/U")->capture_default_str();
  ground_cmd->add_option("--state", ground.state_path, "Write the ground state to PATH");
  ground_cmd->add_option("--operator", ground.operator_path, "Write the Hamiltonian triplets to PATH");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Exact vs perturbative deviations over a lambda grid");
  compare_cmd->add_option("--n", compare.n, "Number of particles")->required();
  compare_cmd->add_option("--m", compare.m, "Number of sites")->required();
  compare_cmd->add_option("--geometry", compare.geometry, "chain or ccg")->capture_default_str();
  compare_cmd->add_option("--method", compare.method, "perturb1 or perturb2")->capture_default_str();
  compare_cmd->add_option("--lambda-min", compare.lambda_min, "First grid point")->capture_default_str();
  compare_cmd->add_option("--lambda-max", compare.lambda_max, "Last grid point")->capture_default_str();
  compare_cmd->add_option("--steps", compare.steps, "Number of grid points")->capture_default_str();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_sweep_config(std::move(args));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 1;
  }

  try {
    if (*basis_cmd) return run_basis(basis_n, basis_m, basis_dump, out);
    if (*sweep_cmd) return run_sweep_command(sweep, sweep_method, sweep_geometry, plot_columns, out, err);
    if (*ground_cmd) return run_ground(ground, out);
    if (*compare_cmd) return run_compare(compare, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace mottlab
