#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mottlab/operators.hpp"
#include "mottlab/solvers.hpp"

namespace mottlab {

enum class SweepMethod { dense, lanczos, perturb1, perturb2, ccg_analytic };

std::string to_string(SweepMethod method);
/// Accepts dense, lanczos, perturb1, perturb2, ccg-analytic.
SweepMethod parse_sweep_method(const std::string& name);

/// chain -> chain_periodic, ccg -> complete_graph.
GeometryKind parse_geometry(const std::string& name);
Geometry make_geometry(GeometryKind kind, int n_sites);

struct SweepConfig {
  int n_particles = 3;
  int n_sites = 3;
  GeometryKind geometry = GeometryKind::chain_periodic;
  SweepMethod method = SweepMethod::dense;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  int steps = 101;
  std::vector<std::string> pairs{"nn", "nnn"};
  int workers = 1;  // 0: MOTTLAB_WORKERS, else hardware concurrency
  std::size_t dense_cap = kDefaultDenseCap;
  int lanczos_max_iter = kDefaultLanczosMaxIter;
  double lanczos_tol = kDefaultLanczosTol;
  std::string csv_path;
  std::string plot_path;
};

/// Throws DomainError on an invalid configuration; returns warnings.
std::vector<std::string> validate(const SweepConfig& config);

struct SweepRecord {
  double lambda = 0.0;
  double energy = 0.0;
  double linear_entropy = 0.0;
  double ds_dlambda = 0.0;
  std::optional<double> negativity_nn;
  std::optional<double> negativity_nnn;
  double delta_n2 = 0.0;
  // Not serialized: whether the partition amplitudes of a symmetric
  // ground state are ordered by interaction energy.
  std::optional<bool> alpha_hierarchy;
};

struct SweepOutcome {
  std::vector<SweepRecord> records;  // ordered by lambda
  std::optional<std::string> error;  // first failing point; records stop before it
  std::vector<std::string> warnings;
  double derivative_step = 0.0;  // grid spacing used for dS/dlambda
};

/// Uniform grid of `steps` points; points are independent and may run on
/// several workers. dS/dlambda is a central difference (one-sided at the
/// ends); for ccg-analytic it is assembled from partition amplitudes whose
/// lambda-derivatives are differenced on the same grid.
SweepOutcome run_sweep(const SweepConfig& config);

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{"lambda",        "energy",         "linear_entropy", "ds_dlambda",
                                                "negativity_nn", "negativity_nnn", "delta_n2"};
  return columns;
}

/// Header line plus one line per record, 17 significant digits, empty
/// field for absent values, LF endings; `error` becomes a `# error:` line.
std::string format_csv(std::span<const SweepRecord> records, const std::optional<std::string>& error = {});
std::vector<SweepRecord> parse_csv(const std::string& text);
void emit_csv(std::span<const SweepRecord> records, const std::string& path,
              const std::optional<std::string>& error = {});

/// Self-contained SVG with lambda on x and one polyline per column.
std::string render_svg(std::span<const SweepRecord> records, std::span<const std::string> columns);
void emit_plot(std::span<const SweepRecord> records, const std::string& path, std::span<const std::string> columns);

/// Value of a named CSV column, nullopt when absent.
std::optional<double> column_value(const SweepRecord& record, const std::string& column);

}  // namespace mottlab
