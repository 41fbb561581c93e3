#include "mottlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "mottlab/ccg_analytic.hpp"
#include "mottlab/entanglement.hpp"
#include "mottlab/errors.hpp"

namespace mottlab {

std::string to_string(SweepMethod method) {
  switch (method) {
    case SweepMethod::dense: return "dense";
    case SweepMethod::lanczos: return "lanczos";
    case SweepMethod::perturb1: return "perturb1";
    case SweepMethod::perturb2: return "perturb2";
    case SweepMethod::ccg_analytic: return "ccg-analytic";
  }
  return "unknown";
}

SweepMethod parse_sweep_method(const std::string& name) {
  for (auto m : {SweepMethod::dense, SweepMethod::lanczos, SweepMethod::perturb1, SweepMethod::perturb2,
                 SweepMethod::ccg_analytic}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown method '" + name + "'");
}

GeometryKind parse_geometry(const std::string& name) {
  if (name == "chain") return GeometryKind::chain_periodic;
  if (name == "ccg") return GeometryKind::complete_graph;
  throw DomainError("unknown geometry '" + name + "' (expected chain or ccg)");
}

Geometry make_geometry(GeometryKind kind, int n_sites) {
  switch (kind) {
    case GeometryKind::chain_periodic: return Geometry::chain_periodic(n_sites);
    case GeometryKind::chain_open: return Geometry::chain_open(n_sites);
    case GeometryKind::complete_graph: return Geometry::complete_graph(n_sites);
    case GeometryKind::custom: break;
  }
  throw DomainError("make_geometry: custom geometries need explicit edges");
}

std::vector<std::string> validate(const SweepConfig& config) {
  if (config.n_particles < 1 || config.n_sites < 1) throw DomainError("sweep: need N >= 1 and M >= 1");
  if (!std::isfinite(config.lambda_min) || !std::isfinite(config.lambda_max) || config.lambda_min < 0.0 ||
      !(config.lambda_min < config.lambda_max)) {
    throw DomainError("sweep: need 0 <= lambda_min < lambda_max");
  }
  if (config.steps < 2) throw DomainError("sweep: need steps >= 2");
  for (const auto& label : config.pairs)
    if (label != "nn" && label != "nnn") throw DomainError("sweep: unknown pair label '" + label + "'");
  const bool perturbative = config.method == SweepMethod::perturb1 || config.method == SweepMethod::perturb2;
  if (perturbative && config.n_particles != config.n_sites) {
    throw DomainError("sweep: perturbative methods need N == M");
  }
  if (config.method == SweepMethod::ccg_analytic && config.geometry != GeometryKind::complete_graph) {
    throw DomainError("sweep: ccg-analytic needs the ccg geometry");
  }
  std::vector<std::string> warnings;
  if (perturbative && config.lambda_max > 0.3) {
    warnings.push_back("lambda_max = " + std::to_string(config.lambda_max) +
                       " is beyond the strong-coupling regime; perturbative results are qualitative there");
  }
  return warnings;
}

namespace {

struct PointResult {
  SweepRecord record;
  std::optional<SymmetricStateCoefficients> coefficients;
  std::optional<std::string> error;
};

int resolve_workers(int requested, std::size_t points) {
  int workers = requested;
  if (workers <= 0) {
    if (const char* env = std::getenv("MOTTLAB_WORKERS")) workers = std::atoi(env);
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return std::clamp(workers, 1, static_cast<int>(points));
}

class PointEvaluator {
 public:
  explicit PointEvaluator(const SweepConfig& config)
      : config_(config),
        geometry_(make_geometry(config.geometry, config.n_sites)),
        pairs_(representative_pairs(geometry_, config.pairs)) {
    if (config.method != SweepMethod::perturb1 && config.method != SweepMethod::perturb2) {
      basis_ = std::make_shared<const FockBasis>(config.n_particles, config.n_sites);
    }
  }

  PointResult evaluate(double lambda) const {
    PointResult out;
    out.record.lambda = lambda;
    if (config_.method == SweepMethod::perturb1 || config_.method == SweepMethod::perturb2) {
      const int order = config_.method == SweepMethod::perturb1 ? 1 : 2;
      const auto expansion = perturbative_expansion(config_.n_particles, geometry_, lambda, order);
      out.record.energy = expansion.energy;
      fill(out.record, analyze(expansion.state, pairs_));
      return out;
    }

    const auto h = assemble_hamiltonian(basis_, {lambda, geometry_});
    const bool use_lanczos = config_.method == SweepMethod::lanczos ||
                             (config_.method == SweepMethod::ccg_analytic && h.dimension() > config_.dense_cap);
    const auto ground = use_lanczos && h.dimension() >= 2
                            ? solve_lanczos(h, config_.lanczos_max_iter, config_.lanczos_tol)
                            : solve_dense(h, config_.dense_cap);
    out.record.energy = ground.energy;
    fill(out.record, analyze(ground.state, pairs_));

    if (config_.geometry == GeometryKind::complete_graph) {
      try {
        auto coeffs = project_to_symmetric(ground.state);
        out.record.alpha_hierarchy = alpha_hierarchy_holds(coeffs);
        if (config_.method == SweepMethod::ccg_analytic) {
          const auto rho = reduced_one_site_from_partitions(coeffs);
          out.record.linear_entropy = linear_entropy(rho);
          out.record.delta_n2 = delta_n2(rho);
        }
        out.coefficients = std::move(coeffs);
      } catch (const AsymmetryError&) {
        if (config_.method == SweepMethod::ccg_analytic) throw;
      }
    }
    return out;
  }

 private:
  static void fill(SweepRecord& record, const EntanglementReport& report) {
    record.linear_entropy = report.linear_entropy;
    record.delta_n2 = report.delta_n2;
    if (auto it = report.negativities.find("nn"); it != report.negativities.end()) record.negativity_nn = it->second;
    if (auto it = report.negativities.find("nnn"); it != report.negativities.end()) {
      record.negativity_nnn = it->second;
    }
  }

  const SweepConfig& config_;
  Geometry geometry_;
  PairSelection pairs_;
  std::shared_ptr<const FockBasis> basis_;
};

// Central differences inside, one-sided at the ends; `values(i)` and the
// uniform spacing `step` define the series.
template <typename Values>
double difference(std::size_t i, std::size_t count, double step, Values&& values) {
  if (count < 2) return 0.0;
  if (i == 0) return (values(1) - values(0)) / step;
  if (i + 1 == count) return (values(i) - values(i - 1)) / step;
  return (values(i + 1) - values(i - 1)) / (2.0 * step);
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& config) {
  SweepOutcome outcome;
  outcome.warnings = validate(config);
  const auto points = static_cast<std::size_t>(config.steps);
  const double step = (config.lambda_max - config.lambda_min) / static_cast<double>(points - 1);
  outcome.derivative_step = step;

  std::vector<PointResult> results(points);
  std::optional<PointEvaluator> evaluator;
  try {
    evaluator.emplace(config);
  } catch (const std::exception& e) {
    outcome.error = e.what();
    return outcome;
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      const double lambda = i + 1 == points ? config.lambda_max : config.lambda_min + static_cast<double>(i) * step;
      try {
        results[i] = evaluator->evaluate(lambda);
      } catch (const std::exception& e) {
        results[i].record.lambda = lambda;
        results[i].error = e.what();
      }
    }
  };
  const int workers = resolve_workers(config.workers, points);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::size_t good = 0;
  while (good < points && !results[good].error) ++good;
  if (good < points) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", results[good].record.lambda);
    outcome.error = "lambda=" + std::string(buffer) + ": " + *results[good].error;
  }

  outcome.records.reserve(good);
  for (std::size_t i = 0; i < good; ++i) outcome.records.push_back(results[i].record);

  if (config.method == SweepMethod::ccg_analytic) {
    for (std::size_t i = 0; i < good; ++i) {
      SymmetricStateCoefficients dcoeffs = *results[i].coefficients;
      for (std::size_t a = 0; a < dcoeffs.alphas.size(); ++a) {
        dcoeffs.alphas[a] = difference(i, good, step, [&](std::size_t k) { return results[k].coefficients->alphas[a]; });
      }
      outcome.records[i].ds_dlambda = entropy_derivative_terms(*results[i].coefficients, dcoeffs);
    }
  } else {
    for (std::size_t i = 0; i < good; ++i) {
      outcome.records[i].ds_dlambda =
          difference(i, good, step, [&](std::size_t k) { return outcome.records[k].linear_entropy; });
    }
  }
  return outcome;
}

std::optional<double> column_value(const SweepRecord& r, const std::string& column) {
  if (column == "lambda") return r.lambda;
  if (column == "energy") return r.energy;
  if (column == "linear_entropy") return r.linear_entropy;
  if (column == "ds_dlambda") return r.ds_dlambda;
  if (column == "negativity_nn") return r.negativity_nn;
  if (column == "negativity_nnn") return r.negativity_nnn;
  if (column == "delta_n2") return r.delta_n2;
  throw DomainError("unknown column '" + column + "'");
}

namespace {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << content;
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string format_csv(std::span<const SweepRecord> records, const std::optional<std::string>& error) {
  std::string out;
  const auto& columns = csv_columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& r : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      if (const auto v = column_value(r, columns[c])) out += format_number(*v);
    }
    out += '\n';
  }
  if (error) {
    std::string message = *error;
    std::replace(message.begin(), message.end(), '\n', ' ');
    out += "# error: " + message + '\n';
  }
  return out;
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("parse_csv: empty input");
  std::vector<std::string> header;
  {
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) header.push_back(field);
  }
  if (header != csv_columns()) throw DomainError("parse_csv: unexpected header");
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != header.size()) throw DomainError("parse_csv: wrong field count");
    auto number = [&](std::size_t c) -> std::optional<double> {
      if (fields[c].empty()) return std::nullopt;
      return std::strtod(fields[c].c_str(), nullptr);
    };
    SweepRecord r;
    r.lambda = number(0).value_or(0.0);
    r.energy = number(1).value_or(0.0);
    r.linear_entropy = number(2).value_or(0.0);
    r.ds_dlambda = number(3).value_or(0.0);
    r.negativity_nn = number(4);
    r.negativity_nnn = number(5);
    r.delta_n2 = number(6).value_or(0.0);
    records.push_back(r);
  }
  return records;
}

void emit_csv(std::span<const SweepRecord> records, const std::string& path, const std::optional<std::string>& error) {
  if (records.empty() && !error) throw DomainError("emit_csv: no records");
  write_file(path, format_csv(records, error));
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string fixed(double value) {
  if (std::abs(value) < 5e-3) value = 0.0;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

std::string tick_label(double value) {
  if (std::abs(value) < 1e-12) value = 0.0;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", value);
  return buffer;
}

}  // namespace

std::string render_svg(std::span<const SweepRecord> records, std::span<const std::string> columns) {
  if (records.empty()) throw DomainError("render_svg: no records");
  if (columns.empty()) throw DomainError("render_svg: no columns");

  double x_min = records.front().lambda;
  double x_max = records.front().lambda;
  double y_min = 0.0;
  double y_max = 0.0;
  for (const auto& r : records) {
    x_min = std::min(x_min, r.lambda);
    x_max = std::max(x_max, r.lambda);
    for (const auto& c : columns) {
      if (const auto v = column_value(r, c); v && std::isfinite(*v)) {
        y_min = std::min(y_min, *v);
        y_max = std::max(y_max, *v);
      }
    }
  }
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) y_max = y_min + 1.0;
  const double pad = 0.05 * (y_max - y_min);
  y_max += pad;
  if (y_min < 0.0) y_min -= pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\"" << fixed(kLeft + plot_w)
      << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft) << "\" y2=\""
      << fixed(kTop + plot_h) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_min + (x_max - x_min) * t / kTicks;
    const double yv = y_min + (y_max - y_min) * t / kTicks;
    svg << "<line x1=\"" << fixed(sx(xv)) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\"" << fixed(sx(xv))
        << "\" y2=\"" << fixed(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(sx(xv)) << "\" y=\"" << fixed(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << tick_label(xv) << "</text>\n";
    svg << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(sy(yv)) << "\" x2=\"" << fixed(kLeft)
        << "\" y2=\"" << fixed(sy(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(sy(yv) + 4) << "\" text-anchor=\"end\">"
        << tick_label(yv) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 10)
      << "\" text-anchor=\"middle\">lambda = J/U</text>\n";
  svg << "</g>\n";

  for (std::size_t c = 0; c < columns.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) {
      if (const auto v = column_value(r, columns[c]); v && std::isfinite(*v)) pts.emplace_back(sx(r.lambda), sy(*v));
    }
    if (pts.size() == 1) {
      svg << "<circle cx=\"" << fixed(pts[0].first) << "\" cy=\"" << fixed(pts[0].second) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    } else if (pts.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) svg << ' ';
        svg << fixed(pts[i].first) << ',' << fixed(pts[i].second);
      }
      svg << "\"/>\n";
    }
    const double ly = kTop + 10.0 + 18.0 * static_cast<double>(c);
    const double lx = kLeft + plot_w + 15.0;
    svg << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 20) << "\" y2=\""
        << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(lx + 26) << "\" y=\"" << fixed(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << columns[c] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(std::span<const SweepRecord> records, const std::string& path, std::span<const std::string> columns) {
  write_file(path, render_svg(records, columns));
}

}  // namespace mottlab
