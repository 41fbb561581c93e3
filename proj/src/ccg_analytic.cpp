#include "mottlab/ccg_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mottlab/errors.hpp"

namespace mottlab {

namespace {

std::string describe(const Partition& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.parts[i]);
  }
  return s + ")";
}

}  // namespace

SymmetricStateCoefficients project_to_symmetric(const QuantumState& psi) {
  const auto& basis = *psi.basis();
  if (basis.n_particles() < 1) throw DomainError("project_to_symmetric: needs N >= 1");
  SymmetricStateCoefficients out{basis.n_particles(), basis.n_sites(),
                                 partitions(basis.n_particles(), basis.n_sites()), {}};
  std::map<Partition, std::size_t> index;
  for (std::size_t i = 0; i < out.partitions.size(); ++i) index.emplace(out.partitions[i], i);

  constexpr double kSpread = 1e-10;
  const std::size_t count = out.partitions.size();
  std::vector<double> first(count, 0.0), low(count, 0.0), high(count, 0.0);
  std::vector<bool> seen(count, false);
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const std::size_t i = index.at(partition_of(basis.state(k)));
    const double a = psi[k];
    if (!seen[i]) {
      seen[i] = true;
      first[i] = low[i] = high[i] = a;
    } else {
      low[i] = std::min(low[i], a);
      high[i] = std::max(high[i], a);
    }
    if (high[i] - low[i] > kSpread) {
      throw AsymmetryError("project_to_symmetric: amplitudes differ within the orbit of " +
                               describe(out.partitions[i]),
                           out.partitions[i]);
    }
  }
  out.alphas = std::move(first);
  return out;
}

QuantumState reconstruct_state(const SymmetricStateCoefficients& coeffs, std::shared_ptr<const FockBasis> basis) {
  if (basis->n_particles() != coeffs.n_particles || basis->n_sites() != coeffs.n_sites) {
    throw DomainError("reconstruct_state: basis does not match coefficients");
  }
  std::map<Partition, double> alpha;
  for (std::size_t i = 0; i < coeffs.partitions.size(); ++i) alpha.emplace(coeffs.partitions[i], coeffs.alphas[i]);
  std::vector<double> amplitudes(basis->dimension());
  for (std::size_t k = 0; k < basis->dimension(); ++k) amplitudes[k] = alpha.at(partition_of(basis->state(k)));
  return QuantumState(std::move(basis), std::move(amplitudes));
}

std::uint64_t first_site_count(const Partition& p, int n_sites, int occupation) {
  const auto parts = static_cast<int>(p.parts.size());
  if (parts > n_sites) throw DomainError("first_site_count: partition has more parts than sites");
  Partition rest = p;
  if (occupation == 0) {
    if (parts == n_sites) return 0;
  } else {
    const auto it = std::find(rest.parts.begin(), rest.parts.end(), occupation);
    if (it == rest.parts.end()) return 0;
    rest.parts.erase(it);
  }
  return orbit_size(rest, n_sites - 1);
}

namespace {

void check_coefficients(const SymmetricStateCoefficients& coeffs) {
  if (coeffs.partitions.size() != coeffs.alphas.size()) {
    throw DomainError("symmetric coefficients: one alpha per partition required");
  }
}

// counts[i][j] = first_site_count(partitions[i], M, j)
std::vector<std::vector<double>> first_site_table(const SymmetricStateCoefficients& coeffs) {
  std::vector<std::vector<double>> table;
  table.reserve(coeffs.partitions.size());
  for (const auto& p : coeffs.partitions) {
    std::vector<double> row(static_cast<std::size_t>(coeffs.n_particles) + 1, 0.0);
    for (int j = 0; j <= coeffs.n_particles; ++j)
      row[static_cast<std::size_t>(j)] = static_cast<double>(first_site_count(p, coeffs.n_sites, j));
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<double> occupation_probabilities(const SymmetricStateCoefficients& coeffs,
                                             const std::vector<std::vector<double>>& table) {
  std::vector<double> p(static_cast<std::size_t>(coeffs.n_particles) + 1, 0.0);
  for (std::size_t i = 0; i < coeffs.partitions.size(); ++i) {
    const double weight = coeffs.alphas[i] * coeffs.alphas[i];
    for (std::size_t j = 0; j < p.size(); ++j) p[j] += weight * table[i][j];
  }
  return p;
}

}  // namespace

ReducedDensityMatrix reduced_one_site_from_partitions(const SymmetricStateCoefficients& coeffs) {
  check_coefficients(coeffs);
  const auto p = occupation_probabilities(coeffs, first_site_table(coeffs));
  const int d = coeffs.n_particles + 1;
  ReducedDensityMatrix rho{{0}, d, d, DenseMatrix(p.size(), p.size())};
  for (std::size_t j = 0; j < p.size(); ++j) rho.matrix(j, j) = p[j];
  return rho;
}

double entropy_derivative_terms(const SymmetricStateCoefficients& coeffs,
                                const SymmetricStateCoefficients& dcoeffs) {
  check_coefficients(coeffs);
  check_coefficients(dcoeffs);
  if (coeffs.partitions != dcoeffs.partitions) {
    throw DomainError("entropy_derivative_terms: coefficient and derivative partitions differ");
  }
  const auto table = first_site_table(coeffs);
  const auto p = occupation_probabilities(coeffs, table);
  std::vector<double> dp(p.size(), 0.0);
  for (std::size_t i = 0; i < coeffs.partitions.size(); ++i) {
    const double dweight = 2.0 * coeffs.alphas[i] * dcoeffs.alphas[i];
    for (std::size_t j = 0; j < p.size(); ++j) dp[j] += dweight * table[i][j];
  }
  const double d = coeffs.n_particles + 1;
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) sum += p[j] * dp[j];
  return -2.0 * d / (d - 1.0) * sum;
}

bool alpha_hierarchy_holds(const SymmetricStateCoefficients& coeffs) {
  check_coefficients(coeffs);
  std::vector<std::size_t> order(coeffs.partitions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto energy = [&](std::size_t i) {
    long long e = 0;
    for (int part : coeffs.partitions[i].parts) e += static_cast<long long>(part) * (part - 1);
    return e;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energy(a) < energy(b); });
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double a = coeffs.alphas[order[k]];
    const double b = coeffs.alphas[order[k + 1]];
    if (a * a + 1e-14 < b * b) return false;
  }
  return true;
}

}  // namespace mottlab
