#include "mottlab/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "mottlab/errors.hpp"

namespace mottlab {

namespace {

void check_sites(std::span<const int> sites, int n_sites) {
  if (sites.size() != 1 && sites.size() != 2) {
    throw DomainError("partial_trace: only one- and two-site reductions are supported");
  }
  for (int s : sites)
    if (s < 0 || s >= n_sites) throw DomainError("partial_trace: site " + std::to_string(s) + " out of range");
  if (sites.size() == 2 && sites[0] == sites[1]) throw DomainError("partial_trace: sites must be distinct");
}

// Exact symmetrization; contributions to (x, y) and (y, x) may have been
// summed in different orders.
void symmetrize(DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = s;
      m(j, i) = s;
    }
}

void require_one_site(const ReducedDensityMatrix& rho, const char* what) {
  if (rho.sites.size() != 1) throw DomainError(std::string(what) + ": needs a one-site reduced state");
}

void require_two_site(const ReducedDensityMatrix& rho, const char* what) {
  if (rho.sites.size() != 2) throw DomainError(std::string(what) + ": needs a two-site reduced state");
}

}  // namespace

ReducedDensityMatrix partial_trace(const QuantumState& psi, std::span<const int> sites) {
  const auto& basis = *psi.basis();
  check_sites(sites, basis.n_sites());
  const int d = basis.n_particles() + 1;
  ReducedDensityMatrix rho{{sites.begin(), sites.end()}, d, d, {}};
  const auto ud = static_cast<std::size_t>(d);

  if (sites.size() == 1) {
    rho.matrix = DenseMatrix(ud, ud);
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
      const auto n = static_cast<std::size_t>(basis.occupation(k, sites[0]));
      rho.matrix(n, n) += psi[k] * psi[k];
    }
    return rho;
  }

  // Partners of state k share its complement and its pair total; reach
  // them by re-ranking with the pair occupations redistributed.
  const auto i = static_cast<std::size_t>(sites[0]);
  const auto j = static_cast<std::size_t>(sites[1]);
  rho.matrix = DenseMatrix(ud * ud, ud * ud);
  std::vector<int> partner(static_cast<std::size_t>(basis.n_sites()));
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    if (psi[k] == 0.0) continue;
    const auto config = basis.state(k);
    std::copy(config.begin(), config.end(), partner.begin());
    const int a = config[i];
    const int b = config[j];
    const std::size_t row = static_cast<std::size_t>(a) * ud + static_cast<std::size_t>(b);
    for (int a2 = 0; a2 <= a + b; ++a2) {
      partner[i] = a2;
      partner[j] = a + b - a2;
      const double amp = psi[basis.rank(partner)];
      if (amp == 0.0) continue;
      rho.matrix(row, static_cast<std::size_t>(a2) * ud + static_cast<std::size_t>(a + b - a2)) += psi[k] * amp;
    }
  }
  symmetrize(rho.matrix);
  return rho;
}

ReducedDensityMatrix partial_trace(const SparseState& psi, std::span<const int> sites) {
  check_sites(sites, psi.n_sites);
  int max_occupation = 0;
  for (const auto& config : psi.configurations)
    for (int s : sites) max_occupation = std::max(max_occupation, config[static_cast<std::size_t>(s)]);
  const int c = max_occupation + 1;
  const auto uc = static_cast<std::size_t>(c);
  ReducedDensityMatrix rho{{sites.begin(), sites.end()}, psi.n_particles + 1, c, {}};

  if (sites.size() == 1) {
    rho.matrix = DenseMatrix(uc, uc);
    for (std::size_t k = 0; k < psi.configurations.size(); ++k) {
      const auto n = static_cast<std::size_t>(psi.configurations[k][static_cast<std::size_t>(sites[0])]);
      rho.matrix(n, n) += psi.amplitudes[k] * psi.amplitudes[k];
    }
    return rho;
  }

  const auto i = static_cast<std::size_t>(sites[0]);
  const auto j = static_cast<std::size_t>(sites[1]);
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, double>>> by_complement;
  for (std::size_t k = 0; k < psi.configurations.size(); ++k) {
    const auto& config = psi.configurations[k];
    std::vector<int> complement;
    complement.reserve(config.size() - 2);
    for (std::size_t s = 0; s < config.size(); ++s)
      if (s != i && s != j) complement.push_back(config[s]);
    const std::size_t pattern = static_cast<std::size_t>(config[i]) * uc + static_cast<std::size_t>(config[j]);
    by_complement[std::move(complement)].emplace_back(pattern, psi.amplitudes[k]);
  }
  rho.matrix = DenseMatrix(uc * uc, uc * uc);
  for (const auto& [complement, members] : by_complement)
    for (const auto& [p, x] : members)
      for (const auto& [q, y] : members) rho.matrix(p, q) += x * y;
  symmetrize(rho.matrix);
  return rho;
}

double linear_entropy(const ReducedDensityMatrix& rho) {
  require_one_site(rho, "linear_entropy");
  const double d = rho.local_dim;
  double purity = 0.0;
  for (std::size_t n = 0; n < rho.matrix.rows(); ++n) purity += rho.matrix(n, n) * rho.matrix(n, n);
  return d / (d - 1.0) * (1.0 - purity);
}

DenseMatrix partial_transpose(const ReducedDensityMatrix& rho) {
  require_two_site(rho, "partial_transpose");
  const auto c = static_cast<std::size_t>(rho.pattern_dim);
  DenseMatrix out(c * c, c * c);
  for (std::size_t m = 0; m < c; ++m)
    for (std::size_t n = 0; n < c; ++n)
      for (std::size_t m2 = 0; m2 < c; ++m2)
        for (std::size_t n2 = 0; n2 < c; ++n2) out(m * c + n, m2 * c + n2) = rho.matrix(m2 * c + n, m * c + n2);
  return out;
}

double negativity(const ReducedDensityMatrix& rho) {
  const auto transposed = partial_transpose(rho);
  // rho couples equal a + b, so rho^{T_A} only couples equal a - b:
  // diagonalize each block separately.
  const int c = rho.pattern_dim;
  double negative = 0.0;
  for (int diff = -(c - 1); diff <= c - 1; ++diff) {
    std::vector<std::size_t> members;
    for (int a = 0; a < c; ++a) {
      const int b = a - diff;
      if (b >= 0 && b < c) members.push_back(static_cast<std::size_t>(a * c + b));
    }
    DenseMatrix block(members.size(), members.size());
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t s = 0; s < members.size(); ++s) block(r, s) = transposed(members[r], members[s]);
    for (double ev : symmetric_eigen(block, false).values)
      if (ev < -1e-12) negative += ev;
  }
  return std::abs(negative);
}

double delta_n2(const ReducedDensityMatrix& rho) {
  require_one_site(rho, "delta_n2");
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t n = 0; n < rho.matrix.rows(); ++n) {
    const double p = rho.matrix(n, n);
    mean += static_cast<double>(n) * p;
    second += static_cast<double>(n * n) * p;
  }
  return std::max(0.0, second - mean * mean);
}

QuantumState build_sf_state(std::shared_ptr<const FockBasis> basis) {
  const int n_particles = basis->n_particles();
  const double log_prefactor =
      std::lgamma(n_particles + 1.0) - n_particles * std::log(static_cast<double>(basis->n_sites()));
  std::vector<double> amplitudes(basis->dimension());
  for (std::size_t k = 0; k < basis->dimension(); ++k) {
    double log_weight = log_prefactor;
    for (int n : basis->state(k)) log_weight -= std::lgamma(n + 1.0);
    amplitudes[k] = std::exp(0.5 * log_weight);
  }
  return QuantumState(std::move(basis), std::move(amplitudes));
}

QuantumState build_mi_state(std::shared_ptr<const FockBasis> basis) {
  const auto mi = basis->unit_filling_index();
  if (!mi) throw DomainError("build_mi_state: needs unit filling N == M");
  std::vector<double> amplitudes(basis->dimension(), 0.0);
  amplitudes[*mi] = 1.0;
  return QuantumState(std::move(basis), std::move(amplitudes));
}

PairSelection representative_pairs(const Geometry& geometry, std::span<const std::string> labels) {
  PairSelection selection;
  for (const auto& label : labels) {
    int wanted = 0;
    if (label == "nn") {
      wanted = 1;
    } else if (label == "nnn") {
      wanted = 2;
    } else {
      throw DomainError("unknown pair label '" + label + "' (expected nn or nnn)");
    }
    for (int site = 1; site < geometry.n_sites(); ++site) {
      if (geometry.distance(0, site) == wanted) {
        selection.pairs.push_back({label, {0, site}});
        break;
      }
    }
  }
  return selection;
}

namespace {

template <typename State>
EntanglementReport analyze_impl(const State& psi, const PairSelection& pairs) {
  EntanglementReport report;
  const int site0[] = {0};
  const auto one = partial_trace(psi, site0);
  report.linear_entropy = linear_entropy(one);
  report.delta_n2 = delta_n2(one);
  for (const auto& [label, pair] : pairs.pairs) {
    const int two[] = {pair.first, pair.second};
    report.negativities[label] = negativity(partial_trace(psi, two));
  }
  return report;
}

}  // namespace

EntanglementReport analyze(const QuantumState& psi, const PairSelection& pairs) { return analyze_impl(psi, pairs); }

EntanglementReport analyze(const SparseState& psi, const PairSelection& pairs) { return analyze_impl(psi, pairs); }

}  // namespace mottlab
