#include "mottlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>

#include "mottlab/errors.hpp"
#include "mottlab/linalg.hpp"

namespace mottlab {

QuantumState::QuantumState(std::shared_ptr<const FockBasis> basis, std::vector<double> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw DomainError("QuantumState: null basis");
  if (amplitudes_.size() != basis_->dimension()) {
    throw DomainError("QuantumState: " + std::to_string(amplitudes_.size()) + " amplitudes for D = " +
                      std::to_string(basis_->dimension()));
  }
  if (std::abs(norm(amplitudes_) - 1.0) > 1e-12) throw DomainError("QuantumState: not unit norm");
}

QuantumState QuantumState::normalized(std::shared_ptr<const FockBasis> basis, std::vector<double> amplitudes) {
  const double n = norm(amplitudes);
  if (!(n > 0.0)) throw DomainError("QuantumState: zero vector");
  for (double& a : amplitudes) a /= n;
  return QuantumState(std::move(basis), std::move(amplitudes));
}

SparseState to_sparse(const QuantumState& psi) {
  const auto& basis = *psi.basis();
  SparseState out{basis.n_particles(), basis.n_sites(), {}, {}};
  for (std::size_t k = 0; k < psi.dimension(); ++k) {
    if (psi[k] == 0.0) continue;
    out.configurations.emplace_back(basis.state(k));
    out.amplitudes.push_back(psi[k]);
  }
  return out;
}

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::dense: return "dense";
    case SolverMethod::lanczos: return "lanczos";
    case SolverMethod::perturb1: return "perturb1";
    case SolverMethod::perturb2: return "perturb2";
  }
  return "unknown";
}

namespace {

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (std::abs(v[k]) > std::abs(v[best])) best = k;
  if (!v.empty() && v[best] < 0.0)
    for (double& x : v) x = -x;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

double residual_norm(const SparseHermitianOperator& h, const QuantumState& psi, double energy) {
  if (!(*h.basis() == *psi.basis())) throw DomainError("residual_norm: basis mismatch");
  auto r = h.apply(psi.amplitudes());
  axpy(-energy, psi.amplitudes(), r);
  return norm(r);
}

double energy_expectation(const SparseHermitianOperator& h, const QuantumState& psi) {
  if (!(*h.basis() == *psi.basis())) throw DomainError("energy_expectation: basis mismatch");
  return dot(psi.amplitudes(), h.apply(psi.amplitudes()));
}

GroundStateResult solve_dense(const SparseHermitianOperator& h, std::size_t dense_cap) {
  const std::size_t dim = h.dimension();
  if (dim > dense_cap) {
    throw CapacityError("solve_dense: D = " + std::to_string(dim) + " exceeds dense cap " +
                        std::to_string(dense_cap) + "; use the Lanczos solver");
  }
  const auto eig = symmetric_eigen(h.densify(), true);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = eig.vectors(i, 0);
  fix_sign(v);
  auto state = QuantumState::normalized(h.basis(), std::move(v));
  const double energy = eig.values[0];
  const double residual = residual_norm(h, state, energy);
  return {std::move(state), energy, SolverMethod::dense, residual, 1};
}

GroundStateResult solve_lanczos(const SparseHermitianOperator& h, int max_iter, double tol) {
  const std::size_t dim = h.dimension();
  if (dim < 2) throw DomainError("solve_lanczos: need D >= 2");
  if (max_iter < 1) throw DomainError("solve_lanczos: max_iter must be positive");

  std::vector<double> start(dim, 0.0);
  if (const auto mi = h.basis()->unit_filling_index()) {
    start[*mi] = 1.0;
  } else {
    std::mt19937_64 rng(0x5eed'1a2c'2050ULL);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (double& x : start) x = uniform(rng);
    const double n = norm(start);
    for (double& x : start) x /= n;
  }

  std::vector<std::vector<double>> krylov;
  krylov.push_back(std::move(start));
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> w(dim);

  auto ritz = [&](int iterations) {
    const auto eig = tridiagonal_eigen(alpha, std::span(beta).first(alpha.size() - 1), true);
    std::vector<double> x(dim, 0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) axpy(eig.vectors(i, 0), krylov[i], x);
    fix_sign(x);
    auto state = QuantumState::normalized(h.basis(), std::move(x));
    const double energy = energy_expectation(h, state);
    const double residual = residual_norm(h, state, energy);
    return GroundStateResult{std::move(state), energy, SolverMethod::lanczos, residual, iterations};
  };

  std::optional<GroundStateResult> best;
  for (int j = 0; j < max_iter; ++j) {
    const auto& v = krylov.back();
    h.apply(v, w);
    const double a = dot(v, w);
    alpha.push_back(a);
    axpy(-a, v, w);
    if (j > 0) axpy(-beta.back(), krylov[krylov.size() - 2], w);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : krylov) axpy(-dot(q, w), q, w);
    const double b = norm(w);
    beta.push_back(b);

    const bool breakdown = b <= 1e-13 * std::max(1.0, std::abs(a));
    const bool last = j + 1 == max_iter;
    const bool check = breakdown || last || j < 50 || j % 5 == 0;
    if (check) {
      const auto eig = tridiagonal_eigen(alpha, std::span(beta).first(alpha.size() - 1), true);
      const double theta = eig.values[0];
      const double estimate = std::abs(b * eig.vectors(alpha.size() - 1, 0));
      if (breakdown || last || estimate <= tol * std::max(1.0, std::abs(theta))) {
        auto result = ritz(j + 1);
        if (result.residual <= tol * std::max(1.0, std::abs(result.energy))) return result;
        best = std::move(result);
        if (breakdown) break;
      }
    }
    if (!last) {
      std::vector<double> next(w);
      for (double& x : next) x /= b;
      krylov.push_back(std::move(next));
    }
  }
  if (!best) best = ritz(static_cast<int>(alpha.size()));
  throw ConvergenceError("solve_lanczos: no convergence after " + std::to_string(alpha.size()) +
                             " iterations (residual " + std::to_string(best->residual) + ")",
                         std::move(*best));
}

namespace {

double interaction_energy(const OccupationVector& v) {
  long long sum = 0;
  for (int n : v) sum += static_cast<long long>(n) * (n - 1);
  return static_cast<double>(sum);
}

using Amplitudes = std::map<OccupationVector, double>;

// Adds lambda-weighted first-order-style amplitudes: for each hop out of
// `from`, target k receives weight * (-V_k,from) / E_k with V = -lambda hop.
void add_hops(const OccupationVector& from, double weight, const Geometry& geometry, double lambda,
              const OccupationVector& skip, Amplitudes& into) {
  for_each_hop(from.view(), geometry, [&](int to, int src, double amplitude) {
    OccupationVector target = from;
    ++target[static_cast<std::size_t>(to)];
    --target[static_cast<std::size_t>(src)];
    if (target == skip) return;
    into[target] += weight * lambda * amplitude / interaction_energy(target);
  });
}

}  // namespace

PerturbativeExpansion perturbative_expansion(int n_particles, const Geometry& geometry, double lambda,
                                             int order, std::uint64_t capacity) {
  const int n_sites = geometry.n_sites();
  if (n_particles != n_sites) {
    throw DomainError("perturbative_expansion: needs unit filling N == M (got N=" +
                      std::to_string(n_particles) + ", M=" + std::to_string(n_sites) + ")");
  }
  if (order != 1 && order != 2) throw DomainError("perturbative_expansion: order must be 1 or 2");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("perturbative_expansion: lambda must be finite and non-negative");
  }
  const double hops = 2.0 * static_cast<double>(geometry.edges().size());
  const double reachable = 1.0 + hops + (order == 2 ? hops * hops : 0.0);
  if (reachable * n_sites > static_cast<double>(capacity)) {
    throw CapacityError("perturbative_expansion: reachable set too large for M = " + std::to_string(n_sites) +
                        " at order " + std::to_string(order));
  }

  const OccupationVector mott(std::vector<int>(static_cast<std::size_t>(n_sites), 1));
  // first[k] = -V_k,MI / E_k
  Amplitudes first;
  add_hops(mott, 1.0, geometry, lambda, mott, first);

  // E2 = sum_k V_MI,k first[k]
  double energy = 0.0;
  if (order == 2) {
    for (const auto& [config, c1] : first) {
      energy += -interaction_energy(config) * c1 * c1;
    }
  }

  Amplitudes total = first;
  if (order == 2) {
    // sum_m V_km V_m,MI / (E_k E_m) = sum_m (-V_km / E_k) first[m]
    Amplitudes second;
    for (const auto& [config, c1] : first) add_hops(config, c1, geometry, lambda, mott, second);
    for (const auto& [config, c2] : second) total[config] += c2;
  }
  total[mott] += 1.0;

  double norm2 = 0.0;
  for (const auto& [config, a] : total) norm2 += a * a;
  const double scale = 1.0 / std::sqrt(norm2);

  SparseState state{n_particles, n_sites, {}, {}};
  state.configurations.reserve(total.size());
  state.amplitudes.reserve(total.size());
  for (auto it = total.rbegin(); it != total.rend(); ++it) {
    if (it->second == 0.0) continue;
    state.configurations.push_back(it->first);
    state.amplitudes.push_back(it->second * scale);
  }
  return {std::move(state), energy, order};
}

GroundStateResult perturbative_state(std::shared_ptr<const FockBasis> basis, const HamiltonianParams& params,
                                     int order) {
  if (params.geometry.n_sites() != basis->n_sites()) {
    throw DomainError("perturbative_state: geometry and basis disagree on M");
  }
  auto expansion = perturbative_expansion(basis->n_particles(), params.geometry, params.lambda, order);
  std::vector<double> amplitudes(basis->dimension(), 0.0);
  for (std::size_t i = 0; i < expansion.state.configurations.size(); ++i) {
    amplitudes[basis->rank(expansion.state.configurations[i])] = expansion.state.amplitudes[i];
  }
  auto state = QuantumState::normalized(basis, std::move(amplitudes));
  const auto h = assemble_hamiltonian(basis, params);
  const double residual = residual_norm(h, state, expansion.energy);
  return {std::move(state), expansion.energy, order == 1 ? SolverMethod::perturb1 : SolverMethod::perturb2,
          residual, order};
}

void dump_state(std::ostream& out, const GroundStateResult& result) {
  const auto& basis = *result.state.basis();
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", result.energy);
  out << basis.n_particles() << ' ' << basis.n_sites() << ' ' << basis.dimension() << ' ' << buffer << ' '
      << to_string(result.method) << '\n';
  for (double a : result.state.amplitudes()) {
    std::snprintf(buffer, sizeof buffer, "%.17g", a);
    out << buffer << '\n';
  }
}

}  // namespace mottlab
