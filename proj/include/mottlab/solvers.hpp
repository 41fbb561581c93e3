#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mottlab/fock_basis.hpp"
#include "mottlab/operators.hpp"

namespace mottlab {

/// Real, unit-norm amplitudes over a Fock basis.
class QuantumState {
 public:
  /// Throws DomainError if the length differs from D or the norm is not 1
  /// within 1e-12.
  QuantumState(std::shared_ptr<const FockBasis> basis, std::vector<double> amplitudes);

  /// Rescales to unit norm; throws DomainError on a zero vector.
  static QuantumState normalized(std::shared_ptr<const FockBasis> basis, std::vector<double> amplitudes);

  const std::shared_ptr<const FockBasis>& basis() const { return basis_; }
  std::span<const double> amplitudes() const { return amplitudes_; }
  double operator[](std::size_t k) const { return amplitudes_[k]; }
  std::size_t dimension() const { return amplitudes_.size(); }

 private:
  std::shared_ptr<const FockBasis> basis_;
  std::vector<double> amplitudes_;
};

/// Unit-norm state stored only on the configurations it touches, in the
/// same descending lexicographic order as FockBasis. Used where the full
/// basis is out of reach (large-N perturbative sweeps).
struct SparseState {
  int n_particles = 0;
  int n_sites = 0;
  std::vector<OccupationVector> configurations;
  std::vector<double> amplitudes;
};

SparseState to_sparse(const QuantumState& psi);

enum class SolverMethod { dense, lanczos, perturb1, perturb2 };

std::string to_string(SolverMethod method);

struct GroundStateResult {
  QuantumState state;
  double energy;  // units of U
  SolverMethod method;
  double residual;  // ||H psi - E psi||
  int iterations = 0;
};

/// Lanczos ran out of iterations; carries the best Ritz pair found.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, GroundStateResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const GroundStateResult& best() const { return best_; }

 private:
  GroundStateResult best_;
};

inline constexpr std::size_t kDefaultDenseCap = 4000;
inline constexpr int kDefaultLanczosMaxIter = 500;
inline constexpr double kDefaultLanczosTol = 1e-10;

/// Lowest eigenpair of the densified operator. The eigenvector sign is
/// chosen so that its largest-magnitude amplitude is positive.
GroundStateResult solve_dense(const SparseHermitianOperator& h, std::size_t dense_cap = kDefaultDenseCap);

/// Lanczos with full reorthogonalization. Starts from the unit-filling
/// Fock state when N == M, otherwise from a fixed-seed random vector.
/// Converged when ||H v - E v|| <= tol * max(1, |E|).
GroundStateResult solve_lanczos(const SparseHermitianOperator& h, int max_iter = kDefaultLanczosMaxIter,
                                double tol = kDefaultLanczosTol);

/// Strong-coupling (Rayleigh-Schrodinger) expansion about the unit-filling
/// Mott state with H0 = sum n(n-1) and V = -lambda * hopping.
struct PerturbativeExpansion {
  SparseState state;
  double energy;  // E0 + E1 (+ E2); E0 = E1 = 0
  int order;
};

inline constexpr std::uint64_t kDefaultPerturbativeCap = 50'000'000;

/// Generates only configurations within `order` hops of the Mott state.
/// Requires N == M and order in {1, 2}. Throws CapacityError when the
/// reachable set times M would exceed `capacity` stored occupations.
PerturbativeExpansion perturbative_expansion(int n_particles, const Geometry& geometry, double lambda,
                                             int order, std::uint64_t capacity = kDefaultPerturbativeCap);

/// The expansion embedded into a full basis, with its residual.
GroundStateResult perturbative_state(std::shared_ptr<const FockBasis> basis, const HamiltonianParams& params,
                                     int order);

/// <psi|H|psi>; throws DomainError on basis mismatch.
double energy_expectation(const SparseHermitianOperator& h, const QuantumState& psi);

/// ||H psi - energy psi||.
double residual_norm(const SparseHermitianOperator& h, const QuantumState& psi, double energy);

/// Header `N M D energy method`, then one amplitude per line in basis order.
void dump_state(std::ostream& out, const GroundStateResult& result);

}  // namespace mottlab
