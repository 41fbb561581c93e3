#pragma once

#include <stdexcept>
#include <vector>

#include "mottlab/entanglement.hpp"
#include "mottlab/fock_basis.hpp"
#include "mottlab/solvers.hpp"

namespace mottlab {

/// A permutation-symmetric state written as one amplitude per partition:
/// every occupation vector in the orbit of partitions[i] carries alphas[i].
/// Normalization: sum_i orbit_size(partitions[i], M) * alphas[i]^2 = 1.
struct SymmetricStateCoefficients {
  int n_particles = 0;
  int n_sites = 0;
  std::vector<Partition> partitions;  // as returned by partitions(N, M)
  std::vector<double> alphas;
};

/// Raised when amplitudes within one orbit differ by more than 1e-10.
class AsymmetryError : public std::runtime_error {
 public:
  AsymmetryError(const std::string& what, Partition offending)
      : std::runtime_error(what), offending_(std::move(offending)) {}
  const Partition& partition() const { return offending_; }

 private:
  Partition offending_;
};

SymmetricStateCoefficients project_to_symmetric(const QuantumState& psi);

/// Full state with every orbit member set to its partition's alpha.
QuantumState reconstruct_state(const SymmetricStateCoefficients& coeffs, std::shared_ptr<const FockBasis> basis);

/// Number of orbit members of `p` on `n_sites` sites whose first site
/// holds exactly `occupation` particles.
std::uint64_t first_site_count(const Partition& p, int n_sites, int occupation);

/// One-site reduced state p_j = sum_p alpha_p^2 * first_site_count(p, M, j).
/// Cost is O(f(N) * N); the full basis is never visited.
ReducedDensityMatrix reduced_one_site_from_partitions(const SymmetricStateCoefficients& coeffs);

/// dS/dlambda = -2 d/(d-1) sum_j p_j dp_j/dlambda with
/// dp_j = sum_p 2 alpha_p dalpha_p first_site_count(p, M, j).
/// `dcoeffs` holds d(alpha)/d(lambda) over the same partitions.
double entropy_derivative_terms(const SymmetricStateCoefficients& coeffs,
                                const SymmetricStateCoefficients& dcoeffs);

/// Whether alpha^2 is non-increasing when partitions are ordered by
/// interaction energy sum p(p-1) (ties kept in partition order).
bool alpha_hierarchy_holds(const SymmetricStateCoefficients& coeffs);

}  // namespace mottlab
