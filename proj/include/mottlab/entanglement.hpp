#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mottlab/fock_basis.hpp"
#include "mottlab/linalg.hpp"
#include "mottlab/operators.hpp"
#include "mottlab/solvers.hpp"

namespace mottlab {

/// Reduced state of one or two sites. Each site has local Hilbert-space
/// dimension d = N + 1 (occupations 0..N). The matrix covers occupations
/// 0..pattern_dim-1 per site, where pattern_dim = d for full-basis states
/// and may be smaller for sparse states with bounded occupations (entries
/// outside are zero). For two sites the pattern (a, b) sits at index
/// a * pattern_dim + b with `a` the occupation of sites[0].
struct ReducedDensityMatrix {
  std::vector<int> sites;
  int local_dim = 0;
  int pattern_dim = 0;
  DenseMatrix matrix;

  double trace() const { return matrix.trace(); }
};

/// rho_A[p, p'] = sum_B psi(p, B) psi(p', B) for |sites| in {1, 2}.
/// One-site results are diagonal by construction; two-site results only
/// couple patterns with equal n_i + n_j.
ReducedDensityMatrix partial_trace(const QuantumState& psi, std::span<const int> sites);
ReducedDensityMatrix partial_trace(const SparseState& psi, std::span<const int> sites);

/// (d / (d - 1)) (1 - Tr rho^2) of a one-site reduced state.
double linear_entropy(const ReducedDensityMatrix& rho);

/// Transpose on the first site: out[(m,n),(m',n')] = rho[(m',n),(m,n')].
DenseMatrix partial_transpose(const ReducedDensityMatrix& rho);

/// Absolute sum of the eigenvalues of rho^{T_A} below -1e-12.
double negativity(const ReducedDensityMatrix& rho);

/// <n^2> - <n>^2 of a one-site reduced state.
double delta_n2(const ReducedDensityMatrix& rho);

/// (sum_i b†_i / sqrt(M))^N |0> / sqrt(N!).
QuantumState build_sf_state(std::shared_ptr<const FockBasis> basis);

/// |1, 1, ..., 1>; requires N == M.
QuantumState build_mi_state(std::shared_ptr<const FockBasis> basis);

struct EntanglementReport {
  double linear_entropy = 0.0;
  std::map<std::string, double> negativities;  // "nn", "nnn"
  double delta_n2 = 0.0;
};

/// Site 0 paired with the lowest-index site at graph distance 1 ("nn")
/// and 2 ("nnn"); a label is absent when no such site exists. On the
/// complete graph every pair is "nn".
struct PairSelection {
  std::vector<std::pair<std::string, std::pair<int, int>>> pairs;
};

PairSelection representative_pairs(const Geometry& geometry, std::span<const std::string> labels);

/// Linear entropy and number variance of site 0 plus the negativity of
/// each selected pair.
EntanglementReport analyze(const QuantumState& psi, const PairSelection& pairs);
EntanglementReport analyze(const SparseState& psi, const PairSelection& pairs);

}  // namespace mottlab
