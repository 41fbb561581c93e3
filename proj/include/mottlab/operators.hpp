#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mottlab/fock_basis.hpp"
#include "mottlab/linalg.hpp"

namespace mottlab {

enum class GeometryKind { chain_periodic, chain_open, complete_graph, custom };

std::string to_string(GeometryKind kind);

/// Hopping graph on M sites. Edges are unordered pairs stored as (i, j)
/// with i < j, sorted, no duplicates.
class Geometry {
 public:
  /// Ring for M >= 3, a single bond for M == 2, nothing for M == 1.
  static Geometry chain_periodic(int n_sites);
  static Geometry chain_open(int n_sites);
  static Geometry complete_graph(int n_sites);
  /// Throws DomainError on self-loops, duplicates or out-of-range sites.
  static Geometry custom(int n_sites, std::vector<std::pair<int, int>> edges);

  GeometryKind kind() const { return kind_; }
  int n_sites() const { return n_sites_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Shortest-path length in the hopping graph, -1 if disconnected.
  int distance(int from, int to) const;

 private:
  Geometry(GeometryKind kind, int n_sites, std::vector<std::pair<int, int>> edges);

  GeometryKind kind_;
  int n_sites_;
  std::vector<std::pair<int, int>> edges_;
};

/// Calls visit(target_site, source_site, amplitude) for every nonzero
/// a†_target a_source with (target, source) an edge in either direction.
/// amplitude = sqrt((n_target + 1) n_source).
template <typename Visitor>
void for_each_hop(std::span<const int> occupations, const Geometry& geometry, Visitor&& visit);

/// Real symmetric operator on a Fock basis. Only the upper triangle
/// (row <= col) is stored, in coordinate form sorted by (row, col), each
/// pair at most once.
class SparseHermitianOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  /// Entries may come in any order and in either triangle; duplicates are
  /// summed and exact zeros dropped.
  SparseHermitianOperator(std::shared_ptr<const FockBasis> basis, std::vector<Entry> entries);

  const std::shared_ptr<const FockBasis>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_->dimension(); }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// y = H x. Throws DomainError when x.size() != D.
  std::vector<double> apply(std::span<const double> x) const;
  void apply(std::span<const double> x, std::span<double> y) const;

  /// Element <row|H|col>, zero when not stored.
  double element(std::size_t row, std::size_t col) const;

  DenseMatrix densify() const;

  /// Header `D nnz`, then `row col value` per stored entry.
  void dump(std::ostream& out) const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  std::vector<Entry> entries_;
};

/// Dimensionless couplings; energies are in units of U.
struct HamiltonianParams {
  double lambda = 0.0;  // J / U
  Geometry geometry;
};

/// sum_i n_i (n_i - 1) for every basis state (no factor 1/2).
std::vector<double> interaction_diagonal(const FockBasis& basis);

/// sum over edges of (a†_i a_j + a†_j a_i), positive sign.
SparseHermitianOperator hopping_operator(std::shared_ptr<const FockBasis> basis, const Geometry& geometry);

/// H / U = sum_i n_i (n_i - 1) - lambda * hopping.
SparseHermitianOperator assemble_hamiltonian(std::shared_ptr<const FockBasis> basis,
                                             const HamiltonianParams& params);

// ---------------------------------------------------------------------------

template <typename Visitor>
void for_each_hop(std::span<const int> occupations, const Geometry& geometry, Visitor&& visit) {
  for (const auto& [a, b] : geometry.edges()) {
    const int na = occupations[static_cast<std::size_t>(a)];
    const int nb = occupations[static_cast<std::size_t>(b)];
    if (nb > 0) visit(a, b, std::sqrt(static_cast<double>((na + 1) * nb)));
    if (na > 0) visit(b, a, std::sqrt(static_cast<double>((nb + 1) * na)));
  }
}

}  // namespace mottlab
