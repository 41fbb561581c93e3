#include "mottlab/operators.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>

#include "mottlab/errors.hpp"

namespace mottlab {

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::chain_periodic: return "chain_periodic";
    case GeometryKind::chain_open: return "chain_open";
    case GeometryKind::complete_graph: return "complete_graph";
    case GeometryKind::custom: return "custom";
  }
  return "unknown";
}

Geometry::Geometry(GeometryKind kind, int n_sites, std::vector<std::pair<int, int>> edges)
    : kind_(kind), n_sites_(n_sites), edges_(std::move(edges)) {
  if (n_sites < 1) throw DomainError("Geometry: need at least one site");
  for (auto& [i, j] : edges_) {
    if (i < 0 || j < 0 || i >= n_sites || j >= n_sites) {
      throw DomainError("Geometry: edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") outside " + std::to_string(n_sites) + " sites");
    }
    if (i == j) throw DomainError("Geometry: self-loop on site " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw DomainError("Geometry: duplicate edge");
  }
}

Geometry Geometry::chain_periodic(int n_sites) {
  std::vector<std::pair<int, int>> edges;
  if (n_sites == 2) {
    edges.emplace_back(0, 1);
  } else if (n_sites >= 3) {
    for (int i = 0; i < n_sites; ++i) edges.emplace_back(i, (i + 1) % n_sites);
  }
  return Geometry(GeometryKind::chain_periodic, n_sites, std::move(edges));
}

Geometry Geometry::chain_open(int n_sites) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n_sites; ++i) edges.emplace_back(i, i + 1);
  return Geometry(GeometryKind::chain_open, n_sites, std::move(edges));
}

Geometry Geometry::complete_graph(int n_sites) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n_sites; ++i)
    for (int j = i + 1; j < n_sites; ++j) edges.emplace_back(i, j);
  return Geometry(GeometryKind::complete_graph, n_sites, std::move(edges));
}

Geometry Geometry::custom(int n_sites, std::vector<std::pair<int, int>> edges) {
  return Geometry(GeometryKind::custom, n_sites, std::move(edges));
}

int Geometry::distance(int from, int to) const {
  if (from < 0 || to < 0 || from >= n_sites_ || to >= n_sites_) {
    throw DomainError("Geometry::distance: site out of range");
  }
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n_sites_));
  for (const auto& [i, j] : edges_) {
    adjacency[static_cast<std::size_t>(i)].push_back(j);
    adjacency[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<int> dist(static_cast<std::size_t>(n_sites_), -1);
  std::deque<int> queue{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!queue.empty()) {
    const int site = queue.front();
    queue.pop_front();
    for (int next : adjacency[static_cast<std::size_t>(site)]) {
      auto& d = dist[static_cast<std::size_t>(next)];
      if (d < 0) {
        d = dist[static_cast<std::size_t>(site)] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist[static_cast<std::size_t>(to)];
}

SparseHermitianOperator::SparseHermitianOperator(std::shared_ptr<const FockBasis> basis,
                                                 std::vector<Entry> entries)
    : basis_(std::move(basis)) {
  if (!basis_) throw DomainError("SparseHermitianOperator: null basis");
  const std::size_t dim = basis_->dimension();
  for (auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw DomainError("SparseHermitianOperator: index out of range");
    if (e.row > e.col) std::swap(e.row, e.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
}

void SparseHermitianOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t dim = dimension();
  if (x.size() != dim || y.size() != dim) {
    throw DomainError("apply: vector length " + std::to_string(x.size()) + " does not match D = " +
                      std::to_string(dim));
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& e : entries_) {
    y[e.row] += e.value * x[e.col];
    if (e.row != e.col) y[e.col] += e.value * x[e.row];
  }
}

std::vector<double> SparseHermitianOperator::apply(std::span<const double> x) const {
  std::vector<double> y(dimension());
  apply(x, y);
  return y;
}

double SparseHermitianOperator::element(std::size_t row, std::size_t col) const {
  if (row > col) std::swap(row, col);
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                                   [](const Entry& e, const std::pair<std::size_t, std::size_t>& key) {
                                     return e.row != key.first ? e.row < key.first : e.col < key.second;
                                   });
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

DenseMatrix SparseHermitianOperator::densify() const {
  DenseMatrix m(dimension(), dimension());
  for (const auto& e : entries_) {
    m(e.row, e.col) = e.value;
    m(e.col, e.row) = e.value;
  }
  return m;
}

void SparseHermitianOperator::dump(std::ostream& out) const {
  out << dimension() << ' ' << nnz() << '\n';
  char buffer[64];
  for (const auto& e : entries_) {
    std::snprintf(buffer, sizeof buffer, "%.17g", e.value);
    out << e.row << ' ' << e.col << ' ' << buffer << '\n';
  }
}

std::vector<double> interaction_diagonal(const FockBasis& basis) {
  std::vector<double> diag(basis.dimension());
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    long long sum = 0;
    for (int n : basis.state(k)) sum += static_cast<long long>(n) * (n - 1);
    diag[k] = static_cast<double>(sum);
  }
  return diag;
}

namespace {

// Upper-triangle hopping entries scaled by `scale`.
std::vector<SparseHermitianOperator::Entry> hopping_entries(const FockBasis& basis,
                                                            const Geometry& geometry, double scale) {
  if (geometry.n_sites() != basis.n_sites()) {
    throw DomainError("hopping: geometry has " + std::to_string(geometry.n_sites()) +
                      " sites, basis has " + std::to_string(basis.n_sites()));
  }
  std::vector<SparseHermitianOperator::Entry> entries;
  if (scale == 0.0) return entries;
  std::vector<int> target(static_cast<std::size_t>(basis.n_sites()));
  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    const auto source = basis.state(col);
    for_each_hop(source, geometry, [&](int to, int from, double amplitude) {
      std::copy(source.begin(), source.end(), target.begin());
      ++target[static_cast<std::size_t>(to)];
      --target[static_cast<std::size_t>(from)];
      const std::size_t row = basis.rank(target);
      if (row < col) entries.push_back({row, col, scale * amplitude});
    });
  }
  return entries;
}

}  // namespace

SparseHermitianOperator hopping_operator(std::shared_ptr<const FockBasis> basis, const Geometry& geometry) {
  auto entries = hopping_entries(*basis, geometry, 1.0);
  return SparseHermitianOperator(std::move(basis), std::move(entries));
}

SparseHermitianOperator assemble_hamiltonian(std::shared_ptr<const FockBasis> basis,
                                             const HamiltonianParams& params) {
  if (!std::isfinite(params.lambda) || params.lambda < 0.0) {
    throw DomainError("assemble_hamiltonian: lambda must be finite and non-negative");
  }
  auto entries = hopping_entries(*basis, params.geometry, -params.lambda);
  const auto diag = interaction_diagonal(*basis);
  for (std::size_t k = 0; k < diag.size(); ++k) {
    if (diag[k] != 0.0) entries.push_back({k, k, diag[k]});
  }
  return SparseHermitianOperator(std::move(basis), std::move(entries));
}

}  // namespace mottlab
