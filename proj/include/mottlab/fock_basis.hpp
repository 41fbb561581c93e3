#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mottlab {

/// Particles per site, (n_1, ..., n_M).
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> occupations) : n_(std::move(occupations)) {}
  OccupationVector(std::initializer_list<int> occupations) : n_(occupations) {}
  explicit OccupationVector(std::span<const int> occupations)
      : n_(occupations.begin(), occupations.end()) {}

  std::size_t size() const { return n_.size(); }
  int operator[](std::size_t site) const { return n_[site]; }
  int& operator[](std::size_t site) { return n_[site]; }
  int total() const;

  std::span<const int> view() const { return n_; }
  auto begin() const { return n_.begin(); }
  auto end() const { return n_.end(); }

  friend auto operator<=>(const OccupationVector&, const OccupationVector&) = default;
  friend bool operator==(const OccupationVector&, const OccupationVector&) = default;

 private:
  std::vector<int> n_;
};

/// binomial(N + M - 1, N), or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> basis_dimension(int n_particles, int n_sites);

/// All occupation vectors with fixed total N on M sites, in descending
/// lexicographic order: (N,0,...,0) has rank 0 and (0,...,0,N) rank D-1.
///
/// Ranking uses the combinatorial number system over a table of
/// composition counts, so rank() is O(M) and no hash map is kept.
/// Immutable after construction.
class FockBasis {
 public:
  static constexpr std::uint64_t kDefaultCapacity = 5'000'000;

  FockBasis(int n_particles, int n_sites, std::uint64_t capacity = kDefaultCapacity);

  int n_particles() const { return n_particles_; }
  int n_sites() const { return n_sites_; }
  std::size_t dimension() const { return dimension_; }

  /// Occupations of basis state k, a view into the stored table.
  std::span<const int> state(std::size_t k) const {
    return {states_.data() + k * static_cast<std::size_t>(n_sites_),
            static_cast<std::size_t>(n_sites_)};
  }
  int occupation(std::size_t k, int site) const {
    return states_[k * static_cast<std::size_t>(n_sites_) + static_cast<std::size_t>(site)];
  }

  /// Index of a member configuration. Throws DomainError on wrong length,
  /// negative entries or wrong particle sum.
  std::size_t rank(std::span<const int> occupations) const;
  std::size_t rank(const OccupationVector& v) const { return rank(v.view()); }

  /// Configuration at index k, computed from the composition table.
  OccupationVector unrank(std::size_t k) const;

  /// Rank of (1,...,1) when N == M.
  std::optional<std::size_t> unit_filling_index() const;

  /// Header `N M D`, then one configuration per line.
  void dump(std::ostream& out) const;

  friend bool operator==(const FockBasis& a, const FockBasis& b) {
    return a.n_particles_ == b.n_particles_ && a.n_sites_ == b.n_sites_;
  }

 private:
  // Number of ways to put r particles on k sites.
  std::uint64_t compositions(int r, int k) const {
    return compositions_[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_sites_ + 1) +
                         static_cast<std::size_t>(k)];
  }

  int n_particles_;
  int n_sites_;
  std::size_t dimension_;
  std::vector<std::uint64_t> compositions_;
  std::vector<int> states_;
};

/// Weakly decreasing positive parts.
struct Partition {
  std::vector<int> parts;

  int total() const;
  friend auto operator<=>(const Partition&, const Partition&) = default;
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Sorted multiset of the nonzero occupations.
Partition partition_of(std::span<const int> occupations);

/// All partitions of n into at most max_parts parts, in descending
/// lexicographic order: (n), (n-1,1), ..., (1,...,1).
std::vector<Partition> partitions(int n, int max_parts);

/// Number of partitions of n into at most max_parts parts, or nullopt on
/// 64-bit overflow. Does not enumerate.
std::optional<std::uint64_t> partition_count(int n, int max_parts);

/// Number of distinct occupation vectors on n_sites whose sorted nonzero
/// entries equal p: M! / prod_k m_k! with m_0 counting empty sites.
std::uint64_t orbit_size(const Partition& p, int n_sites);

}  // namespace mottlab
