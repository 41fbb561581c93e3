#include "mottlab/fock_basis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "mottlab/errors.hpp"

namespace mottlab {

namespace {

using u128 = unsigned __int128;

constexpr u128 kU64Max = static_cast<u128>(~std::uint64_t{0});

// binomial(n, k) with overflow detection; each partial product is itself a
// binomial coefficient so the division is exact.
std::optional<std::uint64_t> checked_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i);
    result /= i;
    if (result > kU64Max) return std::nullopt;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace

int OccupationVector::total() const { return std::accumulate(n_.begin(), n_.end(), 0); }

std::optional<std::uint64_t> basis_dimension(int n_particles, int n_sites) {
  if (n_particles < 0 || n_sites < 1) {
    throw DomainError("basis_dimension: need N >= 0 and M >= 1");
  }
  return checked_binomial(static_cast<std::uint64_t>(n_particles) + n_sites - 1,
                          static_cast<std::uint64_t>(n_particles));
}

FockBasis::FockBasis(int n_particles, int n_sites, std::uint64_t capacity)
    : n_particles_(n_particles), n_sites_(n_sites), dimension_(0) {
  if (n_particles < 0 || n_sites < 1) {
    throw DomainError("FockBasis: need N >= 0 and M >= 1, got N=" +
                      std::to_string(n_particles) + " M=" + std::to_string(n_sites));
  }
  const auto dim = basis_dimension(n_particles, n_sites);
  if (!dim || *dim > capacity) {
    throw CapacityError("FockBasis: dimension of (N=" + std::to_string(n_particles) +
                        ", M=" + std::to_string(n_sites) + ") exceeds capacity " +
                        std::to_string(capacity));
  }
  dimension_ = static_cast<std::size_t>(*dim);

  // compositions(r, k) = binomial(r + k - 1, k - 1); compositions(0, 0) = 1.
  const auto stride = static_cast<std::size_t>(n_sites_ + 1);
  compositions_.assign(static_cast<std::size_t>(n_particles_ + 1) * stride, 0);
  for (int r = 0; r <= n_particles_; ++r) {
    for (int k = 0; k <= n_sites_; ++k) {
      std::uint64_t value = 0;
      if (k == 0) {
        value = r == 0 ? 1 : 0;
      } else {
        // Every entry is bounded by D for the ranks we ever form, but the
        // table holds a few larger values; saturate instead of wrapping.
        value = checked_binomial(static_cast<std::uint64_t>(r) + k - 1,
                                 static_cast<std::uint64_t>(k - 1))
                    .value_or(~std::uint64_t{0});
      }
      compositions_[static_cast<std::size_t>(r) * stride + static_cast<std::size_t>(k)] = value;
    }
  }

  states_.resize(dimension_ * static_cast<std::size_t>(n_sites_));
  std::vector<int> v(static_cast<std::size_t>(n_sites_), 0);
  v[0] = n_particles_;
  for (std::size_t k = 0; k < dimension_; ++k) {
    std::copy(v.begin(), v.end(), states_.begin() + static_cast<std::ptrdiff_t>(k * v.size()));
    // Descending-lex successor: move one particle out of the last occupied
    // site before the end, and gather everything behind it next to it.
    int i = n_sites_ - 2;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == 0) --i;
    if (i < 0) break;
    int tail = 0;
    for (int j = i + 1; j < n_sites_; ++j) {
      tail += v[static_cast<std::size_t>(j)];
      v[static_cast<std::size_t>(j)] = 0;
    }
    --v[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(i + 1)] = tail + 1;
  }
}

std::size_t FockBasis::rank(std::span<const int> occupations) const {
  if (occupations.size() != static_cast<std::size_t>(n_sites_)) {
    throw DomainError("rank: configuration has " + std::to_string(occupations.size()) +
                      " sites, basis has " + std::to_string(n_sites_));
  }
  int sum = 0;
  for (int n : occupations) {
    if (n < 0) throw DomainError("rank: negative occupation");
    sum += n;
  }
  if (sum != n_particles_) {
    throw DomainError("rank: configuration holds " + std::to_string(sum) +
                      " particles, basis has " + std::to_string(n_particles_));
  }
  // States with a larger occupation at the first differing site come first.
  // Summing over those values collapses (hockey stick) to one table entry.
  std::size_t index = 0;
  int remaining = n_particles_;
  for (int i = 0; i + 1 < n_sites_; ++i) {
    const int n = occupations[static_cast<std::size_t>(i)];
    if (n < remaining) index += compositions(remaining - n - 1, n_sites_ - i);
    remaining -= n;
  }
  return index;
}

OccupationVector FockBasis::unrank(std::size_t k) const {
  if (k >= dimension_) {
    throw DomainError("unrank: index " + std::to_string(k) + " out of range");
  }
  std::vector<int> v(static_cast<std::size_t>(n_sites_), 0);
  int remaining = n_particles_;
  std::uint64_t offset = k;
  for (int i = 0; i + 1 < n_sites_; ++i) {
    int n = remaining;
    for (;; --n) {
      const std::uint64_t block = compositions(remaining - n, n_sites_ - i - 1);
      if (offset < block) break;
      offset -= block;
    }
    v[static_cast<std::size_t>(i)] = n;
    remaining -= n;
  }
  v.back() = remaining;
  return OccupationVector(std::move(v));
}

std::optional<std::size_t> FockBasis::unit_filling_index() const {
  if (n_particles_ != n_sites_) return std::nullopt;
  return rank(std::vector<int>(static_cast<std::size_t>(n_sites_), 1));
}

void FockBasis::dump(std::ostream& out) const {
  out << n_particles_ << ' ' << n_sites_ << ' ' << dimension_ << '\n';
  for (std::size_t k = 0; k < dimension_; ++k) {
    const auto s = state(k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
}

int Partition::total() const { return std::accumulate(parts.begin(), parts.end(), 0); }

Partition partition_of(std::span<const int> occupations) {
  Partition p;
  for (int n : occupations) {
    if (n > 0) p.parts.push_back(n);
  }
  std::sort(p.parts.begin(), p.parts.end(), std::greater<>());
  return p;
}

std::vector<Partition> partitions(int n, int max_parts) {
  if (n < 1 || max_parts < 1) throw DomainError("partitions: need n >= 1 and max_parts >= 1");
  std::vector<Partition> out;
  std::vector<int> current;
  std::function<void(int, int)> extend = [&](int remaining, int largest) {
    if (remaining == 0) {
      out.push_back(Partition{current});
      return;
    }
    if (static_cast<int>(current.size()) == max_parts) return;
    for (int part = std::min(remaining, largest); part >= 1; --part) {
      current.push_back(part);
      extend(remaining - part, part);
      current.pop_back();
    }
  };
  extend(n, n);
  return out;
}

std::optional<std::uint64_t> partition_count(int n, int max_parts) {
  if (n < 0 || max_parts < 0) throw DomainError("partition_count: negative argument");
  // Partitions into at most k parts equal partitions with parts <= k.
  const int largest = std::min(n, max_parts);
  std::vector<u128> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= largest; ++part) {
    for (int total = part; total <= n; ++total) {
      auto& w = ways[static_cast<std::size_t>(total)];
      w += ways[static_cast<std::size_t>(total - part)];
      if (w > kU64Max) w = kU64Max + 1;
    }
  }
  const u128 result = ways[static_cast<std::size_t>(n)];
  if (result > kU64Max) return std::nullopt;
  return static_cast<std::uint64_t>(result);
}

std::uint64_t orbit_size(const Partition& p, int n_sites) {
  if (static_cast<int>(p.parts.size()) > n_sites) {
    throw DomainError("orbit_size: partition has more parts than sites");
  }
  std::map<int, std::uint64_t> multiplicity;
  multiplicity[0] = static_cast<std::uint64_t>(n_sites) - p.parts.size();
  for (int part : p.parts) ++multiplicity[part];

  // M! / prod m_k! as a product of binomials: place each value class in turn.
  u128 result = 1;
  std::uint64_t free_sites = static_cast<std::uint64_t>(n_sites);
  for (const auto& [value, count] : multiplicity) {
    const auto ways = checked_binomial(free_sites, count);
    if (!ways) throw CapacityError("orbit_size: overflow");
    result *= *ways;
    if (result > kU64Max) throw CapacityError("orbit_size: overflow");
    free_sites -= count;
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace mottlab
