#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mottlab/entanglement.hpp"
#include "mottlab/errors.hpp"
#include "oracles.hpp"

using namespace mottlab;

namespace {

std::shared_ptr<const FockBasis> make_basis(int n, int m) { return std::make_shared<const FockBasis>(n, m); }

Geometry geometry_for(bool ccg, int m) { return ccg ? Geometry::complete_graph(m) : Geometry::chain_periodic(m); }

double binomial_pmf(int n, int k, double p) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * std::pow(p, k) *
         std::pow(1.0 - p, n - k);
}

// Reduced state by direct summation over pairs of basis states that agree
// outside `sites`.
DenseMatrix reference_trace(const QuantumState& psi, std::vector<int> sites) {
  const auto& basis = *psi.basis();
  const int d = basis.n_particles() + 1;
  const std::size_t dim = sites.size() == 1 ? d : static_cast<std::size_t>(d * d);
  DenseMatrix rho(dim, dim);
  auto pattern = [&](std::size_t k) {
    std::size_t idx = 0;
    for (int s : sites) idx = idx * d + basis.occupation(k, s);
    return idx;
  };
  auto rest_equal = [&](std::size_t a, std::size_t b) {
    for (int s = 0; s < basis.n_sites(); ++s) {
      if (std::find(sites.begin(), sites.end(), s) != sites.end()) continue;
      if (basis.occupation(a, s) != basis.occupation(b, s)) return false;
    }
    return true;
  };
  for (std::size_t a = 0; a < basis.dimension(); ++a)
    for (std::size_t b = 0; b < basis.dimension(); ++b)
      if (rest_equal(a, b)) rho(pattern(a), pattern(b)) += psi[a] * psi[b];
  return rho;
}

bool is_psd(const DenseMatrix& m, double tol) {
  for (double v : symmetric_eigen(m, false).values)
    if (v < -tol) return false;
  return true;
}

}  // namespace

TEST_CASE("Mott state marginals") {
  for (int n = 2; n <= 6; ++n) {
    auto basis = make_basis(n, n);
    const auto mi = build_mi_state(basis);
    const std::vector<int> site{0};
    const auto rho = partial_trace(mi, site);
    CHECK(rho.local_dim == n + 1);
    CHECK(rho.matrix(1, 1) == 1.0);
    CHECK(rho.trace() == 1.0);
    CHECK(linear_entropy(rho) == 0.0);
    CHECK(delta_n2(rho) == 0.0);
    const std::vector<int> pair{0, 1};
    CHECK(negativity(partial_trace(mi, pair)) == 0.0);
  }
  CHECK_THROWS_AS(build_mi_state(make_basis(2, 3)), DomainError);
}

TEST_CASE("superfluid marginal is binomial") {
  for (int n = 2; n <= 8; ++n) {
    CAPTURE(n);
    auto basis = make_basis(n, n);
    const auto sf = build_sf_state(basis);
    const std::vector<int> site{0};
    const auto rho = partial_trace(sf, site);
    double purity = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double b = binomial_pmf(n, k, 1.0 / n);
      CHECK(std::abs(rho.matrix(k, k) - b) < 1e-12);
      purity += b * b;
    }
    CHECK(std::abs(delta_n2(rho) - (1.0 - 1.0 / n)) < 1e-12);
    const double d = n + 1.0;
    CHECK(std::abs(linear_entropy(rho) - d / (d - 1.0) * (1.0 - purity)) < 1e-12);
  }
  const auto rho2 = partial_trace(build_sf_state(make_basis(2, 2)), std::vector<int>{0});
  CHECK(linear_entropy(rho2) == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("superfluid number variance away from unit filling") {
  auto basis = make_basis(3, 5);
  const auto rho = partial_trace(build_sf_state(basis), std::vector<int>{2});
  CHECK(std::abs(delta_n2(rho) - 3.0 * 0.2 * 0.8) < 1e-12);
}

TEST_CASE("maximally mixed site has unit entropy") {
  ReducedDensityMatrix rho;
  rho.sites = {0};
  rho.local_dim = rho.pattern_dim = 4;
  rho.matrix = DenseMatrix(4, 4);
  for (std::size_t i = 0; i < 4; ++i) rho.matrix(i, i) = 0.25;
  CHECK(linear_entropy(rho) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("partial transpose") {
  std::mt19937_64 rng(3);
  auto basis = make_basis(3, 3);
  const auto psi = oracle::random_state(basis, rng);
  const auto rho = partial_trace(psi, std::vector<int>{0, 2});
  const auto pt = partial_transpose(rho);
  auto twice = rho;
  twice.matrix = pt;
  CHECK(partial_transpose(twice) == rho.matrix);
  CHECK(std::abs(pt.trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(partial_transpose(partial_trace(psi, std::vector<int>{0})), DomainError);
}

TEST_CASE("product states have zero negativity") {
  // 0.6 |2,0,0> + 0.8 |0,0,2>: site 1 is always empty.
  auto basis = make_basis(2, 3);
  std::vector<double> amps(basis->dimension(), 0.0);
  amps[basis->rank(OccupationVector{2, 0, 0})] = 0.6;
  amps[basis->rank(OccupationVector{0, 0, 2})] = 0.8;
  const QuantumState psi(basis, amps);
  CHECK(negativity(partial_trace(psi, std::vector<int>{1, 2})) < 1e-15);
  CHECK(negativity(partial_trace(psi, std::vector<int>{0, 1})) < 1e-15);
  CHECK(negativity(partial_trace(psi, std::vector<int>{0, 2})) == doctest::Approx(0.48).epsilon(1e-14));
}

TEST_CASE("two-site negativity against Schmidt coefficients") {
  auto basis = make_basis(2, 2);
  for (double lambda : {0.01, 0.05, 0.1, 0.5, 1.0}) {
    const auto ground = solve_dense(assemble_hamiltonian(basis, {lambda, Geometry::chain_periodic(2)}));
    double sum = 0.0;
    for (double a : ground.state.amplitudes()) sum += std::abs(a);
    const double expected = (sum * sum - 1.0) / 2.0;
    CHECK(std::abs(negativity(partial_trace(ground.state, std::vector<int>{0, 1})) - expected) < 1e-12);
  }
}

TEST_CASE("partial trace matches direct summation") {
  std::mt19937_64 rng(23);
  for (int n = 2; n <= 4; ++n) {
    auto basis = make_basis(n, n);
    for (int trial = 0; trial < 3; ++trial) {
      const auto psi = oracle::random_state(basis, rng);
      for (int s = 0; s < n; ++s) {
        CHECK(max_abs_diff(partial_trace(psi, std::vector<int>{s}).matrix, reference_trace(psi, {s})) < 1e-14);
        for (int t = 0; t < n; ++t) {
          if (s == t) continue;
          const auto rho = partial_trace(psi, std::vector<int>{s, t});
          CHECK(max_abs_diff(rho.matrix, reference_trace(psi, {s, t})) < 1e-14);
        }
      }
    }
  }
}

TEST_CASE("reduced states are diagonal or block diagonal, trace one and positive") {
  std::mt19937_64 rng(29);
  for (int n = 2; n <= 5; ++n) {
    auto basis = make_basis(n, n);
    const int d = n + 1;
    for (int trial = 0; trial < 3; ++trial) {
      const auto psi = oracle::random_state(basis, rng);
      const auto one = partial_trace(psi, std::vector<int>{0});
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (i != j) CHECK(one.matrix(i, j) == 0.0);
      CHECK(std::abs(one.trace() - 1.0) < 1e-12);
      CHECK(is_psd(one.matrix, 1e-12));

      const auto two = partial_trace(psi, std::vector<int>{0, n - 1});
      CHECK(two.matrix == two.matrix.transposed());
      for (int r = 0; r < d * d; ++r)
        for (int c = 0; c < d * d; ++c)
          if (r / d + r % d != c / d + c % d) CHECK(two.matrix(r, c) == 0.0);
      CHECK(std::abs(two.trace() - 1.0) < 1e-12);
      CHECK(is_psd(two.matrix, 1e-12));
      CHECK(negativity(two) >= 0.0);
    }
  }
}

TEST_CASE("per-site observables are translation invariant") {
  for (int n = 3; n <= 6; ++n)
    for (bool ccg : {false, true}) {
      auto basis = make_basis(n, n);
      const auto ground = solve_dense(assemble_hamiltonian(basis, {0.2, geometry_for(ccg, n)}));
      const auto ref = partial_trace(ground.state, std::vector<int>{0});
      const auto ref_pair = partial_trace(ground.state, std::vector<int>{0, 1});
      for (int s = 1; s < n; ++s) {
        const auto rho = partial_trace(ground.state, std::vector<int>{s});
        CHECK(std::abs(linear_entropy(rho) - linear_entropy(ref)) < 1e-12);
        CHECK(std::abs(delta_n2(rho) - delta_n2(ref)) < 1e-12);
        const auto pair = partial_trace(ground.state, std::vector<int>{s, (s + 1) % n});
        CHECK(std::abs(negativity(pair) - negativity(ref_pair)) < 1e-12);
      }
    }
}

TEST_CASE("sparse and dense partial traces agree") {
  std::mt19937_64 rng(31);
  for (int n = 2; n <= 5; ++n) {
    auto basis = make_basis(n, n);
    const auto psi = oracle::random_state(basis, rng);
    const auto sparse = to_sparse(psi);
    for (const std::vector<int>& sites : {std::vector<int>{0}, std::vector<int>{1}, std::vector<int>{0, 1},
                                           std::vector<int>{n - 1, 0}}) {
      const auto a = partial_trace(psi, sites);
      const auto b = partial_trace(sparse, sites);
      REQUIRE(a.pattern_dim == b.pattern_dim);
      CHECK(max_abs_diff(a.matrix, b.matrix) < 1e-14);
    }
  }
}

TEST_CASE("sparse traces of the first-order expansion") {
  const int n = 6;
  const auto geometry = Geometry::chain_periodic(n);
  const auto expansion = perturbative_expansion(n, geometry, 0.07, 1);
  auto basis = make_basis(n, n);
  const auto embedded = perturbative_state(basis, {0.07, geometry}, 1);
  const auto pairs = representative_pairs(geometry, std::vector<std::string>{"nn", "nnn"});
  const auto a = analyze(expansion.state, pairs);
  const auto b = analyze(embedded.state, pairs);
  CHECK(std::abs(a.linear_entropy - b.linear_entropy) < 1e-13);
  CHECK(std::abs(a.delta_n2 - b.delta_n2) < 1e-13);
  CHECK(std::abs(a.negativities.at("nn") - b.negativities.at("nn")) < 1e-13);
  CHECK(std::abs(a.negativities.at("nnn") - b.negativities.at("nnn")) < 1e-13);
  // first order only reaches occupation 2
  CHECK(partial_trace(expansion.state, std::vector<int>{0}).pattern_dim == 3);
  CHECK(partial_trace(expansion.state, std::vector<int>{0}).local_dim == n + 1);
}

TEST_CASE("entropy grows with lambda") {
  for (int n = 2; n <= 4; ++n) {
    auto basis = make_basis(n, n);
    double previous = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double lambda = 0.05 * i;
      const auto ground = solve_dense(assemble_hamiltonian(basis, {lambda, Geometry::chain_periodic(n)}));
      const double s = linear_entropy(partial_trace(ground.state, std::vector<int>{0}));
      CHECK(s >= previous - 1e-12);
      CHECK(s <= 1.0);
      previous = s;
    }
  }
}

TEST_CASE("site selection errors") {
  auto basis = make_basis(3, 3);
  const auto mi = build_mi_state(basis);
  CHECK_THROWS_AS(partial_trace(mi, std::vector<int>{}), DomainError);
  CHECK_THROWS_AS(partial_trace(mi, std::vector<int>{0, 1, 2}), DomainError);
  CHECK_THROWS_AS(partial_trace(mi, std::vector<int>{3}), DomainError);
  CHECK_THROWS_AS(partial_trace(mi, std::vector<int>{1, 1}), DomainError);
  CHECK_THROWS_AS(linear_entropy(partial_trace(mi, std::vector<int>{0, 1})), DomainError);
  CHECK_THROWS_AS(delta_n2(partial_trace(mi, std::vector<int>{0, 1})), DomainError);
  CHECK_THROWS_AS(negativity(partial_trace(mi, std::vector<int>{0})), DomainError);
  CHECK_THROWS_AS(partial_trace(to_sparse(mi), std::vector<int>{-1}), DomainError);
}

TEST_CASE("representative pairs") {
  const std::vector<std::string> both{"nn", "nnn"};
  const auto ring4 = representative_pairs(Geometry::chain_periodic(4), both);
  REQUIRE(ring4.pairs.size() == 2);
  CHECK(ring4.pairs[0].second == std::pair{0, 1});
  CHECK(ring4.pairs[1].second == std::pair{0, 2});
  CHECK(representative_pairs(Geometry::chain_periodic(3), both).pairs.size() == 1);
  const auto k5 = representative_pairs(Geometry::complete_graph(5), both);
  REQUIRE(k5.pairs.size() == 1);
  CHECK(k5.pairs[0].first == "nn");
  CHECK_THROWS_AS(representative_pairs(Geometry::chain_periodic(4), std::vector<std::string>{"far"}), DomainError);

  auto basis = make_basis(4, 4);
  const auto report = analyze(build_mi_state(basis), ring4);
  CHECK(report.negativities.size() == 2);
  CHECK(report.linear_entropy == 0.0);
}
