#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hesslab/error.hpp"
#include "hesslab/random.hpp"
#include "hesslab/symmfunc.hpp"

using namespace hesslab;

namespace {

// Sum over all k-subsets of products, by bitmask enumeration.
double subset_oracle(const std::vector<double>& v, int k) {
  const int n = static_cast<int>(v.size());
  double s = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double p = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) p *= v[i];
    s += p;
  }
  return s;
}

std::vector<double> random_vector(Rng& rng, int n, double scale = 2.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

// Rejection sampling of Gamma_m with one coordinate pushed up.
std::vector<double> random_cone_point(Rng& rng, int n, int m) {
  for (;;) {
    auto v = random_vector(rng, n);
    v[rng.below(n)] += 3.0 * rng.uniform();
    if (cone_membership(Spectrum(v), m, 1e-6).member) return v;
  }
}

}  // namespace

TEST_CASE("elem_sym known values") {
  Spectrum l({1.0, 2.0, 3.0});
  CHECK(elem_sym(l, 0) == 1.0);
  CHECK(elem_sym(l, 1) == 6.0);
  CHECK(elem_sym(l, 2) == 11.0);
  CHECK(elem_sym(l, 3) == 6.0);
  CHECK_THROWS_AS(elem_sym(l, 4), DomainError);
  CHECK(binomial(6, 3) == 20.0);
  CHECK(binomial(4, 0) == 1.0);
  CHECK(binomial(3, 5) == 0.0);
}

TEST_CASE("elem_sym agrees with subset enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + rng.below(6);
    auto v = random_vector(rng, n);
    Spectrum l(v);
    for (int k = 0; k <= n; ++k) {
      const double ref = subset_oracle(v, k);
      CHECK(elem_sym(l, k) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
      CHECK(symm::elem_sym(l.values(), k) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("reduced sums are partial derivatives") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.below(5);
    auto v = random_vector(rng, n);
    Spectrum l(v);
    for (int k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < l.size(); ++i) {
        std::vector<double> w(l.values().begin(), l.values().end());
        w[i] = 0.0;
        CHECK(elem_sym_reduced(l, k, i) == doctest::Approx(subset_oracle(w, k)).epsilon(1e-12).scale(1.0));
      }
    }
    // Euler: sum_i lambda_i S_{k-1;i} = k S_k.
    for (int k = 1; k <= n; ++k) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < l.size(); ++i) lhs += l[i] * elem_sym_reduced(l, k - 1, i);
      CHECK(lhs == doctest::Approx(k * elem_sym(l, k)).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("Newton identities relate power sums") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below(6);
    auto v = random_vector(rng, n, 1.0);
    Spectrum l(v);
    auto power = [&](int j) {
      double s = 0.0;
      for (double x : v) s += std::pow(x, j);
      return s;
    };
    for (int k = 1; k <= n; ++k) {
      double rhs = 0.0;
      for (int j = 1; j <= k; ++j) rhs += ((j - 1) % 2 ? -1.0 : 1.0) * elem_sym(l, k - j) * power(j);
      CHECK(k * elem_sym(l, k) == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("cone membership and Maclaurin chain") {
  CHECK(cone_membership(Spectrum({1.0, 1.0, -0.4}), 2).member);
  CHECK_FALSE(cone_membership(Spectrum({1.0, 1.0, -0.5}), 2).member);
  CHECK_FALSE(cone_membership(Spectrum({1.0, 1.0, -0.9}), 2).member);
  CHECK(cone_membership(Spectrum({1.0, 1.0, -0.9}), 1).member);
  CHECK_FALSE(cone_membership(Spectrum({0.0, 0.0}), 1).member);
  CHECK(cone_membership(Spectrum({0.0, 0.0}), 1, -1e-12).member);

  Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + rng.below(5);
    const int m = 1 + rng.below(n);
    auto v = random_cone_point(rng, n, m);
    auto chain = maclaurin_chain(Spectrum(v), m);
    REQUIRE(chain.size() == static_cast<std::size_t>(m));
    for (int k = 1; k < m; ++k) CHECK(chain[k] <= chain[k - 1] * (1 + 1e-12));
  }
}

TEST_CASE("Garding pairing holds inside the cone") {
  Rng rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + rng.below(5);
    const int m = 1 + rng.below(n);
    Spectrum l(random_cone_point(rng, n, m));
    Spectrum mu(random_cone_point(rng, n, m));
    auto p = garding_pairing(l, mu, m);
    CHECK(p.lhs >= p.rhs * (1 - 1e-12));
  }
  // Equality at lambda = mu.
  Spectrum l({3.0, 1.0, 0.5});
  auto p = garding_pairing(l, l, 2);
  CHECK(p.lhs == doctest::Approx(p.rhs).epsilon(1e-13));
}

TEST_CASE("invalid spectra are rejected") {
  CHECK_THROWS_AS(Spectrum(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(Spectrum({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
  CHECK_THROWS_AS(Spectrum({1.0, std::numeric_limits<double>::infinity()}), DomainError);
  CHECK_THROWS_AS(elem_sym(Spectrum({1.0}), -1), DomainError);
  CHECK_THROWS_AS(cone_membership(Spectrum({1.0, 2.0}), 3), DomainError);
  CHECK_THROWS_AS(maclaurin_chain(Spectrum({1.0, -3.0}), 2), DomainError);
}
