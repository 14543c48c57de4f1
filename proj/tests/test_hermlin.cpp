#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hesslab/error.hpp"
#include "hesslab/hermlin.hpp"
#include "hesslab/random.hpp"

using namespace hesslab;

namespace {

using Dense = std::vector<cplx>;  // row-major n x n

HermitianMatrix random_hermitian(Rng& rng, int n, double scale = 1.0) {
  HermitianMatrix a(n);
  for (int i = 0; i < n; ++i) {
    a.set(i, i, scale * rng.normal());
    for (int j = i + 1; j < n; ++j) a.set(i, j, scale * cplx(rng.normal(), rng.normal()));
  }
  return a;
}

Dense dense(const HermitianMatrix& a) {
  const int n = a.dim();
  Dense d(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i * n + j] = a(i, j);
  return d;
}

Dense matmul(const Dense& a, const Dense& b, int n) {
  Dense c(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

Dense adjoint(const Dense& a, int n) {
  Dense c(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[i * n + j] = std::conj(a[j * n + i]);
  return c;
}

// Gram-Schmidt on Gaussian columns.
Dense random_unitary(Rng& rng, int n) {
  Dense q(n * n);
  for (auto& x : q) x = cplx(rng.normal(), rng.normal());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx dot = 0.0;
      for (int i = 0; i < n; ++i) dot += std::conj(q[i * n + k]) * q[i * n + j];
      for (int i = 0; i < n; ++i) q[i * n + j] -= dot * q[i * n + k];
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += std::norm(q[i * n + j]);
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) q[i * n + j] /= norm;
  }
  return q;
}

HermitianMatrix to_hermitian(const Dense& d, int n) {
  HermitianMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, 0.5 * (d[i * n + j] + std::conj(d[j * n + i])));
  return a;
}

// Determinant by Gaussian elimination with partial pivoting.
cplx determinant(Dense a, int n) {
  cplx det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (std::abs(a[piv * n + c]) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const cplx f = a[r * n + c] / a[c * n + c];
      for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return det;
}

double sigma(const HermitianMatrix& a, int m) { return elem_sym(eigvals(a), m); }

// Positive definite plus a random perturbation, retried until inside Gamma_m.
HermitianMatrix random_cone_matrix(Rng& rng, int n, int m) {
  for (;;) {
    HermitianMatrix a = random_hermitian(rng, n, 0.5);
    a += (0.5 + rng.uniform()) * HermitianMatrix::identity(n);
    if (cone_membership(eigvals(a), m, 1e-8).member) return a;
  }
}

// (1/m!) sum over ordered tuples of distinct indices of prod d_k[i_k].
double diagonal_mixed_oracle(const std::vector<std::vector<double>>& ds, int n) {
  const int m = static_cast<int>(ds.size());
  std::vector<int> idx(m, 0);
  double total = 0.0;
  for (;;) {
    bool distinct = true;
    for (int a = 0; a < m && distinct; ++a)
      for (int b = a + 1; b < m; ++b)
        if (idx[a] == idx[b]) distinct = false;
    if (distinct) {
      double p = 1.0;
      for (int k = 0; k < m; ++k) p *= ds[k][idx[k]];
      total += p;
    }
    int k = 0;
    while (k < m && ++idx[k] == n) idx[k++] = 0;
    if (k == m) break;
  }
  double fact = 1.0;
  for (int i = 2; i <= m; ++i) fact *= i;
  return total / fact;
}

}  // namespace

TEST_CASE("eigendecomposition reconstructs the matrix") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.below(HermitianMatrix::kMaxDim);
    HermitianMatrix a = random_hermitian(rng, n);
    Eigensystem es = eigh(a);
    for (int k = 1; k < n; ++k) CHECK(es.values[k] <= es.values[k - 1]);
    const double scale = a.frobenius_norm();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        cplx r = 0.0;
        for (int k = 0; k < n; ++k) r += es.q(i, k) * es.values[k] * std::conj(es.q(j, k));
        CHECK(std::abs(r - a(i, j)) <= 1e-12 * scale);
      }
    }
    double tr = 0.0;
    for (int k = 0; k < n; ++k) tr += es.values[k];
    CHECK(tr == doctest::Approx(a.trace()).epsilon(1e-12).scale(scale));
  }
}

TEST_CASE("spectral sums are unitarily invariant and match determinants") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.below(HermitianMatrix::kMaxDim);
    HermitianMatrix a = random_hermitian(rng, n);
    Dense u = random_unitary(rng, n);
    HermitianMatrix b = to_hermitian(matmul(matmul(u, dense(a), n), adjoint(u, n), n), n);
    Spectrum la = eigvals(a), lb = eigvals(b);
    for (int k = 0; k < n; ++k) CHECK(la[k] == doctest::Approx(lb[k]).epsilon(1e-11).scale(1.0));
    const cplx det = determinant(dense(a), n);
    CHECK(std::abs(det.imag()) <= 1e-10 * (1 + std::abs(det)));
    CHECK(elem_sym(la, n) == doctest::Approx(det.real()).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("from_entries enforces symmetry") {
  std::vector<cplx> good{cplx(1, 0), cplx(2, 1), cplx(2, -1), cplx(3, 0)};
  auto a = HermitianMatrix::from_entries(2, good);
  CHECK(a(0, 1) == cplx(2, 1));
  CHECK(a(1, 0) == cplx(2, -1));
  std::vector<cplx> bad{cplx(1, 0), cplx(2, 1), cplx(2, 1), cplx(3, 0)};
  CHECK_THROWS_AS(HermitianMatrix::from_entries(2, bad), DomainError);
  CHECK_THROWS_AS(HermitianMatrix::from_entries(3, good), DomainError);
  CHECK_THROWS_AS(HermitianMatrix(7), DomainError);
  CHECK_THROWS_AS(HermitianMatrix(2) + HermitianMatrix(3), DomainError);
}

TEST_CASE("cominor is the derivative of sigma_m") {
  Rng rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + rng.below(HermitianMatrix::kMaxDim);
    const int m = 1 + rng.below(n);
    HermitianMatrix a = random_hermitian(rng, n);
    HermitianMatrix b = random_hermitian(rng, n);
    HermitianMatrix c = cominor_matrix(a, m);
    const double t = 1e-5;
    const double fd = (sigma(a + t * b, m) - sigma(a - t * b, m)) / (2 * t);
    CHECK(trace_product(c, b) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("cominor special cases") {
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below(HermitianMatrix::kMaxDim);
    HermitianMatrix a = random_hermitian(rng, n);
    HermitianMatrix c1 = cominor_matrix(a, 1);
    CHECK((c1 - HermitianMatrix::identity(n)).frobenius_norm() == 0.0);

    // m = n: the adjugate, so A C = det(A) I.
    HermitianMatrix cn = cominor_matrix(a, n);
    Dense ac = matmul(dense(a), dense(cn), n);
    const double det = determinant(dense(a), n).real();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(ac[i * n + j] - (i == j ? det : 0.0)) <= 1e-10 * (1 + std::abs(det)));
  }
  // Positive semidefinite on the cone.
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.below(HermitianMatrix::kMaxDim - 1);
    const int m = 1 + rng.below(n);
    HermitianMatrix a = random_cone_matrix(rng, n, m);
    Spectrum lc = eigvals(cominor_matrix(a, m));
    CHECK(lc[lc.size() - 1] >= -1e-12);
  }
  CHECK_THROWS_AS(cominor_matrix(HermitianMatrix(2), 3), DomainError);
}

TEST_CASE("mixed sigma: diagonal oracle, symmetry, multilinearity") {
  Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below(5);
    const int m = 1 + rng.below(n);
    std::vector<std::vector<double>> ds(m, std::vector<double>(n));
    std::vector<HermitianMatrix> args;
    for (auto& d : ds) {
      for (auto& x : d) x = rng.uniform(-1, 2);
      args.push_back(HermitianMatrix::diagonal(d));
    }
    CHECK(mixed_sigma(args) == doctest::Approx(diagonal_mixed_oracle(ds, n)).epsilon(1e-10).scale(1.0));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.below(4);
    const int m = 1 + rng.below(n);
    std::vector<HermitianMatrix> args;
    for (int k = 0; k < m; ++k) args.push_back(random_hermitian(rng, n));
    const double base = mixed_sigma(args);

    auto swapped = args;
    std::reverse(swapped.begin(), swapped.end());
    CHECK(mixed_sigma(swapped) == doctest::Approx(base).epsilon(1e-9).scale(1.0));

    HermitianMatrix b = random_hermitian(rng, n);
    const double s = rng.uniform(-2, 2);
    auto lin = args;
    lin[0] = args[0] + s * b;
    auto only_b = args;
    only_b[0] = b;
    CHECK(mixed_sigma(lin) == doctest::Approx(base + s * mixed_sigma(only_b)).epsilon(1e-9).scale(1.0));

    std::vector<HermitianMatrix> same(m, args[0]);
    CHECK(mixed_sigma(same) == doctest::Approx(sigma(args[0], m)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("mixed Garding inequality on the cone") {
  Rng rng(26);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng.below(4);
    const int m = 1 + rng.below(n);
    std::vector<HermitianMatrix> args;
    for (int k = 0; k < m; ++k) args.push_back(random_cone_matrix(rng, n, m));
    auto p = garding_mixed_check(args);
    CHECK(p.lhs >= p.rhs * (1 - 1e-10));
  }
  std::vector<HermitianMatrix> bad{HermitianMatrix::identity(2), -1.0 * HermitianMatrix::identity(2)};
  CHECK_THROWS_AS(garding_mixed_check(bad), DomainError);
}

TEST_CASE("relative eigenvalues solve det(M - lambda V) = 0") {
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.below(HermitianMatrix::kMaxDim);
    HermitianMatrix g = random_hermitian(rng, n, 0.3);
    HermitianMatrix v = g + (1.0 + 3.0 * 0.3 * n) * HermitianMatrix::identity(n);
    Metric metric(v);
    HermitianMatrix a = random_hermitian(rng, n);
    Spectrum rel = eigvals_relative(a, metric);
    const double detv = determinant(dense(v), n).real();
    for (std::size_t k = 0; k < rel.size(); ++k) {
      const cplx d = determinant(dense(a - rel[k] * v), n);
      CHECK(std::abs(d) <= 1e-9 * std::abs(detv) * (1 + std::pow(std::abs(rel[k]), n)) * std::pow(3.0, n));
    }
    Spectrum ones = eigvals_relative(v, metric);
    for (std::size_t k = 0; k < ones.size(); ++k) CHECK(ones[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Metric(-1.0 * HermitianMatrix::identity(2)), DomainError);
}
