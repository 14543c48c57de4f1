#include "hesslab/hermlin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "hesslab/error.hpp"

namespace hesslab {

namespace {

constexpr int K = HermitianMatrix::kMaxDim;
using Square = std::array<cplx, K * K>;

void check_dim(int n) {
  if (n < 1 || n > K) throw DomainError("Hermitian dimension " + std::to_string(n) + " not in [1,6]");
}

double off_diagonal_mass(const Square& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += std::norm(a[i * K + j]);
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q).
void rotate(Square& a, Square& v, int n, int p, int q) {
  const cplx apq = a[p * K + q];
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r;  // e^{i phi}
  const double app = a[p * K + p].real();
  const double aqq = a[q * K + q].real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = -1.0 / (tau + std::copysign(std::sqrt(1.0 + tau * tau), tau == 0.0 ? 1.0 : tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx gqp = std::conj(phase) * s;  // G(q,p)
  const cplx gpq = -phase * s;            // G(p,q)

  for (int k = 0; k < n; ++k) {  // A <- A G, V <- V G
    const cplx akp = a[k * K + p], akq = a[k * K + q];
    a[k * K + p] = akp * c + akq * gqp;
    a[k * K + q] = akp * gpq + akq * c;
    const cplx vkp = v[k * K + p], vkq = v[k * K + q];
    v[k * K + p] = vkp * c + vkq * gqp;
    v[k * K + q] = vkp * gpq + vkq * c;
  }
  for (int k = 0; k < n; ++k) {  // A <- G* A
    const cplx apk = a[p * K + k], aqk = a[q * K + k];
    a[p * K + k] = c * apk + std::conj(gqp) * aqk;
    a[q * K + k] = std::conj(gpq) * apk + c * aqk;
  }
  a[p * K + q] = 0.0;
  a[q * K + p] = 0.0;
  a[p * K + p] = a[p * K + p].real();
  a[q * K + q] = a[q * K + q].real();
}

Square jacobi(const HermitianMatrix& m, Square* vectors) {
  const int n = m.dim();
  Square a{}, v{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i * K + j] = m(i, j);
    v[i * K + i] = 1.0;
  }
  const double scale = m.frobenius_norm();
  if (scale > 0.0) {
    for (int sweep = 0; sweep < 60; ++sweep) {
      if (off_diagonal_mass(a, n) < 1e-14 * scale) break;
      for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) rotate(a, v, n, p, q);
    }
  }
  if (vectors) *vectors = v;
  return a;
}

HermitianMatrix multiply_commuting(const HermitianMatrix& x, const HermitianMatrix& y) {
  // x and y are polynomials in the same matrix, so x*y is Hermitian.
  const int n = x.dim();
  HermitianMatrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += x(i, k) * y(k, j);
      r.set(i, j, s);
    }
  }
  return r;
}

}  // namespace

HermitianMatrix::HermitianMatrix(int n) : n_(n) { check_dim(n); }

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix m(n);
  for (int i = 0; i < n; ++i) m.a_[i * K + i] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix m(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * K + i] = d[i];
  return m;
}

HermitianMatrix HermitianMatrix::from_entries(int n, std::span<const cplx> entries) {
  check_dim(n);
  if (entries.size() != static_cast<std::size_t>(n * n)) {
    throw DomainError("from_entries: expected n*n entries");
  }
  HermitianMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx aij = entries[i * n + j];
      const cplx aji = entries[j * n + i];
      if (std::abs(aij - std::conj(aji)) > 1e-14) {
        throw DomainError("from_entries: matrix is not Hermitian");
      }
      m.set(i, j, 0.5 * (aij + std::conj(aji)));
    }
  }
  return m;
}

void HermitianMatrix::set(int i, int j, cplx v) {
  if (i == j) {
    a_[i * K + i] = v.real();
  } else {
    a_[i * K + j] = v;
    a_[j * K + i] = std::conj(v);
  }
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += a_[i * K + i].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += std::norm(a_[i * K + j]);
  return std::sqrt(s);
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.n_ != n_) throw DomainError("HermitianMatrix: dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.n_ != n_) throw DomainError("HermitianMatrix: dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  for (auto& x : a_) x *= s;
  return *this;
}

Eigensystem eigh(const HermitianMatrix& m) {
  Eigensystem es;
  es.n = m.dim();
  Square v{};
  const Square a = jacobi(m, &v);
  std::array<int, K> order{};
  std::iota(order.begin(), order.begin() + es.n, 0);
  std::sort(order.begin(), order.begin() + es.n,
            [&](int x, int y) { return a[x * K + x].real() > a[y * K + y].real(); });
  for (int j = 0; j < es.n; ++j) {
    es.values[j] = a[order[j] * K + order[j]].real();
    for (int i = 0; i < es.n; ++i) es.vectors[i * K + j] = v[i * K + order[j]];
  }
  return es;
}

void eigvals_into(const HermitianMatrix& m, std::span<double> out) {
  const int n = m.dim();
  if (n == 1) {
    out[0] = m(0, 0).real();
    return;
  }
  if (n == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    out[0] = mean + rad;
    out[1] = mean - rad;
    return;
  }
  const Square a = jacobi(m, nullptr);
  for (int i = 0; i < n; ++i) out[i] = a[i * K + i].real();
  std::sort(out.begin(), out.begin() + n, std::greater<>());
}

Spectrum eigvals(const HermitianMatrix& m) {
  std::vector<double> v(m.dim());
  eigvals_into(m, v);
  return Spectrum(std::move(v));
}

Metric::Metric(const HermitianMatrix& v) : v_(v) {
  const int n = v.dim();
  for (int j = 0; j < n; ++j) {
    double d = v(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l_[j * K + k]);
    if (!(d > 0.0)) throw DomainError("Metric: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l_[j * K + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = v(i, j);
      for (int k = 0; k < j; ++k) s -= l_[i * K + k] * std::conj(l_[j * K + k]);
      l_[i * K + j] = s / ljj;
    }
  }
}

Spectrum eigvals_relative(const HermitianMatrix& m, const Metric& v) {
  const int n = m.dim();
  if (v.matrix().dim() != n) throw DomainError("eigvals_relative: dimension mismatch");
  // Y = L^{-1} B by forward substitution, applied twice: X = L^{-1} (L^{-1} M)^*.
  auto forward = [&](const Square& b) {
    Square y{};
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < n; ++i) {
        cplx s = b[i * K + c];
        for (int k = 0; k < i; ++k) s -= v.cholesky(i, k) * y[k * K + c];
        y[i * K + c] = s / v.cholesky(i, i);
      }
    }
    return y;
  };
  Square b{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i * K + j] = m(i, j);
  const Square y = forward(b);
  Square yh{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) yh[i * K + j] = std::conj(y[j * K + i]);
  const Square x = forward(yh);
  HermitianMatrix h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) h.set(i, j, 0.5 * (x[i * K + j] + std::conj(x[j * K + i])));
  return eigvals(h);
}

double mixed_sigma(std::span<const HermitianMatrix> args) {
  const int m = static_cast<int>(args.size());
  if (m < 1) throw DomainError("mixed_sigma: need at least one matrix");
  const int n = args[0].dim();
  if (m > n) throw DomainError("mixed_sigma: more arguments than the dimension");
  for (const auto& a : args) {
    if (a.dim() != n) throw DomainError("mixed_sigma: dimension mismatch");
  }
  // Subset sums are built incrementally: sum(mask) = sum(mask minus lowest bit) + A_lowest.
  const unsigned full = (1u << m) - 1u;
  std::vector<HermitianMatrix> sums(full + 1, HermitianMatrix(n));
  std::array<double, K> lam{};
  double acc = 0.0;
  for (unsigned mask = 1; mask <= full; ++mask) {
    const int low = std::countr_zero(mask);
    sums[mask] = sums[mask & (mask - 1)] + args[low];
    eigvals_into(sums[mask], lam);
    const double sm = symm::elem_sym(std::span<const double>(lam.data(), n), m);
    const int size = std::popcount(mask);
    acc += ((m - size) % 2 == 0 ? sm : -sm);
  }
  double fact = 1.0;
  for (int i = 2; i <= m; ++i) fact *= i;
  return acc / fact;
}

HermitianMatrix cominor_from_sums(const HermitianMatrix& a, int m, std::span<const double> s) {
  // Newton transformations T_0 = 1, T_k = S_k 1 - A T_{k-1}; the derivative of S_m is T_{m-1}.
  const int n = a.dim();
  HermitianMatrix t = HermitianMatrix::identity(n);
  for (int k = 1; k < m; ++k) {
    HermitianMatrix next = s[k] * HermitianMatrix::identity(n);
    next -= multiply_commuting(a, t);
    t = next;
  }
  return t;
}

HermitianMatrix cominor_matrix(const HermitianMatrix& a, int m) {
  const int n = a.dim();
  if (m < 1 || m > n) throw DomainError("cominor_matrix: m out of range");
  std::array<double, K> lam{};
  eigvals_into(a, lam);
  std::array<double, K + 1> s{};
  symm::elem_sym_all(std::span<const double>(lam.data(), n), m, s);
  return cominor_from_sums(a, m, s);
}

double trace_product(const HermitianMatrix& c, const HermitianMatrix& b) {
  const int n = c.dim();
  double t = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t += (c(i, j) * b(j, i)).real();
  return t;
}

Pairing garding_mixed_check(std::span<const HermitianMatrix> args) {
  const int m = static_cast<int>(args.size());
  Pairing p;
  p.rhs = 1.0;
  for (const auto& a : args) {
    const auto v = cone_membership(eigvals(a), m, 0.0);
    if (std::any_of(v.margins.begin(), v.margins.end(), [](double x) { return x < 0.0; })) {
      throw DomainError("garding_mixed_check: argument outside the cone");
    }
    p.rhs *= std::pow(v.margins[m - 1], 1.0 / m);
  }
  p.lhs = mixed_sigma(args);
  return p;
}

}  // namespace hesslab
