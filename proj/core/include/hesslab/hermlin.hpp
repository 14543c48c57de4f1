#pragma once

// Dense Hermitian linear algebra for dimensions 1..6.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "hesslab/symmfunc.hpp"

namespace hesslab {

using cplx = std::complex<double>;

class HermitianMatrix {
 public:
  static constexpr int kMaxDim = 6;

  explicit HermitianMatrix(int n = 1);

  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> d);
  /// Row-major n x n entries. Throws DomainError unless Hermitian within 1e-14;
  /// the stored matrix is the exact Hermitian part.
  static HermitianMatrix from_entries(int n, std::span<const cplx> entries);

  int dim() const { return n_; }
  cplx operator()(int i, int j) const { return a_[i * kMaxDim + j]; }

  /// Sets entry (i,j) and its mirror (j,i) = conj(v); diagonal keeps the real part.
  void set(int i, int j, cplx v);

  double trace() const;
  double frobenius_norm() const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  int n_;
  std::array<cplx, kMaxDim * kMaxDim> a_{};
};

/// Unitary eigendecomposition M = Q diag(values) Q*, values descending.
struct Eigensystem {
  int n = 0;
  std::array<double, HermitianMatrix::kMaxDim> values{};
  std::array<cplx, HermitianMatrix::kMaxDim * HermitianMatrix::kMaxDim> vectors{};  // column j = eigvec j

  cplx q(int i, int j) const { return vectors[i * HermitianMatrix::kMaxDim + j]; }
};

/// Cyclic complex Jacobi; sweeps until the off-diagonal mass is below 1e-14 ||M||.
Eigensystem eigh(const HermitianMatrix& m);

Spectrum eigvals(const HermitianMatrix& m);

/// Allocation-free eigenvalues (descending) into out[0..dim).
void eigvals_into(const HermitianMatrix& m, std::span<double> out);

/// Positive definite Hermitian matrix with its Cholesky factor V = L L*.
class Metric {
 public:
  explicit Metric(const HermitianMatrix& v);

  const HermitianMatrix& matrix() const { return v_; }
  /// Lower-triangular factor, row-major kMaxDim stride.
  cplx cholesky(int i, int j) const { return l_[i * HermitianMatrix::kMaxDim + j]; }

 private:
  HermitianMatrix v_;
  std::array<cplx, HermitianMatrix::kMaxDim * HermitianMatrix::kMaxDim> l_{};
};

/// Eigenvalues of L^{-1} M L^{-*}, i.e. of M relative to the metric V.
Spectrum eigvals_relative(const HermitianMatrix& m, const Metric& v);

/// Full polarization D(A_1..A_m) of A -> S_m(lambda(A)), normalized so that
/// D(A,...,A) = S_m(lambda(A)); evaluated by inclusion-exclusion over subsets.
double mixed_sigma(std::span<const HermitianMatrix> args);

/// Derivative of A -> S_m(lambda(A)): the matrix C with dS_m = tr(C dA).
/// C = 1 for m = 1 and the adjugate for m = n.
HermitianMatrix cominor_matrix(const HermitianMatrix& a, int m);

/// Same as cominor_matrix when S_1..S_{m-1} of lambda(a) are already known
/// (s[k] = S_k, k = 0..m-1).
HermitianMatrix cominor_from_sums(const HermitianMatrix& a, int m, std::span<const double> s);

/// Real part of tr(C B); for Hermitian arguments it is the whole trace.
double trace_product(const HermitianMatrix& c, const HermitianMatrix& b);

/// lhs = mixed_sigma(args), rhs = prod_i S_m(lambda(A_i))^{1/m}.
Pairing garding_mixed_check(std::span<const HermitianMatrix> args);

}  // namespace hesslab
