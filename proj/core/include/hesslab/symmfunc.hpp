#pragma once

// Elementary symmetric polynomials S_k of real eigenvalue vectors and the
// algebra of the positive cones
//   Gamma_m = { lambda : S_1(lambda) > 0, ..., S_m(lambda) > 0 }.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hesslab {

/// Real eigenvalue vector, kept sorted in decreasing order.
class Spectrum {
 public:
  /// Sorts `values` descending. Throws DomainError on empty or non-finite input.
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

struct ConeVerdict {
  bool member = false;
  std::vector<double> margins;  // S_1, ..., S_m
  int m = 0;
};

double binomial(int n, int k);

/// S_k(lambda); S_0 = 1. Uses the coefficient recurrence of prod(1 + lambda_i t),
/// with compensated arithmetic once n >= 6.
double elem_sym(const Spectrum& lambda, int k);

/// S_k of lambda with lambda_i replaced by zero, i.e. dS_{k+1}/dlambda_i.
double elem_sym_reduced(const Spectrum& lambda, int k, std::size_t i);

/// member iff S_k(lambda) > tol for k = 1..m. Pass tol = -delta for the closed
/// cone with slack delta.
ConeVerdict cone_membership(const Spectrum& lambda, int m, double tol = 0.0);

/// Normalized means (S_k / C(n,k))^{1/k}, k = 1..m. lambda must lie in the closed cone.
std::vector<double> maclaurin_chain(const Spectrum& lambda, int m);

struct Pairing {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of  sum_i mu_i S_{m-1;i}(lambda) >= m S_m(mu)^{1/m} S_m(lambda)^{(m-1)/m}.
Pairing garding_pairing(const Spectrum& lambda, const Spectrum& mu, int m);

namespace symm {

// Allocation-free kernels used by the hot loops of the field and solver code.
// `out` receives S_0..S_kmax (size kmax + 1).
void elem_sym_all(std::span<const double> lambda, int kmax, std::span<double> out);
double elem_sym(std::span<const double> lambda, int k);
double elem_sym_reduced(std::span<const double> lambda, int k, std::size_t skip);
bool in_cone(std::span<const double> lambda, int m, double tol);

}  // namespace symm

}  // namespace hesslab
