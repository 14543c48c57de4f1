#include "hesslab/symmfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "hesslab/error.hpp"

namespace hesslab {

namespace {

constexpr int kMaxStack = 16;

// Error-free transformations for the compensated recurrence.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

void check_degree(std::size_t n, int k, int hi) {
  if (k < 0 || k > hi) {
    throw DomainError("elementary symmetric degree " + std::to_string(k) +
                      " out of range [0," + std::to_string(hi) + "] for n=" + std::to_string(n));
  }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("Spectrum must have at least one entry");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("Spectrum entries must be finite");
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

namespace symm {

void elem_sym_all(std::span<const double> lambda, int kmax, std::span<double> out) {
  const std::size_t n = lambda.size();
  std::fill(out.begin(), out.begin() + kmax + 1, 0.0);
  out[0] = 1.0;
  if (n < 6) {
    for (std::size_t i = 0; i < n; ++i) {
      const int top = std::min<int>(kmax, static_cast<int>(i) + 1);
      for (int k = top; k >= 1; --k) out[k] += lambda[i] * out[k - 1];
    }
    return;
  }
  // Compensated variant: carry the rounding error of every coefficient.
  std::array<double, kMaxStack + 1> err{};
  for (std::size_t i = 0; i < n; ++i) {
    const int top = std::min<int>(kmax, static_cast<int>(i) + 1);
    for (int k = top; k >= 1; --k) {
      double p, pe, s, se;
      two_prod(lambda[i], out[k - 1], p, pe);
      pe += lambda[i] * err[k - 1];
      two_sum(out[k], p, s, se);
      out[k] = s;
      err[k] += se + pe;
    }
  }
  for (int k = 1; k <= kmax; ++k) out[k] += err[k];
}

double elem_sym(std::span<const double> lambda, int k) {
  std::array<double, kMaxStack + 1> buf{};
  elem_sym_all(lambda, k, buf);
  return buf[k];
}

double elem_sym_reduced(std::span<const double> lambda, int k, std::size_t skip) {
  std::array<double, kMaxStack> reduced{};
  std::size_t j = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i != skip) reduced[j++] = lambda[i];
  }
  return elem_sym(std::span<const double>(reduced.data(), j), k);
}

bool in_cone(std::span<const double> lambda, int m, double tol) {
  std::array<double, kMaxStack + 1> s{};
  elem_sym_all(lambda, m, s);
  for (int k = 1; k <= m; ++k) {
    if (!(s[k] > tol)) return false;
  }
  return true;
}

}  // namespace symm

double elem_sym(const Spectrum& lambda, int k) {
  check_degree(lambda.size(), k, static_cast<int>(lambda.size()));
  if (lambda.size() > kMaxStack) throw DomainError("Spectrum too long for elem_sym");
  return symm::elem_sym(lambda.values(), k);
}

double elem_sym_reduced(const Spectrum& lambda, int k, std::size_t i) {
  check_degree(lambda.size(), k, static_cast<int>(lambda.size()) - 1);
  if (i >= lambda.size()) {
    throw DomainError("reduced index " + std::to_string(i) + " out of range");
  }
  return symm::elem_sym_reduced(lambda.values(), k, i);
}

ConeVerdict cone_membership(const Spectrum& lambda, int m, double tol) {
  check_degree(lambda.size(), m, static_cast<int>(lambda.size()));
  if (m < 1) throw DomainError("cone index m must be at least 1");
  std::array<double, kMaxStack + 1> s{};
  symm::elem_sym_all(lambda.values(), m, s);
  ConeVerdict v;
  v.m = m;
  v.margins.assign(s.begin() + 1, s.begin() + m + 1);
  v.member = std::all_of(v.margins.begin(), v.margins.end(), [tol](double x) { return x > tol; });
  return v;
}

std::vector<double> maclaurin_chain(const Spectrum& lambda, int m) {
  const auto verdict = cone_membership(lambda, m, 0.0);
  const int n = static_cast<int>(lambda.size());
  std::vector<double> mu(m);
  for (int k = 1; k <= m; ++k) {
    const double s = verdict.margins[k - 1];
    if (s < 0.0) throw DomainError("maclaurin_chain: spectrum outside the closed cone");
    mu[k - 1] = std::pow(s / binomial(n, k), 1.0 / k);
  }
  return mu;
}

Pairing garding_pairing(const Spectrum& lambda, const Spectrum& mu, int m) {
  if (lambda.size() != mu.size()) throw DomainError("garding_pairing: size mismatch");
  for (const Spectrum* s : {&lambda, &mu}) {
    const auto v = cone_membership(*s, m, 0.0);
    if (std::any_of(v.margins.begin(), v.margins.end(), [](double x) { return x < 0.0; })) {
      throw DomainError("garding_pairing: argument outside the cone");
    }
  }
  Pairing p;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    p.lhs += mu[i] * symm::elem_sym_reduced(lambda.values(), m - 1, i);
  }
  const double sl = symm::elem_sym(lambda.values(), m);
  const double sm = symm::elem_sym(mu.values(), m);
  p.rhs = m * std::pow(sm, 1.0 / m) * std::pow(sl, (m - 1.0) / m);
  return p;
}

}  // namespace hesslab
