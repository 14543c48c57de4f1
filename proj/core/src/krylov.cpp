#include "hesslab/krylov.hpp"

#include <cmath>
#include <vector>

#include "hesslab/parallel.hpp"

namespace hesslab {

namespace {

using Vec = std::vector<double>;

double norm(std::span<const double> x) { return std::sqrt(par::dot(x, x)); }

void precondition(std::span<const double> inv_diag, std::span<const double> x, std::span<double> y) {
  par::for_each(x.size(), [&](std::size_t i) { y[i] = inv_diag[i] * x[i]; });
}

}  // namespace

KrylovResult conjugate_gradient(const LinearMap& a, std::span<const double> inv_diag, std::span<const double> b,
                                std::span<double> x, const KrylovOptions& opt) {
  const std::size_t n = b.size();
  Vec r(n), z(n), p(n), q(n);
  KrylovResult res;
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  a(x, r);
  par::for_each(n, [&](std::size_t i) { r[i] = b[i] - r[i]; });
  precondition(inv_diag, r, z);
  p = z;
  double rz = par::dot(r, z);
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    res.relative_residual = norm(r) / bnorm;
    if (res.relative_residual <= opt.tol) {
      res.converged = true;
      return res;
    }
    a(p, q);
    const double alpha = rz / par::dot(p, q);
    par::for_each(n, [&](std::size_t i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    });
    precondition(inv_diag, r, z);
    const double rz_new = par::dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    par::for_each(n, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
  }
  res.relative_residual = norm(r) / bnorm;
  res.converged = res.relative_residual <= opt.tol;
  return res;
}

KrylovResult bicgstab(const LinearMap& a, std::span<const double> inv_diag, std::span<const double> b,
                      std::span<double> x, const KrylovOptions& opt) {
  const std::size_t n = b.size();
  Vec r(n), rhat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), y(n), z(n);
  KrylovResult res;
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  a(x, r);
  par::for_each(n, [&](std::size_t i) { r[i] = b[i] - r[i]; });
  rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    res.relative_residual = norm(r) / bnorm;
    if (res.relative_residual <= opt.tol) {
      res.converged = true;
      return res;
    }
    double rho_new = par::dot(rhat, r);
    if (rho_new == 0.0 || omega == 0.0) {
      // Breakdown: restart the shadow space from the current residual.
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      rho_new = par::dot(rhat, r);
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    par::for_each(n, [&](std::size_t i) { p[i] = r[i] + beta * (p[i] - omega * v[i]); });
    precondition(inv_diag, p, y);
    a(y, v);
    const double rv = par::dot(rhat, v);
    if (rv == 0.0) {
      omega = 0.0;
      continue;
    }
    alpha = rho / rv;
    par::for_each(n, [&](std::size_t i) { s[i] = r[i] - alpha * v[i]; });
    if (norm(s) / bnorm <= opt.tol) {
      par::for_each(n, [&](std::size_t i) { x[i] += alpha * y[i]; });
      r = s;
      continue;
    }
    precondition(inv_diag, s, z);
    a(z, t);
    const double tt = par::dot(t, t);
    omega = tt > 0.0 ? par::dot(t, s) / tt : 0.0;
    par::for_each(n, [&](std::size_t i) {
      x[i] += alpha * y[i] + omega * z[i];
      r[i] = s[i] - omega * t[i];
    });
  }
  res.relative_residual = norm(r) / bnorm;
  res.converged = res.relative_residual <= opt.tol;
  return res;
}

}  // namespace hesslab
