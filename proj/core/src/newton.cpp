#include "hesslab/newton.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "hesslab/error.hpp"
#include "hesslab/field.hpp"
#include "hesslab/krylov.hpp"
#include "hesslab/parallel.hpp"

namespace hesslab {

namespace {

constexpr int kMaxHalvings = 30;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

NewtonEvaluation newton_evaluate(const NewtonProblem& p, const std::vector<double>& u, StencilOperator* op) {
  const GridDomain& d = *p.domain;
  const int n = d.n(), m = p.m;
  const std::size_t ni = d.interior().size();
  NewtonEvaluation ev;
  ev.F.assign(ni, 0.0);
  ev.scale.assign(ni, 1.0);
  std::vector<std::uint8_t> bad(ni, 0);
  par::for_each(ni, [&](std::size_t k) {
    const std::size_t i = d.interior()[k];
    const HermitianMatrix hm = hessian_at(d, u, i);
    double lam[HermitianMatrix::kMaxDim], s[HermitianMatrix::kMaxDim + 1];
    eigvals_into(hm, std::span<double>(lam, n));
    symm::elem_sym_all(std::span<const double>(lam, n), m, std::span<double>(s, m + 1));
    if (m == 1) {
      ev.F[k] = s[1] - p.f_root[i];
      if (op) op->set_from_hermitian(k, HermitianMatrix::identity(n));
      return;
    }
    for (int j = 1; j <= m; ++j) {
      if (!(s[j] > 0.0)) {
        bad[k] = 1;
        ev.F[k] = kInf;
        return;
      }
    }
    const double root = std::pow(s[m], 1.0 / m);
    ev.F[k] = root - p.f_root[i];
    ev.scale[k] = root / (m * s[m]);
    if (op) op->set_from_hermitian(k, cominor_from_sums(hm, m, std::span<const double>(s, m + 1)));
  });
  for (std::size_t k = 0; k < ni; ++k) {
    ev.violations += bad[k];
    ev.residual = std::max(ev.residual, std::abs(ev.F[k]));
  }
  for (std::size_t i : d.boundary()) ev.mismatch = std::max(ev.mismatch, std::abs(p.psi[i] - u[i]));
  return ev;
}

NewtonTrace newton_dirichlet(const NewtonProblem& p, std::vector<double>& u, const NewtonSettings& s) {
  const GridDomain& d = *p.domain;
  const std::size_t ni = d.interior().size();
  StencilOperator op(p.domain);
  NewtonTrace tr;
  NewtonEvaluation ev = newton_evaluate(p, u, &op);
  if (ev.violations > 0) {
    throw SolverError(fmt::format("Newton start has {} inadmissible interior points", ev.violations));
  }
  tr.residual.push_back(ev.residual);
  tr.step.push_back(0.0);
  tr.violations.push_back(0);

  std::vector<double> b(d.size()), db(d.size()), x(d.size()), tmp(d.size()), trial(d.size());
  KrylovOptions kopt{s.linear_tol, s.max_linear_iter};
  for (tr.iterations = 0; tr.iterations < s.max_iter; ++tr.iterations) {
    if (ev.residual <= s.tol && ev.mismatch == 0.0) {
      tr.converged = true;
      break;
    }
    // Interior correction: L x = -F/scale - L(db), db the boundary correction.
    std::fill(db.begin(), db.end(), 0.0);
    for (std::size_t i : d.boundary()) db[i] = p.psi[i] - u[i];
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t k = 0; k < ni; ++k) b[d.interior()[k]] = -ev.F[k] / ev.scale[k];
    if (ev.mismatch > 0.0) {
      op.apply(db, tmp);
      for (std::size_t i : d.interior()) b[i] -= tmp[i];
    }
    std::fill(x.begin(), x.end(), 0.0);
    std::vector<double> inv = op.inverse_diagonal();
    KrylovResult kr;
    if (p.m == 1) {
      // L is symmetric negative definite here; solve with -L.
      for (auto& v : inv) v = -v;
      for (auto& v : b) v = -v;
      auto neg = [&](std::span<const double> in, std::span<double> out) {
        op.apply(in, out);
        for (auto& v : out) v = -v;
      };
      kr = conjugate_gradient(neg, inv, b, x, kopt);
    } else {
      kr = bicgstab([&](std::span<const double> in, std::span<double> out) { op.apply(in, out); }, inv, b, x,
                    kopt);
    }
    tr.linear_iterations += kr.iterations;

    const bool had_mismatch = ev.mismatch > 0.0;
    double t = s.damping;
    bool accepted = false;
    NewtonEvaluation next;
    for (int half = 0; half <= kMaxHalvings; ++half, t *= 0.5) {
      for (std::size_t i = 0; i < d.size(); ++i) trial[i] = u[i] + t * (x[i] + db[i]);
      if (t == 1.0)
        for (std::size_t i : d.boundary()) trial[i] = p.psi[i];
      next = newton_evaluate(p, trial, &op);
      if (next.violations == 0 && (had_mismatch || next.residual <= ev.residual)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // The coefficients in op belong to the last rejected trial; the caller
      // only sees u, which is unchanged.
      throw SolverError(fmt::format("line search failed after {} halvings at iteration {} (residual {:.3e})",
                                    kMaxHalvings, tr.iterations, ev.residual));
    }
    u.swap(trial);
    ev = std::move(next);
    tr.residual.push_back(ev.residual);
    tr.step.push_back(t);
    tr.violations.push_back(ev.violations);
  }
  if (!tr.converged) tr.converged = ev.residual <= s.tol && ev.mismatch == 0.0;
  return tr;
}

}  // namespace hesslab
