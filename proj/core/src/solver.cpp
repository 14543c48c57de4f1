#include "hesslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "hesslab/error.hpp"
#include "hesslab/krylov.hpp"
#include "hesslab/newton.hpp"
#include "hesslab/parallel.hpp"
#include "hesslab/stencil_operator.hpp"

namespace hesslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

NewtonSettings settings_from(const SolveConfig& cfg) {
  NewtonSettings s;
  s.max_iter = cfg.max_iter;
  s.tol = cfg.tol_residual;
  s.damping = cfg.damping;
  s.linear_tol = cfg.linear_tol;
  s.max_linear_iter = cfg.max_linear_iter;
  return s;
}

void validate_config(const SolveConfig& cfg) {
  if (!(cfg.tol_residual > 0.0)) throw DomainError("tol_residual must be positive");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw DomainError("damping must lie in (0,1]");
  if (cfg.max_iter < 1) throw DomainError("max_iter must be positive");
  if (cfg.admissibility_margin < 0.0) throw DomainError("admissibility_margin must be nonnegative");
}

// Final iterates are certified against the closed cone: S_k >= -(delta + tol).
// The residual tolerance absorbs rounding where the density vanishes.
double certificate_slack(const SolveConfig& cfg) { return cfg.admissibility_margin + cfg.tol_residual; }

std::vector<double> roots_of(const GridField& f, int m) {
  std::vector<double> r(f.size(), 0.0);
  for (std::size_t i : f.domain().interior()) r[i] = m == 1 ? f[i] : std::pow(f[i], 1.0 / m);
  return r;
}

// Values of phi at every inside point: phi itself when it is finite on the
// interior, otherwise the discrete harmonic extension of its boundary values.
std::vector<double> extend_boundary(const GridField& phi) {
  const GridDomain& d = phi.domain();
  bool finite = true;
  for (std::size_t i : d.interior()) finite = finite && std::isfinite(phi[i]);
  if (finite) return std::vector<double>(phi.values().begin(), phi.values().end());
  GridField zero(phi.domain_ptr(), 0.0);
  GridField h = poisson_dirichlet(zero, phi);
  return std::vector<double>(h.values().begin(), h.values().end());
}

struct Stage {
  std::vector<double> f_root;
  std::vector<double> psi;
};

void finish_report(SolveReport& rep, const DomainPtr& dom, const std::vector<double>& u, int m, const Stage& target,
                   const SolveConfig& cfg) {
  rep.solution = GridField(dom);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (dom->is_inside(i)) rep.solution[i] = u[i];
  NewtonProblem p{dom, m, target.f_root, target.psi};
  const NewtonEvaluation ev = newton_evaluate(p, u, nullptr);
  rep.final_residual = ev.residual;
  rep.final_violations =
      static_cast<int>(msh_certificate(rep.solution, m, certificate_slack(cfg)).size());
  rep.converged = rep.converged && ev.residual <= cfg.tol_residual && rep.final_violations == 0 && ev.mismatch == 0.0;
}

// Continuation from an admissible u (stage 0 data read off u itself) to the
// target data.
void continue_to(const DomainPtr& dom, int m, std::vector<double>& u, const Stage& target, const SolveConfig& cfg,
                 SolveReport& rep) {
  const GridDomain& d = *dom;
  NewtonProblem p0{dom, m, std::vector<double>(d.size(), 0.0), std::vector<double>(d.size(), 0.0)};
  // Stage 0 densities: S_m(Hu)^{1/m} = F + f_root with f_root = 0.
  const NewtonEvaluation e0 = newton_evaluate(p0, u, nullptr);
  if (e0.violations > 0) throw SolverError("continuation start is not admissible");
  Stage start{std::vector<double>(d.size(), 0.0), std::vector<double>(d.size(), 0.0)};
  for (std::size_t k = 0; k < d.interior().size(); ++k) start.f_root[d.interior()[k]] = e0.F[k];
  for (std::size_t i : d.boundary()) start.psi[i] = u[i];

  double scale = 0.0;
  for (std::size_t i : d.interior()) scale = std::max(scale, std::abs(target.f_root[i]));
  const double stage_tol = std::max(cfg.tol_residual, cfg.stage_tol * (1.0 + scale));

  NewtonSettings s = settings_from(cfg);
  double t = 0.0, dt = 1.0;
  while (t < 1.0) {
    const double tn = std::min(1.0, t + dt);
    const bool last = tn >= 1.0;
    NewtonProblem p{dom, m, target.f_root, target.psi};
    if (!last) {
      for (std::size_t i = 0; i < d.size(); ++i) {
        p.f_root[i] = (1.0 - tn) * start.f_root[i] + tn * target.f_root[i];
        p.psi[i] = (1.0 - tn) * start.psi[i] + tn * target.psi[i];
      }
    }
    s.tol = last ? cfg.tol_residual : stage_tol;
    s.max_iter = last ? cfg.max_iter : std::min(cfg.max_iter, 12);
    std::vector<double> trial = u;
    bool ok = false;
    NewtonTrace tr;
    try {
      tr = newton_dirichlet(p, trial, s);
      ok = tr.converged || (last && tr.iterations >= s.max_iter);
    } catch (const SolverError&) {
      ok = false;
    }
    rep.wall_iterations += tr.iterations;
    rep.linear_iterations += tr.linear_iterations;
    if (!ok) {
      dt *= 0.5;
      if (dt < cfg.min_stage_step) {
        throw SolverError(fmt::format("continuation stalled at t = {:.6g}: admissibility could not be kept", t));
      }
      continue;
    }
    u.swap(trial);
    t = tn;
    ++rep.stages;
    dt = std::min(2.0 * dt, 1.0);
    if (last) {
      rep.residual_history = tr.residual;
      rep.step_history = tr.step;
      rep.admissibility = tr.violations;
      rep.converged = tr.converged;
    }
  }
}

std::vector<double> initial_guess(const GridField& phi, int m, const std::vector<double>& f_root) {
  const GridDomain& d = phi.domain();
  std::vector<double> ext = extend_boundary(phi);
  if (m == 1) return ext;
  // Centroid and mean squared boundary radius.
  const int ax = d.axes();
  std::vector<double> z0(ax, 0.0), x(ax);
  std::size_t count = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.is_inside(i)) continue;
    d.coords(i, x);
    for (int a = 0; a < ax; ++a) z0[a] += x[a];
    ++count;
  }
  for (auto& v : z0) v /= static_cast<double>(count);
  std::vector<double> q(d.size(), 0.0);
  double c = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.is_inside(i)) continue;
    d.coords(i, x);
    for (int a = 0; a < ax; ++a) q[i] += (x[a] - z0[a]) * (x[a] - z0[a]);
  }
  for (std::size_t i : d.boundary()) c += q[i];
  if (!d.boundary().empty()) c /= static_cast<double>(d.boundary().size());

  double fmin = kInf;
  for (std::size_t i : d.interior()) fmin = std::min(fmin, f_root[i]);
  NewtonProblem p{phi.domain_ptr(), m, std::vector<double>(d.size(), 0.0), std::vector<double>(d.size(), 0.0)};
  std::vector<double> u(d.size());
  for (double a = 0.0; a <= 1.1e9; a = a == 0.0 ? 1.0 : 2.0 * a) {
    for (std::size_t i = 0; i < d.size(); ++i) u[i] = d.is_inside(i) ? ext[i] + a * (q[i] - c) : 0.0;
    const NewtonEvaluation ev = newton_evaluate(p, u, nullptr);
    if (ev.violations > 0) continue;
    double low = kInf;
    for (double v : ev.F) low = std::min(low, v);
    if (low >= 0.5 * fmin) return u;
  }
  throw SolverError("no admissible starting guess found");
}

SolveReport solve_positive(const GridField& f, const GridField& phi, int m, const SolveConfig& cfg,
                           const std::vector<double>* warm) {
  const DomainPtr& dom = phi.domain_ptr();
  const GridDomain& d = *dom;
  Stage target{roots_of(f, m), std::vector<double>(d.size(), 0.0)};
  for (std::size_t i : d.boundary()) target.psi[i] = phi[i];
  SolveReport rep;
  std::vector<double> u;
  if (warm) {
    u = *warm;
    try {
      NewtonProblem p{dom, m, target.f_root, target.psi};
      NewtonTrace tr = newton_dirichlet(p, u, settings_from(cfg));
      rep.wall_iterations += tr.iterations;
      rep.linear_iterations += tr.linear_iterations;
      rep.residual_history = tr.residual;
      rep.step_history = tr.step;
      rep.admissibility = tr.violations;
      rep.converged = tr.converged;
      rep.stages = 1;
      finish_report(rep, dom, u, m, target, cfg);
      return rep;
    } catch (const SolverError&) {
      u = *warm;
    }
  } else {
    u = initial_guess(phi, m, target.f_root);
  }
  continue_to(dom, m, u, target, cfg, rep);
  finish_report(rep, dom, u, m, target, cfg);
  return rep;
}

void check_dirichlet_inputs(const GridField& f, const GridField& phi, int m) {
  const GridDomain& d = phi.domain();
  if (d.kind() == DomainKind::torus) throw DomainError("solve_dirichlet: use solve_torus on a torus");
  if (!f.domain().same_grid(d)) throw DomainError("solve_dirichlet: f and phi live on different grids");
  if (m < 1 || m > d.n()) throw DomainError("solve_dirichlet: m out of range");
  if (d.interior().empty()) throw DomainError("solve_dirichlet: domain has no interior points");
  for (std::size_t i : d.interior()) {
    if (!std::isfinite(f[i])) throw DomainError("solve_dirichlet: f is not finite on the interior");
    if (f[i] < 0.0) throw DomainError("solve_dirichlet: f must be nonnegative");
  }
  for (std::size_t i : d.boundary()) {
    if (!std::isfinite(phi[i])) throw DomainError("solve_dirichlet: phi is not finite on the boundary");
  }
}

std::vector<double> lift_levels(double top, const SolveConfig& cfg) {
  if (!cfg.degenerate_lift.empty()) return cfg.degenerate_lift;
  std::vector<double> out;
  for (double e = top; e >= cfg.lift_min * top * (1.0 - 1e-12); e *= 0.5) out.push_back(e);
  return out;
}

SolveReport lifted_solve(const GridField& f, const GridField& phi, int m, const SolveConfig& cfg, double top) {
  const GridDomain& d = phi.domain();
  SolveReport total;
  std::vector<double> prev;
  GridField shifted = f;
  for (double eps : lift_levels(top, cfg)) {
    if (!(eps > 0.0)) throw DomainError("lift levels must be positive");
    for (std::size_t i : d.interior()) shifted[i] = f[i] + eps;
    SolveReport r = solve_positive(shifted, phi, m, cfg, prev.empty() ? nullptr : &prev);
    std::vector<double> cur(r.solution.values().begin(), r.solution.values().end());
    if (!prev.empty()) {
      for (std::size_t i : d.interior())
        total.lift_monotonicity_defect = std::max(total.lift_monotonicity_defect, prev[i] - cur[i]);
    }
    prev = std::move(cur);
    total.lift_levels.push_back(eps);
    const int iters = total.wall_iterations + r.wall_iterations;
    const long lin = total.linear_iterations + r.linear_iterations;
    const int stages = total.stages + r.stages;
    auto levels = std::move(total.lift_levels);
    const double defect = total.lift_monotonicity_defect;
    total = std::move(r);
    total.wall_iterations = iters;
    total.linear_iterations = lin;
    total.stages = stages;
    total.lift_levels = std::move(levels);
    total.lift_monotonicity_defect = defect;
  }
  return total;
}

}  // namespace

SolveReport solve_dirichlet(const GridField& f, const GridField& phi, int m, const SolveConfig& cfg) {
  validate_config(cfg);
  check_dirichlet_inputs(f, phi, m);
  if (m >= 2) {
    double fmin = kInf, fmax = 0.0;
    for (std::size_t i : phi.domain().interior()) {
      fmin = std::min(fmin, f[i]);
      fmax = std::max(fmax, f[i]);
    }
    if (fmin <= 0.0) return lifted_solve(f, phi, m, cfg, fmax > 0.0 ? fmax : cfg.lift_start);
  }
  return solve_positive(f, phi, m, cfg, nullptr);
}

SolveReport maximal_solution(const GridField& phi, int m, const SolveConfig& cfg) {
  validate_config(cfg);
  GridField zero(phi.domain_ptr(), 0.0);
  check_dirichlet_inputs(zero, phi, m);
  if (m == 1) return solve_positive(zero, phi, m, cfg, nullptr);
  return lifted_solve(zero, phi, m, cfg, cfg.lift_start);
}

GridField poisson_dirichlet(const GridField& f, const GridField& phi, double tol) {
  const DomainPtr& dom = phi.domain_ptr();
  const GridDomain& d = *dom;
  if (d.kind() == DomainKind::torus) throw DomainError("poisson_dirichlet: torus has no boundary");
  StencilOperator op = StencilOperator::trace_laplacian(dom);
  std::vector<double> bnd(d.size(), 0.0), tmp(d.size()), b(d.size(), 0.0), x(d.size(), 0.0);
  for (std::size_t i : d.boundary()) bnd[i] = phi[i];
  op.apply(bnd, tmp);
  for (std::size_t i : d.interior()) b[i] = -(f[i] - tmp[i]);
  std::vector<double> inv = op.inverse_diagonal();
  for (auto& v : inv) v = -v;
  auto neg = [&](std::span<const double> in, std::span<double> out) {
    op.apply(in, out);
    for (auto& v : out) v = -v;
  };
  const KrylovResult kr = conjugate_gradient(neg, inv, b, x, {tol, 100000});
  if (!kr.converged) throw SolverError("poisson_dirichlet: conjugate gradients did not converge");
  GridField u(dom);
  for (std::size_t i : d.interior()) u[i] = x[i];
  for (std::size_t i : d.boundary()) u[i] = phi[i];
  return u;
}

// ---------------------------------------------------------------------------
// Flat torus. Unknowns are u and a scalar c with
//   S_m(lambda(I + Hu))^{1/m} = e^{c/m} f~^{1/m},   mean(u) = 0.
// The scalar absorbs the small discrete defect of the total mass identity.

namespace {

struct TorusEval {
  std::vector<double> F, scale;
  double residual = 0.0;
  int violations = 0;
};

TorusEval torus_evaluate(const GridDomain& d, int m, const std::vector<double>& u, const std::vector<double>& froot,
                         double c, StencilOperator* op) {
  const int n = d.n();
  const std::size_t N = d.size();
  TorusEval ev;
  ev.F.assign(N, 0.0);
  ev.scale.assign(N, 1.0);
  std::vector<std::uint8_t> bad(N, 0);
  const double ec = std::exp(c / m);
  const HermitianMatrix id = HermitianMatrix::identity(n);
  par::for_each(N, [&](std::size_t i) {
    const HermitianMatrix hm = id + hessian_at(d, u, i);
    double lam[HermitianMatrix::kMaxDim], s[HermitianMatrix::kMaxDim + 1];
    eigvals_into(hm, std::span<double>(lam, n));
    symm::elem_sym_all(std::span<const double>(lam, n), m, std::span<double>(s, m + 1));
    for (int j = 1; j <= m; ++j) {
      if (!(s[j] > 0.0)) {
        bad[i] = 1;
        ev.F[i] = kInf;
        return;
      }
    }
    const double root = std::pow(s[m], 1.0 / m);
    ev.F[i] = root - ec * froot[i];
    ev.scale[i] = root / (m * s[m]);
    if (op) op->set_from_hermitian(i, cominor_from_sums(hm, m, std::span<const double>(s, m + 1)));
  });
  for (std::size_t i = 0; i < N; ++i) {
    ev.violations += bad[i];
    ev.residual = std::max(ev.residual, std::abs(ev.F[i]));
  }
  return ev;
}

}  // namespace

SolveReport solve_torus(const GridField& f, int m, const SolveConfig& cfg) {
  validate_config(cfg);
  const DomainPtr& dom = f.domain_ptr();
  const GridDomain& d = *dom;
  if (d.kind() != DomainKind::torus) throw DomainError("solve_torus: domain must be a torus");
  if (m < 1 || m > d.n()) throw DomainError("solve_torus: m out of range");
  const std::size_t N = d.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::isfinite(f[i]) || f[i] < 0.0) throw DomainError("solve_torus: f must be finite and nonnegative");
    mean += f[i];
  }
  mean /= static_cast<double>(N);
  if (!(mean > 0.0)) throw DomainError("solve_torus: f vanishes identically; cannot normalize");
  const double cnm = binomial(d.n(), m);
  std::vector<double> froot(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double ft = cnm * f[i] / mean;
    if (m >= 2 && !(ft > 0.0)) throw DomainError("solve_torus: f must be positive for m >= 2");
    froot[i] = std::pow(ft, 1.0 / m);
  }

  SolveReport rep;
  std::vector<double> u(N, 0.0), trial(N), x(N + 1), b(N + 1), tmp(N);
  double c = 0.0;
  StencilOperator op(dom);
  TorusEval ev = torus_evaluate(d, m, u, froot, c, &op);
  rep.residual_history.push_back(ev.residual);
  rep.step_history.push_back(0.0);
  rep.admissibility.push_back(ev.violations);
  const KrylovOptions kopt{cfg.linear_tol, cfg.max_linear_iter};
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (ev.residual <= cfg.tol_residual) {
      rep.converged = true;
      break;
    }
    // Bordered system in (du, dc), rows divided by the Jacobian scale:
    //   L du + g dc = -F/scale,   mean(du) = -mean(u).
    std::vector<double> g(N);
    const double ec = std::exp(c / m);
    for (std::size_t i = 0; i < N; ++i) {
      g[i] = -(ec * froot[i] / m) / ev.scale[i];
      b[i] = -ev.F[i] / ev.scale[i];
    }
    b[N] = -par::sum(u) / static_cast<double>(N);
    std::vector<double> inv = op.inverse_diagonal();
    inv.push_back(1.0);
    auto mat = [&](std::span<const double> in, std::span<double> out) {
      op.apply(in.first(N), out.first(N));
      const double dc = in[N];
      for (std::size_t i = 0; i < N; ++i) out[i] += g[i] * dc;
      out[N] = par::sum(in.first(N)) / static_cast<double>(N);
    };
    std::fill(x.begin(), x.end(), 0.0);
    const KrylovResult kr = bicgstab(mat, inv, b, x, kopt);
    rep.linear_iterations += kr.iterations;
    ++rep.wall_iterations;

    double t = cfg.damping;
    bool accepted = false;
    TorusEval next;
    for (int half = 0; half <= 30; ++half, t *= 0.5) {
      for (std::size_t i = 0; i < N; ++i) trial[i] = u[i] + t * x[i];
      next = torus_evaluate(d, m, trial, froot, c + t * x[N], &op);
      if (next.violations == 0 && next.residual <= ev.residual) {
        accepted = true;
        break;
      }
    }
    if (!accepted) throw SolverError(fmt::format("torus line search failed at iteration {}", it));
    u.swap(trial);
    c += t * x[N];
    ev = std::move(next);
    rep.residual_history.push_back(ev.residual);
    rep.step_history.push_back(t);
    rep.admissibility.push_back(ev.violations);
  }
  if (!rep.converged) rep.converged = ev.residual <= cfg.tol_residual;
  const double top = *std::max_element(u.begin(), u.end());
  rep.solution = GridField(dom);
  for (std::size_t i = 0; i < N; ++i) rep.solution[i] = u[i] - top;
  rep.kappa = std::exp(c);
  rep.final_residual = ev.residual;
  rep.final_violations = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const HermitianMatrix hm = HermitianMatrix::identity(d.n()) + hessian_at(d, rep.solution.values(), i);
    double lam[HermitianMatrix::kMaxDim];
    eigvals_into(hm, std::span<double>(lam, d.n()));
    rep.final_violations += !symm::in_cone(std::span<const double>(lam, d.n()), m, -certificate_slack(cfg));
  }
  rep.converged = rep.converged && rep.final_violations == 0;
  return rep;
}

void write_iteration_csv(std::ostream& os, const SolveReport& r) {
  os << "iter,residual,step,violations\n";
  for (std::size_t k = 0; k < r.residual_history.size(); ++k) {
    os << fmt::format("{},{:.17g},{:.17g},{}\n", k, r.residual_history[k],
                      k < r.step_history.size() ? r.step_history[k] : 0.0,
                      k < r.admissibility.size() ? r.admissibility[k] : 0);
  }
}

double dirichlet_residual(const GridField& u, const GridField& f, int m) {
  const GridDomain& d = u.domain();
  const int n = d.n();
  const bool torus = d.kind() == DomainKind::torus;
  double r = 0.0;
  for (std::size_t i : d.interior()) {
    HermitianMatrix hm = hessian_at(d, u.values(), i);
    if (torus) hm += HermitianMatrix::identity(n);
    double lam[HermitianMatrix::kMaxDim], s[HermitianMatrix::kMaxDim + 1];
    eigvals_into(hm, std::span<double>(lam, n));
    symm::elem_sym_all(std::span<const double>(lam, n), m, std::span<double>(s, m + 1));
    if (m >= 2 && !(s[m] > 0.0)) return kInf;
    const double lhs = m == 1 ? s[1] : std::pow(s[m], 1.0 / m);
    const double rhs = m == 1 ? f[i] : std::pow(f[i], 1.0 / m);
    r = std::max(r, std::abs(lhs - rhs));
  }
  return r;
}

}  // namespace hesslab
