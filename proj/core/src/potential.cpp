#include "hesslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hesslab/error.hpp"
#include "hesslab/parallel.hpp"

namespace hesslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pointwise tolerance for accepting a candidate as admissible.
constexpr double kCandidateTol = 1e-7;

void check_K(const GridDomain::Mask& K, const GridDomain& omega) {
  if (K.size() != omega.size()) throw DomainError("compact set mask does not match the grid");
  bool any = false;
  for (std::size_t i = 0; i < K.size(); ++i) {
    if (!K[i]) continue;
    if (!omega.is_interior(i)) throw DomainError("compact set touches the boundary of the domain");
    any = true;
  }
  if (!any) throw DomainError("compact set is empty");
}

double max_over(const GridField& w, const std::vector<std::size_t>& pts) {
  double r = -kInf;
  for (std::size_t i : pts) r = std::max(r, w[i]);
  return r;
}

}  // namespace

ExponentFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw DomainError("fit_loglog: need matching, nonempty samples");
  ExponentFit f;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0 && y[k] > 0.0)) throw DomainError("fit_loglog: samples must be positive");
    f.samples.emplace_back(std::log(x[k]), std::log(y[k]));
  }
  const double N = static_cast<double>(f.samples.size());
  double mx = 0.0, my = 0.0;
  for (auto [a, b] : f.samples) {
    mx += a;
    my += b;
  }
  mx /= N;
  my /= N;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [a, b] : f.samples) {
    sxx += (a - mx) * (a - mx);
    sxy += (a - mx) * (b - my);
    syy += (b - my) * (b - my);
  }
  if (f.samples.size() < 2 || sxx == 0.0) {
    f.intercept = my;
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sres = 0.0;
  for (auto [a, b] : f.samples) {
    const double e = b - (f.intercept + f.slope * a);
    sres += e * e;
  }
  f.r2 = syy > 0.0 ? std::clamp(1.0 - sres / syy, 0.0, 1.0) : 1.0;
  return f;
}

GridField extremal_function(const GridDomain::Mask& K, DomainPtr omega, int m, const SolveConfig& cfg) {
  check_K(K, *omega);
  if (m < 1 || m > omega->n()) throw DomainError("extremal_function: m out of range");
  DomainPtr pinned = share(omega->pinned(K));
  GridField out(omega, 0.0);
  for (std::size_t i = 0; i < K.size(); ++i)
    if (K[i]) out[i] = -1.0;
  if (pinned->interior().empty()) return out;

  // Interior values NaN: the solver starts from the harmonic extension.
  GridField phi(pinned, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i : pinned->boundary()) phi[i] = K[i] ? -1.0 : 0.0;
  GridField u;
  if (m == 1) {
    u = poisson_dirichlet(GridField(pinned, 0.0), phi);
  } else {
    SolveReport r = maximal_solution(phi, m, cfg);
    u = std::move(r.solution);
  }
  for (std::size_t i : omega->interior())
    if (!K[i]) out[i] = std::clamp(u[i], -1.0, 0.0);
  return out;
}

double hessian_mass(const GridField& u, int m, const GridDomain::Mask& region) {
  const GridDomain& d = u.domain();
  if (region.size() != d.size()) throw DomainError("hessian_mass: mask does not match the grid");
  const GridField dens = hessian_density(u, m, Normalization::form);
  std::vector<double> vals;
  vals.reserve(d.interior().size());
  for (std::size_t i : d.interior())
    if (region[i]) vals.push_back(dens[i]);
  return par::sum(vals) * std::pow(d.h(), d.axes());
}

CapacityEstimate capacity(const GridDomain::Mask& K, DomainPtr omega, int m, const SolveConfig& cfg) {
  CapacityEstimate est;
  const GridField u = extremal_function(K, omega, m, cfg);
  est.K = K;
  est.omega = omega;
  est.m = m;
  est.extremal = hessian_mass(u, m, K);

  const GridDomain& d = *omega;
  const int ax = d.axes();
  // Quadratic candidate (|z - z_K|^2 - rho^2) / rho^2 with rho the largest
  // distance from the centroid of K to the domain. Its discrete Hessian is exact.
  std::vector<double> c(ax, 0.0), x(ax);
  std::size_t count = 0;
  for (std::size_t i = 0; i < K.size(); ++i) {
    if (!K[i]) continue;
    d.coords(i, x);
    for (int a = 0; a < ax; ++a) c[a] += x[a];
    ++count;
  }
  for (auto& v : c) v /= static_cast<double>(count);
  double rho2 = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.is_inside(i)) continue;
    d.coords(i, x);
    double r2 = 0.0;
    for (int a = 0; a < ax; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    rho2 = std::max(rho2, r2);
  }
  est.lower = mask_volume(d, K) * std::pow(rho2, -m);

  auto consider = [&](const GridField& w) {
    if (!msh_certificate(w, m, kCandidateTol).empty()) return;
    est.lower = std::max(est.lower, hessian_mass(w, m, K));
  };
  consider(u);
  for (double t : {1.25, 1.5, 2.0}) {
    GridField w = u;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (d.is_inside(i)) w[i] = std::max(t * u[i], -1.0);
    consider(w);
  }
  return est;
}

std::vector<FrontierFit> volume_capacity_frontier(const std::vector<GridDomain::Mask>& Ks, DomainPtr omega, int m,
                                                  std::span<const double> ps, const SolveConfig& cfg) {
  if (Ks.empty()) throw DomainError("volume_capacity_frontier: empty family");
  std::vector<double> caps, vols;
  for (const auto& K : Ks) {
    caps.push_back(capacity(K, omega, m, cfg).extremal);
    vols.push_back(mask_volume(*omega, K));
    if (!(caps.back() > 0.0) || !std::isfinite(caps.back()))
      throw SolverError("volume_capacity_frontier: capacity is not a positive finite number");
  }
  std::vector<FrontierFit> out;
  for (double p : ps) {
    FrontierFit ff;
    ff.p = p;
    ff.fit = fit_loglog(caps, vols);
    for (std::size_t k = 0; k < caps.size(); ++k)
      ff.max_ratio = std::max(ff.max_ratio, vols[k] / std::pow(caps[k], p));
    if (!std::isfinite(ff.max_ratio)) throw SolverError("volume_capacity_frontier: ratio is not finite");
    out.push_back(std::move(ff));
  }
  return out;
}

Pairing comparison_check(const GridField& u, const GridField& v, int m) {
  const GridDomain& d = u.domain();
  if (!d.same_grid(v.domain())) throw DomainError("comparison_check: fields live on different grids");
  double scale = 0.0;
  for (std::size_t i : d.boundary()) scale = std::max({scale, std::abs(u[i]), std::abs(v[i])});
  for (std::size_t i : d.boundary()) {
    if (u[i] < v[i] - 1e-12 * (1.0 + scale)) throw DomainError("comparison_check: u < v on the boundary");
  }
  const GridField su = hessian_density(u, m, Normalization::raw);
  const GridField sv = hessian_density(v, m, Normalization::raw);
  std::vector<double> a, b;
  for (std::size_t i : d.interior()) {
    if (!v.domain().is_interior(i) || !(u[i] < v[i])) continue;
    a.push_back(sv[i]);
    b.push_back(su[i]);
  }
  const double vol = std::pow(d.h(), d.axes());
  return {par::sum(a) * vol, par::sum(b) * vol};
}

StabilityMeasure stability_density(const GridField& u_f, const GridField& u_g, const GridField& f,
                                   const GridField& g, int m, double q) {
  const GridDomain& d = u_f.domain();
  const int n = d.n();
  if (!(q > static_cast<double>(n) / m)) throw DomainError("stability_density: need q > n/m");
  const GridField diff = u_g - u_f;
  StabilityMeasure s;
  const double top = diff.max(Region::inside);
  const double edge = d.boundary().empty() ? 0.0 : max_over(diff, d.boundary());
  s.sup_difference = top - edge;
  s.exponent = 1.0 / m;
  GridField fg = f - g;
  s.bound = std::pow(lq_norm(fg, q, d.interior_mask()), s.exponent);
  s.ratio = s.bound > 0.0 ? s.sup_difference / s.bound : 0.0;
  return s;
}

StabilityMeasure stability_norm(const GridField& u, const GridField& v, int m, double q, double p_prime) {
  const int n = u.domain().n();
  if (!(q > static_cast<double>(n) / m)) throw DomainError("stability_norm: need q > n/m");
  const double qc = q / (q - 1.0);
  if (!(p_prime > qc)) throw DomainError("stability_norm: need p' > q'");
  if (m < n && !(p_prime < static_cast<double>(n) / (n - m))) throw DomainError("stability_norm: need p' < n/(n-m)");
  const double p = p_prime / qc;
  StabilityMeasure s;
  s.exponent = p / (n + p * (m + 1));
  GridField w = v - u;
  s.sup_difference = w.max(Region::inside);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (std::isfinite(w[i])) w[i] = std::max(w[i], 0.0);
  s.bound = std::pow(lq_norm(w, qc, u.domain().interior_mask()), s.exponent);
  s.ratio = s.bound > 0.0 ? s.sup_difference / s.bound : 0.0;
  return s;
}

double oscillation(const GridField& u, int steps) {
  const GridDomain& d = u.domain();
  const bool torus = d.kind() == DomainKind::torus;
  double r = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.is_inside(i)) continue;
    const std::vector<int> mi = d.multi_index(i);
    for (int a = 0; a < d.axes(); ++a) {
      if (!torus && mi[a] + steps >= d.shape()[a]) continue;
      const std::size_t j = d.shift(i, a, steps);
      if (!d.is_inside(j)) continue;
      r = std::max(r, std::abs(u[i] - u[j]));
    }
  }
  return r;
}

ModulusTable equicontinuity_probe(const std::vector<GridField>& fs, const GridField& phi, int m,
                                  const SolveConfig& cfg) {
  if (fs.empty()) throw DomainError("equicontinuity_probe: empty family");
  ModulusTable t;
  int longest = 0;
  for (int len : phi.domain().shape()) longest = std::max(longest, len);
  for (int s = 1; s < longest; s *= 2) t.steps.push_back(s);
  t.shared.assign(t.steps.size(), 0.0);
  for (const GridField& f : fs) {
    const SolveReport r = solve_dirichlet(f, phi, m, cfg);
    std::vector<double> row;
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
      row.push_back(oscillation(r.solution, t.steps[k]));
      t.shared[k] = std::max(t.shared[k], row.back());
    }
    t.moduli.push_back(std::move(row));
  }
  auto at = [&](int s) -> double {
    for (std::size_t k = 0; k < t.steps.size(); ++k)
      if (t.steps[k] == s) return t.shared[k];
    return std::numeric_limits<double>::quiet_NaN();
  };
  t.decays = at(4) < at(16);
  return t;
}

InteriorBound interior_laplacian_bound(const GridField& u, const GridField& psi, int m, double eps,
                                       const GridDomain::Mask& sub) {
  const GridDomain& d = u.domain();
  if (!d.same_grid(psi.domain())) throw DomainError("interior_laplacian_bound: psi lives on another grid");
  if (sub.size() != d.size()) throw DomainError("interior_laplacian_bound: mask does not match the grid");
  if (m < 1 || m > d.n()) throw DomainError("interior_laplacian_bound: m out of range");
  GridField root(u.domain_ptr(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.is_inside(i)) continue;
    if (!(psi[i] > 0.0)) throw DomainError("interior_laplacian_bound: psi must be positive");
    root[i] = std::pow(psi[i], 1.0 / m);
  }
  const GridField T = t_epsilon(u, eps);
  const GridField Tr = t_epsilon(root, eps);
  const GridDomain& td = T.domain();

  InteriorBound b;
  b.sup_t = -kInf;
  b.defect = kInf;
  double low = kInf;
  for (std::size_t i : td.interior()) {
    if (!sub[i] || !d.is_interior(i)) continue;
    const HermitianMatrix hu = hessian_at(d, u.values(), i);
    const HermitianMatrix ht = hessian_at(td, T.values(), i);
    b.defect = std::min(b.defect, trace_product(cominor_matrix(hu, m), ht));
    b.sup_t = std::max(b.sup_t, T[i]);
    low = std::min(low, m * std::pow(psi[i], (m - 1.0) / m) * Tr[i]);
    ++b.points;
  }
  if (b.points == 0) throw DomainError("interior_laplacian_bound: subdomain has no evaluable points");
  b.c1 = std::max(0.0, -low);
  return b;
}

}  // namespace hesslab
