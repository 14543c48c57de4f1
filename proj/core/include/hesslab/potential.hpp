#pragma once

// Capacities, scaling-law fits and the measurements behind the stability,
// comparison and interior estimates. Hessian masses are form-normalized
// unless a function says otherwise.

#include <span>
#include <vector>

#include "hesslab/field.hpp"
#include "hesslab/solver.hpp"
#include "hesslab/symmfunc.hpp"

namespace hesslab {

struct CapacityEstimate {
  double lower = 0.0;     // best candidate value
  double extremal = 0.0;  // mass of the relative extremal function on K
  GridDomain::Mask K;
  DomainPtr omega;
  int m = 1;
  Normalization normalization = Normalization::form;
};

struct ExponentFit {
  std::vector<std::pair<double, double>> samples;  // (log x, log y)
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool reliable() const { return r2 >= 0.9; }
};

/// Least squares of log y against log x; x, y > 0.
ExponentFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Discrete relative extremal function: -1 on K, 0 on the boundary of omega,
/// maximal (sigma_m = 0, through the lift for m >= 2) elsewhere, projected
/// onto [-1, 0]. K must consist of interior points of omega.
GridField extremal_function(const GridDomain::Mask& K, DomainPtr omega, int m, const SolveConfig& cfg = {});

/// Form-normalized Hessian mass of u on the flagged interior points.
double hessian_mass(const GridField& u, int m, const GridDomain::Mask& region);

CapacityEstimate capacity(const GridDomain::Mask& K, DomainPtr omega, int m, const SolveConfig& cfg = {});

struct FrontierFit {
  double p = 0.0;
  ExponentFit fit;         // log V against log cap
  double max_ratio = 0.0;  // max V / cap^p over the family: the empirical C(p)
};

/// Capacities and volumes of every K, then one fit per exponent p.
std::vector<FrontierFit> volume_capacity_frontier(const std::vector<GridDomain::Mask>& Ks, DomainPtr omega, int m,
                                                  std::span<const double> ps, const SolveConfig& cfg = {});

/// lhs = sum over {u < v} of sigma_m(v) h^{2n}, rhs = the same for u (raw sigma_m).
/// Requires u >= v on the boundary.
Pairing comparison_check(const GridField& u, const GridField& v, int m);

struct StabilityMeasure {
  double sup_difference = 0.0;  // left-hand side
  double bound = 0.0;           // norm term raised to its exponent
  double ratio = 0.0;           // sup_difference / bound (0 when bound = 0)
  double exponent = 0.0;
};

/// sup(u_g - u_f) - sup_boundary(u_g - u_f) against ||f - g||_q^{1/m}. Needs q > n/m.
StabilityMeasure stability_density(const GridField& u_f, const GridField& u_g, const GridField& f,
                                   const GridField& g, int m, double q);

/// sup(v - u) against ||(v - u)_+||_{q'}^{p/(n + p(m+1))} with q' = q/(q-1),
/// p = p'/q'. Needs q > n/m and q' < p' < n/(n-m).
StabilityMeasure stability_norm(const GridField& u, const GridField& v, int m, double q, double p_prime);

struct ModulusTable {
  std::vector<int> steps;                  // separations in grid steps
  std::vector<std::vector<double>> moduli; // per solution, per step
  std::vector<double> shared;              // max over the family
  bool decays = false;                     // shared at 4h below shared at 16h
};

/// Worst axis-aligned oscillation |u(x) - u(x + s e_a)| over interior pairs.
double oscillation(const GridField& u, int steps);

/// Solves sigma_m(u) = f for each f with the same boundary data.
ModulusTable equicontinuity_probe(const std::vector<GridField>& fs, const GridField& phi, int m,
                                  const SolveConfig& cfg = {});

struct InteriorBound {
  double sup_t = 0.0;   // sup of T_eps u over the subdomain
  double defect = 0.0;  // min of tr(cominor(Hu) H(T_eps u)) over the subdomain
  double c1 = 0.0;      // max(0, -min m psi^{(m-1)/m} T_eps(psi^{1/m}))
  std::size_t points = 0;
};

/// psi is the density of u (positive, sampled on u's domain); `sub` flags the
/// subdomain.
InteriorBound interior_laplacian_bound(const GridField& u, const GridField& psi, int m, double eps,
                                       const GridDomain::Mask& sub);

}  // namespace hesslab
