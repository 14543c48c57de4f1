#pragma once

// Functions of t = |z|^2 and the exact eigenvalues of their complex Hessians.

#include <functional>
#include <limits>
#include <span>
#include <string>

#include "hesslab/field.hpp"
#include "hesslab/symmfunc.hpp"

namespace hesslab {

struct RadialProfile {
  std::string label;
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  /// Max ODE residual for profiles produced by solve_radial; NaN otherwise.
  double ode_residual = std::numeric_limits<double>::quiet_NaN();
};

namespace radial {

/// c t, i.e. c|z|^2.
RadialProfile quadratic(double c);
/// (1/2) log t, i.e. log|z|.
RadialProfile log_modulus();
/// -t^{1-n/m}, i.e. -|z|^{2-2n/m}; for m = n this is log t.
RadialProfile green(int n, int m);

}  // namespace radial

/// g'(t) with multiplicity n-1 and g'(t) + t g''(t) once, sorted descending.
Spectrum radial_hessian_eigenvalues(const RadialProfile& p, double t, int n);

/// sigma_m of the Hessian of g(|z|^2):
///   C(n-1,m) g'^m + C(n-1,m-1) g'^{m-1} (g' + t g'').
double radial_sigma(const RadialProfile& p, double t, int n, int m);

/// g(|x - center|^2) at the inside points; center defaults to 0.
GridField sample_radial(DomainPtr domain, const RadialProfile& p, std::span<const double> center = {});

}  // namespace hesslab
