#pragma once

// Named function constructors shared by the CLI and the experiments:
//   const:c     c
//   quad:c      c |z|^2
//   harm:c      c Re(z_1^2) = c (x_1^2 - y_1^2)
//   radial:G    -|z|^{2-2n/m}   (log|z|^2 when m = n)
//   radial:log  log|z|
//   bump:a,r    a (1 - |z|^2/r^2)^3 inside |z| < r, else 0
//   sing:a      |z|^{-a}
//   cosx:a      C(n,m) (1 + a cos(2 pi x_1))

#include <string>

#include "hesslab/field.hpp"

namespace hesslab {

struct FieldFunction {
  std::string spec;
  GridField::Fn eval;
  bool singular_at_origin = false;
};

/// Throws DomainError on an unknown name or malformed parameters.
FieldFunction parse_function(const std::string& spec, int n, int m);

/// Samples the function; singular ones are sampled on the domain with the
/// closed ball of radius `exclusion` (default 1.5h) around 0 removed.
GridField sample_function(DomainPtr domain, const FieldFunction& fn, double exclusion = -1.0);

/// Density for the solvers on the whole domain. Singular functions are
/// evaluated with |z| floored at h and then mollified at radius 2h wherever the
/// mollifier fits; regular functions are sampled as they are.
GridField density_field(DomainPtr domain, const FieldFunction& fn);

}  // namespace hesslab
