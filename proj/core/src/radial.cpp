#include "hesslab/radial.hpp"

#include <cmath>
#include <vector>

#include "hesslab/error.hpp"

namespace hesslab {

namespace radial {

RadialProfile quadratic(double c) {
  return {"quad", [c](double t) { return c * t; }, [c](double) { return c; }, [](double) { return 0.0; }};
}

RadialProfile log_modulus() {
  return {"log", [](double t) { return 0.5 * std::log(t); }, [](double t) { return 0.5 / t; },
          [](double t) { return -0.5 / (t * t); }};
}

RadialProfile green(int n, int m) {
  if (m < 1 || m > n) throw DomainError("green: need 1 <= m <= n");
  if (m == n) {
    return {"G", [](double t) { return std::log(t); }, [](double t) { return 1.0 / t; },
            [](double t) { return -1.0 / (t * t); }};
  }
  const double e = 1.0 - static_cast<double>(n) / m;  // negative
  return {"G", [e](double t) { return -std::pow(t, e); }, [e](double t) { return -e * std::pow(t, e - 1.0); },
          [e](double t) { return -e * (e - 1.0) * std::pow(t, e - 2.0); }};
}

}  // namespace radial

Spectrum radial_hessian_eigenvalues(const RadialProfile& p, double t, int n) {
  if (!(t > 0.0)) throw DomainError("radial_hessian_eigenvalues: t must be positive");
  if (n < 1) throw DomainError("radial_hessian_eigenvalues: n must be positive");
  const double d1 = p.dg(t);
  std::vector<double> v(n, d1);
  v[n - 1] = d1 + t * p.d2g(t);
  return Spectrum(std::move(v));
}

double radial_sigma(const RadialProfile& p, double t, int n, int m) {
  const double d1 = p.dg(t);
  const double last = d1 + t * p.d2g(t);
  return binomial(n - 1, m) * std::pow(d1, m) + binomial(n - 1, m - 1) * std::pow(d1, m - 1) * last;
}

GridField sample_radial(DomainPtr domain, const RadialProfile& p, std::span<const double> center) {
  std::vector<double> c(domain->axes(), 0.0);
  for (std::size_t a = 0; a < center.size() && a < c.size(); ++a) c[a] = center[a];
  return GridField::sample(std::move(domain), [&](std::span<const double> x) {
    double t = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) t += (x[a] - c[a]) * (x[a] - c[a]);
    return p.g(t);
  });
}

}  // namespace hesslab
