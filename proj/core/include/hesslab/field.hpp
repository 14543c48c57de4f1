#pragma once

// Grid functions, their discrete complex Hessians, and the averaging operators.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hesslab/grid.hpp"
#include "hesslab/hermlin.hpp"

namespace hesslab {

/// raw: sigma_m itself. form: the density of (dd^c u)^m ^ beta^{n-m} against
/// beta^n, i.e. sigma_m * m!(n-m)!/n!.
enum class Normalization { raw, form };

std::string to_string(Normalization k);
double form_factor(int n, int m);

enum class Region { interior, inside };

/// Real values on a grid; exterior points hold NaN.
class GridField {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  GridField() = default;
  explicit GridField(DomainPtr domain, double fill = 0.0);

  /// fn(x) at every inside point.
  static GridField sample(DomainPtr domain, const Fn& fn);

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Extremes over interior or inside points.
  double max(Region r = Region::inside) const;
  double min(Region r = Region::inside) const;

  /// Copy of this field on another domain over the same grid; points that
  /// become exterior are set to NaN.
  GridField on(DomainPtr domain) const;

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double s);
  GridField& operator+=(double c);
  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(double s, GridField a) { return a *= s; }

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

// Packed index of the symmetric pair (a,b), a <= b, among 2n axes.
inline int sym_index(int a, int b, int axes) { return a * axes - a * (a - 1) / 2 + (b - a); }
inline int sym_count(int axes) { return axes * (axes + 1) / 2; }

/// Central second differences D_ab u at grid point i, packed by sym_index.
/// Pure axes use the 3-point stencil, mixed pairs the 4-point cross stencil.
void second_differences(const GridDomain& d, std::span<const double> u, std::size_t i, std::span<double> out);

/// u_{z_j zbar_k} = 1/4 [(D_{x_j x_k} + D_{y_j y_k}) + i (D_{x_j y_k} - D_{y_j x_k})].
HermitianMatrix hessian_from_differences(int n, std::span<const double> dd);

HermitianMatrix hessian_at(const GridDomain& d, std::span<const double> u, std::size_t i);

/// Complex Hessian at every interior point, stored as packed real numbers.
class HessianField {
 public:
  explicit HessianField(DomainPtr domain);

  const GridDomain& domain() const { return *domain_; }
  std::size_t count() const { return domain_->interior().size(); }
  /// Grid index of the k-th interior point.
  std::size_t point(std::size_t k) const { return domain_->interior()[k]; }
  HermitianMatrix matrix(std::size_t k) const;
  void set(std::size_t k, const HermitianMatrix& m);

 private:
  DomainPtr domain_;
  std::vector<double> packed_;  // n*n reals per point: diagonal, then Re/Im of the upper part
};

HessianField complex_hessian(const GridField& u);

/// S_m of the Hessian eigenvalues. The result lives on the interior points of
/// u's domain (a restricted domain over the same grid).
GridField hessian_density(const GridField& u, int m, Normalization norm = Normalization::raw);

/// Interior points whose Hessian eigenvalues fail S_k > -tol for some k <= m.
std::vector<std::size_t> msh_certificate(const GridField& u, int m, double tol);

/// Lattice offsets with |o| h <= eps and their mean squared length in physical units.
struct BallStencil {
  std::vector<std::vector<int>> offsets;
  double second_moment = 0.0;
};
BallStencil ball_stencil(int n, double h, double eps);

/// Mean over the lattice ball of radius eps. The result lives on the points whose
/// whole stencil is inside u's domain. Requires eps >= 2h.
GridField ball_average(const GridField& u, double eps);

/// Radius whose continuous ball has the lattice ball's second moment,
/// eps_eff^2 = (n+1)/n * second_moment.
double effective_radius(int n, double h, double eps);

/// (n+1)/eps_eff^2 (ball_average(u, eps) - u), with eps_eff from effective_radius.
GridField t_epsilon(const GridField& u, double eps);

/// Convolution with the normalized bump (1 - |x|^2/eps^2)^3 on |x| < eps.
GridField mollify(const GridField& u, double eps);

/// (sum_region |u|^q h^{2n})^{1/q}.
double lq_norm(const GridField& u, double q, const GridDomain::Mask& region);
double lq_norm(const GridField& u, double q, Region r = Region::interior);

/// h^{2n} times the number of interior points with u < -s.
double sublevel_volume(const GridField& u, double s);

/// h^{2n} times the number of flagged points.
double mask_volume(const GridDomain& d, const GridDomain::Mask& mask);

}  // namespace hesslab
