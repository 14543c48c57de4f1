#include "hesslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hesslab/error.hpp"
#include "hesslab/parallel.hpp"

namespace hesslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_grid(const GridField& a, const GridField& b) {
  if (!a.domain().same_grid(b.domain())) throw DomainError("fields live on different grids");
}

// Applies normalized weights over lattice offsets at every point whose whole
// stencil is inside; returns the field on the restricted domain.
GridField apply_stencil(const GridField& u, const std::vector<std::vector<int>>& offsets,
                        const std::vector<double>& weights) {
  const GridDomain& d = u.domain();
  const int ax = d.axes();
  int reach = 0;
  for (const auto& o : offsets)
    for (int a = 0; a < ax; ++a) reach = std::max(reach, std::abs(o[a]));

  std::vector<std::ptrdiff_t> lin(offsets.size(), 0);
  for (std::size_t k = 0; k < offsets.size(); ++k)
    for (int a = 0; a < ax; ++a) lin[k] += offsets[k][a] * d.stride(a);

  const bool torus = d.kind() == DomainKind::torus;
  std::vector<double> out(d.size(), kNaN);
  GridDomain::Mask ok(d.size(), 0);
  par::for_each(d.size(), [&](std::size_t i) {
    if (!d.is_inside(i)) return;
    int mi[6];
    std::size_t rem = i;
    for (int a = 0; a < ax; ++a) {
      mi[a] = static_cast<int>(rem / d.stride(a));
      rem %= d.stride(a);
      if (!torus && (mi[a] - reach < 0 || mi[a] + reach >= d.shape()[a])) return;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      std::size_t j;
      if (torus) {
        j = 0;
        for (int a = 0; a < ax; ++a) {
          const int len = d.shape()[a];
          j += static_cast<std::size_t>(((mi[a] + offsets[k][a]) % len + len) % len) * d.stride(a);
        }
      } else {
        j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + lin[k]);
        if (!d.is_inside(j)) return;
      }
      s += weights[k] * u[j];
    }
    out[i] = s;
    ok[i] = 1;
  });
  DomainPtr dom = torus ? u.domain_ptr() : share(d.restricted(ok));
  if (dom->interior().empty() && dom->boundary().empty()) {
    throw DomainError("averaging stencil does not fit inside the domain");
  }
  GridField r(dom);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = dom->is_inside(i) ? out[i] : kNaN;
  return r;
}

void check_radius(const GridDomain& d, double eps) {
  if (!(eps >= 2.0 * d.h() * (1.0 - 1e-9))) throw DomainError("averaging radius must be at least 2h");
}

}  // namespace

std::string to_string(Normalization k) { return k == Normalization::raw ? "raw" : "form"; }

double form_factor(int n, int m) { return 1.0 / binomial(n, m); }

GridField::GridField(DomainPtr domain, double fill) : domain_(std::move(domain)) {
  values_.assign(domain_->size(), kNaN);
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (domain_->is_inside(i)) values_[i] = fill;
}

GridField GridField::sample(DomainPtr domain, const Fn& fn) {
  GridField f(std::move(domain));
  const GridDomain& d = f.domain();
  par::for_each(d.size(), [&](std::size_t i) {
    if (!d.is_inside(i)) return;
    double x[6];
    d.coords(i, std::span<double>(x, d.axes()));
    f.values_[i] = fn(std::span<const double>(x, d.axes()));
  });
  return f;
}

double GridField::max(Region r) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    if (r == Region::interior ? domain_->is_interior(i) : domain_->is_inside(i)) m = std::max(m, values_[i]);
  }
  return m;
}

double GridField::min(Region r) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    if (r == Region::interior ? domain_->is_interior(i) : domain_->is_inside(i)) m = std::min(m, values_[i]);
  }
  return m;
}

GridField GridField::on(DomainPtr domain) const {
  if (!domain_->same_grid(*domain)) throw DomainError("GridField::on: different grid");
  GridField f(std::move(domain));
  for (std::size_t i = 0; i < size(); ++i)
    if (f.domain().is_inside(i)) f.values_[i] = values_[i];
  return f;
}

GridField& GridField::operator+=(const GridField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

GridField& GridField::operator+=(double c) {
  for (auto& v : values_) v += c;
  return *this;
}

void second_differences(const GridDomain& d, std::span<const double> u, std::size_t i, std::span<double> out) {
  const int ax = d.axes();
  const double ih2 = 1.0 / (d.h() * d.h());
  const double c = u[i];
  for (int a = 0; a < ax; ++a) {
    const std::size_t ap = d.shift(i, a, 1), am = d.shift(i, a, -1);
    out[sym_index(a, a, ax)] = (u[ap] - 2.0 * c + u[am]) * ih2;
    for (int b = a + 1; b < ax; ++b) {
      const double pp = u[d.shift(ap, b, 1)], mm = u[d.shift(am, b, -1)];
      const double pm = u[d.shift(ap, b, -1)], mp = u[d.shift(am, b, 1)];
      out[sym_index(a, b, ax)] = ((pp + mm) - (pm + mp)) * (0.25 * ih2);
    }
  }
}

HermitianMatrix hessian_from_differences(int n, std::span<const double> dd) {
  const int ax = 2 * n;
  auto D = [&](int a, int b) { return a <= b ? dd[sym_index(a, b, ax)] : dd[sym_index(b, a, ax)]; };
  HermitianMatrix h(n);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const double re = 0.25 * (D(2 * j, 2 * k) + D(2 * j + 1, 2 * k + 1));
      const double im = j == k ? 0.0 : 0.25 * (D(2 * j, 2 * k + 1) - D(2 * j + 1, 2 * k));
      h.set(j, k, cplx(re, im));
    }
  }
  return h;
}

HermitianMatrix hessian_at(const GridDomain& d, std::span<const double> u, std::size_t i) {
  double dd[21];
  second_differences(d, u, i, std::span<double>(dd, sym_count(d.axes())));
  return hessian_from_differences(d.n(), std::span<const double>(dd, sym_count(d.axes())));
}

HessianField::HessianField(DomainPtr domain) : domain_(std::move(domain)) {
  packed_.assign(count() * domain_->n() * domain_->n(), 0.0);
}

HermitianMatrix HessianField::matrix(std::size_t k) const {
  const int n = domain_->n();
  const double* p = packed_.data() + k * n * n;
  HermitianMatrix m(n);
  for (int j = 0; j < n; ++j) m.set(j, j, p[j]);
  int pos = n;
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      m.set(j, l, cplx(p[pos], p[pos + 1]));
      pos += 2;
    }
  }
  return m;
}

void HessianField::set(std::size_t k, const HermitianMatrix& m) {
  const int n = domain_->n();
  double* p = packed_.data() + k * n * n;
  for (int j = 0; j < n; ++j) p[j] = m(j, j).real();
  int pos = n;
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      p[pos] = m(j, l).real();
      p[pos + 1] = m(j, l).imag();
      pos += 2;
    }
  }
}

HessianField complex_hessian(const GridField& u) {
  HessianField hf(u.domain_ptr());
  const GridDomain& d = u.domain();
  if (d.interior().empty()) throw DomainError("complex_hessian: domain has no interior points");
  par::for_each(hf.count(), [&](std::size_t k) { hf.set(k, hessian_at(d, u.values(), d.interior()[k])); });
  return hf;
}

GridField hessian_density(const GridField& u, int m, Normalization norm) {
  const GridDomain& d = u.domain();
  if (m < 1 || m > d.n()) throw DomainError("hessian_density: m out of range");
  if (d.interior().empty()) throw DomainError("hessian_density: domain has no interior points");
  const double scale = norm == Normalization::form ? form_factor(d.n(), m) : 1.0;
  DomainPtr dom = d.kind() == DomainKind::torus ? u.domain_ptr() : share(d.restricted(d.interior_mask()));
  GridField r(dom);
  par::for_each(d.interior().size(), [&](std::size_t k) {
    const std::size_t i = d.interior()[k];
    double lam[HermitianMatrix::kMaxDim];
    eigvals_into(hessian_at(d, u.values(), i), std::span<double>(lam, d.n()));
    r[i] = scale * symm::elem_sym(std::span<const double>(lam, d.n()), m);
  });
  return r;
}

std::vector<std::size_t> msh_certificate(const GridField& u, int m, double tol) {
  const GridDomain& d = u.domain();
  if (m < 1 || m > d.n()) throw DomainError("msh_certificate: m out of range");
  GridDomain::Mask bad(d.interior().size(), 0);
  par::for_each(d.interior().size(), [&](std::size_t k) {
    double lam[HermitianMatrix::kMaxDim];
    eigvals_into(hessian_at(d, u.values(), d.interior()[k]), std::span<double>(lam, d.n()));
    bad[k] = !symm::in_cone(std::span<const double>(lam, d.n()), m, -tol);
  });
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < bad.size(); ++k)
    if (bad[k]) out.push_back(d.interior()[k]);
  return out;
}

BallStencil ball_stencil(int n, double h, double eps) {
  const int ax = 2 * n;
  const double rr = eps / h;
  const int reach = static_cast<int>(std::floor(rr + 1e-9));
  const double r2 = rr * rr * (1.0 + 1e-12);
  BallStencil s;
  std::vector<int> o(ax, -reach);
  double moment = 0.0;
  while (true) {
    double q = 0.0;
    for (int v : o) q += static_cast<double>(v) * v;
    if (q <= r2) {
      s.offsets.push_back(o);
      moment += q;
    }
    int a = ax - 1;
    while (a >= 0 && ++o[a] > reach) o[a--] = -reach;
    if (a < 0) break;
  }
  s.second_moment = moment / static_cast<double>(s.offsets.size()) * h * h;
  return s;
}

GridField ball_average(const GridField& u, double eps) {
  check_radius(u.domain(), eps);
  const BallStencil s = ball_stencil(u.domain().n(), u.domain().h(), eps);
  return apply_stencil(u, s.offsets, std::vector<double>(s.offsets.size(), 1.0 / s.offsets.size()));
}

double effective_radius(int n, double h, double eps) {
  const BallStencil s = ball_stencil(n, h, eps);
  return std::sqrt((n + 1.0) / n * s.second_moment);
}

GridField t_epsilon(const GridField& u, double eps) {
  GridField avg = ball_average(u, eps);
  const int n = u.domain().n();
  const double e = effective_radius(n, u.domain().h(), eps);
  const double c = (n + 1.0) / (e * e);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    if (avg.domain().is_inside(i)) avg[i] = c * (avg[i] - u[i]);
  }
  return avg;
}

GridField mollify(const GridField& u, double eps) {
  check_radius(u.domain(), eps);
  const double h = u.domain().h();
  const BallStencil s = ball_stencil(u.domain().n(), h, eps);
  std::vector<std::vector<int>> offsets;
  std::vector<double> w;
  double total = 0.0;
  for (const auto& o : s.offsets) {
    double q = 0.0;
    for (int v : o) q += static_cast<double>(v) * v;
    const double t = 1.0 - q * h * h / (eps * eps);
    if (t <= 0.0) continue;
    offsets.push_back(o);
    w.push_back(t * t * t);
    total += t * t * t;
  }
  for (auto& x : w) x /= total;
  return apply_stencil(u, offsets, w);
}

double lq_norm(const GridField& u, double q, const GridDomain::Mask& region) {
  if (!(q >= 1.0)) throw DomainError("lq_norm: q must be at least 1");
  if (region.size() != u.size()) throw DomainError("lq_norm: region mask has wrong size");
  std::vector<double> t(u.size(), 0.0);
  par::for_each(u.size(), [&](std::size_t i) {
    if (region[i]) t[i] = std::pow(std::abs(u[i]), q);
  });
  return std::pow(par::sum(t) * std::pow(u.domain().h(), u.domain().axes()), 1.0 / q);
}

double lq_norm(const GridField& u, double q, Region r) {
  return lq_norm(u, q, r == Region::interior ? u.domain().interior_mask() : u.domain().inside_mask());
}

double sublevel_volume(const GridField& u, double s) {
  std::size_t count = 0;
  for (std::size_t i : u.domain().interior())
    if (u[i] < -s) ++count;
  return static_cast<double>(count) * std::pow(u.domain().h(), u.domain().axes());
}

double mask_volume(const GridDomain& d, const GridDomain::Mask& mask) {
  std::size_t count = 0;
  for (auto v : mask) count += v != 0;
  return static_cast<double>(count) * std::pow(d.h(), d.axes());
}

}  // namespace hesslab
