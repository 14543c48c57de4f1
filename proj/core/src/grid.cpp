#include "hesslab/grid.hpp"

#include <cmath>

#include "hesslab/error.hpp"
#include "hesslab/parallel.hpp"

namespace hesslab {

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::box: return "box";
    case DomainKind::ball: return "ball";
    case DomainKind::torus: return "torus";
  }
  return "box";
}

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "box") return DomainKind::box;
  if (s == "ball") return DomainKind::ball;
  if (s == "torus") return DomainKind::torus;
  throw DomainError("unknown domain kind '" + s + "'");
}

GridDomain GridDomain::from_mask(int n, std::vector<int> shape, double h, std::vector<double> origin,
                                 DomainKind kind, Mask inside) {
  if (n < 1 || n > 3) throw DomainError("grid dimension n must be in [1,3]");
  if (shape.size() != static_cast<std::size_t>(2 * n) || origin.size() != shape.size()) {
    throw DomainError("grid shape/origin must have 2n entries");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid spacing must be positive");
  GridDomain d;
  d.n_ = n;
  d.shape_ = std::move(shape);
  d.h_ = h;
  d.origin_ = std::move(origin);
  d.kind_ = kind;
  d.stride_.assign(d.shape_.size(), 1);
  std::size_t total = 1;
  for (int a = 2 * n - 1; a >= 0; --a) {
    if (d.shape_[a] < 1) throw DomainError("grid shape entries must be positive");
    d.stride_[a] = static_cast<std::ptrdiff_t>(total);
    total *= d.shape_[a];
  }
  if (inside.size() != total) throw DomainError("inside mask has wrong size");
  d.pinned_.assign(total, 0);
  d.classify(inside);
  return d;
}

GridDomain GridDomain::box(int n, int points, double lo, double hi) {
  if (points < 3) throw DomainError("box needs at least 3 points per axis");
  if (!(hi > lo)) throw DomainError("box needs lo < hi");
  std::vector<int> shape(2 * n, points);
  std::size_t total = 1;
  for (int s : shape) total *= s;
  return from_mask(n, shape, (hi - lo) / (points - 1), std::vector<double>(2 * n, lo), DomainKind::box,
                   Mask(total, 1));
}

GridDomain GridDomain::ball(int n, int points, double radius) {
  if (points < 5) throw DomainError("ball needs at least 5 points per axis");
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  const double h = 2.0 * radius / (points - 1);
  std::vector<int> shape(2 * n, points);
  std::vector<double> origin(2 * n, -radius);
  std::size_t total = 1;
  for (int s : shape) total *= s;
  Mask inside(total, 0);
  std::vector<int> mi(2 * n, 0);
  const double r2 = radius * radius * (1.0 + 1e-12);
  for (std::size_t i = 0; i < total; ++i) {
    double s = 0.0;
    for (int a = 0; a < 2 * n; ++a) {
      const double x = -radius + mi[a] * h;
      s += x * x;
    }
    inside[i] = s <= r2;
    for (int a = 2 * n - 1; a >= 0; --a) {
      if (++mi[a] < points) break;
      mi[a] = 0;
    }
  }
  return from_mask(n, shape, h, origin, DomainKind::ball, std::move(inside));
}

GridDomain GridDomain::torus(int n, int points) {
  if (points < 3) throw DomainError("torus needs at least 3 points per period");
  std::vector<int> shape(2 * n, points);
  std::size_t total = 1;
  for (int s : shape) total *= s;
  return from_mask(n, shape, 1.0 / points, std::vector<double>(2 * n, 0.0), DomainKind::torus,
                   Mask(total, 1));
}

void GridDomain::classify(const Mask& inside) {
  const std::size_t total = inside.size();
  kinds_.assign(total, 0);
  const int ax = axes();
  par::for_each(total, [&](std::size_t i) {
    if (!inside[i]) return;
    if (kind_ == DomainKind::torus) {
      kinds_[i] = static_cast<std::uint8_t>(PointKind::interior);
      return;
    }
    auto mark_boundary = [&] { kinds_[i] = static_cast<std::uint8_t>(PointKind::boundary); };
    if (pinned_[i]) return mark_boundary();
    int mi[6];
    std::size_t rem = i;
    for (int a = 0; a < ax; ++a) {
      mi[a] = static_cast<int>(rem / stride_[a]);
      rem %= stride_[a];
    }
    auto ok = [&](int a, int da, int b, int db) {
      if (mi[a] + da < 0 || mi[a] + da >= shape_[a]) return false;
      std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + da * stride_[a];
      if (b >= 0) {
        if (mi[b] + db < 0 || mi[b] + db >= shape_[b]) return false;
        j += db * stride_[b];
      }
      return inside[j] != 0;
    };
    for (int a = 0; a < ax; ++a) {
      if (!ok(a, 1, -1, 0) || !ok(a, -1, -1, 0)) return mark_boundary();
      for (int b = a + 1; b < ax; ++b) {
        if (!ok(a, 1, b, 1) || !ok(a, 1, b, -1) || !ok(a, -1, b, 1) || !ok(a, -1, b, -1)) {
          return mark_boundary();
        }
      }
    }
    kinds_[i] = static_cast<std::uint8_t>(PointKind::interior);
  });
  interior_.clear();
  boundary_.clear();
  ordinal_.assign(total, npos);
  for (std::size_t i = 0; i < total; ++i) {
    if (kinds_[i] == static_cast<std::uint8_t>(PointKind::interior)) {
      ordinal_[i] = interior_.size();
      interior_.push_back(i);
    } else if (kinds_[i] == static_cast<std::uint8_t>(PointKind::boundary)) {
      boundary_.push_back(i);
    }
  }
}

GridDomain GridDomain::restricted(const Mask& keep) const {
  if (keep.size() != size()) throw DomainError("restricted: mask has wrong size");
  if (kind_ == DomainKind::torus) throw DomainError("restricted: a torus cannot be cut");
  Mask inside = inside_mask();
  for (std::size_t i = 0; i < inside.size(); ++i) inside[i] = inside[i] && keep[i];
  GridDomain d = *this;
  d.classify(inside);
  return d;
}

GridDomain GridDomain::pinned(const Mask& fixed) const {
  if (fixed.size() != size()) throw DomainError("pinned: mask has wrong size");
  if (kind_ == DomainKind::torus) throw DomainError("pinned: a torus has no Dirichlet points");
  GridDomain d = *this;
  for (std::size_t i = 0; i < fixed.size(); ++i) d.pinned_[i] = d.pinned_[i] || fixed[i];
  d.classify(inside_mask());
  return d;
}

GridDomain GridDomain::without_ball(std::span<const double> center, double radius) const {
  Mask keep(size(), 1);
  std::vector<double> x(axes());
  const double r2 = radius * radius * (1.0 + 1e-12);
  for (std::size_t i = 0; i < size(); ++i) {
    coords(i, x);
    double s = 0.0;
    for (int a = 0; a < axes(); ++a) s += (x[a] - center[a]) * (x[a] - center[a]);
    keep[i] = s > r2;
  }
  return restricted(keep);
}

GridDomain::Mask GridDomain::inside_mask() const {
  Mask m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = kinds_[i] != 0;
  return m;
}

GridDomain::Mask GridDomain::interior_mask() const {
  Mask m(size(), 0);
  for (std::size_t i : interior_) m[i] = 1;
  return m;
}

std::vector<int> GridDomain::multi_index(std::size_t i) const {
  std::vector<int> mi(axes());
  for (int a = 0; a < axes(); ++a) {
    mi[a] = static_cast<int>(i / stride_[a]);
    i %= stride_[a];
  }
  return mi;
}

std::size_t GridDomain::index(std::span<const int> mi) const {
  std::size_t i = 0;
  for (int a = 0; a < axes(); ++a) {
    if (mi[a] < 0 || mi[a] >= shape_[a]) throw DomainError("grid index out of range");
    i += mi[a] * stride_[a];
  }
  return i;
}

void GridDomain::coords(std::size_t i, std::span<double> x) const {
  for (int a = 0; a < axes(); ++a) {
    x[a] = origin_[a] + static_cast<double>(i / stride_[a]) * h_;
    i %= stride_[a];
  }
}

std::vector<double> GridDomain::position(std::size_t i) const {
  std::vector<double> x(axes());
  coords(i, x);
  return x;
}

bool GridDomain::same_grid(const GridDomain& o) const {
  return n_ == o.n_ && shape_ == o.shape_ && h_ == o.h_ && origin_ == o.origin_ && kind_ == o.kind_;
}

}  // namespace hesslab
