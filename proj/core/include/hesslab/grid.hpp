#pragma once

// Uniform grids over boxes in R^{2n} = C^n. Axis 2j carries x_j and axis 2j+1
// carries y_j; storage is row-major with the last axis fastest.
//
// Every point is exterior, boundary or interior. A point is interior when it
// is inside the domain, not pinned, and every neighbor reached by the
// second-difference stencils (offsets +-e_a and +-e_a +- e_b) is inside.
// Everything else that is inside is boundary. A torus has no boundary.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hesslab {

enum class DomainKind { box, ball, torus };
enum class PointKind : std::uint8_t { exterior = 0, boundary = 1, interior = 2 };

std::string to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);

class GridDomain {
 public:
  using Mask = std::vector<std::uint8_t>;

  /// Cube [lo,hi]^{2n} with `points` samples per axis.
  static GridDomain box(int n, int points, double lo = -1.0, double hi = 1.0);
  /// Closed Euclidean ball of `radius` around 0, sampled on the grid of the
  /// cube [-radius,radius]^{2n} with `points` samples per axis.
  static GridDomain ball(int n, int points, double radius = 1.0);
  /// Flat torus R^{2n}/Z^{2n} with `points` samples per period.
  static GridDomain torus(int n, int points);
  /// General constructor; `inside` flags the points that carry values.
  static GridDomain from_mask(int n, std::vector<int> shape, double h, std::vector<double> origin,
                              DomainKind kind, Mask inside);

  /// Same grid with only the points that are inside and flagged in `keep`.
  GridDomain restricted(const Mask& keep) const;
  /// Same grid with the flagged points demoted to boundary (Dirichlet) points.
  GridDomain pinned(const Mask& fixed) const;
  /// Removes the closed ball of given radius around `center`.
  GridDomain without_ball(std::span<const double> center, double radius) const;

  int n() const { return n_; }
  int axes() const { return 2 * n_; }
  const std::vector<int>& shape() const { return shape_; }
  double h() const { return h_; }
  const std::vector<double>& origin() const { return origin_; }
  DomainKind kind() const { return kind_; }
  std::size_t size() const { return kinds_.size(); }

  PointKind at(std::size_t i) const { return static_cast<PointKind>(kinds_[i]); }
  bool is_interior(std::size_t i) const { return at(i) == PointKind::interior; }
  bool is_inside(std::size_t i) const { return at(i) != PointKind::exterior; }
  const std::vector<std::size_t>& interior() const { return interior_; }
  const std::vector<std::size_t>& boundary() const { return boundary_; }
  /// Ordinal of an interior point in interior(), or npos.
  std::size_t interior_ordinal(std::size_t i) const { return ordinal_[i]; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Mask inside_mask() const;
  Mask interior_mask() const;

  std::ptrdiff_t stride(int axis) const { return stride_[axis]; }
  /// Neighbor index d steps along `axis`; wraps on a torus. The caller
  /// guarantees the target exists otherwise.
  std::size_t shift(std::size_t i, int axis, int d) const {
    if (kind_ != DomainKind::torus) return i + d * stride_[axis];
    const int len = shape_[axis];
    const int c = static_cast<int>((i / stride_[axis]) % len);
    const int c2 = ((c + d) % len + len) % len;
    return i + static_cast<std::ptrdiff_t>(c2 - c) * stride_[axis];
  }

  std::vector<int> multi_index(std::size_t i) const;
  std::size_t index(std::span<const int> mi) const;
  void coords(std::size_t i, std::span<double> x) const;
  std::vector<double> position(std::size_t i) const;

  /// Same shape, spacing, origin and kind.
  bool same_grid(const GridDomain& o) const;

 private:
  GridDomain() = default;
  void classify(const Mask& inside);

  int n_ = 0;
  std::vector<int> shape_;
  double h_ = 0.0;
  std::vector<double> origin_;
  DomainKind kind_ = DomainKind::box;
  std::vector<std::ptrdiff_t> stride_;
  Mask kinds_;
  Mask pinned_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> ordinal_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

inline DomainPtr share(GridDomain d) { return std::make_shared<const GridDomain>(std::move(d)); }

}  // namespace hesslab
