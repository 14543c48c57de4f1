#pragma once

// Variable-coefficient second-order operators  (L v)(p) = sum_ab M_ab(p) D_ab v(p)
// on the interior points of a grid, built from the same difference stencils as
// the discrete complex Hessian. With M(p) taken from a Hermitian matrix C(p),
// L v = tr(C H(v)) exactly.

#include <span>
#include <vector>

#include "hesslab/field.hpp"

namespace hesslab {

class StencilOperator {
 public:
  explicit StencilOperator(DomainPtr domain);

  /// Coefficients of v -> sum_j v_{z_j zbar_j}, i.e. Delta/4.
  static StencilOperator trace_laplacian(DomainPtr domain);

  const GridDomain& domain() const { return *domain_; }
  int packed_size() const { return sym_count(domain_->axes()); }

  /// Coefficients at the k-th interior point such that L v = tr(c H(v)).
  void set_from_hermitian(std::size_t k, const HermitianMatrix& c);
  std::span<double> coefficients(std::size_t k) { return {coef_.data() + k * packed_size(), std::size_t(packed_size())}; }
  std::span<const double> coefficients(std::size_t k) const {
    return {coef_.data() + k * packed_size(), std::size_t(packed_size())};
  }

  /// y = L v at interior points; y = 0 elsewhere. v is a full-grid vector.
  void apply(std::span<const double> v, std::span<double> y) const;

  /// 1 / (center coefficient) at interior points, 0 elsewhere.
  std::vector<double> inverse_diagonal() const;

 private:
  DomainPtr domain_;
  std::vector<double> coef_;
};

}  // namespace hesslab
