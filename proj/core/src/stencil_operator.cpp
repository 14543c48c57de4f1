#include "hesslab/stencil_operator.hpp"

#include "hesslab/error.hpp"
#include "hesslab/parallel.hpp"

namespace hesslab {

StencilOperator::StencilOperator(DomainPtr domain) : domain_(std::move(domain)) {
  coef_.assign(domain_->interior().size() * packed_size(), 0.0);
}

StencilOperator StencilOperator::trace_laplacian(DomainPtr domain) {
  StencilOperator op(std::move(domain));
  const HermitianMatrix id = HermitianMatrix::identity(op.domain().n());
  for (std::size_t k = 0; k < op.domain().interior().size(); ++k) op.set_from_hermitian(k, id);
  return op;
}

void StencilOperator::set_from_hermitian(std::size_t k, const HermitianMatrix& c) {
  // tr(C H) = 1/4 sum_jk [Re C_jk (D_{x_j x_k} + D_{y_j y_k}) + Im C_jk (D_{x_j y_k} - D_{y_j x_k})]
  const int n = domain_->n(), ax = 2 * n;
  auto m = coefficients(k);
  for (int j = 0; j < n; ++j) {
    for (int l = j; l < n; ++l) {
      const double re = 0.25 * c(j, l).real();
      m[sym_index(2 * j, 2 * l, ax)] = re;
      m[sym_index(2 * j + 1, 2 * l + 1, ax)] = re;
      const double im = 0.25 * c(j, l).imag();
      m[sym_index(2 * j, 2 * l + 1, ax)] = im;  // zero on the diagonal j == l
      if (l > j) m[sym_index(2 * j + 1, 2 * l, ax)] = -im;
    }
  }
}

void StencilOperator::apply(std::span<const double> v, std::span<double> y) const {
  const GridDomain& d = *domain_;
  const int ax = d.axes(), ps = packed_size();
  std::fill(y.begin(), y.end(), 0.0);
  par::for_each(d.interior().size(), [&](std::size_t k) {
    double dd[21];
    const std::size_t i = d.interior()[k];
    second_differences(d, v, i, std::span<double>(dd, ps));
    const double* m = coef_.data() + k * ps;
    double s = 0.0;
    for (int a = 0; a < ax; ++a) {
      s += m[sym_index(a, a, ax)] * dd[sym_index(a, a, ax)];
      for (int b = a + 1; b < ax; ++b) s += 2.0 * m[sym_index(a, b, ax)] * dd[sym_index(a, b, ax)];
    }
    y[i] = s;
  });
}

std::vector<double> StencilOperator::inverse_diagonal() const {
  const GridDomain& d = *domain_;
  const int ax = d.axes(), ps = packed_size();
  const double h2 = d.h() * d.h();
  std::vector<double> out(d.size(), 0.0);
  for (std::size_t k = 0; k < d.interior().size(); ++k) {
    double center = 0.0;
    for (int a = 0; a < ax; ++a) center -= 2.0 * coef_[k * ps + sym_index(a, a, ax)] / h2;
    if (center == 0.0) throw SolverError("stencil operator has a vanishing diagonal");
    out[d.interior()[k]] = 1.0 / center;
  }
  return out;
}

}  // namespace hesslab
