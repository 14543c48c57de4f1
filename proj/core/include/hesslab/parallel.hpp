#pragma once

// Thin OpenMP layer. Loops are elementwise; reductions go through fixed-size
// blocks summed in index order so results do not depend on the thread count.

#include <cstddef>
#include <span>

namespace hesslab::par {

/// Worker count in use. Initialized from HESSLAB_THREADS when set.
int threads();

/// n <= 0 restores the default (HESSLAB_THREADS or the OpenMP default).
void set_threads(int n);

template <class F>
void for_each(std::size_t count, F&& f) {
#ifdef _OPENMP
  const int nt = threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (count > 4096)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) f(i);
#endif
}

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);

}  // namespace hesslab::par
