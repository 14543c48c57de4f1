#include "hesslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hesslab::par {

namespace {

constexpr std::size_t kBlock = 2048;

int default_threads() {
  if (const char* env = std::getenv("HESSLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int& pool_size() {
  static int n = default_threads();
  return n;
}

template <class Block>
double blocked_sum(std::size_t count, Block&& block) {
  const std::size_t nb = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(nb);
  for_each(nb, [&](std::size_t b) {
    const std::size_t lo = b * kBlock, hi = std::min(count, lo + kBlock);
    partial[b] = block(lo, hi);
  });
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

int threads() { return pool_size(); }

void set_threads(int n) { pool_size() = n > 0 ? n : default_threads(); }

double sum(std::span<const double> x) {
  return blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  });
}

double dot(std::span<const double> x, std::span<const double> y) {
  return blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    return s;
  });
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace hesslab::par
