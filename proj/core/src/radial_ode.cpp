#include "hesslab/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "hesslab/error.hpp"

namespace hesslab {

namespace {

constexpr int kIntervals = 10000;

// 8-point Gauss-Legendre rule on [-1,1].
constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss(double a, double b, F&& fn) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += kWeights[k] * fn(c + r * kNodes[k]);
  return s * r;
}

// Tabulated g and w = g' with cubic Hermite interpolation on a uniform mesh.
struct Table {
  double t0 = 0.0, dt = 1.0;
  std::vector<double> g, w, dw;

  int cell(double t) const {
    const int i = static_cast<int>(std::floor((t - t0) / dt));
    return std::clamp(i, 0, static_cast<int>(g.size()) - 2);
  }
  // Hermite basis on [0,1].
  static void basis(double s, double& h00, double& h10, double& h01, double& h11) {
    h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    h10 = s * (1 - s) * (1 - s);
    h01 = s * s * (3 - 2 * s);
    h11 = s * s * (s - 1);
  }
  static void dbasis(double s, double& d00, double& d10, double& d01, double& d11) {
    d00 = 6 * s * s - 6 * s;
    d10 = 3 * s * s - 4 * s + 1;
    d01 = -6 * s * s + 6 * s;
    d11 = 3 * s * s - 2 * s;
  }
  double value(double t) const {
    const int i = cell(t);
    const double s = (t - (t0 + i * dt)) / dt;
    double a, b, c, d;
    basis(s, a, b, c, d);
    return a * g[i] + b * dt * w[i] + c * g[i + 1] + d * dt * w[i + 1];
  }
  double slope(double t) const {
    const int i = cell(t);
    const double s = (t - (t0 + i * dt)) / dt;
    double a, b, c, d;
    basis(s, a, b, c, d);
    return a * w[i] + b * dt * dw[i] + c * w[i + 1] + d * dt * dw[i + 1];
  }
  double curvature(double t) const {
    const int i = cell(t);
    const double s = (t - (t0 + i * dt)) / dt;
    double a, b, c, d;
    dbasis(s, a, b, c, d);
    return (a * w[i] + c * w[i + 1]) / dt + b * dw[i] + d * dw[i + 1];
  }
};

void check_args(int m, int n) {
  if (n < 1 || m < 1 || m > n) throw DomainError("solve_radial: need 1 <= m <= n");
}

// w' from the ODE where it is well conditioned, otherwise from the table.
void fill_slopes(Table& tb, const RadialDensity& f, int m, int n) {
  const double cnm = binomial(n, m), c1 = binomial(n - 1, m - 1);
  const int N = static_cast<int>(tb.w.size());
  double wmax = 0.0;
  for (double v : tb.w) wmax = std::max(wmax, std::abs(v));
  for (int i = 0; i < N; ++i) {
    const double t = tb.t0 + i * tb.dt, w = tb.w[i];
    const bool stable = t > 1e-3 * (tb.t0 + (N - 1) * tb.dt) && std::abs(w) > 1e-6 * wmax && w > 0.0;
    if (stable || m == 1) {
      if (t > 0.0 && (m == 1 || w > 0.0)) {
        tb.dw[i] = (f(t) - cnm * std::pow(w, m)) / (c1 * t * std::pow(w, m - 1));
        continue;
      }
    }
    // Second-order one-sided or central differences.
    if (i == 0) tb.dw[i] = (-3 * tb.w[0] + 4 * tb.w[1] - tb.w[2]) / (2 * tb.dt);
    else if (i == N - 1) tb.dw[i] = (3 * tb.w[i] - 4 * tb.w[i - 1] + tb.w[i - 2]) / (2 * tb.dt);
    else tb.dw[i] = (tb.w[i + 1] - tb.w[i - 1]) / (2 * tb.dt);
  }
}

RadialProfile wrap(std::shared_ptr<const Table> tb, const RadialDensity& f, int m, int n, const char* label) {
  RadialProfile p;
  p.label = label;
  p.g = [tb](double t) { return tb->value(t); };
  p.dg = [tb](double t) { return tb->slope(t); };
  p.d2g = [tb](double t) { return tb->curvature(t); };
  // ODE residual at cell midpoints away from the first cell.
  double res = 0.0;
  for (std::size_t i = 1; i + 1 < tb->g.size(); ++i) {
    const double t = tb->t0 + (i + 0.5) * tb->dt;
    const double r = radial_sigma(p, t, n, m) - f(t);
    res = std::max(res, std::abs(r));
  }
  p.ode_residual = res;
  return p;
}

}  // namespace

RadialProfile solve_radial(const RadialDensity& f, int m, int n, double t_out, double g_out) {
  check_args(m, n);
  if (!(t_out > 0.0)) throw DomainError("solve_radial: t_out must be positive");
  const double c = m / binomial(n - 1, m - 1);
  // w(t)^m = c J(t),  J(t) = int_0^1 s^{n-1} f(t s) ds.
  auto w_of = [&](double t) {
    double J = 0.0;
    for (int p = 0; p < 4; ++p) {
      J += gauss(p * 0.25, (p + 1) * 0.25, [&](double s) {
        const double v = f(t * s);
        if (v < 0.0) throw DomainError("solve_radial: f must be nonnegative");
        return std::pow(s, n - 1) * v;
      });
    }
    return std::pow(c * J, 1.0 / m);
  };
  auto tb = std::make_shared<Table>();
  tb->t0 = 0.0;
  tb->dt = t_out / kIntervals;
  tb->g.assign(kIntervals + 1, 0.0);
  tb->w.assign(kIntervals + 1, 0.0);
  tb->dw.assign(kIntervals + 1, 0.0);
  for (int i = 0; i <= kIntervals; ++i) tb->w[i] = w_of(i * tb->dt);
  tb->g[kIntervals] = g_out;
  for (int i = kIntervals - 1; i >= 0; --i) tb->g[i] = tb->g[i + 1] - gauss(i * tb->dt, (i + 1) * tb->dt, w_of);
  fill_slopes(*tb, f, m, n);
  return wrap(tb, f, m, n, "radial");
}

RadialProfile solve_radial_annulus(const RadialDensity& f, int m, int n, double t_in, double g_in, double t_out,
                                   double g_out, double* flux) {
  check_args(m, n);
  if (!(t_in > 0.0 && t_out > t_in)) throw DomainError("solve_radial_annulus: need 0 < t_in < t_out");
  if (!(g_out > g_in)) throw DomainError("solve_radial_annulus: need g_in < g_out");
  const double c = m / binomial(n - 1, m - 1);
  const double dt = (t_out - t_in) / kIntervals;
  // F at mesh points and at the Gauss nodes of every cell: F(t) = int_{t_in}^t s^{n-1} f(s) ds.
  auto integrand = [&](double s) {
    const double v = f(s);
    if (v < 0.0) throw DomainError("solve_radial: f must be nonnegative");
    return std::pow(s, n - 1) * v;
  };
  std::vector<double> Fmesh(kIntervals + 1, 0.0), Fnode(8 * kIntervals), tnode(8 * kIntervals);
  for (int i = 0; i < kIntervals; ++i) {
    const double a = t_in + i * dt, b = a + dt;
    for (int k = 0; k < 8; ++k) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * kNodes[k];
      tnode[8 * i + k] = t;
      Fnode[8 * i + k] = Fmesh[i] + gauss(a, t, integrand);
    }
    Fmesh[i + 1] = Fmesh[i] + gauss(a, b, integrand);
  }
  auto w_at = [&](double K, double t, double F) { return std::pow(std::max(0.0, (K + c * F) / std::pow(t, n)), 1.0 / m); };
  auto rise = [&](double K) {
    double s = 0.0;
    for (int i = 0; i < kIntervals; ++i) {
      double cell = 0.0;
      for (int k = 0; k < 8; ++k) cell += kWeights[k] * w_at(K, tnode[8 * i + k], Fnode[8 * i + k]);
      s += 0.5 * dt * cell;
    }
    return s;
  };
  const double target = g_out - g_in;
  if (rise(0.0) > target) throw DomainError("solve_radial_annulus: boundary data too close for this f");
  double lo = 0.0, hi = 1.0;
  while (rise(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw DomainError("solve_radial_annulus: no flux matches the data");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rise(mid) < target ? lo : hi) = mid;
  }
  const double K = 0.5 * (lo + hi);
  if (flux) *flux = K;

  auto tb = std::make_shared<Table>();
  tb->t0 = t_in;
  tb->dt = dt;
  tb->g.assign(kIntervals + 1, 0.0);
  tb->w.assign(kIntervals + 1, 0.0);
  tb->dw.assign(kIntervals + 1, 0.0);
  for (int i = 0; i <= kIntervals; ++i) tb->w[i] = w_at(K, t_in + i * dt, Fmesh[i]);
  tb->g[0] = g_in;
  for (int i = 0; i < kIntervals; ++i) {
    double cell = 0.0;
    for (int k = 0; k < 8; ++k) cell += kWeights[k] * w_at(K, tnode[8 * i + k], Fnode[8 * i + k]);
    tb->g[i + 1] = tb->g[i] + 0.5 * dt * cell;
  }
  // Pin the outer value exactly; the bisection leaves a rounding-level gap.
  const double gap = g_out - tb->g[kIntervals];
  for (int i = 0; i <= kIntervals; ++i) tb->g[i] += gap * i / kIntervals;
  fill_slopes(*tb, f, m, n);
  return wrap(tb, f, m, n, "radial-annulus");
}

double radial_ball_capacity(int n, int m, double r, double R) {
  check_args(m, n);
  if (!(r > 0.0 && R > r)) throw DomainError("radial_ball_capacity: need 0 < r < R");
  double K;
  if (m == n) {
    K = std::pow(1.0 / std::log(R * R / (r * r)), n);
  } else {
    const double e = 1.0 - static_cast<double>(n) / m;
    K = std::pow(-e / (std::pow(r * r, e) - std::pow(R * R, e)), m);
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return std::pow(std::numbers::pi, n) * K / fact;
}

}  // namespace hesslab
