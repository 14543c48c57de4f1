#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hesslab/error.hpp"
#include "hesslab/radial.hpp"
#include "hesslab/radial_ode.hpp"
#include "hesslab/random.hpp"

using namespace hesslab;

namespace {

// u_{z_j zbar_k} = g' delta_jk + g'' conj(z_j) z_k for u = g(|z|^2).
HermitianMatrix radial_hessian_direct(const RadialProfile& p, std::span<const double> x, int n) {
  double t = 0.0;
  for (double v : x) t += v * v;
  HermitianMatrix h(n);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      const cplx zj(x[2 * j], x[2 * j + 1]), zk(x[2 * k], x[2 * k + 1]);
      h.set(j, k, (j == k ? p.dg(t) : 0.0) + p.d2g(t) * std::conj(zj) * zk);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("radial eigenvalues agree with the direct Hessian") {
  Rng rng(51);
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= n; ++m) {
      for (const auto& p : {radial::quadratic(0.8), radial::log_modulus(), radial::green(n, m)}) {
        for (int trial = 0; trial < 20; ++trial) {
          std::vector<double> x(2 * n);
          for (auto& v : x) v = rng.uniform(-1, 1);
          double t = 0.0;
          for (double v : x) t += v * v;
          Spectrum direct = eigvals(radial_hessian_direct(p, x, n));
          Spectrum formula = radial_hessian_eigenvalues(p, t, n);
          const double scale = 1.0 + std::abs(direct[0]) + std::abs(direct[n - 1]);
          for (int k = 0; k < n; ++k) CHECK(formula[k] == doctest::Approx(direct[k]).epsilon(1e-10).scale(scale));
          CHECK(radial_sigma(p, t, n, m) ==
                doctest::Approx(elem_sym(direct, m)).epsilon(1e-9).scale(std::pow(scale, m)));
        }
      }
    }
  }
}

TEST_CASE("the Green profile is maximal away from the origin") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= n; ++m)
      for (double t : {0.01, 0.3, 2.0}) {
        const auto g = radial::green(n, m);
        CHECK(std::abs(radial_sigma(g, t, n, m)) <= 1e-12 * std::pow(std::abs(g.dg(t)) + 1, m));
      }
  CHECK_THROWS_AS(radial::green(2, 3), DomainError);
  CHECK_THROWS_AS(radial_hessian_eigenvalues(radial::quadratic(1), 0.0, 2), DomainError);
}

TEST_CASE("solve_radial with constant density gives c|z|^2") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= n; ++m) {
      const double c = 1.3;
      const double f = binomial(n, m) * std::pow(c, m);
      auto p = solve_radial([f](double) { return f; }, m, n, 1.0, c);
      CHECK(p.ode_residual <= 1e-8);
      for (double t : {0.0, 0.1, 0.37, 0.9, 1.0}) {
        CHECK(p.g(t) == doctest::Approx(c * t).epsilon(1e-9).scale(1.0));
        CHECK(p.dg(t) == doctest::Approx(c).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("solve_radial satisfies the equation pointwise") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= n; ++m) {
      auto f = [](double t) { return 1.0 + 2.0 * t + std::sin(3.0 * t); };
      auto p = solve_radial(f, m, n, 2.0, 0.5);
      CHECK(p.ode_residual <= 1e-8);
      CHECK(p.g(2.0) == doctest::Approx(0.5));
      for (double t : {0.05, 0.5, 1.1, 1.9}) CHECK(radial_sigma(p, t, n, m) == doctest::Approx(f(t)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(solve_radial([](double) { return -1.0; }, 1, 1, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(solve_radial([](double) { return 1.0; }, 3, 2, 1.0, 0.0), DomainError);
}

TEST_CASE("annulus with zero density is an affine image of the Green profile") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= n; ++m) {
      const double t_in = 0.09, t_out = 1.0, g_in = -1.0, g_out = 0.0;
      auto p = solve_radial_annulus([](double) { return 0.0; }, m, n, t_in, g_in, t_out, g_out);
      const auto G = radial::green(n, m);
      const double a = (g_out - g_in) / (G.g(t_out) - G.g(t_in));
      for (double t : {0.1, 0.2, 0.5, 0.8}) {
        const double expect = g_in + a * (G.g(t) - G.g(t_in));
        CHECK(p.g(t) == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
      }
    }
  }
  CHECK_THROWS_AS(solve_radial_annulus([](double) { return 0.0; }, 1, 1, 0.5, 0.0, 0.2, 1.0), DomainError);
  CHECK_THROWS_AS(solve_radial_annulus([](double) { return 0.0; }, 1, 1, 0.2, 1.0, 0.5, 0.0), DomainError);
}

TEST_CASE("ball capacities") {
  constexpr double pi = std::numbers::pi;
  const double r = 0.3, R = 0.9;
  // Planar disc: u = log(|z|/R)/log(R/r), mass = (1/4) int Delta u = pi / (2 log(R/r)).
  CHECK(radial_ball_capacity(1, 1, r, R) == doctest::Approx(pi / (2 * std::log(R / r))));
  // C^2 with m = 1: u = (1/R^2 - 1/|z|^2)/(1/r^2 - 1/R^2), Delta |x|^{-2} = -4 pi^2 delta in R^4,
  // and the form normalization halves sigma_1.
  CHECK(radial_ball_capacity(2, 1, r, R) == doctest::Approx(pi * pi / (2 * (1 / (r * r) - 1 / (R * R)))));

  // Homogeneity: cap scales like lambda^{2(n-m)}; it grows with r and shrinks with R.
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= n; ++m) {
      const double lam = 1.7;
      CHECK(radial_ball_capacity(n, m, lam * r, lam * R) ==
            doctest::Approx(std::pow(lam, 2 * (n - m)) * radial_ball_capacity(n, m, r, R)));
      CHECK(radial_ball_capacity(n, m, 0.4, R) > radial_ball_capacity(n, m, r, R));
      CHECK(radial_ball_capacity(n, m, r, 1.2) < radial_ball_capacity(n, m, r, R));
    }
  }
  CHECK_THROWS_AS(radial_ball_capacity(2, 1, 0.5, 0.4), DomainError);
}
