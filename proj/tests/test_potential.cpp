#include <doctest.h>

#include <cmath>
#include <vector>

#include "hesslab/error.hpp"
#include "hesslab/potential.hpp"
#include "hesslab/radial_ode.hpp"

using namespace hesslab;

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

GridDomain::Mask ball_mask(const GridDomain& d, double r) {
  GridDomain::Mask k(d.size(), 0);
  for (std::size_t i : d.interior())
    if (norm2(d.position(i)) <= r * r) k[i] = 1;
  return k;
}

}  // namespace

TEST_CASE("log-log fits recover power laws") {
  std::vector<double> x{1, 2, 4, 8, 16}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  auto fit = fit_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.reliable());

  std::vector<double> one{2.0};
  auto degenerate = fit_loglog(one, one);
  CHECK(degenerate.slope == 0.0);
  CHECK(degenerate.r2 == 0.0);
  CHECK_FALSE(degenerate.reliable());
}

TEST_CASE("extremal function bounds and degenerate sets") {
  auto om = share(GridDomain::ball(1, 21));
  SUBCASE("K covering the interior") {
    auto u = extremal_function(om->interior_mask(), om, 1);
    for (std::size_t i : om->interior()) CHECK(u[i] == -1.0);
    for (std::size_t i : om->boundary()) CHECK(u[i] == 0.0);
  }
  SUBCASE("a small disc") {
    auto k = ball_mask(*om, 0.4);
    auto u = extremal_function(k, om, 1);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!om->is_inside(i)) continue;
      CHECK(u[i] >= -1.0);
      CHECK(u[i] <= 0.0);
      if (k[i]) CHECK(u[i] == -1.0);
    }
  }
  CHECK_THROWS_AS(extremal_function(GridDomain::Mask(om->size(), 0), om, 1), DomainError);
  CHECK_THROWS_AS(extremal_function(om->inside_mask(), om, 1), DomainError);
}

TEST_CASE("capacity of a disc against the exact value") {
  auto om = share(GridDomain::ball(1, 41));
  double prev = 0.0;
  for (double r : {0.2, 0.3, 0.5}) {
    auto est = capacity(ball_mask(*om, r), om, 1);
    CHECK(est.extremal == doctest::Approx(radial_ball_capacity(1, 1, r, 1.0)).epsilon(0.05));
    CHECK(est.lower >= est.extremal * (1 - 1e-12));
    CHECK(est.extremal > prev);
    prev = est.extremal;
  }
  auto om2 = share(GridDomain::ball(2, 13));
  auto est = capacity(ball_mask(*om2, 0.5), om2, 1);
  CHECK(est.extremal == doctest::Approx(radial_ball_capacity(2, 1, 0.5, 1.0)).epsilon(0.15));
}

TEST_CASE("Hessian mass of c|z|^2") {
  auto om = share(GridDomain::ball(2, 9));
  const double c = 0.6;
  auto u = GridField::sample(om, [c](std::span<const double> x) { return c * norm2(x); });
  const double vol = mask_volume(*om, om->interior_mask());
  CHECK(hessian_mass(u, 1, om->interior_mask()) == doctest::Approx(c * vol));
  CHECK(hessian_mass(u, 2, om->interior_mask()) == doctest::Approx(c * c * vol));
}

TEST_CASE("comparison sets") {
  auto om = share(GridDomain::box(1, 17));
  auto u = GridField::sample(om, [](std::span<const double> x) { return norm2(x); });
  auto same = comparison_check(u, u, 1);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);

  // v - u = 0.3 - |z|^2/2 is negative on the boundary (|z|^2 >= 1 there) and positive near 0.
  auto v = GridField::sample(om, [](std::span<const double> x) { return 0.5 * norm2(x) + 0.3; });
  for (std::size_t i : om->boundary()) REQUIRE(v[i] <= u[i]);
  auto p = comparison_check(u, v, 1);
  CHECK(p.lhs > 0.0);
  CHECK(p.lhs <= p.rhs);
  CHECK(p.lhs == doctest::Approx(0.5 * p.rhs));
  CHECK_THROWS_AS(comparison_check(v, u, 1), DomainError);
}

TEST_CASE("stability measures check their exponents") {
  auto om = share(GridDomain::box(2, 7));
  auto f = GridField(om, 1.0);
  auto u = GridField::sample(om, [](std::span<const double> x) { return norm2(x); });
  auto v = u;
  v += 0.1;
  for (std::size_t i : om->boundary()) v[i] = u[i];

  auto s = stability_density(u, v, f, f, 1, 3.0);
  CHECK(s.sup_difference == doctest::Approx(0.1));
  CHECK(s.bound == 0.0);
  CHECK(s.ratio == 0.0);
  CHECK_THROWS_AS(stability_density(u, v, f, f, 1, 2.0), DomainError);

  const double q = 4.0, qp = q / (q - 1), pp = 1.5;
  auto t = stability_norm(u, v, 1, q, pp);
  const double p = pp / qp;
  CHECK(t.exponent == doctest::Approx(p / (2 + 2 * p)));
  CHECK(t.sup_difference == doctest::Approx(0.1));
  CHECK(t.bound > 0.0);
  CHECK_THROWS_AS(stability_norm(u, v, 1, q, 1.2), DomainError);
  CHECK_THROWS_AS(stability_norm(u, v, 1, q, 2.5), DomainError);
  CHECK_THROWS_AS(stability_norm(u, v, 1, 1.5, 1.8), DomainError);
}

TEST_CASE("oscillation of a linear function") {
  auto om = share(GridDomain::box(1, 21));
  auto u = GridField::sample(om, [](std::span<const double> x) { return 3.0 * x[0] - x[1]; });
  for (int s : {1, 2, 5}) CHECK(oscillation(u, s) == doctest::Approx(3.0 * s * om->h()));
}
