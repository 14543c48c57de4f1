#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "hesslab/error.hpp"
#include "hesslab/experiments.hpp"
#include "hesslab/solver.hpp"

using namespace hesslab;

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double sup_diff(const GridField& a, const GridField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.domain().is_inside(i)) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

TEST_CASE("quadratic data are reproduced exactly") {
  for (int n = 1; n <= 2; ++n) {
    for (int m = 1; m <= n; ++m) {
      auto dom = share(GridDomain::ball(n, n == 1 ? 21 : 9));
      const double c = 0.7;
      auto exact = GridField::sample(dom, [c](std::span<const double> x) { return c * norm2(x); });
      GridField f(dom, binomial(n, m) * std::pow(c, m));
      // Unknown interior: the solver starts from its own guess.
      GridField phi = exact;
      for (std::size_t i : dom->interior()) phi[i] = std::numeric_limits<double>::quiet_NaN();
      auto r = solve_dirichlet(f, phi, m);
      CHECK(r.converged);
      CHECK(r.final_violations == 0);
      CHECK(r.final_residual <= 1e-8);
      CHECK(sup_diff(r.solution, exact) <= 1e-8);
    }
  }
}

TEST_CASE("m = 1 agrees with an independent Poisson solve") {
  auto dom = share(GridDomain::box(1, 33));
  auto f = GridField::sample(dom, [](std::span<const double> x) { return 1.0 + x[0] * x[0] + 0.5 * std::sin(3 * x[1]); });
  auto phi = GridField::sample(dom, [](std::span<const double> x) { return std::cos(x[0]) * std::exp(x[1]); });
  auto r = solve_dirichlet(f, phi, 1);
  auto ref = reference_poisson(f, phi);
  CHECK(r.converged);
  CHECK(sup_diff(r.solution, ref) <= 1e-8);
  CHECK(sup_diff(poisson_dirichlet(f, phi), ref) <= 1e-10);
}

TEST_CASE("Newton residuals decrease once the boundary is matched") {
  auto dom = share(GridDomain::box(2, 9));
  auto f = GridField::sample(dom, [](std::span<const double> x) { return 1.0 + 0.5 * x[0] * x[0] + 0.3 * x[3]; });
  auto phi = GridField::sample(dom, [](std::span<const double> x) { return norm2(x); });
  auto r = solve_dirichlet(f, phi, 2);
  REQUIRE(r.converged);
  REQUIRE(r.residual_history.size() >= 2);
  for (std::size_t k = 2; k < r.residual_history.size(); ++k)
    CHECK(r.residual_history[k] <= r.residual_history[k - 1] * (1 + 1e-12));
  CHECK(r.residual_history.size() == r.step_history.size());
  CHECK(dirichlet_residual(r.solution, f, 2) == doctest::Approx(r.final_residual).epsilon(1e-6).scale(1e-12));

  std::ostringstream os;
  write_iteration_csv(os, r);
  CHECK(os.str().rfind("iter,residual,step,violations\n", 0) == 0);
}

TEST_CASE("maximal solutions") {
  auto harm = [](std::span<const double> x) { return x[0] * x[0] - x[1] * x[1] + 0.3 * x[0]; };
  SUBCASE("m = 1 is the discrete harmonic extension") {
    auto dom = share(GridDomain::box(1, 17));
    auto phi = GridField::sample(dom, harm);
    auto r = maximal_solution(phi, 1);
    CHECK(sup_diff(r.solution, phi) <= 1e-9);
  }
  SUBCASE("m = 2 lifts monotonically towards the pluriharmonic data") {
    auto dom = share(GridDomain::box(2, 7));
    auto phi = GridField::sample(dom, harm);
    auto r = maximal_solution(phi, 2);
    REQUIRE(r.lift_levels.size() >= 2);
    for (std::size_t k = 1; k < r.lift_levels.size(); ++k) CHECK(r.lift_levels[k] < r.lift_levels[k - 1]);
    CHECK(r.lift_monotonicity_defect <= 1e-10);
    for (std::size_t i : dom->interior()) CHECK(r.solution[i] <= phi[i] + 1e-10);
    CHECK(sup_diff(r.solution, phi) <= 0.05);
  }
}

TEST_CASE("torus problems") {
  SUBCASE("constant density gives the zero solution") {
    auto dom = share(GridDomain::torus(2, 6));
    auto r = solve_torus(GridField(dom, 3.0), 2);
    CHECK(r.converged);
    CHECK(r.kappa == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.solution.max()) <= 1e-12);
    CHECK(std::abs(r.solution.min()) <= 1e-10);
  }
  SUBCASE("periodic density") {
    auto dom = share(GridDomain::torus(1, 24));
    auto f = GridField::sample(dom, [](std::span<const double> x) {
      return 1.0 + 0.4 * std::cos(2 * std::numbers::pi * x[0]) * std::sin(2 * std::numbers::pi * x[1]);
    });
    auto r = solve_torus(f, 1);
    CHECK(r.converged);
    CHECK(r.solution.max() == 0.0);
    CHECK(r.final_residual <= 1e-8);
    CHECK(r.final_violations == 0);
  }
}

TEST_CASE("invalid problems are rejected") {
  auto box = share(GridDomain::box(2, 7));
  auto phi = GridField::sample(box, [](std::span<const double> x) { return norm2(x); });
  CHECK_THROWS_AS(solve_dirichlet(GridField(box, 1.0), phi, 3), DomainError);
  CHECK_THROWS_AS(solve_dirichlet(GridField(box, -1.0), phi, 1), DomainError);
  CHECK_THROWS_AS(solve_dirichlet(GridField(share(GridDomain::box(2, 9)), 1.0), phi, 1), DomainError);
  SolveConfig bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(solve_dirichlet(GridField(box, 1.0), phi, 1, bad), DomainError);
  bad = {};
  bad.tol_residual = -1.0;
  CHECK_THROWS_AS(maximal_solution(phi, 2, bad), DomainError);

  auto torus = share(GridDomain::torus(1, 8));
  CHECK_THROWS_AS(solve_dirichlet(GridField(torus, 1.0), GridField(torus, 0.0), 1), DomainError);
  CHECK_THROWS_AS(solve_torus(GridField(box, 1.0), 1), DomainError);
  CHECK_THROWS_AS(solve_torus(GridField(torus, 0.0), 1), DomainError);
}
