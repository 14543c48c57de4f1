#include <doctest.h>

#include <cmath>
#include <vector>

#include "hesslab/error.hpp"
#include "hesslab/field.hpp"
#include "hesslab/fieldfn.hpp"
#include "hesslab/random.hpp"

using namespace hesslab;

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Random Hermitian H and the real quadratic sum_jk H_jk z_j conj(z_k).
struct HermQuadratic {
  HermitianMatrix h;
  GridField::Fn fn;
};

HermQuadratic random_quadratic(Rng& rng, int n) {
  HermitianMatrix h(n);
  for (int j = 0; j < n; ++j) {
    h.set(j, j, rng.uniform(-1, 1));
    for (int k = j + 1; k < n; ++k) h.set(j, k, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  }
  // Pluriharmonic term Re(z_1^2) does not change the complex Hessian.
  const double c = rng.uniform(-1, 1);
  auto fn = [h, n, c](std::span<const double> x) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += h(j, k) * cplx(x[2 * j], x[2 * j + 1]) * cplx(x[2 * k], -x[2 * k + 1]);
    return s.real() + c * (x[0] * x[0] - x[1] * x[1]);
  };
  return {h, fn};
}

}  // namespace

TEST_CASE("box classification and indexing") {
  auto d = GridDomain::box(1, 5);
  CHECK(d.size() == 25);
  CHECK(d.interior().size() == 9);
  CHECK(d.boundary().size() == 16);
  CHECK(d.h() == doctest::Approx(0.5));
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto mi = d.multi_index(i);
    CHECK(d.index(mi) == i);
  }
  std::vector<double> x(2);
  d.coords(0, x);
  CHECK(x[0] == -1.0);
  CHECK(x[1] == -1.0);
  CHECK_THROWS_AS(GridDomain::box(4, 5), DomainError);
  CHECK_THROWS_AS(GridDomain::box(1, 2), DomainError);
  CHECK_THROWS_AS(domain_kind_from_string("sphere"), DomainError);
  CHECK(domain_kind_from_string(to_string(DomainKind::ball)) == DomainKind::ball);
}

TEST_CASE("torus wraps and has no boundary") {
  auto t = GridDomain::torus(1, 8);
  CHECK(t.boundary().empty());
  CHECK(t.interior().size() == 64);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (int a = 0; a < 2; ++a) {
      CHECK(t.shift(i, a, 8) == i);
      CHECK(t.shift(t.shift(i, a, 3), a, -3) == i);
    }
  }
  CHECK(t.shift(t.index(std::vector<int>{7, 0}), 0, 1) == t.index(std::vector<int>{0, 0}));
}

TEST_CASE("complex Hessian is exact on Hermitian quadratics") {
  Rng rng(31);
  for (int n = 1; n <= 3; ++n) {
    auto dom = share(GridDomain::box(n, n == 3 ? 5 : 7));
    for (int trial = 0; trial < 5; ++trial) {
      auto q = random_quadratic(rng, n);
      auto u = GridField::sample(dom, q.fn);
      for (std::size_t i : dom->interior()) {
        auto hm = hessian_at(*dom, u.values(), i);
        CHECK((hm - q.h).frobenius_norm() <= 1e-12);
      }
    }
  }
}

TEST_CASE("density of c|z|^2") {
  for (int n = 1; n <= 3; ++n) {
    auto dom = share(GridDomain::ball(n, n == 3 ? 7 : 11));
    const double c = 1.7;
    auto u = GridField::sample(dom, [c](std::span<const double> x) { return c * norm2(x); });
    for (int m = 1; m <= n; ++m) {
      auto raw = hessian_density(u, m);
      auto form = hessian_density(u, m, Normalization::form);
      const double expect = binomial(n, m) * std::pow(c, m);
      for (std::size_t i : raw.domain().interior()) {
        CHECK(raw[i] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(form[i] == doctest::Approx(std::pow(c, m)).epsilon(1e-12));
      }
      CHECK(msh_certificate(u, m, 0.0).empty());
      CHECK(msh_certificate(-1.0 * u, m, 0.0).size() == dom->interior().size());
    }
    CHECK_THROWS_AS(hessian_density(u, n + 1), DomainError);
  }
}

TEST_CASE("T_eps reproduces the Laplacian of |z|^2") {
  for (int n = 1; n <= 2; ++n) {
    auto dom = share(GridDomain::box(n, n == 1 ? 41 : 17));
    auto u = GridField::sample(dom, [](std::span<const double> x) { return norm2(x); });
    const double h = dom->h();
    for (double eps : {2.0 * h, 3.0 * h}) {
      auto t = t_epsilon(u, eps);
      std::size_t count = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t.domain().is_inside(i)) continue;
        CHECK(t[i] == doctest::Approx(static_cast<double>(n)).epsilon(1e-11));
        ++count;
      }
      CHECK(count > 0);
      auto avg = ball_average(GridField(dom, 2.5), eps);
      for (std::size_t i = 0; i < avg.size(); ++i)
        if (avg.domain().is_inside(i)) CHECK(avg[i] == doctest::Approx(2.5));
    }
    CHECK_THROWS_AS(ball_average(u, 1.5 * h), DomainError);
    // The lattice ball approaches the continuous one.
    CHECK(effective_radius(n, n == 1 ? 0.01 : 0.1, 1.0) == doctest::Approx(1.0).epsilon(2e-2));
  }
}

TEST_CASE("mollifier preserves constants and lq norms") {
  auto dom = share(GridDomain::box(1, 21));
  auto one = GridField(dom, 1.0);
  auto mo = mollify(one, 3 * dom->h());
  for (std::size_t i = 0; i < mo.size(); ++i)
    if (mo.domain().is_inside(i)) CHECK(mo[i] == doctest::Approx(1.0).epsilon(1e-13));

  const double cell = dom->h() * dom->h();
  const double vol = dom->interior().size() * cell;
  CHECK(lq_norm(one, 1.0) == doctest::Approx(vol));
  CHECK(lq_norm(one, 3.0) == doctest::Approx(std::cbrt(vol)));
  CHECK(lq_norm(-2.0 * one, 2.0) == doctest::Approx(2.0 * std::sqrt(vol)));
  CHECK(mask_volume(*dom, dom->interior_mask()) == doctest::Approx(vol));
  CHECK(sublevel_volume(-2.0 * one, 1.0) == doctest::Approx(vol));
  CHECK(sublevel_volume(-2.0 * one, 3.0) == 0.0);
  CHECK_THROWS_AS(lq_norm(one, 0.5), DomainError);
}

TEST_CASE("field arithmetic and restriction") {
  auto dom = share(GridDomain::box(1, 9));
  auto u = GridField::sample(dom, [](std::span<const double> x) { return x[0]; });
  auto v = u + 2.0 * u;
  v += 1.0;
  CHECK(v.max() == doctest::Approx(4.0));
  CHECK(v.min() == doctest::Approx(-2.0));
  CHECK(v.max(Region::interior) < 4.0);

  auto other = share(GridDomain::box(1, 11));
  CHECK_THROWS_AS(u + GridField(other), DomainError);

  GridDomain::Mask keep(dom->size(), 0);
  keep[dom->interior().front()] = 1;
  auto small = share(dom->restricted(keep));
  auto r = u.on(small);
  CHECK(std::isnan(r[dom->interior().back()]));
  CHECK(r[dom->interior().front()] == u[dom->interior().front()]);

  std::vector<double> c{0.0, 0.0};
  auto hole = dom->without_ball(c, 0.3);
  CHECK_FALSE(hole.is_inside(dom->index(std::vector<int>{4, 4})));
}

TEST_CASE("named functions") {
  auto dom = share(GridDomain::ball(1, 17));
  std::vector<double> x{0.3, -0.4};
  CHECK(parse_function("quad:2", 1, 1).eval(x) == doctest::Approx(0.5));
  CHECK(parse_function("harm:1", 1, 1).eval(x) == doctest::Approx(0.09 - 0.16));
  CHECK(parse_function("const:4", 2, 2).eval(x) == 4.0);
  CHECK(parse_function("bump:2,0.5", 1, 1).eval(std::vector<double>{0.6, 0.0}) == 0.0);
  CHECK_THROWS_AS(parse_function("cubic:1", 1, 1), DomainError);
  CHECK_THROWS_AS(parse_function("quad:x", 1, 1), DomainError);

  auto sing = parse_function("sing:1", 1, 1);
  CHECK(sing.singular_at_origin);
  auto f = density_field(dom, sing);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (dom->is_inside(i)) CHECK(std::isfinite(f[i]));
  // Floored at |z| = h, so bounded by 1/h.
  CHECK(f.max() <= 1.0 / dom->h() + 1e-12);
}
