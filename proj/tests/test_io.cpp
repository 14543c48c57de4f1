#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "hesslab/error.hpp"
#include "hesslab/field_io.hpp"
#include "hesslab/random.hpp"

using namespace hesslab;

TEST_CASE("header lists the grid") {
  auto d = GridDomain::box(1, 5, -1.0, 1.0);
  CHECK(field_header(d) == "HESSFIELD v1 n=1 shape=5,5 h=0.5 origin=-1,-1 kind=box");
}

TEST_CASE("fields round-trip bit for bit") {
  Rng rng(41);
  for (int n = 1; n <= 2; ++n) {
    auto dom = share(GridDomain::ball(n, 9, 0.7));
    GridField u(dom);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (dom->is_inside(i)) u[i] = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));

    std::stringstream ss;
    write_field(ss, u);
    const std::string bytes = ss.str();
    CHECK(bytes.size() == field_header(*dom).size() + 1 + 8 * u.size());

    GridField v = read_field(ss);
    CHECK(v.domain().same_grid(*dom));
    CHECK(v.domain().interior().size() == dom->interior().size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (std::isnan(u[i])) {
        CHECK(std::isnan(v[i]));
      } else {
        CHECK(std::memcmp(&u[i], &v[i], sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("values are little-endian") {
  auto dom = share(GridDomain::box(1, 3));
  GridField u(dom, 1.0);
  std::stringstream ss;
  write_field(ss, u);
  const std::string s = ss.str();
  const std::size_t data = s.find('\n') + 1;
  // 1.0 = 0x3ff0000000000000
  CHECK(static_cast<unsigned char>(s[data + 7]) == 0x3f);
  CHECK(static_cast<unsigned char>(s[data + 6]) == 0xf0);
  CHECK(static_cast<unsigned char>(s[data]) == 0x00);
}

TEST_CASE("malformed input is rejected") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_field(empty), DomainError);
  std::stringstream magic("HESSFIELD v2 n=1 shape=3,3 h=1 origin=0,0 kind=box\n");
  CHECK_THROWS_AS(read_field(magic), DomainError);
  std::stringstream key("HESSFIELD v1 n=1 shape=3,3 h=1 origin=0,0 kind=box color=red\n");
  CHECK_THROWS_AS(read_field(key), DomainError);
  std::stringstream truncated("HESSFIELD v1 n=1 shape=3,3 h=1 origin=0,0 kind=box\n1234");
  CHECK_THROWS_AS(read_field(truncated), DomainError);
  CHECK_THROWS_AS(read_field(std::string("/nonexistent/field.hsf")), DomainError);
}
