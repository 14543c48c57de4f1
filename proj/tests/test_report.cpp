#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "hesslab/error.hpp"
#include "hesslab/experiments.hpp"
#include "hesslab/random.hpp"
#include "hesslab/report.hpp"

using namespace hesslab;

TEST_CASE("CSV cells use round-trip formatting") {
  CsvTable t({"name", "count", "value"});
  t.add({std::string("a"), 3LL, 0.1});
  t.add({std::string("b"), -7LL, 1e-300});
  t.add({std::string("c"), 0LL, 2.0});
  CHECK(t.rows() == 3);
  CHECK(t.str() == "name,count,value\na,3,0.10000000000000001\nb,-7,1e-300\nc,0,2\n");
  CHECK_THROWS_AS(t.add({1.0}), DomainError);

  // Every double survives the text round trip.
  Rng rng(61);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform(-200, 200));
    CsvTable one({"x"});
    one.add({x});
    const std::string s = one.str();
    CHECK(std::stod(s.substr(2)) == x);
  }
}

TEST_CASE("summary lines") {
  CriterionResult r;
  r.id = 3;
  r.pass = true;
  r.measured = 1.99319;
  r.bound = 1.5;
  CHECK(summary_line(r) == "PASS C3 1.99319 1.5");
  r.pass = false;
  r.id = 12;
  r.measured = 0.0;
  r.bound = 0.0;
  CHECK(summary_line(r) == "FAIL C12 0 0");
}

TEST_CASE("reports are written to disk") {
  const auto dir = std::filesystem::temp_directory_path() / "hesslab_report_test";
  std::filesystem::remove_all(dir);
  CriterionResult a, b;
  a.csv_name = "c01_test.csv";
  a.csv = "x\n1\n";
  write_reports(dir, {a, b});
  std::ifstream in(dir / "c01_test.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "x\n1\n");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()) == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("criterion registry") {
  const auto& all = criteria();
  REQUIRE(all.size() == 12);
  std::set<std::string> suites;
  for (std::size_t k = 0; k < all.size(); ++k) {
    CHECK(all[k].id == static_cast<int>(k) + 1);
    suites.insert(all[k].suite);
  }
  CHECK(suites.size() == 12);
  CHECK(suite_ids("all").size() == 12);
  CHECK(suite_ids("cones") == std::vector<int>{1});
  CHECK_THROWS_AS(suite_ids("nonsense"), DomainError);
}

TEST_CASE("seeded streams are reproducible") {
  CHECK(mix_seed(7, 0) == mix_seed(7, 0));
  CHECK(mix_seed(7, 0) != mix_seed(7, 1));
  CHECK(mix_seed(7, 0) != mix_seed(8, 0));
  Rng a(mix_seed(7, 3)), b(mix_seed(7, 3));
  double mean = 0.0, sq = 0.0;
  const int count = 200000;
  for (int k = 0; k < count; ++k) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = a.normal();
    b.normal();
    mean += z;
    sq += z * z;
  }
  mean /= count;
  sq /= count;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sq - 1.0) < 0.02);
  Rng c(1);
  for (int k = 0; k < 1000; ++k) {
    const int v = c.below(5);
    CHECK(v >= 0);
    CHECK(v < 5);
  }
}
