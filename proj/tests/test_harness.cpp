#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "hfca/harness.hpp"

using namespace hfca;

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse("# comment\nL = 27, 81\n  p=0.01,0.02  # trailing\n\nseed = 18446744073709551615\n");
  CHECK(c.get("L") == "27, 81");
  CHECK(c.get_ints("L", {}) == std::vector<long long>{27, 81});
  CHECK(c.get_doubles("p", {}) == std::vector<double>{0.01, 0.02});
  CHECK(c.get_u64("seed", 0) == 18446744073709551615ULL);
  CHECK(c.get_int("missing", 5) == 5);
  CHECK(c.get("missing", "x") == "x");
  CHECK_THROWS_AS(ExperimentConfig::parse("novalue\n"), std::invalid_argument);
  CHECK_THROWS_AS(c.get_double("L", 0), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/cfg"), std::invalid_argument);
}

TEST_CASE("config hash is canonical") {
  const auto a = ExperimentConfig::parse("a = 1\nb = 2\n");
  const auto b = ExperimentConfig::parse("b=2\n# x\na   =   1\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  auto c = a;
  c.set("a", "3");
  CHECK(c.hash() != a.hash());
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("worker pool") {
  for (int workers : {1, 3}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, workers,
                                 [](std::size_t i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
  CHECK(default_workers() >= 1);
}

TEST_CASE("csv sink") {
  CsvSink mem({"a", "b"});
  mem.row({"1", "2"});
  CHECK(mem.text() == "a,b\n1,2\n");
  CHECK_THROWS_AS(mem.row({"1"}), std::invalid_argument);
  const std::string path = "hfca_test_sink.csv";
  std::remove(path.c_str());
  {
    CsvSink f(path, {"x"});
    f.row({"1"});
  }
  {
    CsvSink f(path, {"x"});  // append: the header is written once
    f.row({"2"});
  }
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(all == "x\n1\n2\n");
  std::remove(path.c_str());
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(NAN) == "nan");
}

TEST_CASE("power-law fit") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3 * v * v);
  const auto f = fit_power_law(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.points == 4);
  CHECK_THROWS_AS(fit_power_law({1}, {1}), std::invalid_argument);
}

TEST_CASE("crossing point") {
  const std::vector<double> p{0.1, 0.2, 0.3};
  CHECK(crossing_point(p, {1.0, 0.8, 0.6}, {1.0, 0.9, 0.4}) == doctest::Approx(0.2 + 0.1 / 3));
  CHECK(std::isnan(crossing_point(p, {1, 1, 1}, {0, 0, 0})));
}
