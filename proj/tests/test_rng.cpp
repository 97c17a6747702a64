#include <bit>
#include <cmath>
#include <set>

#include "doctest.h"
#include "hfca/rng.hpp"

using namespace hfca;

TEST_CASE("seed derivation is a pure function") {
  CHECK(derive_seed(1, 2, "a") == derive_seed(1, 2, "a"));
  CHECK(derive_seed(1, 2, "a") != derive_seed(1, 2, "b"));
  CHECK(derive_seed(1, 2, "a") != derive_seed(1, 3, "a"));
  CHECK(derive_seed(1, 2, "a") != derive_seed(2, 2, "a"));
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 16; ++m)
    for (std::uint64_t i = 0; i < 256; ++i) seen.insert(derive_seed(m, i, "trial"));
  CHECK(seen.size() == 16 * 256);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("xoshiro256** determinism and balance") {
  Xoshiro256 a(42), b(42);
  int ones = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = a();
    CHECK(x == b());
    ones += static_cast<int>(x >> 63);
  }
  CHECK(std::abs(ones - 5000) < 300);
}

TEST_CASE("rng helpers") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.below(7) < 7);
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("BernoulliStream rates") {
  for (double p : {0.0, 1e-4, 0.007, 0.1, 0.5, 0.9, 1.0}) {
    CAPTURE(p);
    BernoulliStream st(p);
    Rng rng(123);
    const long words = 200000;
    long hits = 0;
    long per_bit[64] = {};
    for (long i = 0; i < words; ++i) {
      const std::uint64_t w = st.next(rng);
      hits += std::popcount(w);
      for (int b = 0; b < 64; b += 21) per_bit[b] += (w >> b) & 1;
    }
    const double n = 64.0 * words;
    const double sd = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(hits - n * p) <= 5 * sd + 1e-9);
    if (p > 0 && p < 1)
      for (int b = 0; b < 64; b += 21) {
        const double sdb = std::sqrt(words * p * (1 - p));
        CHECK(std::abs(per_bit[b] - words * p) <= 5 * sdb);
      }
  }
  CHECK_THROWS(BernoulliStream(-0.1));
  CHECK_THROWS(BernoulliStream(1.5));
}

TEST_CASE("BernoulliStream bits are pairwise independent") {
  BernoulliStream st(0.3);
  Rng rng(77);
  const long words = 200000;
  long both = 0;
  for (long i = 0; i < words; ++i) {
    const std::uint64_t w = st.next(rng);
    both += (w & 1) & (w >> 1 & 1);
  }
  const double expect = words * 0.09;
  CHECK(std::abs(both - expect) < 5 * std::sqrt(expect));
}

TEST_CASE("SparseBernoulli rates and ordering") {
  SparseBernoulli sb(1000, 0.01);
  Rng rng(5);
  long total = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto& h = sb.draw(rng);
    for (std::size_t j = 1; j < h.size(); ++j) CHECK(h[j - 1] < h[j]);
    total += static_cast<long>(h.size());
  }
  const double expect = 2000 * 1000 * 0.01;
  CHECK(std::abs(total - expect) < 5 * std::sqrt(expect));
  SparseBernoulli all(10, 1.0);
  CHECK(all.draw(rng).size() == 10);
}
