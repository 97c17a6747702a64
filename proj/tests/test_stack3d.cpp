#include <algorithm>

#include "doctest.h"
#include "hfca/stack3d.hpp"

using namespace hfca;

TEST_CASE("stack layout") {
  const SimParams p;
  Stack st = build_stack(p);
  const long delta = depth(*outer_period(p));
  CHECK(st.delta() == delta);
  CHECK(st.height() == 2 * delta);
  const auto sched = materialize(*outer_period(p));
  for (long z = 0; z < st.height(); ++z) {
    if (z % 2) CHECK(st.rule(z).empty());
    else CHECK(st.rule(z) == sched[z / 2]);
  }
  CHECK_THROWS(st.rule(st.height()));
  CHECK(st.phase() == Phase::Gadgets);
  CHECK(to_string(Phase::SwapOdd) == "swap_odd");
}

TEST_CASE("swap phases permute layer contents") {
  Stack st(SimParams{});
  Rng init(3);
  for (auto& layer : st.layers())
    for (std::size_t l = 0; l < layer.bits.size(); ++l)
      if (init.next() & 1) layer.bits.flip(l);
  Rng rng(1);
  auto words = [&] {
    std::vector<std::vector<std::uint64_t>> w;
    for (const auto& layer : st.layers()) w.push_back(layer.bits.words());
    std::sort(w.begin(), w.end());
    return w;
  };
  st.step(StackNoise{}, rng);  // gadgets
  for (int i = 0; i < 3; ++i) {
    const bool swap = st.phase() == Phase::SwapEven || st.phase() == Phase::SwapOdd;
    const auto before = words();
    st.step(StackNoise{}, rng);
    if (swap) CHECK(words() == before);
  }
}

TEST_CASE("full cycle returns every content to its height") {
  Stack st(SimParams{});
  Rng rng(1);
  for (long i = 0; i < 4 * st.delta(); ++i) st.step(StackNoise{}, rng);
  for (long z = 0; z < st.height(); ++z) CHECK(st.position(z) == z);
}

TEST_CASE("moving-frame equivalence") {
  const auto eq = stack3d_equivalence(SimParams{}, 7);
  CHECK(eq.starts == 202);
  CHECK(eq.reversed_starts == 101);
  CHECK(eq.mismatches == 0);
  const auto sw = swap_failure_check(SimParams{}, 7);
  CHECK(sw.frames > 0);
  CHECK(sw.ok());
}
