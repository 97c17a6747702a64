#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hfca/compiler.hpp"
#include "hfca/simulator.hpp"

using namespace hfca;

namespace {

bool has_kind(const std::vector<PlacedGadget>& layer, GadgetKind a, GadgetKind b) {
  for (const auto& g : layer)
    if (g.kind == a || g.kind == b) return true;
  return false;
}

}  // namespace

TEST_CASE("inner simulation depths and footprints") {
  CHECK(depth(inner_ec(1)) == 48);
  CHECK(depth(inner_ec(1, true)) == 24);
  CHECK(depth(inner_gate(GadgetKind::I0, 1)) == 5);
  CHECK(depth(inner_gate(GadgetKind::M0h, 1)) == 11);
  for (int n = 1; n <= 2; ++n) {
    const auto ec = inner_ec(n);
    CHECK(ec.footprint.width() == pow3(n));
    CHECK(ec.footprint.height() == pow3(n));
    CHECK(inner_gate(GadgetKind::I0, n).footprint.width() == pow3(n));
    CHECK(inner_gate(GadgetKind::T0h, n).footprint.width() == 2 * pow3(n));
    CHECK(inner_gate(GadgetKind::M0h, n).footprint.width() == 3 * pow3(n));
    CHECK(inner_gate(GadgetKind::M0v, n).footprint.height() == 3 * pow3(n));
  }
  CHECK_THROWS_AS(inner_ec(0), std::invalid_argument);
}

TEST_CASE("level-2 EC: every R0 slot becomes level-1 gates between EC1 layers") {
  // Derived oracle: lifting a template of depth D whose step t holds gadgets
  // of maximal level-1 depth d_t gives 48 + sum_t (d_t + 48).
  const auto r0 = build_r0();
  long expect = 48;
  for (const auto& step : r0.steps) {
    long d = 5;
    if (has_kind(step, GadgetKind::M0h, GadgetKind::M0v)) d = 11;
    expect += d + 48;
  }
  CHECK(depth(inner_ec(2)) == expect);
  long expect_half = 24;
  for (int t = 24; t < 48; ++t) expect_half += (has_kind(r0.steps[t], GadgetKind::M0h, GadgetKind::M0v) ? 11 : 5) + 24;
  CHECK(depth(*ec_schedule(2, true)) == expect_half);
}

TEST_CASE("outer simulation") {
  SimParams p11;
  CHECK(p11.L() == 3);
  const auto period = outer_period(p11);
  CHECK(period->L() == 3);
  CHECK(depth(*period) == 48 + 5 + 48);
  const auto layers = materialize(*period);
  for (int t = 48; t < 53; ++t) CHECK(layers[t].empty());  // I1: five idle steps
  CHECK(check_tiling(*period));

  // (k=1, n=2): each layer of the n=1 period becomes its level-1 gates
  // (11 steps if it holds an M gadget, 5 otherwise) followed by EC1.
  SimParams p12;
  p12.n = 2;
  long expect = 48;
  for (const auto& layer : layers) expect += (has_kind(layer, GadgetKind::M0h, GadgetKind::M0v) ? 11 : 5) + 48;
  const auto period2 = outer_period(p12);
  CHECK(period2->L() == 9);
  CHECK(depth(*period2) == expect);
  CHECK(expect == 5785);
  CHECK(check_tiling(*period2));
}

TEST_CASE("the automaton is periodic") {
  SimParams p;
  p.T = 3;
  const auto full = outer_ft(p);
  p.T = 1;
  const auto one = outer_ft(p);
  const long delta = depth(*one);
  CHECK(depth(*full) == 3 * delta);
  const auto a = materialize(*full);
  for (long t = 0; t + delta < static_cast<long>(a.size()); ++t) CHECK(a[t] == a[t + delta]);
  SimParams bad;
  bad.k = 0;
  CHECK_THROWS_AS(outer_ft(bad), std::invalid_argument);
}

TEST_CASE("cursors are independent and repeatable") {
  SimParams p;
  p.n = 2;
  const auto s = outer_period(p);
  auto c1 = s->cursor();
  auto c2 = s->cursor();
  for (long t : {0L, 4000L, 17L, 5784L, 2L}) CHECK(c1->layer(t) == c2->layer(t));
}

TEST_CASE("noiseless automaton preserves a codeword") {
  SimParams p;
  p.n = 2;
  const auto s = outer_period(p);
  TorusLattice lat(9);
  ErrorConfig loop(lat);
  for (int x = 0; x < 9; ++x) loop.flip({x, 4, Orient::H});
  const auto r = run_schedule(*s, NoiseModel{}, 1, -1, &loop);
  CHECK(r.state == loop);
  CHECK(r.log.empty());
}

TEST_CASE("schedule dump format") {
  std::ostringstream os;
  dump_schedule(*outer_period(SimParams{}), os, 0, 2);
  const std::string text = os.str();
  CHECK(text.find("t 0:") != std::string::npos);
  CHECK(text.find("t 1:") != std::string::npos);
  CHECK(text.find("t 2:") == std::string::npos);
}
