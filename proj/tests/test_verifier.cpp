#include "doctest.h"
#include "hfca/verifier.hpp"

using namespace hfca;

TEST_CASE("R0 single-fault cleanup") {
  for (bool half : {false, true}) {
    const auto r = r0_single_fault_check(half);
    CHECK(r.cases == (half ? 4050 : 7938));
    CHECK(r.ok());
  }
}

TEST_CASE("M1 reversibility table") {
  const auto& ref = m1_reference_table();
  const auto computed = m1_reversibility_table();
  const auto d = diff_m1_tables(computed, ref);
  CHECK(d.cells == 8 * static_cast<long>(ref.damage.size()));
  CHECK(d.ok());
  for (const auto& line : d.details) MESSAGE(line);
  auto cell = [&](const std::string& damage, int input) {
    for (std::size_t i = 0; i < computed.damage.size(); ++i)
      if (computed.damage[i] == damage) return computed.out[i][input];
    return std::string("missing");
  };
  CHECK(cell("000 000 000", 0) == "000");
  CHECK(cell("011 000 000", 0) == "100");
  CHECK(cell("000 111 000", 5) == "111");
  // The diff reports a deliberately altered cell.
  M1Table altered = ref;
  altered.out[0][0] = "010";
  const auto bad = diff_m1_tables(altered, ref);
  CHECK(bad.irreversible == 1);
  CHECK_FALSE(bad.ok());
  CHECK(m1_reversibility_table().out == computed.out);
}

TEST_CASE("patterns") {
  const Pattern p = normalize({{1, 0}, {0, 0}});
  CHECK(p.front() == Vertex{0, 0});
  CHECK(is_single_link(p));
  CHECK_FALSE(is_single_link(normalize({{0, 0}, {1, 1}})));
  CHECK(mirror_x(mirror_x(p, GadgetKind::M0h), GadgetKind::M0h) == p);
  CHECK(parse_chain_variant(to_string(ChainVariant::ArbitraryInput)) == ChainVariant::ArbitraryInput);
}

TEST_CASE("gamma maps") {
  for (GadgetKind k : {GadgetKind::I0, GadgetKind::T0h, GadgetKind::M0v}) {
    const GammaCircuit clean(k, ChainVariant::Clean);
    const auto none = gamma_clean(clean, -1, {});
    CHECK(none.coarse);
    CHECK(none.reduced.empty());
    REQUIRE_FALSE(clean.slots().empty());
    CHECK(gamma_clean(clean, 0, {}).reduced.empty());
    const GammaCircuit arb(k, ChainVariant::ArbitraryInput);
    CHECK(gamma_arb(arb, {}, -1, {}).reduced.empty());
    for (const Vertex& v : arb.nonlinear_points()) CHECK(gamma_arb(arb, {v}, -1, {}).reduced.empty());
  }
  // Measured nonlinear points lie inside the designated set.
  for (GadgetKind k : {GadgetKind::M0h, GadgetKind::M0v}) {
    const GammaCircuit arb(k, ChainVariant::ArbitraryInput);
    CHECK(arb.nonlinear_points().size() == 4);
    for (const Vertex& v : arb.measured_nonlinear_points()) {
      bool found = false;
      for (const Vertex& w : arb.nonlinear_points()) found = found || v == w;
      CHECK(found);
    }
  }
  CHECK(GammaCircuit(GadgetKind::T0h, ChainVariant::ArbitraryInput).nonlinear_points().empty());
}

TEST_CASE("damage-set iteration invariants") {
  const auto rep = nilpotence_report(ChainVariant::Clean, 3, 1);
  REQUIRE(rep.iterations.size() >= 2);
  CHECK(rep.defects == 0);
  // Every pattern carried between iterations was coarse-grained; j = 0 is the
  // raw level-0 failure set of each kind.
  for (int k = 0; k < 5; ++k) CHECK(rep.iterations[0].sizes[k] == gadget_damage_patterns(static_cast<GadgetKind>(k)).size());
  for (const auto& it : rep.iterations) CHECK(it.defects == 0);
  // Emptiness is absorbing.
  for (std::size_t j = 1; j < rep.sets.size(); ++j)
    for (int k = 0; k < 5; ++k)
      if (rep.sets[j - 1].empty()) CHECK(rep.sets[j].sets[k].empty());
}

TEST_CASE("structural checks") {
  const auto r = structural_checks(2000, 5, 1);
  CHECK(r.coarse_cases > 2000);
  CHECK(r.coarse_ok());
  CHECK(r.linearity_cases > 0);
  CHECK(r.linearity_failures == 0);
  CHECK(r.confinement_cases > 0);
  CHECK(r.confinement_failures == 0);
  const auto w2 = structural_checks(2000, 5, 2);
  CHECK(w2.coarse_cases == r.coarse_cases);
  CHECK(w2.coarse_failures == r.coarse_failures);
}
