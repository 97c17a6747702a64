// Exhaustive checks of gadget properties: damage-set nilpotence iteration,
// R0 single-fault cleanup, M1 reversibility, and confinement / linearity /
// coarse-graining of level-1 gadgets.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hfca/compiler.hpp"
#include "hfca/gadgets.hpp"
#include "hfca/simulator.hpp"

namespace hfca {

// Syndrome locations relative to a level-0 gadget anchor, sorted by (y, x).
using Pattern = std::vector<Vertex>;

Pattern normalize(Pattern p);
std::string to_string(const Pattern& p);
// Reflections about the gadget's footprint centre.
Pattern mirror_x(const Pattern& p, GadgetKind k);
Pattern mirror_y(const Pattern& p, GadgetKind k);
// Two syndromes at the ends of one link.
bool is_single_link(const Pattern& p);

enum class ChainVariant : std::uint8_t { Clean, ArbitraryInput };
std::string to_string(ChainVariant v);
ChainVariant parse_chain_variant(const std::string& s);

// The composite in which a level-0 failure is tracked: a level-1 gadget G1
// (centred on L = 27, idle cells running I1) followed by a noiseless EC1
// layer; the clean variant also has a leading EC1 layer.
class GammaCircuit {
 public:
  GammaCircuit(GadgetKind g, ChainVariant variant);

  struct Slot {
    long t;         // step of the failed gadget; damage appears before step t+1
    PlacedGadget gadget;
  };
  GadgetKind kind() const { return kind_; }
  ChainVariant variant() const { return variant_; }
  // Level-0 gadgets whose footprint lies inside G1's footprint, over the
  // leading EC1 (clean variant) and G1.
  const std::vector<Slot>& slots() const { return slots_; }
  // Sigma_1 points of G1's closed footprint, relative to the anchor in level-1 units.
  const std::vector<Vertex>& sigma_points() const { return sigma_points_; }
  // Designated nonlinear points: the Sigma_1 points of an M1 footprint other
  // than its four corners; none for I1 and T1.
  const std::vector<Vertex>& nonlinear_points() const { return nonlinear_; }
  // Points p with G1[s + p] != G1[s] + G1[p] for some s (arbitrary-input composite only).
  const std::vector<Vertex>& measured_nonlinear_points() const { return measured_nonlinear_; }
  const CompiledSchedule& compiled() const { return *c_; }

  struct Output {
    bool coarse = true;  // output syndromes all on Sigma_1
    Pattern reduced;     // pushforward, relative to the level-0 anchor
  };
  // Up to 64 runs at once: input sigma (subset of sigma_points(), level-1
  // units) and an optional damage pattern injected after a slot.
  struct Run {
    std::vector<Vertex> sigma;
    long slot = -1;  // -1: no fault
    Pattern damage;
  };
  std::vector<Output> evaluate(const std::vector<Run>& runs) const;

 private:
  GadgetKind kind_;
  ChainVariant variant_;
  std::shared_ptr<const CompiledSchedule> c_;
  std::vector<Slot> slots_;
  std::vector<Vertex> sigma_points_;
  std::vector<Vertex> nonlinear_;
  std::vector<Vertex> measured_nonlinear_;
  int anchor_ = 0;  // level-0 anchor coordinate on the reduced L = 9 lattice
};

// Gamma with leading EC: fault at a slot, clean input.
GammaCircuit::Output gamma_clean(const GammaCircuit& c, long slot, const Pattern& damage);
// Gamma on G1 alone: difference of the paired runs with and without the fault
// for an input supported on the nonlinear points.
GammaCircuit::Output gamma_arb(const GammaCircuit& c, const std::vector<Vertex>& sigma, long slot,
                               const Pattern& damage);

struct DamageSets {
  int j = 0;
  std::array<std::set<Pattern>, 5> sets;  // indexed by GadgetKind
  bool empty() const;
};

struct NilpotenceIteration {
  int j = 0;
  std::array<std::size_t, 5> sizes{};
  std::array<bool, 5> mirror_x_closed{};
  std::array<bool, 5> mirror_y_closed{};
  std::array<std::size_t, 5> single_link{};  // patterns that are one link
  std::array<std::vector<std::string>, 5> unmatched_mirror;  // patterns whose x-reflection is absent
  long evaluations = 0;
  long defects = 0;  // outputs not coarse-grained
};

struct NilpotenceReport {
  ChainVariant variant = ChainVariant::Clean;
  std::vector<NilpotenceIteration> iterations;  // j = 0 .. last computed
  std::vector<DamageSets> sets;
  int empty_at = -1;  // first j with every set empty
  long defects = 0;
  std::array<std::size_t, 5> nonlinear_points{};           // designated
  std::array<std::size_t, 5> measured_nonlinear_points{};  // arbitrary-input variant
};

// Iterates the damage sets from the level-0 failure patterns (j = 0) until all
// are empty or j = j_max. With link_model, j = 0 keeps only single-link patterns.
NilpotenceReport nilpotence_report(ChainVariant variant, int j_max = 4, int workers = 1, bool link_model = false);

struct FaultCheck {
  std::string gadget;
  long cases = 0;
  long failures = 0;
  std::vector<std::string> examples;
  bool ok() const { return failures == 0; }
};

// Every single link fault at every (step, link) of R0 (or R0') tiled on L = 9,
// followed by a noiseless R0, leaves no syndrome.
FaultCheck r0_single_fault_check(bool half);

struct M1Table {
  std::vector<std::string> damage;             // "abc def ghi"
  std::vector<std::array<std::string, 8>> out;  // coarse outputs "abc"
};

M1Table parse_m1_table(std::string_view text);
const M1Table& m1_reference_table();
M1Table m1_reversibility_table();

struct TableDiff {
  long cells = 0;
  long mismatches = 0;
  long irreversible = 0;  // cells equal to (010)_1 or (101)_1
  std::vector<std::string> details;
  bool ok() const { return mismatches == 0 && irreversible == 0; }
};
TableDiff diff_m1_tables(const M1Table& computed, const M1Table& reference);

struct StructuralReport {
  long coarse_cases = 0, coarse_failures = 0;
  long linearity_cases = 0, linearity_failures = 0;
  long confinement_cases = 0, confinement_failures = 0;
  std::vector<std::string> examples;
  bool coarse_ok() const { return coarse_failures == 0; }
  bool ok() const { return coarse_failures == 0 && linearity_failures == 0 && confinement_failures == 0; }
};

// Coarse-graining of a noiseless half-EC1 layer on L = 9 (all inputs of at
// most two links plus `random_inputs` uniform ones); linearity of level-1
// gates on their linear Sigma_1 points; confinement of level-1 gates.
StructuralReport structural_checks(long random_inputs = 100000, std::uint64_t seed = 1, int workers = 1);

}  // namespace hfca
