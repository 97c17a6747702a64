// Time-translation-invariant 3D stack: 2*Delta copies of the 2D automaton's
// lattice, even layers running one schedule step each, odd layers idle, with
// transversal swaps moving every copy through the whole schedule.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfca/compiler.hpp"
#include "hfca/lattice.hpp"
#include "hfca/rng.hpp"

namespace hfca {

enum class Phase : std::uint8_t { Gadgets, SwapEven, GadgetsAgain, SwapOdd };
std::string to_string(Phase p);

struct StackNoise {
  double qubit = 0.0;        // per link and layer after each gadget phase
  double measurement = 0.0;  // per vertex reading in each gadget phase
  double swap = 0.0;         // per swapped link pair: flips the link in both layers
};

// A forced swap failure: at global step `step` (a swap phase), the link is
// flipped in both layers of the pair whose lower layer is `z`.
struct SwapFault {
  long step = 0;
  long z = 0;
  std::size_t link = 0;
};

class Stack {
 public:
  explicit Stack(const SimParams& params);

  int L() const { return lat_.L(); }
  long delta() const { return static_cast<long>(rules_.size()); }
  long height() const { return 2 * delta(); }
  long clock() const { return clock_; }
  Phase phase() const { return static_cast<Phase>(clock_ % 4); }
  const TorusLattice& lattice() const { return lat_; }

  // The static rule of layer z: schedule layer z/2 for even z, all-idle for odd z.
  const std::vector<PlacedGadget>& rule(long z) const;

  std::vector<ErrorConfig>& layers() { return layers_; }
  const std::vector<ErrorConfig>& layers() const { return layers_; }
  // Height of the content that started at z0 (tracked through the swaps).
  long position(long z0) const { return pos_[z0]; }

  // One step of the period-4 rule.
  void step(const StackNoise& noise, Rng& rng, const std::vector<SwapFault>* forced = nullptr);

 private:
  TorusLattice lat_;
  std::vector<std::vector<PlacedGadget>> rules_;
  std::vector<PlacedGadget> idle_;
  std::vector<ErrorConfig> layers_;
  std::vector<long> pos_;  // pos_[z0]: current height of the content that started at z0
  std::vector<long> who_;  // who_[z]: starting height of the content now at z
  long clock_ = 0;
};

Stack build_stack(const SimParams& params);

// Runs `steps` steps and records, for every starting height z0, the content
// after each gadget phase (the moving-frame trajectory).
std::vector<std::vector<ErrorConfig>> moving_frames(Stack& stack, long steps, const StackNoise& noise, Rng& rng,
                                                    const std::vector<SwapFault>* forced = nullptr);

struct EquivalenceReport {
  long starts = 0;       // starting heights checked
  long frames = 0;       // frames compared
  long mismatches = 0;
  long reversed_starts = 0;  // odd starts, which see the schedule in reverse order
  std::vector<std::string> examples;
  bool ok() const { return mismatches == 0; }
};

// Noiseless full cycle (4*Delta steps) from random contents: every moving-frame
// trajectory must equal the direct 2D run. Content starting at z0 = 2t meets
// steps t, idle, t+1, idle, ...; content starting at z0 = 2j+1 moves down and
// meets idle, j, idle, j-1, ...
EquivalenceReport stack3d_equivalence(const SimParams& params, std::uint64_t seed);

// A single forced swap failure acts, in the moving frame of each of the two
// swapped contents, as a flip of that link at that step.
EquivalenceReport swap_failure_check(const SimParams& params, std::uint64_t seed);

}  // namespace hfca
