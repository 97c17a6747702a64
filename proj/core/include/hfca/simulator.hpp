// Execution of toric-code schedules under i.i.d. noise: a bit-sliced engine
// (64 trials per word), ideal decoding, relaxation times and minimal-weight
// failure searches.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hfca/compiler.hpp"
#include "hfca/lattice.hpp"
#include "hfca/rng.hpp"

namespace hfca {

enum class NoiseKind : std::uint8_t { Qubit, Measurement, Gadget, SkipMeasurement };

std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);

// Sum of independent i.i.d. terms (a composite model lists several).
struct NoiseModel {
  double qubit = 0.0;        // each link flips after each step
  double measurement = 0.0;  // each vertex reading flips at each step
  double gadget = 0.0;       // each placed gadget (idles included) fails; uniform pattern on its support
  double skip = 0.0;         // each non-idle gadget omits its feedback

  static NoiseModel single(NoiseKind kind, double p);
  bool noiseless() const { return qubit == 0 && measurement == 0 && gadget == 0 && skip == 0; }
  void validate() const;
};

// Schedule lowered to index arithmetic on one lattice.
class CompiledSchedule {
 public:
  explicit CompiledSchedule(const Schedule& s);
  int L() const { return L_; }
  long depth() const { return static_cast<long>(op_begin_.size()) - 1; }
  std::size_t num_links() const { return nlinks_; }
  std::size_t num_vertices() const { return nverts_; }

  // Feedback: if snapshot[r0] & snapshot[r1], flip l0 and l1. T gadgets read
  // one vertex twice; M gadgets flip a dummy second link.
  struct Op {
    std::uint32_t r0, r1, l0, l1;
  };
  const Op* ops_begin(long t) const { return ops_.data() + op_begin_[t]; }
  const Op* ops_end(long t) const { return ops_.data() + op_begin_[t + 1]; }
  // Every gadget of layer t, idles included (for gadget noise).
  const PlacedGadget* gadgets_begin(long t) const { return gadgets_.data() + g_begin_[t]; }
  const PlacedGadget* gadgets_end(long t) const { return gadgets_.data() + g_begin_[t + 1]; }
  // Endpoint vertices of each link (plus the dummy link).
  std::uint32_t end_a(std::uint32_t l) const { return ends_[2 * l]; }
  std::uint32_t end_b(std::uint32_t l) const { return ends_[2 * l + 1]; }
  const TorusLattice& lattice() const { return lat_; }
  // Support link indices of a placed gadget.
  const std::vector<std::uint32_t>& support(const PlacedGadget& g) const;

 private:
  TorusLattice lat_;
  int L_;
  std::size_t nlinks_, nverts_;
  std::vector<Op> ops_;
  std::vector<std::size_t> op_begin_;
  std::vector<PlacedGadget> gadgets_;
  std::vector<std::size_t> g_begin_;
  std::vector<std::uint32_t> ends_;
  std::vector<std::vector<std::uint32_t>> support_cache_;  // by (kind, vertex)
};

// 64 trajectories; words carry an extra dummy link and vertex.
struct SlicedState {
  std::vector<std::uint64_t> links;
  std::vector<std::uint64_t> syn;
  SlicedState() = default;
  explicit SlicedState(const CompiledSchedule& c) : links(c.num_links() + 1, 0), syn(c.num_vertices() + 1, 0) {}
  std::uint64_t any_syndrome() const;
};

// Deterministic per-lane faults, used by exhaustive searches.
struct Injection {
  enum Kind : std::uint8_t { Link, Measurement, Syndrome };
  Kind kind;
  std::uint32_t index;  // link or vertex
  std::uint64_t lanes;
};

struct FaultRecord {
  long t = 0;
  NoiseKind kind = NoiseKind::Qubit;
  std::uint32_t location = 0;  // link (qubit), vertex (measurement), or gadget index in its layer
  std::vector<std::uint32_t> pattern;  // links flipped by a gadget failure
};

class ToricEngine {
 public:
  ToricEngine(std::shared_ptr<const CompiledSchedule> sched, const NoiseModel& noise);
  const CompiledSchedule& schedule() const { return *sched_; }

  // Before step t: Link/Syndrome injections of `before`; snapshot with
  // Measurement injections and measurement noise; feedback (minus skips);
  // then qubit noise and gadget failures. `log` collects lane-0 faults.
  void step(long t, SlicedState& s, Rng& rng, const std::vector<Injection>* before = nullptr,
            std::vector<FaultRecord>* log = nullptr);
  void run(SlicedState& s, Rng& rng, std::vector<FaultRecord>* log = nullptr);
  // Noiseless run regardless of the engine's noise model.
  void run_noiseless(SlicedState& s) const;

 private:
  std::shared_ptr<const CompiledSchedule> sched_;
  NoiseModel noise_;
  BernoulliStream qubit_, meas_, gadget_, skip_;
  std::vector<std::uint64_t> snap_;
};

// Lanes whose winding parities are nonzero (h in the first word, v in the second).
void homology_lanes(const CompiledSchedule& c, const SlicedState& s, std::uint64_t& h, std::uint64_t& v);

struct TrialOutcome {
  long t_fail = -1;  // first failing application, -1 if censored
  HomologyClass final_class;
  std::size_t faults = 0;
};

// Single-trajectory run (lane 0) with its fault log.
struct RunResult {
  ErrorConfig state;
  std::vector<FaultRecord> log;
};
RunResult run_schedule(const Schedule& s, const NoiseModel& noise, std::uint64_t seed, long t_stop = -1,
                       const ErrorConfig* initial = nullptr);

// One noiseless FT^(s-1)(EC) pass on a copy; the result must be syndrome-free.
struct DecodeResult {
  bool ok = false;  // false: residual syndromes (a defect)
  HomologyClass cls;
};
DecodeResult ideal_decode(const ErrorConfig& state, int s);

struct ToricTrelEstimate {
  double mean = 0.0;
  double se = 0.0;
  double censored_fraction = 0.0;
  long trials = 0;
  long t_max = 0;
  long defects = 0;  // lanes with residual syndromes after the noiseless pass
};

// Relaxation time in units of FT^(s-1)(EC) applications on L = 3^s.
ToricTrelEstimate estimate_trel(int s, const NoiseModel& noise, long trials, long t_max, std::uint64_t seed,
                                int workers = 1, bool half_ec = true);

// FT^(s-1)(EC) tiled on an L x L torus (L a multiple of 3^s).
SchedulePtr ec_layer_schedule(int s, int L, bool half_ec = true);

struct Fault {
  NoiseKind kind = NoiseKind::Qubit;
  long t = 0;                          // step (qubit: before step t)
  std::uint32_t index = 0;             // link or vertex
  std::vector<std::uint32_t> pattern;  // gadget: syndrome vertices toggled after step t
  std::string gadget;                  // gadget: description of the failed gadget
};

struct MinWeightResult {
  NoiseKind model = NoiseKind::Qubit;
  int s = 1;
  int w_link = -1;    // max over orientations of the minimal weight; -1 if not found
  int w_corner = -1;  // max over the two diagonals
  int w_link_or[2] = {-1, -1};
  int w_corner_or[2] = {-1, -1};
  std::vector<Fault> link_witness[2];
  std::vector<Fault> corner_witness[2];
  bool exhaustive = true;
  int max_weight = 2;
  long simulations = 0;
};

// Smallest number of faults in the first of two consecutive EC_s layers whose
// final syndrome is one s-link (by orientation) or the diagonal corners of one
// s-cell (by diagonal). s = 1: exhaustive up to `max_weight`. s = 2: exhaustive
// weight 1 plus the targeted weight-2 two-link search over all times,
// translations and mirrors (qubit model only).
MinWeightResult min_weight_search(int s, NoiseKind model, int max_weight = 2, int workers = 1);

// Syndrome patterns a failure of each gadget kind can produce (relative to the anchor).
std::vector<std::vector<Vertex>> gadget_damage_patterns(GadgetKind k);

}  // namespace hfca
