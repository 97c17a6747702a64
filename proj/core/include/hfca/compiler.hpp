// Hardwired schedules of the toric-code automaton: the inner recursion for
// level-n gadgets and the lazily generated outer simulation.
#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "hfca/gadgets.hpp"

namespace hfca {

// Level-m gadgets (m >= 1) as templates of elementary gadgets. Level 1 comes
// from the table; level m lifts the level-1 templates and R0 through level m-1.
struct GadgetLibrary {
  int level = 1;
  bool half_ec = false;  // EC_1 = R0' instead of R0
  GadgetTemplate ec, i, th, tv, mh, mv;

  const GadgetTemplate& gate(GadgetKind k) const;
  int scale() const;  // 3^level
};

std::shared_ptr<const GadgetLibrary> gadget_library(int level, bool half_ec = false);

// Fault-tolerant simulation of a template with a level-m library: an EC_m
// layer over every cell, then per step a block of level-m gates (idle cells
// get I_m; shorter gates padded at the end) followed by another EC_m layer.
GadgetTemplate lift(const GadgetTemplate& c, const GadgetLibrary& lib, const std::string& name);

// EC_1 = R0; EC_n = lift(R0, level n-1).
GadgetTemplate inner_ec(int n, bool half_ec = false);
// Level-n gate of the kind of an elementary gadget (I0 -> I_n, T0h -> T_n^h, ...).
GadgetTemplate inner_gate(GadgetKind kind, int n, bool half_ec = false);

class ScheduleCursor {
 public:
  virtual ~ScheduleCursor() = default;
  // Non-idle gadgets of layer t (idles implicit). Valid until the next call.
  virtual const std::vector<PlacedGadget>& layer(long t) = 0;
};

// Time-indexed layers on an L x L torus, generated on demand. Cursors carry
// all mutable state, so one schedule can serve many workers.
class Schedule {
 public:
  virtual ~Schedule() = default;
  virtual int L() const = 0;
  virtual long depth() const = 0;
  virtual std::unique_ptr<ScheduleCursor> cursor() const = 0;
};

using SchedulePtr = std::shared_ptr<const Schedule>;

SchedulePtr materialized_schedule(int L, std::vector<std::vector<PlacedGadget>> layers);
// A template whose footprint tiles the torus, placed on every footprint-sized block.
SchedulePtr tiled_schedule(const GadgetTemplate& t, int L);
SchedulePtr repeated_schedule(SchedulePtr base, long times);
// FT~(C) for a schedule C with a level-m library; the lattice grows by 3^m.
SchedulePtr lifted_schedule(SchedulePtr base, std::shared_ptr<const GadgetLibrary> lib);

struct SimParams {
  int k = 1;   // inner level
  int n = 1;   // outer iterations
  long T = 1;  // simulated idle steps
  bool half_ec = false;
  int L() const;  // 3^(n k)
};

// FT~^n(I0) for one idle step: the period of the automaton.
SchedulePtr outer_period(const SimParams& params);
// The automaton: T consecutive periods.
SchedulePtr outer_ft(const SimParams& params);

// FT^(s-1)(EC) on L = 3^s with EC_1 = R0' (half) or R0: the unit of time in
// the relaxation-time experiments and the ideal decoder's noiseless pass.
SchedulePtr ec_schedule(int s, bool half_ec = true);

long depth(const Schedule& s);
long depth(const GadgetTemplate& t);

// Every layer's non-idle footprints are disjoint.
bool check_tiling(const Schedule& s);

// "t <depth index>: <kind>@x,y ..." one line per layer, gadgets row-major by anchor.
void dump_schedule(const Schedule& s, std::ostream& os, long t_begin = 0, long t_end = -1);

std::vector<std::vector<PlacedGadget>> materialize(const Schedule& s);

}  // namespace hfca
