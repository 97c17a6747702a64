#include "hfca/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "hfca/harness.hpp"

namespace hfca {

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::Qubit: return "qubit";
    case NoiseKind::Measurement: return "measurement";
    case NoiseKind::Gadget: return "gadget";
    case NoiseKind::SkipMeasurement: return "skip";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "qubit") return NoiseKind::Qubit;
  if (s == "measurement") return NoiseKind::Measurement;
  if (s == "gadget") return NoiseKind::Gadget;
  if (s == "skip" || s == "skip_measurement") return NoiseKind::SkipMeasurement;
  throw std::invalid_argument("unknown noise model: " + s);
}

NoiseModel NoiseModel::single(NoiseKind kind, double p) {
  NoiseModel m;
  switch (kind) {
    case NoiseKind::Qubit: m.qubit = p; break;
    case NoiseKind::Measurement: m.measurement = p; break;
    case NoiseKind::Gadget: m.gadget = p; break;
    case NoiseKind::SkipMeasurement: m.skip = p; break;
  }
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  for (double p : {qubit, measurement, gadget, skip})
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability outside [0, 1]");
}

CompiledSchedule::CompiledSchedule(const Schedule& s)
    : lat_(s.L()), L_(s.L()), nlinks_(lat_.num_links()), nverts_(lat_.num_vertices()) {
  const auto dummy_link = static_cast<std::uint32_t>(nlinks_);
  ends_.resize(2 * (nlinks_ + 1));
  for (std::size_t l = 0; l < nlinks_; ++l) {
    std::size_t a, b;
    lat_.endpoints(l, a, b);
    ends_[2 * l] = static_cast<std::uint32_t>(a);
    ends_[2 * l + 1] = static_cast<std::uint32_t>(b);
  }
  ends_[2 * nlinks_] = ends_[2 * nlinks_ + 1] = static_cast<std::uint32_t>(nverts_);

  auto cur = s.cursor();
  op_begin_.push_back(0);
  g_begin_.push_back(0);
  for (long t = 0; t < s.depth(); ++t) {
    const auto& layer = cur->layer(t);
    for (const auto& g : layer) {
      const auto v = static_cast<std::uint32_t>(lat_.vertex_index(g.x, g.y));
      switch (g.kind) {
        case GadgetKind::I0: break;
        case GadgetKind::T0h:
          ops_.push_back({v, v, static_cast<std::uint32_t>(lat_.link_index(g.x - 1, g.y, Orient::H)),
                          static_cast<std::uint32_t>(lat_.link_index(g.x, g.y, Orient::H))});
          break;
        case GadgetKind::T0v:
          ops_.push_back({v, v, static_cast<std::uint32_t>(lat_.link_index(g.x, g.y - 1, Orient::V)),
                          static_cast<std::uint32_t>(lat_.link_index(g.x, g.y, Orient::V))});
          break;
        case GadgetKind::M0h:
          ops_.push_back({v, static_cast<std::uint32_t>(lat_.vertex_index(g.x + 1, g.y)),
                          static_cast<std::uint32_t>(lat_.link_index(g.x, g.y, Orient::H)), dummy_link});
          break;
        case GadgetKind::M0v:
          ops_.push_back({v, static_cast<std::uint32_t>(lat_.vertex_index(g.x, g.y + 1)),
                          static_cast<std::uint32_t>(lat_.link_index(g.x, g.y, Orient::V)), dummy_link});
          break;
      }
      if (g.kind != GadgetKind::I0) gadgets_.push_back(g);
    }
    for (const Vertex& c : idle_cells(lat_, layer)) gadgets_.push_back({GadgetKind::I0, c.x, c.y});
    op_begin_.push_back(ops_.size());
    g_begin_.push_back(gadgets_.size());
  }

  support_cache_.resize(5 * nverts_);
  for (int k = 0; k < 5; ++k) {
    const auto kind = static_cast<GadgetKind>(k);
    const auto offs = support_offsets(kind);
    for (std::size_t v = 0; v < nverts_; ++v) {
      const Vertex a = lat_.vertex_at(v);
      auto& sup = support_cache_[k * nverts_ + v];
      for (const Link& l : offs) sup.push_back(static_cast<std::uint32_t>(lat_.link_index(a.x + l.x, a.y + l.y, l.o)));
    }
  }
}

const std::vector<std::uint32_t>& CompiledSchedule::support(const PlacedGadget& g) const {
  return support_cache_[static_cast<std::size_t>(g.kind) * nverts_ + lat_.vertex_index(g.x, g.y)];
}

std::uint64_t SlicedState::any_syndrome() const {
  std::uint64_t m = 0;
  for (std::size_t v = 0; v + 1 < syn.size(); ++v) m |= syn[v];
  return m;
}

ToricEngine::ToricEngine(std::shared_ptr<const CompiledSchedule> sched, const NoiseModel& noise)
    : sched_(std::move(sched)),
      noise_(noise),
      qubit_(noise.qubit),
      meas_(noise.measurement),
      gadget_(noise.gadget),
      skip_(noise.skip),
      snap_(sched_->num_vertices() + 1, 0) {
  noise_.validate();
}

void ToricEngine::step(long t, SlicedState& s, Rng& rng, const std::vector<Injection>* before,
                       std::vector<FaultRecord>* log) {
  const CompiledSchedule& c = *sched_;
  auto flip_link = [&](std::uint32_t l, std::uint64_t m) {
    s.links[l] ^= m;
    s.syn[c.end_a(l)] ^= m;
    s.syn[c.end_b(l)] ^= m;
  };
  if (before)
    for (const Injection& in : *before) {
      if (in.kind == Injection::Link) flip_link(in.index, in.lanes);
      else if (in.kind == Injection::Syndrome) s.syn[in.index] ^= in.lanes;
    }
  std::copy(s.syn.begin(), s.syn.end(), snap_.begin());
  if (before)
    for (const Injection& in : *before)
      if (in.kind == Injection::Measurement) snap_[in.index] ^= in.lanes;
  const std::size_t nv = c.num_vertices(), nl = c.num_links();
  if (noise_.measurement > 0)
    for (std::size_t v = 0; v < nv; ++v)
      if (const std::uint64_t m = meas_.next(rng)) {
        snap_[v] ^= m;
        if (log && (m & 1)) log->push_back({t, NoiseKind::Measurement, static_cast<std::uint32_t>(v), {}});
      }
  const auto* ob = c.ops_begin(t);
  const auto* oe = c.ops_end(t);
  if (noise_.skip > 0) {
    for (const auto* op = ob; op != oe; ++op) {
      std::uint64_t m = snap_[op->r0] & snap_[op->r1];
      if (const std::uint64_t sk = skip_.next(rng)) {
        if (log && (sk & 1))
          log->push_back({t, NoiseKind::SkipMeasurement, static_cast<std::uint32_t>(op - ob), {}});
        m &= ~sk;
      }
      if (m) {
        flip_link(op->l0, m);
        flip_link(op->l1, m);
      }
    }
  } else {
    for (const auto* op = ob; op != oe; ++op)
      if (const std::uint64_t m = snap_[op->r0] & snap_[op->r1]) {
        flip_link(op->l0, m);
        flip_link(op->l1, m);
      }
  }
  if (noise_.qubit > 0)
    for (std::size_t l = 0; l < nl; ++l)
      if (const std::uint64_t m = qubit_.next(rng)) {
        flip_link(static_cast<std::uint32_t>(l), m);
        if (log && (m & 1)) log->push_back({t, NoiseKind::Qubit, static_cast<std::uint32_t>(l), {}});
      }
  if (noise_.gadget > 0) {
    const auto* gb = c.gadgets_begin(t);
    for (const auto* g = gb; g != c.gadgets_end(t); ++g)
      if (const std::uint64_t f = gadget_.next(rng)) {
        FaultRecord rec{t, NoiseKind::Gadget, static_cast<std::uint32_t>(g - gb), {}};
        for (std::uint32_t l : c.support(*g)) {
          const std::uint64_t r = rng.next() & f;
          flip_link(l, r);
          if (r & 1) rec.pattern.push_back(l);
        }
        if (log && (f & 1)) log->push_back(std::move(rec));
      }
  }
}

void ToricEngine::run(SlicedState& s, Rng& rng, std::vector<FaultRecord>* log) {
  for (long t = 0; t < sched_->depth(); ++t) step(t, s, rng, nullptr, log);
}

void ToricEngine::run_noiseless(SlicedState& s) const {
  const CompiledSchedule& c = *sched_;
  std::vector<std::uint64_t> snap(s.syn.size());
  for (long t = 0; t < c.depth(); ++t) {
    std::copy(s.syn.begin(), s.syn.end(), snap.begin());
    for (const auto* op = c.ops_begin(t); op != c.ops_end(t); ++op)
      if (const std::uint64_t m = snap[op->r0] & snap[op->r1])
        for (std::uint32_t l : {op->l0, op->l1}) {
          s.links[l] ^= m;
          s.syn[c.end_a(l)] ^= m;
          s.syn[c.end_b(l)] ^= m;
        }
  }
}

void homology_lanes(const CompiledSchedule& c, const SlicedState& s, std::uint64_t& h, std::uint64_t& v) {
  const TorusLattice& lat = c.lattice();
  h = v = 0;
  for (int i = 0; i < c.L(); ++i) {
    h ^= s.links[lat.link_index(0, i, Orient::H)];
    v ^= s.links[lat.link_index(i, 0, Orient::V)];
  }
}

namespace {

void load_lane0(const ErrorConfig& e, const CompiledSchedule& c, SlicedState& s) {
  if (e.lattice.L() != c.L()) throw std::invalid_argument("initial state lattice does not match the schedule");
  for (std::size_t l = 0; l < c.num_links(); ++l)
    if (e.bits.get(l)) {
      s.links[l] ^= 1;
      s.syn[c.end_a(static_cast<std::uint32_t>(l))] ^= 1;
      s.syn[c.end_b(static_cast<std::uint32_t>(l))] ^= 1;
    }
}

ErrorConfig lane_config(const CompiledSchedule& c, const SlicedState& s, int lane) {
  ErrorConfig e(c.lattice());
  for (std::size_t l = 0; l < c.num_links(); ++l)
    if ((s.links[l] >> lane) & 1) e.bits.set(l, true);
  return e;
}

}  // namespace

RunResult run_schedule(const Schedule& sch, const NoiseModel& noise, std::uint64_t seed, long t_stop,
                       const ErrorConfig* initial) {
  auto c = std::make_shared<const CompiledSchedule>(sch);
  ToricEngine eng(c, noise);
  SlicedState s(*c);
  if (initial) load_lane0(*initial, *c, s);
  Rng rng(seed);
  RunResult out;
  const long stop = t_stop < 0 ? c->depth() : std::min(t_stop, c->depth());
  for (long t = 0; t < stop; ++t) eng.step(t, s, rng, nullptr, &out.log);
  out.state = lane_config(*c, s, 0);
  return out;
}

SchedulePtr ec_layer_schedule(int s, int L, bool half_ec) {
  if (s < 1) throw std::invalid_argument("level s must be at least 1");
  const int unit = pow3(s);
  if (L <= 0 || L % unit) throw std::invalid_argument("lattice side must be a multiple of 3^s");
  SchedulePtr sch = tiled_schedule(build_r0(half_ec), L / pow3(s - 1));
  auto lib = gadget_library(1, half_ec);
  for (int i = 1; i < s; ++i) sch = lifted_schedule(sch, lib);
  return sch;
}

DecodeResult ideal_decode(const ErrorConfig& state, int s) {
  auto c = std::make_shared<const CompiledSchedule>(*ec_layer_schedule(s, state.lattice.L()));
  ToricEngine eng(c, NoiseModel{});
  SlicedState st(*c);
  load_lane0(state, *c, st);
  eng.run_noiseless(st);
  DecodeResult r;
  r.ok = (st.any_syndrome() & 1) == 0;
  std::uint64_t h, v;
  homology_lanes(*c, st, h, v);
  r.cls.h = h & 1;
  r.cls.v = v & 1;
  return r;
}

ToricTrelEstimate estimate_trel(int s, const NoiseModel& noise, long trials, long t_max, std::uint64_t seed,
                                int workers, bool half_ec) {
  if (trials <= 0 || t_max <= 0) throw std::invalid_argument("trials and t_max must be positive");
  noise.validate();
  auto c = std::make_shared<const CompiledSchedule>(*ec_schedule(s, half_ec));
  const std::size_t batches = static_cast<std::size_t>((trials + 63) / 64);
  std::vector<std::vector<long>> times(batches);
  std::vector<long> defects(batches, 0);
  parallel_for(batches, workers, [&](std::size_t b) {
    const long lanes = std::min<long>(64, trials - static_cast<long>(b) * 64);
    std::uint64_t alive = lanes == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << lanes) - 1);
    std::vector<long> t_of(64, -1);
    Rng rng(derive_seed(seed, b, "toric-trel"));
    ToricEngine eng(c, noise);
    SlicedState st(*c), probe(*c);
    for (long a = 1; a <= t_max && alive; ++a) {
      eng.run(st, rng);
      probe = st;
      eng.run_noiseless(probe);
      const std::uint64_t residual = probe.any_syndrome();
      std::uint64_t h, v;
      homology_lanes(*c, probe, h, v);
      const std::uint64_t fail = (residual | h | v) & alive;
      for (std::uint64_t m = fail; m; m &= m - 1) t_of[std::countr_zero(m)] = a;
      defects[b] += std::popcount(residual & alive);
      alive &= ~fail;
    }
    for (long i = 0; i < lanes; ++i) times[b].push_back(t_of[i]);
  });
  ToricTrelEstimate e;
  e.t_max = t_max;
  double sum = 0, sum2 = 0;
  long censored = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    e.defects += defects[b];
    for (long t : times[b]) {
      const double x = t < 0 ? static_cast<double>(t_max) : static_cast<double>(t);
      if (t < 0) ++censored;
      sum += x;
      sum2 += x * x;
      ++e.trials;
    }
  }
  const double n = static_cast<double>(e.trials);
  e.mean = sum / n;
  e.se = n > 1 ? std::sqrt(std::max(0.0, (sum2 - n * e.mean * e.mean) / (n - 1)) / n) : 0.0;
  e.censored_fraction = censored / n;
  return e;
}

std::vector<std::vector<Vertex>> gadget_damage_patterns(GadgetKind k) {
  const auto offs = support_offsets(k);
  if (offs.size() > 20) throw std::invalid_argument("gadget support too large to enumerate");
  std::set<std::vector<std::pair<int, int>>> seen;
  for (std::uint32_t mask = 1; mask < (1u << offs.size()); ++mask) {
    std::map<std::pair<int, int>, int> par;
    for (std::size_t i = 0; i < offs.size(); ++i) {
      if (!((mask >> i) & 1)) continue;
      const Link& l = offs[i];
      par[{l.x, l.y}] ^= 1;
      if (l.o == Orient::H) par[{l.x + 1, l.y}] ^= 1;
      else par[{l.x, l.y + 1}] ^= 1;
    }
    std::vector<std::pair<int, int>> vs;
    for (const auto& [v, b] : par)
      if (b) vs.push_back(v);
    if (!vs.empty()) seen.insert(vs);
  }
  std::vector<std::vector<Vertex>> out;
  for (const auto& vs : seen) {
    std::vector<Vertex> p;
    for (const auto& [x, y] : vs) p.push_back({x, y});
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// One candidate fault in the first of two EC layers.
struct Loc {
  NoiseKind kind;
  long t;
  std::uint32_t index;           // link / vertex / gadget index in layer t
  std::uint32_t pattern = 0;     // damage pattern id (gadget)
  bool canonical = false;        // anchored in the translation fundamental domain
};

// 0/1: s-link (h/v); 2/3: corners of an s-cell (main/anti diagonal); -1 otherwise.
int classify(const TorusLattice& lat, int d, const std::vector<std::uint32_t>& syn) {
  if (syn.size() != 2) return -1;
  const Vertex a = lat.vertex_at(syn[0]), b = lat.vertex_at(syn[1]);
  if (a.x % d || a.y % d || b.x % d || b.y % d) return -1;
  const int L = lat.L();
  const int dx = lat.wrap(b.x - a.x), dy = lat.wrap(b.y - a.y);
  auto pm = [&](int v) { return v == d || v == L - d; };
  if (dy == 0 && pm(dx)) return 0;
  if (dx == 0 && pm(dy)) return 1;
  if ((dx == d && dy == d) || (dx == L - d && dy == L - d)) return 2;
  if ((dx == d && dy == L - d) || (dx == L - d && dy == d)) return 3;
  return -1;
}

class MinWeightRunner {
 public:
  MinWeightRunner(int s, NoiseKind model) : s_(s), model_(model), d_(pow3(s)) {
    auto one = ec_layer_schedule(s, 3 * d_);
    D_ = one->depth();
    c_ = std::make_shared<const CompiledSchedule>(*repeated_schedule(one, 2));
    for (int k = 0; k < 5; ++k) patterns_[k] = gadget_damage_patterns(static_cast<GadgetKind>(k));
  }

  long layer_depth() const { return D_; }
  const CompiledSchedule& compiled() const { return *c_; }
  int spacing() const { return d_; }

  std::vector<Loc> locations() const {
    const TorusLattice& lat = c_->lattice();
    std::vector<Loc> out;
    auto canon = [&](int x, int y) { return x < d_ && y < d_; };
    for (long t = 0; t < D_; ++t) {
      switch (model_) {
        case NoiseKind::Qubit:
          for (std::size_t l = 0; l < c_->num_links(); ++l) {
            const Link k = lat.link_at(l);
            out.push_back({model_, t, static_cast<std::uint32_t>(l), 0, canon(k.x, k.y)});
          }
          break;
        case NoiseKind::Measurement:
          for (std::size_t v = 0; v < c_->num_vertices(); ++v) {
            const Vertex k = lat.vertex_at(v);
            out.push_back({model_, t, static_cast<std::uint32_t>(v), 0, canon(k.x, k.y)});
          }
          break;
        case NoiseKind::Gadget: {
          const auto* gb = c_->gadgets_begin(t);
          for (const auto* g = gb; g != c_->gadgets_end(t); ++g) {
            const auto& pats = patterns_[static_cast<int>(g->kind)];
            for (std::uint32_t p = 0; p < pats.size(); ++p)
              out.push_back({model_, t, static_cast<std::uint32_t>(g - gb), p, canon(g->x, g->y)});
          }
          break;
        }
        default: throw std::invalid_argument("minimal-weight search supports qubit, measurement and gadget noise");
      }
    }
    return out;
  }

  void inject(const Loc& loc, std::uint64_t lane, std::vector<std::vector<Injection>>& inj) const {
    switch (loc.kind) {
      case NoiseKind::Qubit: inj[loc.t].push_back({Injection::Link, loc.index, lane}); break;
      case NoiseKind::Measurement: inj[loc.t].push_back({Injection::Measurement, loc.index, lane}); break;
      case NoiseKind::Gadget: {
        const PlacedGadget& g = c_->gadgets_begin(loc.t)[loc.index];
        const TorusLattice& lat = c_->lattice();
        for (const Vertex& v : patterns_[static_cast<int>(g.kind)][loc.pattern])
          inj[loc.t + 1].push_back(
              {Injection::Syndrome, static_cast<std::uint32_t>(lat.vertex_index(g.x + v.x, g.y + v.y)), lane});
        break;
      }
      default: break;
    }
  }

  Fault describe(const Loc& loc) const {
    Fault f;
    f.kind = loc.kind;
    f.t = loc.t;
    f.index = loc.index;
    if (loc.kind == NoiseKind::Gadget) {
      const PlacedGadget& g = c_->gadgets_begin(loc.t)[loc.index];
      const TorusLattice& lat = c_->lattice();
      f.gadget = to_string(g.kind) + "@" + std::to_string(g.x) + "," + std::to_string(g.y);
      for (const Vertex& v : patterns_[static_cast<int>(g.kind)][loc.pattern])
        f.pattern.push_back(static_cast<std::uint32_t>(lat.vertex_index(g.x + v.x, g.y + v.y)));
    }
    return f;
  }

  // Runs up to 64 fault sets; returns the class of each lane.
  std::vector<int> run(const std::vector<std::vector<Loc>>& sets) const {
    std::vector<std::vector<Injection>> inj(c_->depth() + 1);
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (const Loc& l : sets[i]) inject(l, std::uint64_t{1} << i, inj);
    ToricEngine eng(c_, NoiseModel{});
    SlicedState st(*c_);
    Rng rng(0);
    for (long t = 0; t < c_->depth(); ++t) eng.step(t, st, rng, inj[t].empty() ? nullptr : &inj[t]);
    std::vector<std::vector<std::uint32_t>> syn(sets.size());
    for (std::size_t v = 0; v < c_->num_vertices(); ++v)
      for (std::uint64_t m = st.syn[v]; m; m &= m - 1) {
        const int lane = std::countr_zero(m);
        if (static_cast<std::size_t>(lane) < sets.size() && syn[lane].size() < 3)
          syn[lane].push_back(static_cast<std::uint32_t>(v));
      }
    std::vector<int> cls(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) cls[i] = classify(c_->lattice(), d_, syn[i]);
    return cls;
  }

 private:
  int s_;
  NoiseKind model_;
  int d_;
  long D_ = 0;
  std::shared_ptr<const CompiledSchedule> c_;
  std::vector<std::vector<Vertex>> patterns_[5];
};

// Records fault sets into the result, the first (in enumeration order) per class.
struct Collector {
  MinWeightResult& r;
  const MinWeightRunner& run;
  void offer(int cls, int w, const std::vector<Loc>& set) {
    if (cls < 0) return;
    int& slot = cls < 2 ? r.w_link_or[cls] : r.w_corner_or[cls - 2];
    if (slot != -1) return;
    slot = w;
    auto& wit = cls < 2 ? r.link_witness[cls] : r.corner_witness[cls - 2];
    for (const Loc& l : set) wit.push_back(run.describe(l));
  }
  bool done() const {
    return r.w_link_or[0] >= 0 && r.w_link_or[1] >= 0 && r.w_corner_or[0] >= 0 && r.w_corner_or[1] >= 0;
  }
};

// Evaluates fault sets in batches of 64, in order, offering each result.
void evaluate(const MinWeightRunner& runner, Collector& col, int w, std::size_t count,
              const std::function<std::vector<Loc>(std::size_t)>& make, int workers) {
  const std::size_t per_chunk = 64 * 64;
  for (std::size_t base = 0; base < count; base += per_chunk) {
    const std::size_t n = std::min(per_chunk, count - base);
    const std::size_t batches = (n + 63) / 64;
    std::vector<std::vector<std::vector<Loc>>> sets(batches);
    std::vector<std::vector<int>> cls(batches);
    parallel_for(batches, workers, [&](std::size_t b) {
      for (std::size_t i = b * 64; i < std::min(n, (b + 1) * 64); ++i) sets[b].push_back(make(base + i));
      cls[b] = runner.run(sets[b]);
    });
    for (std::size_t b = 0; b < batches; ++b)
      for (std::size_t i = 0; i < sets[b].size(); ++i) col.offer(cls[b][i], w, sets[b][i]);
    col.r.simulations += static_cast<long>(n);
  }
}

// The two-link witness: two horizontal links of consecutive rows, one column apart.
const Link kWitness[2] = {{0, 0, Orient::H}, {1, 1, Orient::H}};

Link apply_symmetry(const Link& l, int sym) {
  Link r = l;
  if (sym & 4) r = {r.y, r.x, flip(r.o)};
  if (sym & 1) r = r.o == Orient::H ? Link{-r.x - 1, r.y, r.o} : Link{-r.x, r.y, r.o};
  if (sym & 2) r = r.o == Orient::V ? Link{r.x, -r.y - 1, r.o} : Link{r.x, -r.y, r.o};
  return r;
}

}  // namespace

MinWeightResult min_weight_search(int s, NoiseKind model, int max_weight, int workers) {
  if (s < 1 || s > 2) throw std::invalid_argument("minimal-weight search supports s = 1 and s = 2");
  if (max_weight < 1 || max_weight > 2) throw std::invalid_argument("max_weight must be 1 or 2");
  MinWeightResult r;
  r.exhaustive = s == 1;
  r.model = model;
  r.s = s;
  r.max_weight = max_weight;
  MinWeightRunner runner(s, model);
  Collector col{r, runner};
  const std::vector<Loc> locs = runner.locations();
  std::vector<std::size_t> canon;
  for (std::size_t i = 0; i < locs.size(); ++i)
    if (locs[i].canonical) canon.push_back(i);

  // Weight 1: translations of a fault give translated outcomes.
  evaluate(runner, col, 1, canon.size(), [&](std::size_t i) { return std::vector<Loc>{locs[canon[i]]}; }, workers);

  if (max_weight >= 2 && !col.done()) {
    if (s == 1) {
      const std::size_t pairs = canon.size() * locs.size();
      if (pairs > 200'000'000) {
        r.exhaustive = false;
      } else {
        evaluate(runner, col, 2, pairs, [&](std::size_t k) {
          const Loc& a = locs[canon[k / locs.size()]];
          const Loc& b = locs[k % locs.size()];
          return std::vector<Loc>{a, b};
        }, workers);
      }
    } else {
      if (model == NoiseKind::Qubit) {
        const TorusLattice& lat = runner.compiled().lattice();
        const int d = runner.spacing();
        const long D = runner.layer_depth();
        const std::size_t count = static_cast<std::size_t>(D) * d * d * 8;
        evaluate(runner, col, 2, count, [&](std::size_t k) {
          const int sym = static_cast<int>(k % 8);
          const std::size_t rest = k / 8;
          const int x = static_cast<int>(rest % d), y = static_cast<int>((rest / d) % d);
          const long t = static_cast<long>(rest / (static_cast<std::size_t>(d) * d));
          std::vector<Loc> set;
          for (const Link& w : kWitness) {
            const Link l = apply_symmetry(w, sym);
            set.push_back({NoiseKind::Qubit, t, static_cast<std::uint32_t>(lat.link_index(x + l.x, y + l.y, l.o)), 0,
                           false});
          }
          return set;
        }, workers);
      }
    }
  }
  r.w_link = (r.w_link_or[0] < 0 || r.w_link_or[1] < 0) ? -1 : std::max(r.w_link_or[0], r.w_link_or[1]);
  r.w_corner = (r.w_corner_or[0] < 0 || r.w_corner_or[1] < 0) ? -1 : std::max(r.w_corner_or[0], r.w_corner_or[1]);
  return r;
}

}  // namespace hfca
