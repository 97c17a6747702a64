#include "hfca/compiler.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hfca {

const GadgetTemplate& GadgetLibrary::gate(GadgetKind k) const {
  switch (k) {
    case GadgetKind::I0: return i;
    case GadgetKind::T0h: return th;
    case GadgetKind::T0v: return tv;
    case GadgetKind::M0h: return mh;
    case GadgetKind::M0v: return mv;
  }
  throw std::invalid_argument("unknown gadget kind");
}

int GadgetLibrary::scale() const { return pow3(level); }

namespace {

std::string level_name(const std::string& base, int n) {
  return base + std::to_string(n);
}

int block_depth(const std::vector<PlacedGadget>& step, bool any_idle, const GadgetLibrary& lib) {
  int d = any_idle ? lib.i.depth : 0;
  for (const auto& g : step) d = std::max(d, lib.gate(g.kind).depth);
  return d;
}

// Cells of a footprint not covered by the non-idle gadgets of a step.
std::vector<Vertex> idle_cells_in(const CellRect& fp, const std::vector<PlacedGadget>& step) {
  const int w = fp.width(), h = fp.height();
  std::vector<std::uint8_t> cover(static_cast<std::size_t>(w) * h, 0);
  for (const auto& g : step) {
    if (g.kind == GadgetKind::I0) continue;
    const CellRect r = footprint_offsets(g.kind);
    for (int dy = r.y0; dy <= r.y1; ++dy)
      for (int dx = r.x0; dx <= r.x1; ++dx) {
        const int cx = g.x + dx - fp.x0, cy = g.y + dy - fp.y0;
        if (cx < 0 || cy < 0 || cx >= w || cy >= h)
          throw std::invalid_argument("gadget footprint leaves the template footprint");
        auto& c = cover[static_cast<std::size_t>(cy) * w + cx];
        if (c) throw std::invalid_argument("gadget footprints overlap in a template step");
        c = 1;
      }
  }
  std::vector<Vertex> out;
  for (int cy = 0; cy < h; ++cy)
    for (int cx = 0; cx < w; ++cx)
      if (!cover[static_cast<std::size_t>(cy) * w + cx]) out.push_back({fp.x0 + cx, fp.y0 + cy});
  return out;
}

void append_step(std::vector<PlacedGadget>& out, const GadgetTemplate& t, int s, int ax, int ay) {
  if (s >= t.depth) return;
  for (const auto& g : t.steps[s]) out.push_back({g.kind, ax + g.x, ay + g.y});
}

}  // namespace

GadgetTemplate lift(const GadgetTemplate& c, const GadgetLibrary& lib, const std::string& name) {
  const int f = lib.scale();
  GadgetTemplate out;
  out.name = name;
  out.footprint = {f * c.footprint.x0, f * c.footprint.y0, f * (c.footprint.x1 + 1) - 1,
                   f * (c.footprint.y1 + 1) - 1};
  std::vector<Vertex> cells;
  for (int y = c.footprint.y0; y <= c.footprint.y1; ++y)
    for (int x = c.footprint.x0; x <= c.footprint.x1; ++x) cells.push_back({x, y});
  auto ec_layer = [&] {
    for (int s = 0; s < lib.ec.depth; ++s) {
      std::vector<PlacedGadget> layer;
      for (const Vertex& v : cells) append_step(layer, lib.ec, s, f * v.x, f * v.y);
      out.steps.push_back(std::move(layer));
    }
  };
  ec_layer();
  for (const auto& step : c.steps) {
    const std::vector<Vertex> idle = idle_cells_in(c.footprint, step);
    const int d = block_depth(step, !idle.empty(), lib);
    for (int s = 0; s < d; ++s) {
      std::vector<PlacedGadget> layer;
      for (const auto& g : step) append_step(layer, lib.gate(g.kind), s, f * g.x, f * g.y);
      for (const Vertex& v : idle) append_step(layer, lib.i, s, f * v.x, f * v.y);
      out.steps.push_back(std::move(layer));
    }
    ec_layer();
  }
  for (auto& s : out.steps) std::sort(s.begin(), s.end());
  out.depth = static_cast<int>(out.steps.size());
  return out;
}

std::shared_ptr<const GadgetLibrary> gadget_library(int level, bool half_ec) {
  if (level < 1) throw std::invalid_argument("library level must be at least 1");
  if (level > 3) throw std::invalid_argument("library levels above 3 are beyond desk scale");
  static std::recursive_mutex mu;
  static std::map<std::pair<int, bool>, std::shared_ptr<const GadgetLibrary>> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  if (auto it = cache.find({level, half_ec}); it != cache.end()) return it->second;
  auto lib = std::make_shared<GadgetLibrary>();
  lib->level = level;
  lib->half_ec = half_ec;
  const GadgetTemplate r0 = build_r0(half_ec);
  if (level == 1) {
    lib->ec = r0;
    lib->i = build_level1(Level1Kind::I1);
    lib->th = build_level1(Level1Kind::T1h);
    lib->tv = build_level1(Level1Kind::T1v);
    lib->mh = build_level1(Level1Kind::M1h);
    lib->mv = build_level1(Level1Kind::M1v);
  } else {
    const auto prev = gadget_library(level - 1, half_ec);
    lib->ec = lift(r0, *prev, level_name("EC", level));
    lib->i = lift(build_level1(Level1Kind::I1), *prev, level_name("I", level));
    lib->th = lift(build_level1(Level1Kind::T1h), *prev, level_name("T", level) + "h");
    lib->tv = lift(build_level1(Level1Kind::T1v), *prev, level_name("T", level) + "v");
    lib->mh = lift(build_level1(Level1Kind::M1h), *prev, level_name("M", level) + "h");
    lib->mv = lift(build_level1(Level1Kind::M1v), *prev, level_name("M", level) + "v");
  }
  cache[{level, half_ec}] = lib;
  return lib;
}

GadgetTemplate inner_ec(int n, bool half_ec) {
  if (n < 1) throw std::invalid_argument("EC level must be at least 1");
  return gadget_library(n, half_ec)->ec;
}

GadgetTemplate inner_gate(GadgetKind kind, int n, bool half_ec) {
  if (n < 1) throw std::invalid_argument("gate level must be at least 1");
  return gadget_library(n, half_ec)->gate(kind);
}

namespace {

class VectorCursor : public ScheduleCursor {
 public:
  explicit VectorCursor(const std::vector<std::vector<PlacedGadget>>* layers) : layers_(layers) {}
  const std::vector<PlacedGadget>& layer(long t) override {
    if (t < 0 || t >= static_cast<long>(layers_->size())) throw std::out_of_range("layer index out of range");
    return (*layers_)[t];
  }

 private:
  const std::vector<std::vector<PlacedGadget>>* layers_;
};

class MaterializedSchedule : public Schedule {
 public:
  MaterializedSchedule(int L, std::vector<std::vector<PlacedGadget>> layers) : L_(L), layers_(std::move(layers)) {}
  int L() const override { return L_; }
  long depth() const override { return static_cast<long>(layers_.size()); }
  std::unique_ptr<ScheduleCursor> cursor() const override { return std::make_unique<VectorCursor>(&layers_); }

 private:
  int L_;
  std::vector<std::vector<PlacedGadget>> layers_;
};

class RepeatedSchedule : public Schedule {
 public:
  RepeatedSchedule(SchedulePtr base, long times) : base_(std::move(base)), times_(times) {}
  int L() const override { return base_->L(); }
  long depth() const override { return base_->depth() * times_; }
  std::unique_ptr<ScheduleCursor> cursor() const override {
    struct C : ScheduleCursor {
      std::unique_ptr<ScheduleCursor> inner;
      long period, total;
      const std::vector<PlacedGadget>& layer(long t) override {
        if (t < 0 || t >= total) throw std::out_of_range("layer index out of range");
        return inner->layer(t % period);
      }
    };
    auto c = std::make_unique<C>();
    c->inner = base_->cursor();
    c->period = base_->depth();
    c->total = depth();
    return c;
  }

 private:
  SchedulePtr base_;
  long times_;
};

class LiftedSchedule : public Schedule {
 public:
  LiftedSchedule(SchedulePtr base, std::shared_ptr<const GadgetLibrary> lib)
      : base_(std::move(base)), lib_(std::move(lib)), f_(lib_->scale()), L_(base_->L() * f_) {
    const TorusLattice small(base_->L());
    auto cur = base_->cursor();
    const long e = lib_->ec.depth;
    long t = e;
    starts_.reserve(base_->depth());
    for (long i = 0; i < base_->depth(); ++i) {
      const auto& layer = cur->layer(i);
      const bool any_idle = !idle_cells(small, layer).empty();
      const int d = block_depth(layer, any_idle, *lib_);
      starts_.push_back(t);
      blocks_.push_back(d);
      t += d + e;
    }
    depth_ = t;
    const TorusLattice big(L_);
    ec_layers_.resize(e);
    for (long s = 0; s < e; ++s) {
      auto& layer = ec_layers_[s];
      for (int cy = 0; cy < base_->L(); ++cy)
        for (int cx = 0; cx < base_->L(); ++cx)
          for (const auto& g : lib_->ec.steps[s]) layer.push_back({g.kind, big.wrap(f_ * cx + g.x), big.wrap(f_ * cy + g.y)});
    }
  }

  int L() const override { return L_; }
  long depth() const override { return depth_; }

  std::unique_ptr<ScheduleCursor> cursor() const override {
    struct C : ScheduleCursor {
      const LiftedSchedule* s;
      std::unique_ptr<ScheduleCursor> base;
      long cached = -1;
      std::vector<PlacedGadget> gates;
      std::vector<Vertex> idle;
      std::vector<PlacedGadget> out;
      const std::vector<PlacedGadget>& layer(long t) override {
        if (t < 0 || t >= s->depth_) throw std::out_of_range("layer index out of range");
        const long e = s->lib_->ec.depth;
        if (t < e) return s->ec_layers_[t];
        const auto it = std::upper_bound(s->starts_.begin(), s->starts_.end(), t);
        const long i = static_cast<long>(it - s->starts_.begin()) - 1;
        const long tau = t - s->starts_[i];
        if (tau >= s->blocks_[i]) return s->ec_layers_[tau - s->blocks_[i]];
        if (i != cached) {
          gates = base->layer(i);
          idle = idle_cells(TorusLattice(s->base_->L()), gates);
          cached = i;
        }
        const TorusLattice big(s->L_);
        const int f = s->f_;
        out.clear();
        auto put = [&](const GadgetTemplate& tpl, int ax, int ay) {
          if (tau >= tpl.depth) return;
          for (const auto& g : tpl.steps[tau]) out.push_back({g.kind, big.wrap(ax + g.x), big.wrap(ay + g.y)});
        };
        for (const auto& g : gates) put(s->lib_->gate(g.kind), f * g.x, f * g.y);
        for (const auto& v : idle) put(s->lib_->i, f * v.x, f * v.y);
        return out;
      }
    };
    auto c = std::make_unique<C>();
    c->s = this;
    c->base = base_->cursor();
    return c;
  }

 private:
  SchedulePtr base_;
  std::shared_ptr<const GadgetLibrary> lib_;
  int f_;
  int L_;
  long depth_ = 0;
  std::vector<long> starts_;
  std::vector<int> blocks_;
  std::vector<std::vector<PlacedGadget>> ec_layers_;
};

}  // namespace

SchedulePtr materialized_schedule(int L, std::vector<std::vector<PlacedGadget>> layers) {
  if (L <= 0) throw std::invalid_argument("lattice side must be positive");
  return std::make_shared<MaterializedSchedule>(L, std::move(layers));
}

SchedulePtr tiled_schedule(const GadgetTemplate& t, int L) {
  const int w = t.footprint.width(), h = t.footprint.height();
  if (L % w || L % h) throw std::invalid_argument("template footprint does not tile the lattice");
  const TorusLattice lat(L);
  std::vector<std::vector<PlacedGadget>> layers(t.depth);
  for (int by = 0; by < L / h; ++by)
    for (int bx = 0; bx < L / w; ++bx) {
      const int ax = bx * w - t.footprint.x0, ay = by * h - t.footprint.y0;
      for (int s = 0; s < t.depth; ++s)
        for (const auto& g : t.steps[s]) layers[s].push_back({g.kind, lat.wrap(ax + g.x), lat.wrap(ay + g.y)});
    }
  for (auto& l : layers) std::sort(l.begin(), l.end());
  return materialized_schedule(L, std::move(layers));
}

SchedulePtr repeated_schedule(SchedulePtr base, long times) {
  if (times < 0) throw std::invalid_argument("negative repetition count");
  return std::make_shared<RepeatedSchedule>(std::move(base), times);
}

SchedulePtr lifted_schedule(SchedulePtr base, std::shared_ptr<const GadgetLibrary> lib) {
  return std::make_shared<LiftedSchedule>(std::move(base), std::move(lib));
}

int SimParams::L() const { return pow3(n * k); }

SchedulePtr outer_period(const SimParams& p) {
  if (p.k < 1 || p.n < 0) throw std::invalid_argument("invalid simulation parameters");
  if (p.n * p.k > 6) throw std::invalid_argument("lattice 3^(n k) beyond desk scale");
  SchedulePtr s = materialized_schedule(1, {{}});
  auto lib = gadget_library(p.k, p.half_ec);
  for (int i = 0; i < p.n; ++i) s = lifted_schedule(s, lib);
  return s;
}

SchedulePtr outer_ft(const SimParams& p) {
  if (p.T < 1) throw std::invalid_argument("T must be at least 1");
  return repeated_schedule(outer_period(p), p.T);
}

SchedulePtr ec_schedule(int s, bool half_ec) {
  if (s < 1) throw std::invalid_argument("level s must be at least 1");
  SchedulePtr sch = tiled_schedule(build_r0(half_ec), 3);
  auto lib = gadget_library(1, half_ec);
  for (int i = 1; i < s; ++i) sch = lifted_schedule(sch, lib);
  return sch;
}

long depth(const Schedule& s) { return s.depth(); }
long depth(const GadgetTemplate& t) { return t.depth; }

bool check_tiling(const Schedule& s) {
  const TorusLattice lat(s.L());
  auto cur = s.cursor();
  for (long t = 0; t < s.depth(); ++t)
    if (!layer_tiles(lat, cur->layer(t))) return false;
  return true;
}

void dump_schedule(const Schedule& s, std::ostream& os, long t_begin, long t_end) {
  if (t_end < 0 || t_end > s.depth()) t_end = s.depth();
  auto cur = s.cursor();
  os << "# L=" << s.L() << " depth=" << s.depth() << "\n";
  for (long t = std::max(0L, t_begin); t < t_end; ++t) {
    std::vector<PlacedGadget> layer = cur->layer(t);
    std::sort(layer.begin(), layer.end());
    os << "t " << t << ":";
    for (const auto& g : layer) os << ' ' << to_string(g.kind) << '@' << g.x << ',' << g.y;
    os << '\n';
  }
}

std::vector<std::vector<PlacedGadget>> materialize(const Schedule& s) {
  std::vector<std::vector<PlacedGadget>> out;
  out.reserve(s.depth());
  auto cur = s.cursor();
  for (long t = 0; t < s.depth(); ++t) out.push_back(cur->layer(t));
  return out;
}

}  // namespace hfca
