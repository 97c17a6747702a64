#include "hfca/verifier.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "hfca/harness.hpp"
#include "hfca/rng.hpp"
#include "hfca/tsirelson.hpp"

namespace hfca {

namespace detail {
extern const std::string_view kM1TableText;
}

Pattern normalize(Pattern p) {
  std::sort(p.begin(), p.end(), [](const Vertex& a, const Vertex& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

std::string to_string(const Pattern& p) {
  std::string s = "{";
  for (std::size_t i = 0; i < p.size(); ++i)
    s += (i ? " (" : "(") + std::to_string(p[i].x) + "," + std::to_string(p[i].y) + ")";
  return s + "}";
}

Pattern mirror_x(const Pattern& p, GadgetKind k) {
  const CellRect r = footprint_offsets(k);
  Pattern out;
  for (const Vertex& v : p) out.push_back({r.x0 + r.x1 + 1 - v.x, v.y});
  return normalize(out);
}

Pattern mirror_y(const Pattern& p, GadgetKind k) {
  const CellRect r = footprint_offsets(k);
  Pattern out;
  for (const Vertex& v : p) out.push_back({v.x, r.y0 + r.y1 + 1 - v.y});
  return normalize(out);
}

bool is_single_link(const Pattern& p) {
  if (p.size() != 2) return false;
  const int dx = std::abs(p[0].x - p[1].x), dy = std::abs(p[0].y - p[1].y);
  return dx + dy == 1;
}

std::string to_string(ChainVariant v) { return v == ChainVariant::Clean ? "clean" : "arbitrary_input"; }

ChainVariant parse_chain_variant(const std::string& s) {
  if (s == "clean") return ChainVariant::Clean;
  if (s == "arbitrary_input" || s == "arbitrary") return ChainVariant::ArbitraryInput;
  throw std::invalid_argument("unknown chain variant: " + s);
}

namespace {

constexpr int kReducedL = 9;
constexpr int kAnchor = 4;  // level-0 anchor on the reduced lattice
constexpr int kBig = 3 * kAnchor;

// Symmetric difference of two sorted patterns.
Pattern xor_patterns(const Pattern& a, const Pattern& b) {
  Pattern out;
  auto less = [](const Vertex& u, const Vertex& v) { return u.y != v.y ? u.y < v.y : u.x < v.x; };
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), less);
  return out;
}

}  // namespace

GammaCircuit::GammaCircuit(GadgetKind g, ChainVariant variant) : kind_(g), variant_(variant), anchor_(kAnchor) {
  std::vector<PlacedGadget> layer;
  if (g != GadgetKind::I0) layer.push_back({g, kAnchor, kAnchor});
  auto lib = gadget_library(1, false);
  auto lifted = lifted_schedule(materialized_schedule(kReducedL, {layer}), lib);
  auto layers = materialize(*lifted);
  const long e = lib->ec.depth;
  const GadgetTemplate& tpl = lib->gate(g);
  const long block = std::max(tpl.depth, lib->i.depth);
  long window = e + block;
  if (variant == ChainVariant::ArbitraryInput) {
    layers.erase(layers.begin(), layers.begin() + e);
    window = block;
  }
  c_ = std::make_shared<const CompiledSchedule>(*materialized_schedule(lifted->L(), std::move(layers)));

  const int rx0 = kBig + tpl.footprint.x0, rx1 = kBig + tpl.footprint.x1;
  const int ry0 = kBig + tpl.footprint.y0, ry1 = kBig + tpl.footprint.y1;
  for (long t = 0; t < window; ++t)
    for (const auto* p = c_->gadgets_begin(t); p != c_->gadgets_end(t); ++p) {
      const CellRect f = footprint_offsets(p->kind);
      if (p->x + f.x0 >= rx0 && p->x + f.x1 <= rx1 && p->y + f.y0 >= ry0 && p->y + f.y1 <= ry1)
        slots_.push_back({t, *p});
    }
  for (int y = ry0; y <= ry1 + 1; ++y)
    for (int x = rx0; x <= rx1 + 1; ++x)
      if (x % 3 == 0 && y % 3 == 0) sigma_points_.push_back({(x - kBig) / 3, (y - kBig) / 3});
  if (g == GadgetKind::M0h || g == GadgetKind::M0v)
    for (const Vertex& v : sigma_points_) {
      const bool corner_x = 3 * v.x + kBig == rx0 || 3 * v.x + kBig == rx1 + 1;
      const bool corner_y = 3 * v.y + kBig == ry0 || 3 * v.y + kBig == ry1 + 1;
      if (!(corner_x && corner_y)) nonlinear_.push_back(v);
    }

  if (variant == ChainVariant::ArbitraryInput) {
    const std::size_t n = sigma_points_.size();
    if (n > 10) throw std::invalid_argument("too many Sigma_1 points to test linearity");
    std::vector<Run> runs;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      Run r;
      for (std::size_t i = 0; i < n; ++i)
        if ((m >> i) & 1) r.sigma.push_back(sigma_points_[i]);
      runs.push_back(std::move(r));
    }
    std::vector<Pattern> out(runs.size());
    for (std::size_t b = 0; b < runs.size(); b += 64) {
      std::vector<Run> batch(runs.begin() + b, runs.begin() + std::min(runs.size(), b + 64));
      auto o = evaluate(batch);
      for (std::size_t i = 0; i < o.size(); ++i) out[b + i] = o[i].reduced;
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool linear = true;
      for (std::uint32_t m = 0; m < (1u << n) && linear; ++m)
        if (xor_patterns(out[m], out[1u << i]) != out[m ^ (1u << i)]) linear = false;
      if (!linear) measured_nonlinear_.push_back(sigma_points_[i]);
    }
  }
}

std::vector<GammaCircuit::Output> GammaCircuit::evaluate(const std::vector<Run>& runs) const {
  if (runs.size() > 64) throw std::invalid_argument("at most 64 runs per evaluation");
  const TorusLattice& lat = c_->lattice();
  std::vector<std::vector<Injection>> inj(c_->depth() + 1);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::uint64_t lane = std::uint64_t{1} << i;
    for (const Vertex& s : runs[i].sigma)
      inj[0].push_back(
          {Injection::Syndrome, static_cast<std::uint32_t>(lat.vertex_index(kBig + 3 * s.x, kBig + 3 * s.y)), lane});
    if (runs[i].slot >= 0) {
      const Slot& sl = slots_.at(runs[i].slot);
      for (const Vertex& v : runs[i].damage)
        inj[sl.t + 1].push_back({Injection::Syndrome,
                                 static_cast<std::uint32_t>(lat.vertex_index(sl.gadget.x + v.x, sl.gadget.y + v.y)),
                                 lane});
    }
  }
  ToricEngine eng(c_, NoiseModel{});
  SlicedState st(*c_);
  Rng rng(0);
  for (long t = 0; t < c_->depth(); ++t) eng.step(t, st, rng, inj[t].empty() ? nullptr : &inj[t]);
  std::vector<Output> out(runs.size());
  for (std::size_t v = 0; v < c_->num_vertices(); ++v)
    for (std::uint64_t m = st.syn[v]; m; m &= m - 1) {
      const auto lane = static_cast<std::size_t>(std::countr_zero(m));
      if (lane >= runs.size()) continue;
      const Vertex p = lat.vertex_at(v);
      if (p.x % 3 || p.y % 3) {
        out[lane].coarse = false;
        continue;
      }
      out[lane].reduced.push_back({p.x / 3 - anchor_, p.y / 3 - anchor_});
    }
  for (auto& o : out) o.reduced = normalize(std::move(o.reduced));
  return out;
}

GammaCircuit::Output gamma_clean(const GammaCircuit& c, long slot, const Pattern& damage) {
  if (c.variant() != ChainVariant::Clean) throw std::invalid_argument("gamma_clean needs the clean composite");
  return c.evaluate({{{}, slot, damage}})[0];
}

GammaCircuit::Output gamma_arb(const GammaCircuit& c, const std::vector<Vertex>& sigma, long slot,
                               const Pattern& damage) {
  if (c.variant() != ChainVariant::ArbitraryInput)
    throw std::invalid_argument("gamma_arb needs the arbitrary-input composite");
  for (const Vertex& s : sigma)
    if (std::find(c.nonlinear_points().begin(), c.nonlinear_points().end(), s) == c.nonlinear_points().end())
      throw std::invalid_argument("input syndrome outside the nonlinear points");
  auto o = c.evaluate({{sigma, slot, damage}, {sigma, -1, {}}});
  GammaCircuit::Output r;
  r.coarse = o[0].coarse && o[1].coarse;
  r.reduced = xor_patterns(o[0].reduced, o[1].reduced);
  return r;
}

bool DamageSets::empty() const {
  return std::all_of(sets.begin(), sets.end(), [](const auto& s) { return s.empty(); });
}

NilpotenceReport nilpotence_report(ChainVariant variant, int j_max, int workers, bool link_model) {
  if (j_max < 1) throw std::invalid_argument("j_max must be at least 1");
  NilpotenceReport rep;
  rep.variant = variant;
  std::vector<std::unique_ptr<GammaCircuit>> circuits;
  for (int k = 0; k < 5; ++k) circuits.push_back(std::make_unique<GammaCircuit>(static_cast<GadgetKind>(k), variant));
  if (variant == ChainVariant::ArbitraryInput)
    for (int k = 0; k < 5; ++k) {
      rep.nonlinear_points[k] = circuits[k]->nonlinear_points().size();
      rep.measured_nonlinear_points[k] = circuits[k]->measured_nonlinear_points().size();
    }

  auto stats = [](const DamageSets& d) {
    NilpotenceIteration it;
    it.j = d.j;
    for (int k = 0; k < 5; ++k) {
      const auto kind = static_cast<GadgetKind>(k);
      const auto& s = d.sets[k];
      it.sizes[k] = s.size();
      it.mirror_x_closed[k] = it.mirror_y_closed[k] = true;
      for (const Pattern& p : s) {
        if (!s.count(mirror_x(p, kind))) {
          it.mirror_x_closed[k] = false;
          it.unmatched_mirror[k].push_back(to_string(p));
        }
        if (!s.count(mirror_y(p, kind))) it.mirror_y_closed[k] = false;
        if (is_single_link(p)) ++it.single_link[k];
      }
    }
    return it;
  };

  DamageSets cur;
  cur.j = 0;
  for (int k = 0; k < 5; ++k)
    for (const auto& p : gadget_damage_patterns(static_cast<GadgetKind>(k)))
      if (!link_model || is_single_link(p)) cur.sets[k].insert(normalize(p));
  rep.sets.push_back(cur);
  rep.iterations.push_back(stats(cur));

  for (int j = 1; j <= j_max; ++j) {
    DamageSets next;
    next.j = j;
    long evals = 0, defects = 0;
    for (int k = 0; k < 5; ++k) {
      const GammaCircuit& gc = *circuits[k];
      std::vector<std::vector<Vertex>> sigmas{{}};
      if (variant == ChainVariant::ArbitraryInput) {
        const auto& nl = gc.nonlinear_points();
        sigmas.clear();
        for (std::uint32_t m = 0; m < (1u << nl.size()); ++m) {
          std::vector<Vertex> s;
          for (std::size_t i = 0; i < nl.size(); ++i)
            if ((m >> i) & 1) s.push_back(nl[i]);
          sigmas.push_back(std::move(s));
        }
      }
      std::vector<Pattern> baseline(sigmas.size());
      for (std::size_t si = 0; si < sigmas.size(); ++si) {
        auto o = gc.evaluate({{sigmas[si], -1, {}}});
        if (!o[0].coarse) ++defects;
        baseline[si] = o[0].reduced;
      }
      std::vector<GammaCircuit::Run> runs;
      std::vector<std::size_t> sigma_of;
      for (long sl = 0; sl < static_cast<long>(gc.slots().size()); ++sl) {
        const auto& dset = cur.sets[static_cast<int>(gc.slots()[sl].gadget.kind)];
        for (const Pattern& p : dset)
          for (std::size_t si = 0; si < sigmas.size(); ++si) {
            runs.push_back({sigmas[si], sl, p});
            sigma_of.push_back(si);
          }
      }
      const std::size_t batches = (runs.size() + 63) / 64;
      std::vector<std::set<Pattern>> found(batches);
      std::vector<long> bad(batches, 0);
      parallel_for(batches, workers, [&](std::size_t b) {
        const std::size_t lo = b * 64, hi = std::min(runs.size(), lo + 64);
        std::vector<GammaCircuit::Run> batch(runs.begin() + lo, runs.begin() + hi);
        auto o = gc.evaluate(batch);
        for (std::size_t i = 0; i < o.size(); ++i) {
          if (!o[i].coarse) ++bad[b];
          Pattern d = xor_patterns(o[i].reduced, baseline[sigma_of[lo + i]]);
          if (!d.empty()) found[b].insert(std::move(d));
        }
      });
      for (std::size_t b = 0; b < batches; ++b) {
        next.sets[k].insert(found[b].begin(), found[b].end());
        defects += bad[b];
      }
      evals += static_cast<long>(runs.size());
    }
    auto it = stats(next);
    it.evaluations = evals;
    it.defects = defects;
    rep.defects += defects;
    rep.iterations.push_back(std::move(it));
    rep.sets.push_back(next);
    cur = std::move(next);
    if (cur.empty()) {
      rep.empty_at = j;
      break;
    }
  }
  return rep;
}

FaultCheck r0_single_fault_check(bool half) {
  const int L = 9;
  auto first = tiled_schedule(build_r0(half), L);
  auto follow = tiled_schedule(build_r0(false), L);
  auto a = materialize(*first), b = materialize(*follow);
  const long D = static_cast<long>(a.size());
  a.insert(a.end(), b.begin(), b.end());
  auto c = std::make_shared<const CompiledSchedule>(*materialized_schedule(L, std::move(a)));
  FaultCheck fc;
  fc.gadget = half ? "R0'" : "R0";
  const std::size_t nl = c->num_links();
  const std::size_t total = static_cast<std::size_t>(D + 1) * nl;
  ToricEngine eng(c, NoiseModel{});
  Rng rng(0);
  for (std::size_t base = 0; base < total; base += 64) {
    const std::size_t n = std::min<std::size_t>(64, total - base);
    std::vector<std::vector<Injection>> inj(c->depth() + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = base + i;
      inj[k / nl].push_back({Injection::Link, static_cast<std::uint32_t>(k % nl), std::uint64_t{1} << i});
    }
    SlicedState st(*c);
    for (long t = 0; t < c->depth(); ++t) eng.step(t, st, rng, inj[t].empty() ? nullptr : &inj[t]);
    const std::uint64_t bad = st.any_syndrome();
    fc.cases += static_cast<long>(n);
    for (std::uint64_t m = bad; m; m &= m - 1) {
      const std::size_t k = base + std::countr_zero(m);
      ++fc.failures;
      if (fc.examples.size() < 10) {
        const Link l = c->lattice().link_at(k % nl);
        fc.examples.push_back("t=" + std::to_string(k / nl) + " link=(" + std::to_string(l.x) + "," +
                              std::to_string(l.y) + "," + (l.o == Orient::H ? "h" : "v") + ")");
      }
    }
  }
  return fc;
}

M1Table parse_m1_table(std::string_view text) {
  M1Table t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto is_bits = [](const std::string& s) {
    return s.size() == 3 && std::all_of(s.begin(), s.end(), [](char ch) { return ch == '0' || ch == '1'; });
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "row") throw std::invalid_argument("m1 table line " + std::to_string(lineno) + ": unknown record");
    std::string a, b, c;
    std::array<std::string, 8> cells;
    if (!(ls >> a >> b >> c)) throw std::invalid_argument("m1 table line " + std::to_string(lineno) + ": malformed");
    for (auto& cell : cells)
      if (!(ls >> cell)) throw std::invalid_argument("m1 table line " + std::to_string(lineno) + ": too few cells");
    for (const auto& s : {a, b, c})
      if (!is_bits(s)) throw std::invalid_argument("m1 table line " + std::to_string(lineno) + ": bad damage");
    for (const auto& s : cells)
      if (!is_bits(s)) throw std::invalid_argument("m1 table line " + std::to_string(lineno) + ": bad cell");
    t.damage.push_back(a + " " + b + " " + c);
    t.out.push_back(cells);
  }
  return t;
}

const M1Table& m1_reference_table() {
  static const M1Table t = parse_m1_table(detail::kM1TableText);
  return t;
}

M1Table m1_reversibility_table() {
  const Circuit1D m1 = build_tsirelson(Kind1D::Z, 1, Variant1D::Stabilizer);
  M1Table t;
  t.damage = m1_reference_table().damage;
  for (const std::string& d : t.damage) {
    std::string bits;
    for (char ch : d)
      if (ch != ' ') bits += ch;
    std::array<std::string, 8> row;
    for (int in = 0; in < 8; ++in) {
      BitLine s(9);
      for (int i = 0; i < 9; ++i) s[i] = static_cast<std::uint8_t>(((in >> (2 - i / 3)) & 1) ^ (bits[i] - '0'));
      s = run_noiseless(m1, s);
      std::string out;
      for (int blk = 0; blk < 3; ++blk) out += (s[3 * blk] + s[3 * blk + 1] + s[3 * blk + 2] >= 2) ? '1' : '0';
      row[in] = out;
    }
    t.out.push_back(row);
  }
  return t;
}

TableDiff diff_m1_tables(const M1Table& computed, const M1Table& reference) {
  TableDiff d;
  if (computed.damage != reference.damage) throw std::invalid_argument("m1 tables list different damage rows");
  static const char* kIn[8] = {"000", "001", "010", "011", "100", "101", "110", "111"};
  for (std::size_t r = 0; r < computed.out.size(); ++r)
    for (int c = 0; c < 8; ++c) {
      ++d.cells;
      const std::string& a = computed.out[r][c];
      if (a == "010" || a == "101") {
        ++d.irreversible;
        d.details.push_back("irreversible output " + a + " at damage " + computed.damage[r] + ", input " + kIn[c]);
      }
      if (a != reference.out[r][c]) {
        ++d.mismatches;
        d.details.push_back("damage " + computed.damage[r] + ", input (" + kIn[c] + ")_1: computed (" + a +
                            ")_1, reference (" + reference.out[r][c] + ")_1");
      }
    }
  return d;
}

namespace {

std::uint64_t offcoarse_lanes(const CompiledSchedule& c, const SlicedState& st) {
  std::uint64_t bad = 0;
  for (std::size_t v = 0; v < c.num_vertices(); ++v) {
    const Vertex p = c.lattice().vertex_at(v);
    if (p.x % 3 || p.y % 3) bad |= st.syn[v];
  }
  return bad;
}

void check_coarse(StructuralReport& rep, long random_inputs, std::uint64_t seed, int workers) {
  auto c = std::make_shared<const CompiledSchedule>(*tiled_schedule(build_r0(true), 9));
  const std::size_t nl = c->num_links();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> small;
  for (std::uint32_t a = 0; a < nl; ++a) {
    small.push_back({a, a});
    for (std::uint32_t b = a + 1; b < nl; ++b) small.push_back({a, b});
  }
  const std::size_t small_batches = (small.size() + 63) / 64;
  const std::size_t rand_batches = static_cast<std::size_t>((random_inputs + 63) / 64);
  std::vector<long> fails(small_batches + rand_batches, 0), cases(small_batches + rand_batches, 0);
  std::mutex mu;
  parallel_for(small_batches + rand_batches, workers, [&](std::size_t b) {
    ToricEngine eng(c, NoiseModel{});
    SlicedState st(*c);
    auto flip = [&](std::uint32_t l, std::uint64_t m) {
      st.links[l] ^= m;
      st.syn[c->end_a(l)] ^= m;
      st.syn[c->end_b(l)] ^= m;
    };
    std::uint64_t lanes;
    if (b < small_batches) {
      const std::size_t lo = b * 64, hi = std::min(small.size(), lo + 64);
      lanes = hi - lo == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (hi - lo)) - 1;
      for (std::size_t i = lo; i < hi; ++i) {
        flip(small[i].first, std::uint64_t{1} << (i - lo));
        if (small[i].second != small[i].first) flip(small[i].second, std::uint64_t{1} << (i - lo));
      }
    } else {
      const long idx = static_cast<long>(b - small_batches);
      const long n = std::min<long>(64, random_inputs - idx * 64);
      lanes = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(idx), "coarse-graining"));
      for (std::uint32_t l = 0; l < nl; ++l) flip(l, rng.next() & lanes);
    }
    eng.run_noiseless(st);
    const std::uint64_t bad = offcoarse_lanes(*c, st) & lanes;
    cases[b] = std::popcount(lanes);
    fails[b] = std::popcount(bad);
    if (bad) {
      std::lock_guard<std::mutex> lk(mu);
      if (rep.examples.size() < 10)
        rep.examples.push_back("coarse-graining: batch " + std::to_string(b) + " lane " +
                               std::to_string(std::countr_zero(bad)));
    }
  });
  for (std::size_t b = 0; b < fails.size(); ++b) {
    rep.coarse_cases += cases[b];
    rep.coarse_failures += fails[b];
  }
}

// Every measured nonlinear point must be a designated one: I1 and T1 act
// linearly on all their Sigma_1 points, M1 on its corners.
void check_linearity(StructuralReport& rep) {
  for (int k = 0; k < 5; ++k) {
    const auto kind = static_cast<GadgetKind>(k);
    GammaCircuit gc(kind, ChainVariant::ArbitraryInput);
    const auto& designated = gc.nonlinear_points();
    for (const Vertex& p : gc.sigma_points()) {
      if (std::find(designated.begin(), designated.end(), p) != designated.end()) continue;
      ++rep.linearity_cases;
      const auto& m = gc.measured_nonlinear_points();
      if (std::find(m.begin(), m.end(), p) != m.end()) {
        ++rep.linearity_failures;
        rep.examples.push_back("linearity: level-1 " + to_string(kind) + " gate is nonlinear at (" +
                               std::to_string(p.x) + "," + std::to_string(p.y) + ")");
      }
    }
  }
}

// Within one EC1 tile, the output at the tile's interior vertices depends only
// on the input on the closed tile.
void check_confinement(StructuralReport& rep, std::uint64_t seed) {
  const int L = 9;
  auto c = std::make_shared<const CompiledSchedule>(*tiled_schedule(build_r0(false), L));
  const TorusLattice& lat = c->lattice();
  ToricEngine eng(c, NoiseModel{});
  auto in_closed = [](const Vertex& v) { return v.x >= 3 && v.x <= 6 && v.y >= 3 && v.y <= 6; };
  auto in_open = [](const Vertex& v) { return v.x > 3 && v.x < 6 && v.y > 3 && v.y < 6; };
  Rng rng(derive_seed(seed, 0, "confinement"));
  // Lane 2i: input A_i; lane 2i+1: A_i restricted to the closed tile.
  for (int round = 0; round < 64; ++round) {
    SlicedState st(*c);
    for (int pair = 0; pair < 32; ++pair) {
      const std::uint64_t both = std::uint64_t{3} << (2 * pair), outer = std::uint64_t{1} << (2 * pair);
      const int mode = round * 32 + pair;
      if (mode < static_cast<int>(lat.num_vertices())) {
        // Single syndrome anywhere outside the closed tile.
        const Vertex v = lat.vertex_at(static_cast<std::size_t>(mode));
        if (!in_closed(v)) st.syn[mode] ^= outer;
      } else {
        for (std::size_t v = 0; v < lat.num_vertices(); ++v) {
          if (!(rng.next() & 1)) continue;
          st.syn[v] ^= in_closed(lat.vertex_at(v)) ? both : outer;
        }
      }
    }
    eng.run_noiseless(st);
    for (int pair = 0; pair < 32; ++pair) {
      bool same = true;
      for (std::size_t v = 0; v < lat.num_vertices(); ++v)
        if (in_open(lat.vertex_at(v)) && (((st.syn[v] >> (2 * pair)) ^ (st.syn[v] >> (2 * pair + 1))) & 1))
          same = false;
      ++rep.confinement_cases;
      if (!same) {
        ++rep.confinement_failures;
        if (rep.examples.size() < 10)
          rep.examples.push_back("confinement: case " + std::to_string(round * 32 + pair));
      }
    }
  }
}

}  // namespace

StructuralReport structural_checks(long random_inputs, std::uint64_t seed, int workers) {
  if (random_inputs < 0) throw std::invalid_argument("random_inputs must be non-negative");
  StructuralReport rep;
  check_coarse(rep, random_inputs, seed, workers);
  check_linearity(rep);
  check_confinement(rep, seed);
  return rep;
}

}  // namespace hfca
