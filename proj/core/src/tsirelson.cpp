#include "hfca/tsirelson.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "hfca/harness.hpp"
#include "hfca/lattice.hpp"

namespace hfca {

int arity(Prim1D p) {
  switch (p) {
    case Prim1D::X0:
    case Prim1D::I0: return 1;
    case Prim1D::Y0:
    case Prim1D::T0: return 2;
    case Prim1D::Z0:
    case Prim1D::M0: return 3;
  }
  throw std::invalid_argument("unknown primitive");
}

bool is_idle(Prim1D p) { return p == Prim1D::X0 || p == Prim1D::I0; }

char prim_name(Prim1D p) {
  static const char names[] = "XYZITM";
  return names[static_cast<int>(p)];
}

Kind1D parse_kind1d(const std::string& s) {
  if (s == "X" || s == "x" || s == "I" || s == "i") return Kind1D::X;
  if (s == "Y" || s == "y" || s == "T" || s == "t") return Kind1D::Y;
  if (s == "Z" || s == "z" || s == "M" || s == "m") return Kind1D::Z;
  throw std::invalid_argument("unknown gadget kind: " + s);
}

Variant1D parse_variant1d(const std::string& s) {
  if (s == "original") return Variant1D::Original;
  if (s == "modified") return Variant1D::Modified;
  if (s == "stabilizer") return Variant1D::Stabilizer;
  throw std::invalid_argument("unknown variant: " + s);
}

std::string to_string(Variant1D v) {
  switch (v) {
    case Variant1D::Original: return "original";
    case Variant1D::Modified: return "modified";
    case Variant1D::Stabilizer: return "stabilizer";
  }
  return "?";
}

namespace {

Prim1D prim_of(Kind1D kind, Variant1D v) {
  const bool stab = v == Variant1D::Stabilizer;
  switch (kind) {
    case Kind1D::X: return stab ? Prim1D::I0 : Prim1D::X0;
    case Kind1D::Y: return stab ? Prim1D::T0 : Prim1D::Y0;
    case Kind1D::Z: return stab ? Prim1D::M0 : Prim1D::Z0;
  }
  throw std::invalid_argument("unknown gadget kind");
}

Kind1D kind_of(Prim1D p) {
  switch (p) {
    case Prim1D::X0:
    case Prim1D::I0: return Kind1D::X;
    case Prim1D::Y0:
    case Prim1D::T0: return Kind1D::Y;
    case Prim1D::Z0:
    case Prim1D::M0: return Kind1D::Z;
  }
  throw std::invalid_argument("unknown primitive");
}

// Swap networks on blocks: the block transposition of Y (two blocks of three
// sub-blocks exchanged) and the 3x3 transposition P used by Z.
const std::vector<std::vector<int>> kYSwaps = {{2}, {1, 3}, {0, 2, 4}, {1, 3}, {2}};
const std::vector<std::vector<int>> kPSwaps = {{2}, {3, 5}, {1, 4, 6}, {3, 5}, {2}};

struct Placed {
  int offset;
  const Circuit1D* c;
};

// Circuits side by side; shorter ones are padded with idles at the end.
Circuit1D beside(const std::vector<Placed>& parts, Variant1D v) {
  Circuit1D out;
  out.variant = v;
  int depth = 0;
  for (const auto& p : parts) {
    out.width = std::max(out.width, p.offset + p.c->width);
    depth = std::max(depth, p.c->depth());
  }
  const Prim1D idle = prim_of(Kind1D::X, v);
  out.layers.resize(depth);
  for (int t = 0; t < depth; ++t) {
    auto& layer = out.layers[t];
    for (const auto& p : parts) {
      if (t < p.c->depth()) {
        for (const Gate1D& g : p.c->layers[t]) layer.push_back({g.kind, g.site + p.offset});
      } else {
        for (int i = 0; i < p.c->width; ++i) layer.push_back({idle, p.offset + i});
      }
    }
  }
  return out;
}

Circuit1D copies(const Circuit1D& c, int count) {
  std::vector<Placed> parts;
  for (int i = 0; i < count; ++i) parts.push_back({i * c.width, &c});
  return beside(parts, c.variant);
}

void append(Circuit1D& a, const Circuit1D& b) {
  if (a.width == 0 && a.layers.empty()) a.width = b.width;
  if (a.width != b.width) throw std::invalid_argument("circuit width mismatch");
  a.layers.insert(a.layers.end(), b.layers.begin(), b.layers.end());
}

// Five layers of swaps on blocks: `swap` (two blocks wide) at the listed block
// indices, `idle` (one block wide) elsewhere.
Circuit1D swap_network(int blocks, const std::vector<std::vector<int>>& sets, const Circuit1D& swap,
                       const Circuit1D& idle) {
  const int bw = idle.width;
  Circuit1D out;
  out.variant = idle.variant;
  out.width = blocks * bw;
  for (const auto& set : sets) {
    std::vector<Placed> parts;
    for (int b = 0; b < blocks;) {
      if (std::find(set.begin(), set.end(), b) != set.end()) {
        parts.push_back({b * bw, &swap});
        b += 2;
      } else {
        parts.push_back({b * bw, &idle});
        b += 1;
      }
    }
    append(out, beside(parts, idle.variant));
  }
  return out;
}

Circuit1D single(Prim1D p, Variant1D v) {
  Circuit1D c;
  c.variant = v;
  c.width = arity(p);
  c.layers = {{Gate1D{p, 0}}};
  return c;
}

using Memo = std::map<std::pair<int, int>, Circuit1D>;

const Circuit1D& original(Kind1D kind, int n, Memo& memo) {
  const auto key = std::make_pair(static_cast<int>(kind), n);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Circuit1D c;
  if (n == 0) {
    c = single(prim_of(kind, Variant1D::Original), Variant1D::Original);
  } else {
    const Circuit1D& x = original(Kind1D::X, n - 1, memo);
    const Circuit1D& y = original(Kind1D::Y, n - 1, memo);
    const Circuit1D& z = original(Kind1D::Z, n - 1, memo);
    switch (kind) {
      case Kind1D::X:
        c = z;
        for (int i = 0; i < 5; ++i) append(c, copies(x, 3));
        break;
      case Kind1D::Y:
        c = copies(z, 2);
        append(c, swap_network(6, kYSwaps, y, x));
        break;
      case Kind1D::Z:
        c = copies(z, 3);
        append(c, swap_network(9, kPSwaps, y, x));
        break;
    }
  }
  return memo.emplace(key, std::move(c)).first->second;
}

Circuit1D level1(Kind1D kind, Variant1D v) {
  const Circuit1D idle = single(prim_of(Kind1D::X, v), v);
  const Circuit1D swap = single(prim_of(Kind1D::Y, v), v);
  switch (kind) {
    case Kind1D::X: {
      Circuit1D c;
      c.variant = v;
      for (int i = 0; i < 5; ++i) append(c, copies(idle, 3));
      return c;
    }
    case Kind1D::Y: return swap_network(6, kYSwaps, swap, idle);
    case Kind1D::Z: {
      Circuit1D c = swap_network(9, kPSwaps, swap, idle);
      append(c, copies(single(prim_of(Kind1D::Z, v), v), 3));
      append(c, swap_network(9, kPSwaps, swap, idle));
      return c;
    }
  }
  throw std::invalid_argument("unknown gadget kind");
}

int dist_to_code(const BitLine& s, int begin) {
  const int ones = s[begin] + s[begin + 1] + s[begin + 2];
  return std::min(ones, 3 - ones);
}

}  // namespace

void Circuit1D::validate() const {
  std::vector<int> cover(width);
  for (std::size_t t = 0; t < layers.size(); ++t) {
    std::fill(cover.begin(), cover.end(), 0);
    bool has_m = false, has_it = false;
    for (const Gate1D& g : layers[t]) {
      if (g.site < 0 || g.site + arity(g.kind) > width)
        throw std::invalid_argument("gate outside the line at layer " + std::to_string(t));
      for (int i = 0; i < arity(g.kind); ++i) ++cover[g.site + i];
      if (g.kind == Prim1D::M0) has_m = true;
      if (g.kind == Prim1D::I0 || g.kind == Prim1D::T0) has_it = true;
    }
    for (int i = 0; i < width; ++i)
      if (cover[i] != 1) throw std::invalid_argument("layer " + std::to_string(t) + " does not tile the line");
    if (variant == Variant1D::Stabilizer && has_m && has_it)
      throw std::invalid_argument("stabilizer layer mixes M0 with I0/T0 at layer " + std::to_string(t));
  }
}

int kind_width(Kind1D kind, int n) {
  switch (kind) {
    case Kind1D::X: return pow3(n);
    case Kind1D::Y: return 2 * pow3(n);
    case Kind1D::Z: return pow3(n + 1);
  }
  throw std::invalid_argument("unknown gadget kind");
}

Circuit1D primitive_circuit(Kind1D kind, Variant1D variant) {
  return single(prim_of(kind, variant), variant);
}

Circuit1D build_tsirelson(Kind1D kind, int n, Variant1D variant) {
  if (n < 0) throw std::invalid_argument("level must be non-negative");
  if (variant == Variant1D::Original) {
    Memo memo;
    return original(kind, n, memo);
  }
  if (n == 0) return primitive_circuit(kind, variant);
  Circuit1D c = level1(kind, variant);
  for (int i = 1; i < n; ++i) c = ft1d(c);
  return c;
}

Circuit1D majority_decomposition() {
  const Variant1D v = Variant1D::Stabilizer;
  Circuit1D c;
  c.variant = v;
  c.width = 3;
  c.layers = {{{Prim1D::M0, 0}},
              {{Prim1D::T0, 0}, {Prim1D::I0, 2}},
              {{Prim1D::M0, 0}},
              {{Prim1D::I0, 0}, {Prim1D::T0, 1}},
              {{Prim1D::M0, 0}}};
  return c;
}

Circuit1D ec1_block(Variant1D variant) {
  if (variant == Variant1D::Original) throw std::invalid_argument("the original family has no EC gadget");
  if (variant == Variant1D::Stabilizer) return majority_decomposition();
  return single(Prim1D::Z0, variant);
}

bool maj_decomposition_check() {
  const Circuit1D c = majority_decomposition();
  for (int x = 0; x < 8; ++x) {
    BitLine s = {static_cast<std::uint8_t>(x & 1), static_cast<std::uint8_t>((x >> 1) & 1),
                 static_cast<std::uint8_t>((x >> 2) & 1)};
    const std::uint8_t m = (s[0] + s[1] + s[2]) >= 2;
    s = run_noiseless(c, s);
    if (s[0] != m || s[1] != m || s[2] != m) return false;
  }
  return true;
}

Circuit1D ft1d(const Circuit1D& c) {
  if (c.variant == Variant1D::Original)
    throw std::invalid_argument("fault-tolerant simulation is defined for the modified families");
  const Variant1D v = c.variant;
  const Circuit1D ec = ec1_block(v);
  const Circuit1D lx = level1(Kind1D::X, v), ly = level1(Kind1D::Y, v), lz = level1(Kind1D::Z, v);
  auto lifted = [&](Prim1D p) -> const Circuit1D& {
    switch (kind_of(p)) {
      case Kind1D::X: return lx;
      case Kind1D::Y: return ly;
      case Kind1D::Z: return lz;
    }
    throw std::invalid_argument("unknown primitive");
  };
  std::vector<Placed> ec_parts;
  for (int b = 0; b < c.width; ++b) ec_parts.push_back({3 * b, &ec});
  const Circuit1D ec_layer = beside(ec_parts, v);

  Circuit1D out = ec_layer;
  for (const auto& layer : c.layers) {
    std::vector<Gate1D> gates = layer;
    std::sort(gates.begin(), gates.end(), [](const Gate1D& a, const Gate1D& b) { return a.site < b.site; });
    std::vector<Placed> parts;
    for (const Gate1D& g : gates) parts.push_back({3 * g.site, &lifted(g.kind)});
    append(out, beside(parts, v));
    append(out, ec_layer);
  }
  return out;
}

Circuit1D memory_circuit(int n, Variant1D variant) {
  if (variant == Variant1D::Original) return build_tsirelson(Kind1D::X, n, variant);
  Circuit1D c = primitive_circuit(Kind1D::X, variant);
  for (int i = 0; i < n; ++i) c = ft1d(c);
  return c;
}

Circuit1D repeat(const Circuit1D& c, int times) {
  if (times < 0) throw std::invalid_argument("negative repetition count");
  Circuit1D out;
  out.width = c.width;
  out.variant = c.variant;
  for (int i = 0; i < times; ++i) append(out, c);
  return out;
}

void apply_gate(const Gate1D& g, BitLine& s) {
  const int a = g.site;
  switch (g.kind) {
    case Prim1D::X0:
    case Prim1D::I0: break;
    case Prim1D::Y0:
    case Prim1D::T0: std::swap(s[a], s[a + 1]); break;
    case Prim1D::Z0: {
      const std::uint8_t m = (s[a] + s[a + 1] + s[a + 2]) >= 2;
      s[a] = s[a + 1] = s[a + 2] = m;
      break;
    }
    case Prim1D::M0:
      if (s[a + 1] != s[a] && s[a + 1] != s[a + 2]) s[a + 1] ^= 1;
      break;
  }
}

void apply_layer(const std::vector<Gate1D>& layer, BitLine& s) {
  for (const Gate1D& g : layer) apply_gate(g, s);
}

BitLine run_noiseless(const Circuit1D& c, BitLine s) {
  if (static_cast<int>(s.size()) != c.width) throw std::invalid_argument("state length does not match circuit");
  for (const auto& layer : c.layers) apply_layer(layer, s);
  return s;
}

int recursive_majority(const BitLine& s) {
  if (log3_exact(static_cast<long long>(s.size())) < 0)
    throw std::invalid_argument("recursive majority needs a power-of-3 length");
  BitLine cur = s;
  while (cur.size() > 1) {
    BitLine next(cur.size() / 3);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = (cur[3 * i] + cur[3 * i + 1] + cur[3 * i + 2]) >= 2;
    cur.swap(next);
  }
  return cur[0];
}

BitLine decode_blocks(const BitLine& s, int k) {
  const std::size_t b = static_cast<std::size_t>(pow3(k));
  if (s.size() % b) throw std::invalid_argument("length is not a multiple of the block size");
  BitLine out(s.size() / b);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(recursive_majority(BitLine(s.begin() + i * b, s.begin() + (i + 1) * b)));
  return out;
}

BitLine encode_blocks(const BitLine& logical, int k) {
  const std::size_t b = static_cast<std::size_t>(pow3(k));
  BitLine out;
  out.reserve(logical.size() * b);
  for (auto bit : logical) out.insert(out.end(), b, bit);
  return out;
}

void Noise1D::validate() const {
  if (!(wire.p >= 0 && wire.p <= 1) || !(gadget.p >= 0 && gadget.p <= 1))
    throw std::invalid_argument("noise probability must lie in [0,1]");
  if (!(wire.eta >= -1 && wire.eta <= 1)) throw std::invalid_argument("bias must lie in [-1,1]");
}

Sliced1D::Sliced1D(const Circuit1D& c) : width_(c.width), layers_(c.layers), active_(c.layers.size()) {
  for (std::size_t t = 0; t < layers_.size(); ++t)
    for (const Gate1D& g : layers_[t])
      if (!is_idle(g.kind)) active_[t].push_back(g);
}

void Sliced1D::step(int t, std::vector<std::uint64_t>& w, const Noise1D& noise, Streams& st,
                    Rng& rng) const {
  const auto& layer = layers_[t];
  for (const Gate1D& g : active_[t]) {
    const int a = g.site;
    switch (g.kind) {
      case Prim1D::X0:
      case Prim1D::I0: break;
      case Prim1D::Y0: std::swap(w[a], w[a + 1]); break;
      case Prim1D::T0: {
        const std::uint64_t d = w[a] ^ w[a + 1];
        w[a] ^= d;
        w[a + 1] ^= d;
        break;
      }
      case Prim1D::Z0: {
        const std::uint64_t x = w[a], y = w[a + 1], z = w[a + 2];
        const std::uint64_t m = (x & y) | (x & z) | (y & z);
        w[a] = w[a + 1] = w[a + 2] = m;
        break;
      }
      case Prim1D::M0: w[a + 1] ^= (w[a + 1] ^ w[a]) & (w[a + 1] ^ w[a + 2]); break;
    }
  }
  if (noise.gadget.p > 0) {
    for (const Gate1D& g : layer) {
      const std::uint64_t f = st.gadget.next(rng);
      if (!f) continue;
      for (int i = 0; i < arity(g.kind); ++i) w[g.site + i] = (w[g.site + i] & ~f) | (rng.next() & f);
    }
  }
  if (noise.wire.p > 0) {
    const double q = (1.0 + noise.wire.eta) / 2.0;
    for (int i = 0; i < width_; ++i) {
      const std::uint64_t hit = st.wire.next(rng);
      if (!hit) continue;
      if (q == 0.5) {
        w[i] ^= hit;
        continue;
      }
      std::uint64_t val;
      if (q >= 1.0) {
        val = ~std::uint64_t{0};
      } else if (q <= 0.0) {
        val = 0;
      } else {
        val = 0;
        for (std::uint64_t h = hit; h; h &= h - 1)
          if (rng.bernoulli(q)) val |= h & (~h + 1);
      }
      w[i] = (w[i] & ~hit) | (val & hit);
    }
  }
}

void Sliced1D::run(std::vector<std::uint64_t>& words, const Noise1D& noise, Streams& st, Rng& rng) const {
  if (static_cast<int>(words.size()) != width_) throw std::invalid_argument("state length does not match circuit");
  for (int t = 0; t < depth(); ++t) step(t, words, noise, st, rng);
}

std::vector<BitLine> run1d(const Circuit1D& c, const Noise1D& noise, std::uint64_t seed, const BitLine& s0,
                           int repetitions) {
  if (static_cast<int>(s0.size()) != c.width) throw std::invalid_argument("state length does not match circuit");
  noise.validate();
  const Sliced1D sliced(c);
  Rng rng(seed);
  Sliced1D::Streams st(noise);
  std::vector<std::uint64_t> w(c.width);
  for (int i = 0; i < c.width; ++i) w[i] = s0[i] ? 1 : 0;
  std::vector<BitLine> traj;
  traj.reserve(static_cast<std::size_t>(repetitions) * c.depth() + 1);
  traj.push_back(s0);
  for (int r = 0; r < repetitions; ++r)
    for (int t = 0; t < c.depth(); ++t) {
      sliced.step(t, w, noise, st, rng);
      BitLine s(c.width);
      for (int i = 0; i < c.width; ++i) s[i] = w[i] & 1;
      traj.push_back(std::move(s));
    }
  return traj;
}

std::uint64_t recursive_majority_lanes(std::vector<std::uint64_t> w) {
  if (log3_exact(static_cast<long long>(w.size())) < 0)
    throw std::invalid_argument("recursive majority needs a power-of-3 length");
  std::size_t n = w.size();
  while (n > 1) {
    for (std::size_t i = 0; i < n / 3; ++i) {
      const std::uint64_t x = w[3 * i], y = w[3 * i + 1], z = w[3 * i + 2];
      w[i] = (x & y) | (x & z) | (y & z);
    }
    n /= 3;
  }
  return w[0];
}

namespace {

std::uint64_t lane_mask(long trials, long batch) {
  const long rem = trials - 64 * batch;
  return rem >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
}

}  // namespace

FidelityEstimate estimate_fidelity(int n, int T, const Noise1D& noise, long trials, std::uint64_t seed,
                                   int workers, Variant1D variant) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (T < 0) throw std::invalid_argument("T must be non-negative");
  noise.validate();
  const Sliced1D sliced(memory_circuit(n, variant));
  const long batches = (trials + 63) / 64;
  std::vector<long> ok(2 * batches, 0);
  parallel_for(static_cast<std::size_t>(2 * batches), workers, [&](std::size_t j) {
    const int cw = static_cast<int>(j % 2);
    const long b = static_cast<long>(j / 2);
    Rng rng(derive_seed(seed, j, "tsirelson-fidelity"));
    Sliced1D::Streams st(noise);
    std::vector<std::uint64_t> w(sliced.width(), cw ? ~std::uint64_t{0} : 0);
    for (int r = 0; r < T; ++r) sliced.run(w, noise, st, rng);
    std::uint64_t dec = recursive_majority_lanes(w);
    if (!cw) dec = ~dec;
    ok[j] = std::popcount(dec & lane_mask(trials, b));
  });
  long good[2] = {0, 0};
  for (std::size_t j = 0; j < ok.size(); ++j) good[j % 2] += ok[j];
  FidelityEstimate est;
  est.trials = trials;
  est.f0 = static_cast<double>(good[0]) / trials;
  est.f1 = static_cast<double>(good[1]) / trials;
  est.f = std::min(est.f0, est.f1);
  est.se = std::sqrt(est.f * (1 - est.f) / trials);
  return est;
}

TrelEstimate estimate_trel_1d(int n, const Noise1D& noise, long trials, long t_max, std::uint64_t seed,
                              int workers, Variant1D variant) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  noise.validate();
  const Sliced1D sliced(memory_circuit(n, variant));
  const long batches = (trials + 63) / 64;
  struct Acc {
    double sum = 0, sumsq = 0;
    long censored = 0;
  };
  std::vector<Acc> acc(2 * batches);
  parallel_for(static_cast<std::size_t>(2 * batches), workers, [&](std::size_t j) {
    const int cw = static_cast<int>(j % 2);
    const long b = static_cast<long>(j / 2);
    Rng rng(derive_seed(seed, j, "tsirelson-trel"));
    Sliced1D::Streams st(noise);
    std::vector<std::uint64_t> w(sliced.width(), cw ? ~std::uint64_t{0} : 0);
    const std::uint64_t valid = lane_mask(trials, b);
    std::uint64_t alive = valid;
    Acc a;
    for (long t = 1; t <= t_max && alive; ++t) {
      sliced.run(w, noise, st, rng);
      std::uint64_t dec = recursive_majority_lanes(w);
      if (!cw) dec = ~dec;
      const std::uint64_t died = alive & ~dec;
      const int k = std::popcount(died);
      a.sum += static_cast<double>(k) * t;
      a.sumsq += static_cast<double>(k) * t * t;
      alive &= ~died;
    }
    a.censored = std::popcount(alive);
    a.sum += static_cast<double>(a.censored) * t_max;
    a.sumsq += static_cast<double>(a.censored) * t_max * t_max;
    acc[j] = a;
  });
  Acc tot[2];
  for (std::size_t j = 0; j < acc.size(); ++j) {
    tot[j % 2].sum += acc[j].sum;
    tot[j % 2].sumsq += acc[j].sumsq;
    tot[j % 2].censored += acc[j].censored;
  }
  const double m0 = tot[0].sum / trials, m1 = tot[1].sum / trials;
  const int worse = m1 < m0 ? 1 : 0;
  TrelEstimate est;
  est.codeword = worse;
  est.mean = worse ? m1 : m0;
  const double var = std::max(0.0, tot[worse].sumsq / trials - est.mean * est.mean);
  est.se = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
  est.censored_fraction = static_cast<double>(tot[worse].censored) / trials;
  est.trials = trials;
  est.t_max = t_max;
  return est;
}

namespace {

BitLine bits_of(unsigned x, int width) {
  BitLine s(width);
  for (int i = 0; i < width; ++i) s[i] = (x >> i) & 1;
  return s;
}

std::string show(const BitLine& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i && i % 3 == 0) out += ' ';
    out += static_cast<char>('0' + s[i]);
  }
  return out;
}

// Runs c on s with at most one wire flip after layer `layer` (0 = input wire).
BitLine run_with_flip(const Circuit1D& c, BitLine s, int layer, int bit) {
  if (layer == 0) s[bit] ^= 1;
  for (int t = 0; t < c.depth(); ++t) {
    apply_layer(c.layers[t], s);
    if (layer == t + 1) s[bit] ^= 1;
  }
  return s;
}

BitLine logical_action(Kind1D kind, BitLine d) {
  switch (kind) {
    case Kind1D::X: return d;
    case Kind1D::Y: return {d[1], d[0]};
    case Kind1D::Z: {
      const std::uint8_t m = (d[0] + d[1] + d[2]) >= 2;
      return {m, m, m};
    }
  }
  return d;
}

}  // namespace

ConditionReport check_gate_ec_conditions_level1(Variant1D variant) {
  if (variant == Variant1D::Original) throw std::invalid_argument("conditions are stated for the modified families");
  ConditionReport rep;
  auto fail = [&](const std::string& what) {
    ++rep.counterexamples;
    if (rep.examples.size() < 16) rep.examples.push_back(what);
  };
  for (Kind1D kind : {Kind1D::X, Kind1D::Y, Kind1D::Z}) {
    const Circuit1D c = build_tsirelson(kind, 1, variant);
    const int blocks = c.width / 3;
    const char kname = "XYZ"[static_cast<int>(kind)];
    for (unsigned x = 0; x < (1u << c.width); ++x) {
      const BitLine in = bits_of(x, c.width);
      int r = 0;
      for (int b = 0; b < blocks; ++b) r += dist_to_code(in, 3 * b);
      if (r > 1) continue;
      const BitLine want = logical_action(kind, decode_blocks(in, 1));
      // (layer, bit) = (-1, -1) is the fault-free run.
      std::vector<std::pair<int, int>> faults = {{-1, -1}};
      if (r == 0)
        for (int l = 0; l <= c.depth(); ++l)
          for (int i = 0; i < c.width; ++i) faults.push_back({l, i});
      for (auto [l, i] : faults) {
        const int s = l >= 0 ? 1 : 0;
        const BitLine out = run_with_flip(c, in, l, i);
        ++rep.cases;
        for (int b = 0; b < blocks; ++b)
          if (dist_to_code(out, 3 * b) > r + s)
            fail(std::string("Gate A ") + kname + "1 in=" + show(in) + " fault=(" + std::to_string(l) + "," +
                 std::to_string(i) + ") out=" + show(out));
        if (decode_blocks(out, 1) != want)
          fail(std::string("Gate B ") + kname + "1 in=" + show(in) + " fault=(" + std::to_string(l) + "," +
               std::to_string(i) + ") out=" + show(out));
      }
    }
  }
  const Circuit1D ec = ec1_block(variant);
  for (unsigned x = 0; x < 8; ++x) {
    const BitLine in = bits_of(x, 3);
    const int r = dist_to_code(in, 0);
    std::vector<std::pair<int, int>> faults = {{-1, -1}};
    for (int l = 0; l <= ec.depth(); ++l)
      for (int i = 0; i < 3; ++i) faults.push_back({l, i});
    for (auto [l, i] : faults) {
      const int s = l >= 0 ? 1 : 0;
      const BitLine out = run_with_flip(ec, in, l, i);
      ++rep.cases;
      if (dist_to_code(out, 0) > s)
        fail("EC A in=" + show(in) + " fault=(" + std::to_string(l) + "," + std::to_string(i) + ") out=" + show(out));
      if (r + s <= 1 && decode_blocks(out, 1) != decode_blocks(in, 1))
        fail("EC B in=" + show(in) + " fault=(" + std::to_string(l) + "," + std::to_string(i) + ") out=" + show(out));
    }
  }
  return rep;
}

}  // namespace hfca
