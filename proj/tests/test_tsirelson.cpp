#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "hfca/rng.hpp"
#include "hfca/tsirelson.hpp"

using namespace hfca;

namespace {

BitLine bits(const std::string& s) {
  BitLine b;
  for (char c : s)
    if (c == '0' || c == '1') b.push_back(static_cast<std::uint8_t>(c - '0'));
  return b;
}

BitLine bits_of(unsigned x, int width) {
  BitLine b(width);
  for (int i = 0; i < width; ++i) b[i] = (x >> i) & 1;
  return b;
}

BitLine complement(BitLine b) {
  for (auto& v : b) v ^= 1;
  return b;
}

// Direct recursion of the decoder, independent of the library's implementation.
int maj_oracle(const BitLine& s, std::size_t begin, std::size_t len) {
  if (len == 1) return s[begin];
  const std::size_t third = len / 3;
  const int a = maj_oracle(s, begin, third), b = maj_oracle(s, begin + third, third),
            c = maj_oracle(s, begin + 2 * third, third);
  return a + b + c >= 2;
}

// Logical action of a level-0 gate on the decoded bits; the stabilizer family
// simulates the match primitive M0 in place of the majority.
BitLine logical(Kind1D kind, const BitLine& d, Variant1D v = Variant1D::Original) {
  if (kind == Kind1D::Z && v == Variant1D::Stabilizer) {
    BitLine out = d;
    if (d[1] != d[0] && d[1] != d[2]) out[1] ^= 1;
    return out;
  }
  switch (kind) {
    case Kind1D::X: return d;
    case Kind1D::Y: return BitLine{d[1], d[0]};
    case Kind1D::Z: {
      const std::uint8_t m = d[0] + d[1] + d[2] >= 2;
      return BitLine{m, m, m};
    }
  }
  return d;
}

}  // namespace

TEST_CASE("circuit depths and widths") {
  CHECK(build_tsirelson(Kind1D::X, 1, Variant1D::Original).depth() == 6);
  CHECK(build_tsirelson(Kind1D::X, 2, Variant1D::Original).depth() == 36);
  CHECK(build_tsirelson(Kind1D::X, 3, Variant1D::Original).depth() == 216);
  for (Kind1D k : {Kind1D::X, Kind1D::Y, Kind1D::Z}) {
    CHECK(build_tsirelson(k, 2, Variant1D::Original).depth() == 36);
    CHECK(build_tsirelson(k, 0, Variant1D::Modified).depth() == 1);
  }
  CHECK(build_tsirelson(Kind1D::Z, 1, Variant1D::Modified).depth() == 11);
  CHECK(build_tsirelson(Kind1D::Z, 1, Variant1D::Stabilizer).depth() == 11);
  CHECK(build_tsirelson(Kind1D::X, 1, Variant1D::Modified).depth() == 5);
  CHECK(build_tsirelson(Kind1D::Y, 1, Variant1D::Modified).depth() == 5);
  CHECK(kind_width(Kind1D::X, 2) == 9);
  CHECK(kind_width(Kind1D::Y, 2) == 18);
  CHECK(kind_width(Kind1D::Z, 2) == 27);
  for (Variant1D v : {Variant1D::Original, Variant1D::Modified, Variant1D::Stabilizer})
    for (Kind1D k : {Kind1D::X, Kind1D::Y, Kind1D::Z})
      for (int n = 0; n <= 2; ++n) {
        const auto c = build_tsirelson(k, n, v);
        CHECK(c.width == kind_width(k, n));
        CHECK_NOTHROW(c.validate());
      }
  CHECK_NOTHROW(memory_circuit(3, Variant1D::Stabilizer).validate());
}

TEST_CASE("invalid circuits are rejected") {
  Circuit1D c;
  c.width = 3;
  c.layers = {{{Prim1D::X0, 0}, {Prim1D::X0, 1}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.variant = Variant1D::Stabilizer;
  c.layers = {{{Prim1D::M0, 0}}, {{Prim1D::I0, 0}, {Prim1D::T0, 1}}};
  CHECK_NOTHROW(c.validate());
  c.width = 5;
  c.layers = {{{Prim1D::M0, 0}, {Prim1D::I0, 3}, {Prim1D::I0, 4}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(build_tsirelson(Kind1D::X, -1, Variant1D::Original), std::invalid_argument);
  CHECK_THROWS_AS(parse_kind1d("W"), std::invalid_argument);
}

TEST_CASE("recursive majority") {
  CHECK(recursive_majority(bits("111111111")) == 1);
  CHECK(recursive_majority(bits("101")) == 1);
  CHECK(recursive_majority(bits("110 100 000")) == 0);
  CHECK_THROWS_AS(recursive_majority(bits("1010")), std::invalid_argument);
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    BitLine s(81);
    for (auto& b : s) b = rng.next() & 1;
    CHECK(recursive_majority(s) == maj_oracle(s, 0, 81));
  }
  CHECK(decode_blocks(bits("110 001 111"), 1) == bits("101"));
  CHECK(encode_blocks(bits("10"), 1) == bits("111 000"));
}

TEST_CASE("majority decomposition") {
  CHECK(maj_decomposition_check());
  const auto c = majority_decomposition();
  CHECK(c.depth() == 5);
  CHECK(run_noiseless(c, bits("010")) == bits("000"));
  CHECK(run_noiseless(c, bits("111")) == bits("111"));
  for (unsigned x = 0; x < 8; ++x) {
    const BitLine in = bits_of(x, 3);
    const std::uint8_t m = in[0] + in[1] + in[2] >= 2;
    CHECK(run_noiseless(c, in) == BitLine(3, m));
  }
}

TEST_CASE("stabilizer primitives act as their product-state counterparts") {
  for (unsigned x = 0; x < 4; ++x) {
    BitLine a = bits_of(x, 2), b = a;
    apply_gate({Prim1D::T0, 0}, a);
    apply_gate({Prim1D::Y0, 0}, b);
    CHECK(a == b);
  }
  for (unsigned x = 0; x < 8; ++x) {
    BitLine a = bits_of(x, 3), b = a;
    apply_gate({Prim1D::Z0, 0}, b);
    CHECK(run_noiseless(majority_decomposition(), a) == b);
  }
}

TEST_CASE("self-simulation of noiseless gadgets") {
  for (Variant1D v : {Variant1D::Original, Variant1D::Modified, Variant1D::Stabilizer})
    for (Kind1D k : {Kind1D::X, Kind1D::Y, Kind1D::Z}) {
      CAPTURE(static_cast<int>(k));
      CAPTURE(to_string(v));
      // Level 1, exhaustively: blockwise decoding commutes with the gate.
      const auto c1 = build_tsirelson(k, 1, v);
      const int w1 = c1.width;
      // Only the original family is exact on damaged inputs; the modified ones are
      // covered there by the Gate/EC conditions and the M1 table.
      if (v == Variant1D::Original) {
        for (unsigned x = 0; x < (1u << w1); ++x) {
          const BitLine in = bits_of(x, w1);
          CHECK(decode_blocks(run_noiseless(c1, in), 1) == logical(k, decode_blocks(in, 1), v));
        }
      }
      // Codeword inputs at level 1 for every variant; the modified families return codewords.
      const int arity = w1 / 3;
      for (unsigned x = 0; x < (1u << arity); ++x) {
        const BitLine d = bits_of(x, arity);
        const BitLine out = run_noiseless(c1, encode_blocks(d, 1));
        if (v == Variant1D::Original)
          CHECK(decode_blocks(out, 1) == logical(k, d, v));
        else
          CHECK(out == encode_blocks(logical(k, d, v), 1));
      }
      // Level 2 on random level-1 codeword blocks: G_2 then D_1 equals D_1 then G_1.
      const auto c2 = build_tsirelson(k, 2, v);
      Rng rng(17);
      for (int i = 0; i < 64; ++i) {
        BitLine d(c2.width / 3);
        for (auto& b : d) b = rng.next() & 1;
        const BitLine in = encode_blocks(d, 1);
        CHECK(decode_blocks(run_noiseless(c2, in), 1) == run_noiseless(c1, d));
      }
    }
}

TEST_CASE("spin-flip symmetry") {
  Rng rng(23);
  for (Variant1D v : {Variant1D::Original, Variant1D::Modified, Variant1D::Stabilizer})
    for (Kind1D k : {Kind1D::X, Kind1D::Y, Kind1D::Z}) {
      const auto c = build_tsirelson(k, 2, v);
      for (int i = 0; i < 32; ++i) {
        BitLine s(c.width);
        for (auto& b : s) b = rng.next() & 1;
        CHECK(run_noiseless(c, complement(s)) == complement(run_noiseless(c, s)));
      }
    }
}

TEST_CASE("run1d") {
  const auto c = memory_circuit(2, Variant1D::Original);
  const BitLine ones(9, 1);
  const auto traj = run1d(c, Noise1D{}, 1, ones, 3);
  CHECK(traj.size() == static_cast<std::size_t>(3 * c.depth() + 1));
  for (const auto& s : traj) CHECK(s == ones);
  Circuit1D z;
  z.width = 3;
  z.layers = {{{Prim1D::Z0, 0}}};
  CHECK(run1d(z, Noise1D{}, 1, bits("100")).back() == bits("000"));
  Noise1D noisy;
  noisy.wire.p = 0.05;
  CHECK(run1d(c, noisy, 99, ones, 4) == run1d(c, noisy, 99, ones, 4));
  CHECK_THROWS_AS(run1d(c, noisy, 1, BitLine(8, 0)), std::invalid_argument);
  Noise1D bad;
  bad.wire.p = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bit-sliced engine matches the scalar run for every lane") {
  Noise1D noise;
  noise.wire.p = 0.02;
  for (Variant1D v : {Variant1D::Original, Variant1D::Stabilizer}) {
    const auto c = memory_circuit(2, v);
    const Sliced1D sliced(c);
    // Noiseless: each lane evolves as its own scalar trajectory.
    Rng init(8);
    std::vector<std::uint64_t> w(c.width);
    for (auto& x : w) x = init.next();
    std::vector<BitLine> lanes(64, BitLine(c.width));
    for (int j = 0; j < 64; ++j)
      for (int i = 0; i < c.width; ++i) lanes[j][i] = (w[i] >> j) & 1;
    Sliced1D::Streams st(Noise1D{});
    Rng rng(1);
    sliced.run(w, Noise1D{}, st, rng);
    for (int j = 0; j < 64; ++j) {
      const BitLine out = run_noiseless(c, lanes[j]);
      for (int i = 0; i < c.width; ++i) CHECK(((w[i] >> j) & 1) == out[i]);
    }
  }
}

TEST_CASE("fidelity estimator") {
  const auto e = estimate_fidelity(3, 50, Noise1D{}, 100, 1, 1);
  CHECK(e.f == 1.0);
  CHECK(e.se == 0.0);
  CHECK(e.trials == 100);
  Noise1D noise;
  noise.wire.p = 0.013;
  const auto a = estimate_fidelity(2, 20, noise, 300, 42, 1);
  const auto b = estimate_fidelity(2, 20, noise, 300, 42, 3);
  CHECK(a.f0 == b.f0);
  CHECK(a.f1 == b.f1);
  CHECK(a.f < 1.0);
  // Pinned output of the fixed-seed estimator (guards the sampler and seeding).
  CHECK(a.f0 == 282.0 / 300);
  CHECK(a.f1 == 270.0 / 300);
  // Deep in the ordered phase larger systems are better.
  noise.wire.p = 0.004;
  const auto small = estimate_fidelity(1, 50, noise, 512, 3, 1);
  const auto large = estimate_fidelity(3, 50, noise, 512, 3, 1);
  CHECK(large.f > small.f);
}

TEST_CASE("relaxation-time estimator") {
  const auto e = estimate_trel_1d(2, Noise1D{}, 64, 50, 1, 1);
  CHECK(e.censored_fraction == 1.0);
  CHECK(e.mean == 50.0);
  Noise1D noise;
  noise.wire.p = 0.02;
  const auto a = estimate_trel_1d(2, noise, 200, 5000, 7, 1);
  const auto b = estimate_trel_1d(2, noise, 200, 5000, 7, 2);
  CHECK(a.mean == b.mean);
  CHECK(a.censored_fraction == 0.0);
  // Monotone censoring: a larger horizon never lowers the censored mean.
  const auto c = estimate_trel_1d(2, noise, 200, 20, 7, 1);
  CHECK(c.mean <= a.mean);
  CHECK(c.censored_fraction > 0.0);
  CHECK(a.mean == 11358.0 / 200);  // pinned
  Noise1D gadget;
  gadget.gadget.p = 0.01;
  const auto g = estimate_trel_1d(2, gadget, 128, 5000, 7, 1, Variant1D::Modified);
  CHECK(g.mean > 1.0);
}

TEST_CASE("level-1 Gate and EC conditions") {
  const auto rep = check_gate_ec_conditions_level1(Variant1D::Modified);
  CHECK(rep.cases > 0);
  CHECK(rep.ok());
  for (const auto& e : rep.examples) MESSAGE(e);
}
