// 1D repetition-code automata: the original and modified Tsirelson circuits,
// the measurement-and-feedback (stabilizer) variant, the recursive majority
// decoder and bit-sliced Monte Carlo estimators.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfca/rng.hpp"

namespace hfca {

// Primitive gates. X0/I0 idle one bit, Y0 swaps two bits, T0 flips both of its
// bits when they differ (identical to a swap on product states), Z0 broadcasts
// the majority of three bits, M0 flips the middle of three bits when it
// differs from both neighbours.
enum class Prim1D : std::uint8_t { X0, Y0, Z0, I0, T0, M0 };

int arity(Prim1D p);
bool is_idle(Prim1D p);
char prim_name(Prim1D p);

struct Gate1D {
  Prim1D kind = Prim1D::X0;
  int site = 0;  // leftmost bit
  bool operator==(const Gate1D&) const = default;
};

enum class Kind1D : std::uint8_t { X, Y, Z };
enum class Variant1D : std::uint8_t { Original, Modified, Stabilizer };

Kind1D parse_kind1d(const std::string& s);
Variant1D parse_variant1d(const std::string& s);
std::string to_string(Variant1D v);

using BitLine = std::vector<std::uint8_t>;

// Explicit layered circuit on an open line. Every layer tiles the line:
// idles are listed explicitly so that gadget noise can fail them.
struct Circuit1D {
  int width = 0;
  Variant1D variant = Variant1D::Original;
  std::vector<std::vector<Gate1D>> layers;

  int depth() const { return static_cast<int>(layers.size()); }
  // Throws std::invalid_argument unless every layer tiles [0, width) and,
  // for the stabilizer variant, no layer mixes M0 with I0/T0.
  void validate() const;
};

// Number of bits acted on by the level-n gadget of a kind: 3^n, 2*3^n, 3^(n+1).
int kind_width(Kind1D kind, int n);

// Level-n gadget. Original: the substitution recursion (depth 6^n).
// Modified/stabilizer: level-1 gadgets as given (depths 5, 5, 11); for n >= 2
// every primitive of the level-1 gadget is replaced by its level-(n-1)
// simulation, i.e. ft1d applied n-1 times.
Circuit1D build_tsirelson(Kind1D kind, int n, Variant1D variant);

// Level-1 error correction of the modified/stabilizer families: one Z0
// (modified) or the five-step M0 T0 M0 T0 M0 sequence (stabilizer) per block.
Circuit1D ec1_block(Variant1D variant);

// The stabilizer majority sequence M0(e) T0(e+1/2) M0(e) T0(e-1/2) M0(e) on three bits.
Circuit1D majority_decomposition();
bool maj_decomposition_check();

// One step of fault-tolerant simulation for the modified/stabilizer families:
// each primitive becomes its level-1 gadget on 3x wider blocks, with a layer of
// EC blocks before, between and after the lifted layers. Gadgets of unequal
// depth inside one layer are padded with idles at the end.
Circuit1D ft1d(const Circuit1D& c);

// The primitive gate as a one-layer circuit.
Circuit1D primitive_circuit(Kind1D kind, Variant1D variant);

// One application of the memory automaton on 3^n bits: X_n for the original
// family, FT^n(X0) for the modified and stabilizer families.
Circuit1D memory_circuit(int n, Variant1D variant);

// `times` copies of c in sequence.
Circuit1D repeat(const Circuit1D& c, int times);

void apply_gate(const Gate1D& g, BitLine& s);
void apply_layer(const std::vector<Gate1D>& layer, BitLine& s);
BitLine run_noiseless(const Circuit1D& c, BitLine s);

// The recursive majority D_k; length must be a power of 3.
int recursive_majority(const BitLine& s);
// D_1 applied to each consecutive block of 3^k bits.
BitLine decode_blocks(const BitLine& s, int k);
BitLine encode_blocks(const BitLine& logical, int k);

struct WireNoise {
  double p = 0.0;
  double eta = 0.0;  // replaced bits are 1 with probability (1+eta)/2
};

struct GadgetNoise1D {
  double p = 0.0;  // per placed gate (idles included); outputs become uniform random
};

struct Noise1D {
  WireNoise wire;
  GadgetNoise1D gadget;
  void validate() const;
};

// Trajectory of states: entry 0 is s0, entry t is the state after layer t-1 of
// `repetitions` consecutive runs of c.
std::vector<BitLine> run1d(const Circuit1D& c, const Noise1D& noise, std::uint64_t seed,
                           const BitLine& s0, int repetitions = 1);

// 64 trials at once: bit j of word i is bit i of trial j.
class Sliced1D {
 public:
  struct Streams {
    // Unbiased replacement by a random bit is a flip with probability p/2.
    explicit Streams(const Noise1D& noise)
        : wire(noise.wire.eta == 0.0 ? noise.wire.p / 2 : noise.wire.p), gadget(noise.gadget.p) {}
    BernoulliStream wire;
    BernoulliStream gadget;
  };

  explicit Sliced1D(const Circuit1D& c);
  int width() const { return width_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  // Layer t: gates, then gadget failures, then wire noise.
  void step(int t, std::vector<std::uint64_t>& words, const Noise1D& noise, Streams& st,
            Rng& rng) const;
  void run(std::vector<std::uint64_t>& words, const Noise1D& noise, Streams& st, Rng& rng) const;

 private:
  int width_ = 0;
  std::vector<std::vector<Gate1D>> layers_;
  std::vector<std::vector<Gate1D>> active_;  // non-idle gates of each layer
};

std::uint64_t recursive_majority_lanes(std::vector<std::uint64_t> words);

struct FidelityEstimate {
  double f = 1.0;   // min over the two codewords
  double se = 0.0;
  double f0 = 1.0;  // codeword 0...0
  double f1 = 1.0;  // codeword 1...1
  long trials = 0;  // per codeword
};

// F(T) for X_n applied T times to the two codewords (L = 3^n).
FidelityEstimate estimate_fidelity(int n, int T, const Noise1D& noise, long trials,
                                   std::uint64_t seed, int workers = 1,
                                   Variant1D variant = Variant1D::Original);

struct TrelEstimate {
  double mean = 0.0;  // censored mean of the worse codeword
  double se = 0.0;
  double censored_fraction = 0.0;
  long trials = 0;
  long t_max = 0;
  int codeword = 0;
};

// First application count T with D(s(T)) != D(s(0)), censored at t_max.
TrelEstimate estimate_trel_1d(int n, const Noise1D& noise, long trials, long t_max,
                              std::uint64_t seed, int workers = 1,
                              Variant1D variant = Variant1D::Original);

struct ConditionReport {
  long cases = 0;
  long counterexamples = 0;
  std::vector<std::string> examples;  // first few counterexamples
  bool ok() const { return counterexamples == 0; }
};

// Exhaustive single-fault check of the Gate A/B and EC A/B conditions at t=1
// for the level-1 gadgets of a family (modified by default).
ConditionReport check_gate_ec_conditions_level1(Variant1D variant = Variant1D::Modified);

}  // namespace hfca
