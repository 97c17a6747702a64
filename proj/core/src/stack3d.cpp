#include "hfca/stack3d.hpp"

#include <stdexcept>

#include "hfca/gadgets.hpp"

namespace hfca {

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Gadgets: return "gadgets";
    case Phase::SwapEven: return "swap_even";
    case Phase::GadgetsAgain: return "gadgets";
    case Phase::SwapOdd: return "swap_odd";
  }
  return "?";
}

Stack::Stack(const SimParams& params) : lat_(params.L()) {
  auto period = outer_period(params);
  if (period->L() != lat_.L()) throw std::invalid_argument("schedule lattice does not match 3^(n k)");
  rules_ = materialize(*period);
  if (rules_.empty()) throw std::invalid_argument("empty schedule");
  const long h = height();
  layers_.assign(h, ErrorConfig(lat_));
  pos_.resize(h);
  who_.resize(h);
  for (long z = 0; z < h; ++z) pos_[z] = who_[z] = z;
}

const std::vector<PlacedGadget>& Stack::rule(long z) const {
  if (z < 0 || z >= height()) throw std::out_of_range("layer index out of range");
  return z % 2 == 0 ? rules_[z / 2] : idle_;
}

void Stack::step(const StackNoise& noise, Rng& rng, const std::vector<SwapFault>* forced) {
  const long h = height();
  const Phase ph = phase();
  if (ph == Phase::Gadgets || ph == Phase::GadgetsAgain) {
    for (long z = 0; z < h; ++z) {
      BitVec meas, flips;
      const BitVec* mp = nullptr;
      const BitVec* fp = nullptr;
      if (noise.measurement > 0) {
        meas = BitVec(lat_.num_vertices());
        for (std::size_t v = 0; v < meas.size(); ++v)
          if (rng.bernoulli(noise.measurement)) meas.flip(v);
        mp = &meas;
      }
      if (noise.qubit > 0) {
        flips = BitVec(lat_.num_links());
        for (std::size_t l = 0; l < flips.size(); ++l)
          if (rng.bernoulli(noise.qubit)) flips.flip(l);
        fp = &flips;
      }
      apply_layer(layers_[z], rule(z), mp, fp);
    }
  } else {
    const long first = ph == Phase::SwapEven ? 0 : 1;
    for (long z = first; z < h; z += 2) {
      const long w = (z + 1) % h;
      std::swap(layers_[z], layers_[w]);
      std::swap(who_[z], who_[w]);
      pos_[who_[z]] = z;
      pos_[who_[w]] = w;
      if (noise.swap > 0)
        for (std::size_t l = 0; l < lat_.num_links(); ++l)
          if (rng.bernoulli(noise.swap)) {
            layers_[z].bits.flip(l);
            layers_[w].bits.flip(l);
          }
      if (forced)
        for (const SwapFault& f : *forced)
          if (f.step == clock_ && f.z == z) {
            layers_[z].bits.flip(f.link);
            layers_[w].bits.flip(f.link);
          }
    }
  }
  ++clock_;
}

Stack build_stack(const SimParams& params) { return Stack(params); }

std::vector<std::vector<ErrorConfig>> moving_frames(Stack& stack, long steps, const StackNoise& noise, Rng& rng,
                                                    const std::vector<SwapFault>* forced) {
  const long h = stack.height();
  std::vector<std::vector<ErrorConfig>> frames(h);
  for (long i = 0; i < steps; ++i) {
    const Phase ph = stack.phase();
    stack.step(noise, rng, forced);
    if (ph == Phase::Gadgets || ph == Phase::GadgetsAgain)
      for (long z0 = 0; z0 < h; ++z0) frames[z0].push_back(stack.layers()[stack.position(z0)]);
  }
  return frames;
}

namespace {

ErrorConfig random_config(const TorusLattice& lat, Rng& rng) {
  ErrorConfig e(lat);
  for (std::size_t l = 0; l < lat.num_links(); ++l)
    if (rng.next() & 1) e.bits.flip(l);
  return e;
}

// Schedule step met by the content starting at z0 in its i-th gadget phase; -1 = idle.
long met_step(long z0, long i, long delta) {
  if (z0 % 2 == 0) return i % 2 == 0 ? (z0 / 2 + i / 2) % delta : -1;
  if (i % 2 == 0) return -1;
  const long j = (z0 - 1) / 2;
  return ((j - (i - 1) / 2) % delta + delta) % delta;
}

}  // namespace

EquivalenceReport stack3d_equivalence(const SimParams& params, std::uint64_t seed) {
  Stack stack(params);
  const long h = stack.height(), delta = stack.delta();
  Rng init(seed);
  std::vector<ErrorConfig> start;
  for (long z = 0; z < h; ++z) start.push_back(random_config(stack.lattice(), init));
  stack.layers() = start;
  Rng rng(seed ^ 0x5eedULL);
  auto frames = moving_frames(stack, 4 * delta, StackNoise{}, rng);
  auto schedule = materialize(*outer_period(params));
  EquivalenceReport rep;
  for (long z0 = 0; z0 < h; ++z0) {
    ++rep.starts;
    if (z0 % 2) ++rep.reversed_starts;
    ErrorConfig ref = start[z0];
    for (long i = 0; i < static_cast<long>(frames[z0].size()); ++i) {
      const long t = met_step(z0, i, delta);
      if (t >= 0) apply_layer(ref, schedule[t]);
      ++rep.frames;
      if (!(frames[z0][i] == ref)) {
        ++rep.mismatches;
        if (rep.examples.size() < 10)
          rep.examples.push_back("z0=" + std::to_string(z0) + " frame " + std::to_string(i));
      }
    }
    if (stack.position(z0) != z0) {
      ++rep.mismatches;
      rep.examples.push_back("z0=" + std::to_string(z0) + " did not return after a full cycle");
    }
  }
  return rep;
}

EquivalenceReport swap_failure_check(const SimParams& params, std::uint64_t seed) {
  Stack probe(params);
  const long h = probe.height(), delta = probe.delta();
  const TorusLattice lat = probe.lattice();
  auto schedule = materialize(*outer_period(params));
  Rng init(seed);
  std::vector<ErrorConfig> start;
  for (long z = 0; z < h; ++z) start.push_back(random_config(lat, init));
  EquivalenceReport rep;
  // One fault per swap phase of the first cycle, at a pair and link derived from the seed.
  for (long step = 1; step < 4 * delta; step += 2) {
    Stack stack(params);
    stack.layers() = start;
    const long first = (step % 4 == 1) ? 0 : 1;
    const long z = first + 2 * static_cast<long>(init.below(static_cast<std::uint64_t>(delta)));
    const SwapFault f{step, z, static_cast<std::size_t>(init.below(lat.num_links()))};
    std::vector<SwapFault> forced{f};
    Rng rng(0);
    // Contents in the pair before the swap: track who they are.
    Stack before = stack;
    for (long i = 0; i < step; ++i) before.step(StackNoise{}, rng);
    long who_lo = -1, who_hi = -1;
    for (long z0 = 0; z0 < h; ++z0) {
      if (before.position(z0) == z) who_lo = z0;
      if (before.position(z0) == (z + 1) % h) who_hi = z0;
    }
    auto frames = moving_frames(stack, 4 * delta, StackNoise{}, rng, &forced);
    for (long z0 : {who_lo, who_hi}) {
      ++rep.starts;
      ErrorConfig ref = start[z0];
      // The swap at `step` falls between gadget phases (step - 1) / 2 and (step + 1) / 2.
      const long flip_before = (step + 1) / 2;
      for (long i = 0; i < static_cast<long>(frames[z0].size()); ++i) {
        if (i == flip_before) ref.bits.flip(f.link);
        const long t = met_step(z0, i, delta);
        if (t >= 0) apply_layer(ref, schedule[t]);
        ++rep.frames;
        if (!(frames[z0][i] == ref)) {
          ++rep.mismatches;
          if (rep.examples.size() < 10)
            rep.examples.push_back("swap fault at step " + std::to_string(step) + ", z0=" + std::to_string(z0) +
                                   " frame " + std::to_string(i));
        }
      }
    }
  }
  return rep;
}

}  // namespace hfca
