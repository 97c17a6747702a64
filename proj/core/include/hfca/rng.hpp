// Deterministic seeding and the sparse Bernoulli sampler shared by all Monte Carlo code.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hfca {

std::uint64_t splitmix64(std::uint64_t& state);

// Splittable stream seed: a pure function of (master, index, tag), so results
// never depend on which worker ran which trial.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view tag);

// 64-bit FNV-1a, used for config hashes and table checksums.
std::uint64_t fnv1a64(std::string_view text);

// xoshiro256** (Blackman & Vigna), seeded through splitmix64. A standard
// UniformRandomBitGenerator, about three times cheaper per word than mt19937_64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  explicit Xoshiro256(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
  }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    const std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return r;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  Xoshiro256& engine() { return eng_; }

 private:
  Xoshiro256 eng_;
};

// Draws the set of positions in [0, n) that are hit independently with
// probability p. Poissonised: K ~ Poisson(-n ln(1-p)) uniform draws with
// replacement hit each position with probability exactly p, independently;
// duplicates are removed so every hit is reported once, in increasing order.
class SparseBernoulli {
 public:
  SparseBernoulli(std::uint64_t n, double p);
  const std::vector<std::uint64_t>& draw(Rng& rng);
  double p() const { return p_; }

 private:
  std::uint64_t n_;
  double p_;
  std::poisson_distribution<std::uint64_t> poisson_;
  bool all_ = false;
  std::vector<std::uint64_t> hits_;
};

// Bernoulli(p) bits delivered 64 at a time, integer-only: the hit count of a
// word is drawn from a Binomial(64, p) inverse-CDF table, then that many
// distinct positions are drawn uniformly. Mostly one engine call per word.
class BernoulliStream {
 public:
  explicit BernoulliStream(double p);
  std::uint64_t next(Rng& rng) {
    if (trivial_) return all_;
    const std::uint64_t u = rng.next();
    return u < cdf_[0] ? 0 : draw(rng, u);
  }
  double p() const { return p_; }

 private:
  std::uint64_t draw(Rng& rng, std::uint64_t u);

  double p_;
  bool trivial_ = false;   // p == 0 or p == 1
  std::uint64_t all_ = 0;  // the word returned when trivial
  std::vector<std::uint64_t> cdf_;  // cdf_[k] = P(hits <= k) * 2^64, saturated
};

}  // namespace hfca
