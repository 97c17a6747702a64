#include "hfca/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hfca {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view tag) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ fnv1a64(tag);
  std::uint64_t b = splitmix64(s);
  s = b ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

namespace {

double poisson_mean(std::uint64_t n, double p) {
  if (p <= 0.0 || n == 0) return 0.0;
  return -static_cast<double>(n) * std::log1p(-p);
}

}  // namespace

SparseBernoulli::SparseBernoulli(std::uint64_t n, double p) : n_(n), p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
  if (p >= 1.0) {
    all_ = true;
  } else if (p > 0.0 && n > 0) {
    poisson_ = std::poisson_distribution<std::uint64_t>(poisson_mean(n, p));
  }
}

const std::vector<std::uint64_t>& SparseBernoulli::draw(Rng& rng) {
  hits_.clear();
  if (all_) {
    hits_.resize(n_);
    for (std::uint64_t i = 0; i < n_; ++i) hits_[i] = i;
    return hits_;
  }
  if (p_ <= 0.0 || n_ == 0) return hits_;
  const std::uint64_t k = poisson_(rng.engine());
  hits_.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) hits_.push_back(rng.below(n_));
  if (k > 1) {
    std::sort(hits_.begin(), hits_.end());
    hits_.erase(std::unique(hits_.begin(), hits_.end()), hits_.end());
  }
  return hits_;
}

BernoulliStream::BernoulliStream(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
  if (p == 0.0 || p == 1.0) {
    trivial_ = true;
    all_ = p == 1.0 ? ~std::uint64_t{0} : 0;
    return;
  }
  const long double lp = std::log(static_cast<long double>(p)), lq = std::log1p(-static_cast<long double>(p));
  long double cum = 0, log_binom = 0;  // log C(64, k)
  for (int k = 0; k <= 64; ++k) {
    if (k > 0) log_binom += std::log(static_cast<long double>(65 - k)) - std::log(static_cast<long double>(k));
    cum += std::exp(log_binom + k * lp + (64 - k) * lq);
    const long double scaled = cum * 0x1p64L;
    const std::uint64_t t = scaled >= 0x1p64L ? std::numeric_limits<std::uint64_t>::max()
                                               : static_cast<std::uint64_t>(scaled);
    cdf_.push_back(k == 64 ? std::numeric_limits<std::uint64_t>::max() : t);
    if (t == std::numeric_limits<std::uint64_t>::max()) break;
  }
  cdf_.back() = std::numeric_limits<std::uint64_t>::max();
}

std::uint64_t BernoulliStream::draw(Rng& rng, std::uint64_t u) {
  int k = 1;
  while (k + 1 < static_cast<int>(cdf_.size()) && u >= cdf_[k]) ++k;
  // Draw min(k, 64 - k) distinct positions, six bits at a time.
  const bool invert = k > 32;
  const int want = invert ? 64 - k : k;
  std::uint64_t mask = 0, bits = 0;
  int left = 0, have = 0;
  while (have < want) {
    if (left == 0) {
      bits = rng.next();
      left = 10;
    }
    const std::uint64_t b = std::uint64_t{1} << (bits & 63);
    bits >>= 6;
    --left;
    if (!(mask & b)) {
      mask |= b;
      ++have;
    }
  }
  return invert ? ~mask : mask;
}

}  // namespace hfca
