#include "hfca/lattice.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace hfca {

std::size_t BitVec::count() const {
  std::size_t c = 0;
  for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVec::any() const {
  for (auto w : w_)
    if (w) return true;
  return false;
}

void BitVec::clear() {
  for (auto& w : w_) w = 0;
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (o.n_ != n_) throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

TorusLattice::TorusLattice(int L) : L_(L) {
  if (L <= 0) throw std::invalid_argument("lattice side must be positive");
}

Link TorusLattice::link_at(std::size_t idx) const {
  const std::size_t v = idx / 2;
  return Link{static_cast<int>(v % L_), static_cast<int>(v / L_), static_cast<Orient>(idx & 1)};
}

Vertex TorusLattice::vertex_at(std::size_t idx) const {
  return Vertex{static_cast<int>(idx % L_), static_cast<int>(idx / L_)};
}

void TorusLattice::endpoints(std::size_t link, std::size_t& a, std::size_t& b) const {
  const Link l = link_at(link);
  a = vertex_index(l.x, l.y);
  b = l.o == Orient::H ? vertex_index(l.x + 1, l.y) : vertex_index(l.x, l.y + 1);
}

void TorusLattice::incident(std::size_t vertex, std::size_t out[4]) const {
  const Vertex v = vertex_at(vertex);
  out[0] = link_index(v.x - 1, v.y, Orient::H);
  out[1] = link_index(v.x, v.y, Orient::H);
  out[2] = link_index(v.x, v.y - 1, Orient::V);
  out[3] = link_index(v.x, v.y, Orient::V);
}

ErrorConfig& ErrorConfig::operator^=(const ErrorConfig& o) {
  if (!(lattice == o.lattice)) throw std::invalid_argument("lattice mismatch");
  bits ^= o.bits;
  return *this;
}

std::vector<Vertex> SyndromeConfig::support() const {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits.get(i)) out.push_back(lattice.vertex_at(i));
  return out;
}

SyndromeConfig& SyndromeConfig::operator^=(const SyndromeConfig& o) {
  if (!(lattice == o.lattice)) throw std::invalid_argument("lattice mismatch");
  bits ^= o.bits;
  return *this;
}

int pow3(int k) {
  if (k < 0) throw std::invalid_argument("negative level");
  int r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

int log3_exact(long long n) {
  if (n <= 0) return -1;
  int k = 0;
  while (n % 3 == 0) { n /= 3; ++k; }
  return n == 1 ? k : -1;
}

int FrameLevel::spacing() const { return pow3(k); }

bool FrameLevel::contains(const TorusLattice& lat, int x, int y) const {
  const int s = spacing();
  return lat.wrap(x - offset_x) % s == 0 && lat.wrap(y - offset_y) % s == 0;
}

SyndromeConfig syndromes_of(const ErrorConfig& cfg) {
  const TorusLattice& lat = cfg.lattice;
  SyndromeConfig s(lat);
  const int L = lat.L();
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      if (cfg.bits.get(lat.link_index(x, y, Orient::H))) {
        s.bits.flip(lat.vertex_index(x, y));
        s.bits.flip(lat.vertex_index(x + 1, y));
      }
      if (cfg.bits.get(lat.link_index(x, y, Orient::V))) {
        s.bits.flip(lat.vertex_index(x, y));
        s.bits.flip(lat.vertex_index(x, y + 1));
      }
    }
  return s;
}

HomologyClass homology_class(const ErrorConfig& cfg) {
  if (syndromes_of(cfg).bits.any())
    throw std::invalid_argument("homology_class requires a syndrome-free chain");
  const TorusLattice& lat = cfg.lattice;
  HomologyClass hc;
  for (int y = 0; y < lat.L(); ++y) hc.h ^= cfg.bits.get(lat.link_index(0, y, Orient::H));
  for (int x = 0; x < lat.L(); ++x) hc.v ^= cfg.bits.get(lat.link_index(x, 0, Orient::V));
  return hc;
}

bool is_coarse_grained(const SyndromeConfig& syn, const FrameLevel& level) {
  const TorusLattice& lat = syn.lattice;
  for (std::size_t i = 0; i < syn.bits.size(); ++i) {
    if (!syn.bits.get(i)) continue;
    const Vertex v = lat.vertex_at(i);
    if (!level.contains(lat, v.x, v.y)) return false;
  }
  return true;
}

namespace {

TorusLattice reduced_lattice(const TorusLattice& lat) {
  if (lat.L() % 3 != 0) throw std::invalid_argument("pushforward requires 3 | L");
  return TorusLattice(lat.L() / 3);
}

}  // namespace

SyndromeConfig pushforward(const SyndromeConfig& syn) {
  const TorusLattice small = reduced_lattice(syn.lattice);
  if (!is_coarse_grained(syn, FrameLevel{1}))
    throw std::invalid_argument("pushforward requires a level-1 coarse-grained syndrome");
  SyndromeConfig out(small);
  for (int y = 0; y < small.L(); ++y)
    for (int x = 0; x < small.L(); ++x) out.set(x, y, syn.get(3 * x, 3 * y));
  return out;
}

ErrorConfig chain_with_syndrome(const SyndromeConfig& syn) {
  const TorusLattice& lat = syn.lattice;
  if (syn.bits.count() % 2) throw std::invalid_argument("odd syndrome parity has no chain");
  const int L = lat.L();
  ErrorConfig c(lat);
  // Move every syndrome along its row to x = 0, then along column 0 to y = 0.
  std::vector<bool> column(L, false);
  for (int y = 0; y < L; ++y) {
    bool carry = false;
    for (int x = L - 1; x >= 1; --x) {
      carry ^= syn.get(x, y);
      if (carry) c.flip(Link{x - 1, y, Orient::H});
    }
    column[y] = carry ^ syn.get(0, y);
  }
  bool carry = false;
  for (int y = L - 1; y >= 1; --y) {
    carry ^= column[y];
    if (carry) c.flip(Link{0, y - 1, Orient::V});
  }
  return c;
}

ErrorConfig pullback(const ErrorConfig& reduced) {
  const TorusLattice big(reduced.lattice.L() * 3);
  ErrorConfig out(big);
  const TorusLattice& small = reduced.lattice;
  for (std::size_t i = 0; i < small.num_links(); ++i) {
    if (!reduced.bits.get(i)) continue;
    const Link l = small.link_at(i);
    for (int j = 0; j < 3; ++j) {
      if (l.o == Orient::H) out.flip(Link{3 * l.x + j, 3 * l.y, Orient::H});
      else out.flip(Link{3 * l.x, 3 * l.y + j, Orient::V});
    }
  }
  return out;
}

ErrorConfig pushforward(const ErrorConfig& cfg) {
  const SyndromeConfig small_syn = pushforward(syndromes_of(cfg));
  ErrorConfig c = chain_with_syndrome(small_syn);
  ErrorConfig diff = pullback(c);
  diff ^= cfg;
  const HomologyClass hc = homology_class(diff);
  const TorusLattice& small = c.lattice;
  // Non-contractible reduced loops pull back to loops with the same winding.
  if (hc.h)
    for (int x = 0; x < small.L(); ++x) c.flip(Link{x, 0, Orient::H});
  if (hc.v)
    for (int y = 0; y < small.L(); ++y) c.flip(Link{0, y, Orient::V});
  return c;
}

std::string to_string(const SyndromeConfig& syn) {
  std::ostringstream os;
  bool first = true;
  os << '{';
  for (const Vertex& v : syn.support()) {
    if (!first) os << ' ';
    first = false;
    os << '(' << v.x << ',' << v.y << ')';
  }
  os << '}';
  return os.str();
}

}  // namespace hfca
