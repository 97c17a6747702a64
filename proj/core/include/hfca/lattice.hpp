// Torus geometry, F2 error/syndrome state, homology and the Sigma_k frames.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hfca {

enum class Orient : std::uint8_t { H = 0, V = 1 };

inline Orient flip(Orient o) { return o == Orient::H ? Orient::V : Orient::H; }

struct Vertex {
  int x = 0;
  int y = 0;
  bool operator==(const Vertex&) const = default;
  // Row-major: by y, then x.
  bool operator<(const Vertex& o) const { return y != o.y ? y < o.y : x < o.x; }
};

struct Link {
  int x = 0;
  int y = 0;
  Orient o = Orient::H;
  bool operator==(const Link&) const = default;
};

// Dense bit vector with word access; the storage behind every F2 configuration.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  std::size_t count() const;
  bool any() const;
  void clear();
  BitVec& operator^=(const BitVec& o);
  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  std::vector<std::uint64_t>& words() { return w_; }
  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// L x L periodic square lattice: vertices carry star checks, links carry bits.
// Link (x,y,H) joins (x,y)-(x+1,y); link (x,y,V) joins (x,y)-(x,y+1).
class TorusLattice {
 public:
  TorusLattice() = default;
  explicit TorusLattice(int L);

  int L() const { return L_; }
  std::size_t num_links() const { return 2 * static_cast<std::size_t>(L_) * L_; }
  std::size_t num_vertices() const { return static_cast<std::size_t>(L_) * L_; }

  int wrap(int c) const { int r = c % L_; return r < 0 ? r + L_ : r; }
  std::size_t vertex_index(int x, int y) const {
    return static_cast<std::size_t>(wrap(y)) * L_ + wrap(x);
  }
  std::size_t vertex_index(Vertex v) const { return vertex_index(v.x, v.y); }
  std::size_t link_index(int x, int y, Orient o) const {
    return 2 * vertex_index(x, y) + static_cast<std::size_t>(o);
  }
  std::size_t link_index(Link l) const { return link_index(l.x, l.y, l.o); }
  Link link_at(std::size_t idx) const;
  Vertex vertex_at(std::size_t idx) const;
  // The two endpoint vertex indices of a link.
  void endpoints(std::size_t link, std::size_t& a, std::size_t& b) const;
  // The four link indices incident to a vertex.
  void incident(std::size_t vertex, std::size_t out[4]) const;

  bool operator==(const TorusLattice& o) const { return L_ == o.L_; }

 private:
  int L_ = 0;
};

struct ErrorConfig {
  TorusLattice lattice;
  BitVec bits;

  ErrorConfig() = default;
  explicit ErrorConfig(const TorusLattice& lat) : lattice(lat), bits(lat.num_links()) {}
  bool get(Link l) const { return bits.get(lattice.link_index(l)); }
  void flip(Link l) { bits.flip(lattice.link_index(l)); }
  ErrorConfig& operator^=(const ErrorConfig& o);
  bool operator==(const ErrorConfig& o) const { return lattice == o.lattice && bits == o.bits; }
};

struct SyndromeConfig {
  TorusLattice lattice;
  BitVec bits;

  SyndromeConfig() = default;
  explicit SyndromeConfig(const TorusLattice& lat) : lattice(lat), bits(lat.num_vertices()) {}
  bool get(int x, int y) const { return bits.get(lattice.vertex_index(x, y)); }
  void set(int x, int y, bool v) { bits.set(lattice.vertex_index(x, y), v); }
  bool empty() const { return !bits.any(); }
  std::vector<Vertex> support() const;
  SyndromeConfig& operator^=(const SyndromeConfig& o);
  bool operator==(const SyndromeConfig& o) const { return lattice == o.lattice && bits == o.bits; }
};

struct HomologyClass {
  bool h = false;  // parity of set horizontal links on the cut x = 0
  bool v = false;  // parity of set vertical links on the cut y = 0
  bool operator==(const HomologyClass&) const = default;
  bool trivial() const { return !h && !v; }
};

// Sigma_k: vertices whose coordinates minus the frame offset are multiples of 3^k.
struct FrameLevel {
  int k = 0;
  int offset_x = 0;
  int offset_y = 0;

  int spacing() const;
  bool contains(const TorusLattice& lat, int x, int y) const;
};

int pow3(int k);
// Returns k if n == 3^k, otherwise -1.
int log3_exact(long long n);

SyndromeConfig syndromes_of(const ErrorConfig& cfg);

// Winding parities of a syndrome-free chain; throws std::invalid_argument otherwise.
HomologyClass homology_class(const ErrorConfig& cfg);

bool is_coarse_grained(const SyndromeConfig& syn, const FrameLevel& level);

// Syndrome-level pushforward: (3x,3y) -> (x,y).
SyndromeConfig pushforward(const SyndromeConfig& syn);

// Chain-level pushforward: a chain on the L/3 lattice whose syndrome is the
// pushed-forward syndrome and whose pullback differs from `cfg` by a stabilizer.
ErrorConfig pushforward(const ErrorConfig& cfg);

// Maps each reduced link to the three links of the corresponding 1-link.
ErrorConfig pullback(const ErrorConfig& reduced);

// Some chain with the given syndrome (paths along rows then columns); the
// syndrome must have even parity.
ErrorConfig chain_with_syndrome(const SyndromeConfig& syn);

std::string to_string(const SyndromeConfig& syn);

}  // namespace hfca
