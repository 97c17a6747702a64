// Toric-code elementary gadgets, their supports, layer semantics, and the
// composite R0 / level-1 gadgets loaded from the transcription table.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hfca/lattice.hpp"

namespace hfca {

enum class GadgetKind : std::uint8_t { I0 = 0, T0h, T0v, M0h, M0v };

std::string to_string(GadgetKind k);
GadgetKind parse_gadget_kind(const std::string& s);
GadgetKind transpose(GadgetKind k);
bool is_horizontal(GadgetKind k);

// Anchor: I0 at a 0-cell (lower-left vertex), T0 at a vertex, M0 at the link
// (x,y,h) or (x,y,v).
struct PlacedGadget {
  GadgetKind kind = GadgetKind::I0;
  int x = 0;
  int y = 0;
  bool operator==(const PlacedGadget&) const = default;
  bool operator<(const PlacedGadget& o) const;
};

PlacedGadget transpose(const PlacedGadget& g);

// Inclusive rectangle of 0-cells (cell (x,y) has lower-left vertex (x,y)).
struct CellRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  bool operator==(const CellRect&) const = default;
};

CellRect transpose(const CellRect& r);

// A schedule of elementary gadgets relative to an anchor. Idle cells are
// implicit: every cell of the footprint not covered by a listed gadget idles.
struct GadgetTemplate {
  std::string name;
  int depth = 0;
  std::vector<std::vector<PlacedGadget>> steps;
  CellRect footprint;
};

GadgetTemplate transpose(const GadgetTemplate& t, const std::string& name);
// a followed by b (same anchor and footprint).
GadgetTemplate concat(const GadgetTemplate& a, const GadgetTemplate& b, const std::string& name);

// Parsed transcription table.
struct GadgetTable {
  std::map<GadgetKind, std::vector<Link>> supports;  // relative links, horizontal kinds and I0
  std::map<std::string, CellRect> footprints;
  std::map<std::string, GadgetTemplate> templates;  // R0v, I1, T1h, M1h
  std::uint64_t checksum = 0;                       // FNV-1a of the table text
};

GadgetTable parse_gadget_table(std::string_view text);
// The table compiled into the library.
const GadgetTable& gadget_table();
std::string_view gadget_table_text();

// Links of the qubit support, relative to the anchor (vertical kinds transposed).
std::vector<Link> support_offsets(GadgetKind k);
// Absolute link indices of the support on a lattice.
std::vector<std::size_t> support_links(const TorusLattice& lat, const PlacedGadget& g);
// Vertices touched by the support.
std::vector<std::size_t> support_vertices(const TorusLattice& lat, const PlacedGadget& g);
// 0-cells of the footprint, relative to the anchor.
CellRect footprint_offsets(GadgetKind k);

// Links flipped by the noiseless feedback of g given a syndrome snapshot.
std::vector<Link> elementary_action(const PlacedGadget& g, const SyndromeConfig& snapshot);

// Cells of an L x L torus left idle by a layer; throws if two non-idle
// footprints overlap.
std::vector<Vertex> idle_cells(const TorusLattice& lat, const std::vector<PlacedGadget>& layer);
// True iff the non-idle footprints are pairwise disjoint (idles fill the rest,
// so the supports then cover every link).
bool layer_tiles(const TorusLattice& lat, const std::vector<PlacedGadget>& layer);

// Scalar reference dynamics of one layer: snapshot = syndromes XOR meas_flips,
// all feedback from the snapshot, then link_flips XORed on.
void apply_layer(ErrorConfig& state, const std::vector<PlacedGadget>& layer,
                 const BitVec* meas_flips = nullptr, const BitVec* link_flips = nullptr);

// Template placed at an anchor on a torus, one layer per step.
std::vector<std::vector<PlacedGadget>> place(const GadgetTemplate& t, const TorusLattice& lat, int ax, int ay);

// R0 = (R0h R0h R0v R0v)^2 acting right to left (48 steps); half = R0' (24 steps).
GadgetTemplate build_r0(bool half = false);

enum class Level1Kind : std::uint8_t { I1, T1h, T1v, M1h, M1v };
GadgetTemplate build_level1(Level1Kind kind);

}  // namespace hfca
