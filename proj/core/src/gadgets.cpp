#include "hfca/gadgets.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hfca/rng.hpp"

namespace hfca {

namespace detail {
extern const std::string_view kGadgetTableText;
}

std::string to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::I0: return "I0";
    case GadgetKind::T0h: return "T0h";
    case GadgetKind::T0v: return "T0v";
    case GadgetKind::M0h: return "M0h";
    case GadgetKind::M0v: return "M0v";
  }
  return "?";
}

GadgetKind parse_gadget_kind(const std::string& s) {
  if (s == "I0") return GadgetKind::I0;
  if (s == "T0h") return GadgetKind::T0h;
  if (s == "T0v") return GadgetKind::T0v;
  if (s == "M0h") return GadgetKind::M0h;
  if (s == "M0v") return GadgetKind::M0v;
  throw std::invalid_argument("unknown gadget kind: " + s);
}

GadgetKind transpose(GadgetKind k) {
  switch (k) {
    case GadgetKind::I0: return GadgetKind::I0;
    case GadgetKind::T0h: return GadgetKind::T0v;
    case GadgetKind::T0v: return GadgetKind::T0h;
    case GadgetKind::M0h: return GadgetKind::M0v;
    case GadgetKind::M0v: return GadgetKind::M0h;
  }
  return k;
}

bool is_horizontal(GadgetKind k) { return k == GadgetKind::T0h || k == GadgetKind::M0h; }

bool PlacedGadget::operator<(const PlacedGadget& o) const {
  return std::make_tuple(y, x, kind) < std::make_tuple(o.y, o.x, o.kind);
}

PlacedGadget transpose(const PlacedGadget& g) { return {transpose(g.kind), g.y, g.x}; }

CellRect transpose(const CellRect& r) { return {r.y0, r.x0, r.y1, r.x1}; }

GadgetTemplate transpose(const GadgetTemplate& t, const std::string& name) {
  GadgetTemplate out;
  out.name = name;
  out.depth = t.depth;
  out.footprint = transpose(t.footprint);
  for (const auto& step : t.steps) {
    std::vector<PlacedGadget> s;
    for (const auto& g : step) s.push_back(transpose(g));
    std::sort(s.begin(), s.end());
    out.steps.push_back(std::move(s));
  }
  return out;
}

GadgetTemplate concat(const GadgetTemplate& a, const GadgetTemplate& b, const std::string& name) {
  if (!(a.footprint == b.footprint)) throw std::invalid_argument("concat: footprints differ");
  GadgetTemplate out = a;
  out.name = name;
  out.depth = a.depth + b.depth;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

namespace {

Orient parse_orient(const std::string& s) {
  if (s == "h") return Orient::H;
  if (s == "v") return Orient::V;
  throw std::invalid_argument("bad orientation: " + s);
}

}  // namespace

GadgetTable parse_gadget_table(std::string_view text) {
  GadgetTable table;
  table.checksum = fnv1a64(text);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::map<std::string, int> depths;
  auto bad = [&](const std::string& why) {
    throw std::invalid_argument("gadget table line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "support") {
      std::string kind, o;
      int dx, dy;
      if (!(ls >> kind >> o >> dx >> dy)) bad("malformed support line");
      const GadgetKind k = parse_gadget_kind(kind);
      if (k == GadgetKind::T0v || k == GadgetKind::M0v) bad("vertical supports are derived by transposition");
      table.supports[k].push_back(Link{dx, dy, parse_orient(o)});
    } else if (tag == "footprint") {
      std::string name;
      CellRect r;
      if (!(ls >> name >> r.x0 >> r.y0 >> r.x1 >> r.y1)) bad("malformed footprint line");
      if (r.x1 < r.x0 || r.y1 < r.y0) bad("empty footprint");
      table.footprints[name] = r;
    } else if (tag == "depth") {
      std::string name;
      int d;
      if (!(ls >> name >> d) || d < 0) bad("malformed depth line");
      depths[name] = d;
      auto& t = table.templates[name];
      t.name = name;
      t.depth = d;
      t.steps.assign(d, {});
    } else if (tag == "step") {
      std::string name, kind;
      int t, dx, dy;
      if (!(ls >> name >> t >> kind >> dx >> dy)) bad("malformed step line");
      auto it = table.templates.find(name);
      if (it == table.templates.end()) bad("step before depth for " + name);
      if (t < 0 || t >= it->second.depth) bad("step index out of range");
      it->second.steps[t].push_back({parse_gadget_kind(kind), dx, dy});
    } else {
      bad("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) bad("trailing text");
  }
  for (auto& [name, t] : table.templates) {
    auto f = table.footprints.find(name);
    if (f == table.footprints.end()) throw std::invalid_argument("gadget table: no footprint for " + name);
    t.footprint = f->second;
    for (auto& s : t.steps) std::sort(s.begin(), s.end());
  }
  for (GadgetKind k : {GadgetKind::I0, GadgetKind::T0h, GadgetKind::M0h}) {
    if (!table.supports.count(k)) throw std::invalid_argument("gadget table: no support for " + to_string(k));
    if (!table.footprints.count(to_string(k)))
      throw std::invalid_argument("gadget table: no footprint for " + to_string(k));
  }
  for (const char* name : {"R0v", "I1", "T1h", "M1h"})
    if (!table.templates.count(name)) throw std::invalid_argument(std::string("gadget table: missing ") + name);
  return table;
}

std::string_view gadget_table_text() { return detail::kGadgetTableText; }

const GadgetTable& gadget_table() {
  static const GadgetTable table = parse_gadget_table(detail::kGadgetTableText);
  return table;
}

std::vector<Link> support_offsets(GadgetKind k) {
  const auto& sup = gadget_table().supports;
  if (k == GadgetKind::T0v || k == GadgetKind::M0v) {
    std::vector<Link> out;
    for (const Link& l : sup.at(transpose(k))) out.push_back({l.y, l.x, flip(l.o)});
    return out;
  }
  return sup.at(k);
}

CellRect footprint_offsets(GadgetKind k) {
  const auto& fp = gadget_table().footprints;
  if (k == GadgetKind::T0v || k == GadgetKind::M0v) return transpose(fp.at(to_string(transpose(k))));
  return fp.at(to_string(k));
}

std::vector<std::size_t> support_links(const TorusLattice& lat, const PlacedGadget& g) {
  std::vector<std::size_t> out;
  for (const Link& l : support_offsets(g.kind)) out.push_back(lat.link_index(g.x + l.x, g.y + l.y, l.o));
  return out;
}

std::vector<std::size_t> support_vertices(const TorusLattice& lat, const PlacedGadget& g) {
  std::vector<std::size_t> out;
  for (std::size_t l : support_links(lat, g)) {
    std::size_t a, b;
    lat.endpoints(l, a, b);
    out.push_back(a);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Link> elementary_action(const PlacedGadget& g, const SyndromeConfig& snap) {
  switch (g.kind) {
    case GadgetKind::I0: return {};
    case GadgetKind::T0h:
      if (!snap.get(g.x, g.y)) return {};
      return {Link{g.x - 1, g.y, Orient::H}, Link{g.x, g.y, Orient::H}};
    case GadgetKind::T0v:
      if (!snap.get(g.x, g.y)) return {};
      return {Link{g.x, g.y - 1, Orient::V}, Link{g.x, g.y, Orient::V}};
    case GadgetKind::M0h:
      if (!(snap.get(g.x, g.y) && snap.get(g.x + 1, g.y))) return {};
      return {Link{g.x, g.y, Orient::H}};
    case GadgetKind::M0v:
      if (!(snap.get(g.x, g.y) && snap.get(g.x, g.y + 1))) return {};
      return {Link{g.x, g.y, Orient::V}};
  }
  return {};
}

namespace {

// Marks the footprint cells of every non-idle gadget; returns false on overlap.
bool cover_cells(const TorusLattice& lat, const std::vector<PlacedGadget>& layer, std::vector<std::uint8_t>& cover) {
  cover.assign(lat.num_vertices(), 0);
  bool ok = true;
  for (const auto& g : layer) {
    if (g.kind == GadgetKind::I0) continue;
    const CellRect r = footprint_offsets(g.kind);
    for (int dy = r.y0; dy <= r.y1; ++dy)
      for (int dx = r.x0; dx <= r.x1; ++dx) {
        auto& c = cover[lat.vertex_index(g.x + dx, g.y + dy)];
        if (c) ok = false;
        c = 1;
      }
  }
  return ok;
}

}  // namespace

std::vector<Vertex> idle_cells(const TorusLattice& lat, const std::vector<PlacedGadget>& layer) {
  std::vector<std::uint8_t> cover;
  if (!cover_cells(lat, layer, cover)) throw std::invalid_argument("gadget footprints overlap in a layer");
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (!cover[i]) out.push_back(lat.vertex_at(i));
  return out;
}

bool layer_tiles(const TorusLattice& lat, const std::vector<PlacedGadget>& layer) {
  std::vector<std::uint8_t> cover;
  return cover_cells(lat, layer, cover);
}

void apply_layer(ErrorConfig& state, const std::vector<PlacedGadget>& layer, const BitVec* meas_flips,
                 const BitVec* link_flips) {
  SyndromeConfig snap = syndromes_of(state);
  if (meas_flips) snap.bits ^= *meas_flips;
  std::vector<Link> flips;
  for (const auto& g : layer)
    for (const Link& l : elementary_action(g, snap)) flips.push_back(l);
  for (const Link& l : flips) state.flip(l);
  if (link_flips) state.bits ^= *link_flips;
}

std::vector<std::vector<PlacedGadget>> place(const GadgetTemplate& t, const TorusLattice& lat, int ax, int ay) {
  std::vector<std::vector<PlacedGadget>> out(t.depth);
  for (int s = 0; s < t.depth; ++s)
    for (const auto& g : t.steps[s]) out[s].push_back({g.kind, lat.wrap(ax + g.x), lat.wrap(ay + g.y)});
  return out;
}

GadgetTemplate build_r0(bool half) {
  const GadgetTemplate& rv = gadget_table().templates.at("R0v");
  const GadgetTemplate rh = transpose(rv, "R0h");
  // (R0h R0h R0v R0v) acts right to left: R0v first.
  GadgetTemplate quarter = concat(rv, rv, "");
  quarter = concat(quarter, rh, "");
  quarter = concat(quarter, rh, half ? "R0'" : "R0");
  if (half) return quarter;
  return concat(quarter, quarter, "R0");
}

GadgetTemplate build_level1(Level1Kind kind) {
  const auto& t = gadget_table().templates;
  switch (kind) {
    case Level1Kind::I1: return t.at("I1");
    case Level1Kind::T1h: return t.at("T1h");
    case Level1Kind::T1v: return transpose(t.at("T1h"), "T1v");
    case Level1Kind::M1h: return t.at("M1h");
    case Level1Kind::M1v: return transpose(t.at("M1h"), "M1v");
  }
  throw std::invalid_argument("unknown level-1 gadget");
}

}  // namespace hfca
