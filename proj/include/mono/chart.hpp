#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mono/errors.hpp"
#include "mono/factorization.hpp"
#include "mono/sl2z.hpp"

namespace mono {

// A chart is a finite labeled oriented graph in the disk. Vertices have kind
// black / boundary (degree one), deg6, or deg12 of negative or positive type.
// Edge ends carry slot numbers; the slots 0..deg-1 at a vertex list its edge
// ends in rotation (counterclockwise) order, which pins the embedding.
// Boundary vertices lie on the disk boundary in boundary_order, read along
// the boundary starting after the base point. Hoops are closed edges with no
// vertices; they carry a label and an optional surrounding hoop.

enum class VertexKind : unsigned char {
  Black,
  Boundary,
  Deg6,
  Deg12Negative,
  Deg12Positive
};

inline int expected_degree(VertexKind k) {
  switch (k) {
    case VertexKind::Black:
    case VertexKind::Boundary: return 1;
    case VertexKind::Deg6: return 6;
    case VertexKind::Deg12Negative:
    case VertexKind::Deg12Positive: return 12;
  }
  throw Error("bad vertex kind");
}

struct ChartVertex {
  std::string id;
  VertexKind kind = VertexKind::Black;
};

struct EdgeEnd {
  std::string vertex;
  int slot = 0;
};

struct ChartEdge {
  std::string id;
  int label = 1;  // 1 or 2
  EdgeEnd from, to;
};

struct Hoop {
  std::string id;
  int label = 1;
  std::string parent;  // id of the surrounding hoop; empty when outermost
};

struct Chart {
  std::vector<ChartVertex> vertices;
  std::vector<ChartEdge> edges;
  std::vector<std::string> boundary_order;
  std::vector<Hoop> hoops;
};

struct Violation {
  std::string clause;   // "structure", "1".."5", "planarity"
  std::string element;  // offending vertex/edge id
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool has_hoops = false;
  bool ok() const { return violations.empty(); }
};

namespace chart_detail {

// Dart h from edge e: 2e = traversal from->to, 2e+1 = traversal to->from.
struct MapIndex {
  std::map<std::string, std::size_t> vertex_index;
  std::map<std::string, std::size_t> edge_index;
  // Per vertex: slot -> (edge, end) where end 0 = from, 1 = to.
  std::vector<std::vector<std::pair<std::size_t, int>>> slots;
  bool structurally_sound = true;
};

inline MapIndex build_index(const Chart& c, std::vector<Violation>& out) {
  MapIndex ix;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (!ix.vertex_index.emplace(c.vertices[i].id, i).second) {
      out.push_back({"structure", c.vertices[i].id, "duplicate vertex id"});
      ix.structurally_sound = false;
    }
  }
  ix.slots.resize(c.vertices.size());
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const ChartEdge& edge = c.edges[e];
    if (!ix.edge_index.emplace(edge.id, e).second) {
      out.push_back({"structure", edge.id, "duplicate edge id"});
      ix.structurally_sound = false;
    }
    if (edge.label != 1 && edge.label != 2) {
      out.push_back({"structure", edge.id, "edge label must be 1 or 2"});
      ix.structurally_sound = false;
    }
    int endno = 0;
    for (const EdgeEnd* end : {&edge.from, &edge.to}) {
      auto it = ix.vertex_index.find(end->vertex);
      if (it == ix.vertex_index.end()) {
        out.push_back({"structure", edge.id,
                       "endpoint references unknown vertex '" + end->vertex +
                           "'"});
        ix.structurally_sound = false;
      } else {
        auto& sl = ix.slots[it->second];
        if (end->slot < 0) {
          out.push_back({"structure", edge.id, "negative slot"});
          ix.structurally_sound = false;
        } else {
          if (sl.size() <= static_cast<std::size_t>(end->slot))
            sl.resize(end->slot + 1,
                      {std::numeric_limits<std::size_t>::max(), -1});
          if (sl[end->slot].second != -1) {
            out.push_back({"structure", c.vertices[it->second].id,
                           "slot " + std::to_string(end->slot) +
                               " used by more than one edge end"});
            ix.structurally_sound = false;
          } else {
            sl[end->slot] = {e, endno};
          }
        }
      }
      ++endno;
    }
  }
  // Slots must be contiguous 0..deg-1.
  for (std::size_t v = 0; v < c.vertices.size(); ++v)
    for (std::size_t s = 0; s < ix.slots[v].size(); ++s)
      if (ix.slots[v][s].second == -1) {
        out.push_back({"structure", c.vertices[v].id,
                       "missing edge end at slot " + std::to_string(s)});
        ix.structurally_sound = false;
      }
  return ix;
}

struct FaceTrace {
  std::size_t faces = 0;
};

// Face count of the rotation system restricted to one vertex subset, via the
// next-slot-counterclockwise traversal rule.
// next(dart d): arrive at v through slot s, leave through slot (s+1) % deg.
inline std::size_t count_faces(
    const std::vector<std::vector<std::pair<std::size_t, int>>>& slots,
    const std::vector<std::size_t>& vertex_of_end_from,
    const std::vector<std::size_t>& vertex_of_end_to,
    const std::vector<int>& slot_of_end_from,
    const std::vector<int>& slot_of_end_to,
    const std::vector<bool>& vertex_in_component,
    const std::vector<bool>& edge_in_component) {
  const std::size_t num_edges = vertex_of_end_from.size();
  std::vector<bool> seen(2 * num_edges, false);
  std::size_t faces = 0;
  for (std::size_t d0 = 0; d0 < 2 * num_edges; ++d0) {
    if (seen[d0] || !edge_in_component[d0 / 2]) continue;
    ++faces;
    std::size_t d = d0;
    do {
      seen[d] = true;
      const std::size_t e = d / 2;
      const bool forward = (d % 2) == 0;
      const std::size_t v = forward ? vertex_of_end_to[e] : vertex_of_end_from[e];
      const int s = forward ? slot_of_end_to[e] : slot_of_end_from[e];
      if (!vertex_in_component[v]) throw Error("face trace left component");
      const int deg = static_cast<int>(slots[v].size());
      const int s2 = (s + 1) % deg;
      auto [e2, endno] = slots[v][s2];
      // Leave v through the end (e2, endno): forward if that end is 'from'.
      d = 2 * e2 + (endno == 0 ? 0 : 1);
    } while (d != d0);
  }
  return faces;
}

}  // namespace chart_detail

// Checks the degree/label/orientation clauses and that the rotation system
// embeds in the disk. Violations are data, not exceptions.
inline ValidationReport validate(const Chart& c) {
  using namespace chart_detail;
  ValidationReport report;
  report.has_hoops = !c.hoops.empty();
  auto& out = report.violations;

  MapIndex ix = build_index(c, out);

  // Hoop bookkeeping: labels and parent references.
  {
    std::set<std::string> hoop_ids;
    for (const Hoop& h : c.hoops) {
      if (!hoop_ids.insert(h.id).second)
        out.push_back({"structure", h.id, "duplicate hoop id"});
      if (h.label != 1 && h.label != 2)
        out.push_back({"structure", h.id, "hoop label must be 1 or 2"});
    }
    for (const Hoop& h : c.hoops)
      if (!h.parent.empty() && !hoop_ids.count(h.parent))
        out.push_back({"structure", h.id,
                       "hoop parent '" + h.parent + "' does not exist"});
    // Parent chains must terminate.
    std::map<std::string, std::string> parent;
    for (const Hoop& h : c.hoops) parent[h.id] = h.parent;
    for (const Hoop& h : c.hoops) {
      std::set<std::string> walk;
      std::string at = h.id;
      while (!at.empty() && parent.count(at)) {
        if (!walk.insert(at).second) {
          out.push_back({"structure", h.id, "hoop nesting cycle"});
          break;
        }
        at = parent[at];
      }
    }
  }

  if (!ix.structurally_sound) return report;

  // Clause (1): degrees are fixed by the vertex kind.
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    const int deg = static_cast<int>(ix.slots[v].size());
    const int want = expected_degree(c.vertices[v].kind);
    if (deg != want)
      out.push_back({"1", c.vertices[v].id,
                     "degree " + std::to_string(deg) + ", expected " +
                         std::to_string(want)});
  }
  if (!out.empty()) return report;  // later clauses assume correct degrees

  auto inward = [&](std::size_t v, int slot) {
    // An edge end is inward at v when v is the edge's target.
    return ix.slots[v][slot].second == 1;
  };
  auto label_at = [&](std::size_t v, int slot) {
    return c.edges[ix.slots[v][slot].first].label;
  };

  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    const ChartVertex& vert = c.vertices[v];
    const int deg = static_cast<int>(ix.slots[v].size());
    switch (vert.kind) {
      case VertexKind::Black:
        if (inward(v, 0))
          out.push_back({"5", vert.id, "black vertex edge oriented inward"});
        break;
      case VertexKind::Boundary:
        break;
      case VertexKind::Deg6: {
        for (int s = 0; s < deg; ++s)
          if (label_at(v, s) == label_at(v, (s + 1) % deg)) {
            out.push_back({"2", vert.id, "labels do not alternate"});
            break;
          }
        // Orientations: three consecutive inward, three consecutive outward
        // in rotation order, i.e. exactly two in/out transitions around v.
        int transitions = 0, in_count = 0;
        for (int s = 0; s < deg; ++s) {
          if (inward(v, s)) ++in_count;
          if (inward(v, s) != inward(v, (s + 1) % deg)) ++transitions;
        }
        if (in_count != 3 || transitions != 2)
          out.push_back({"2", vert.id,
                         "orientations are not three consecutive inward and "
                         "three consecutive outward"});
        break;
      }
      case VertexKind::Deg12Negative:
      case VertexKind::Deg12Positive: {
        for (int s = 0; s < deg; ++s)
          if (label_at(v, s) == label_at(v, (s + 1) % deg)) {
            out.push_back({"3", vert.id, "labels do not alternate"});
            break;
          }
        const bool want_inward = vert.kind == VertexKind::Deg12Negative;
        for (int s = 0; s < deg; ++s)
          if (inward(v, s) != want_inward) {
            out.push_back({"3", vert.id,
                           want_inward
                               ? "negative-type vertex with an outward edge"
                               : "positive-type vertex with an inward edge"});
            break;
          }
        break;
      }
    }
  }

  // Clause (4): boundary_order lists exactly the boundary vertices, once.
  {
    std::set<std::string> listed;
    for (const std::string& id : c.boundary_order) {
      if (!listed.insert(id).second)
        out.push_back({"4", id, "vertex listed twice on the boundary"});
      auto it = ix.vertex_index.find(id);
      if (it == ix.vertex_index.end())
        out.push_back({"4", id, "boundary order names unknown vertex"});
      else if (c.vertices[it->second].kind != VertexKind::Boundary)
        out.push_back({"4", id, "non-boundary vertex on the disk boundary"});
    }
    for (const ChartVertex& v : c.vertices)
      if (v.kind == VertexKind::Boundary && !listed.count(v.id))
        out.push_back({"4", v.id, "boundary vertex missing from the order"});
  }
  if (!out.empty()) return report;

  // Planarity of each connected component (rotation-system face count), then
  // of the boundary-augmented map, which also rejects crossing attachments.
  {
    const std::size_t nv = c.vertices.size(), ne = c.edges.size();
    std::vector<std::size_t> comp(nv);
    for (std::size_t v = 0; v < nv; ++v) comp[v] = v;
    std::function<std::size_t(std::size_t)> find =
        [&](std::size_t x) -> std::size_t {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    std::vector<std::size_t> vfrom(ne), vto(ne);
    std::vector<int> sfrom(ne), sto(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      vfrom[e] = ix.vertex_index.at(c.edges[e].from.vertex);
      vto[e] = ix.vertex_index.at(c.edges[e].to.vertex);
      sfrom[e] = c.edges[e].from.slot;
      sto[e] = c.edges[e].to.slot;
      comp[find(vfrom[e])] = find(vto[e]);
    }
    std::map<std::size_t, std::vector<std::size_t>> comp_vertices;
    for (std::size_t v = 0; v < nv; ++v)
      comp_vertices[find(v)].push_back(v);

    for (auto& [root, verts] : comp_vertices) {
      std::vector<bool> vin(nv, false), ein(ne, false);
      for (std::size_t v : verts) vin[v] = true;
      std::size_t ecount = 0;
      for (std::size_t e = 0; e < ne; ++e)
        if (find(vfrom[e]) == root) {
          ein[e] = true;
          ++ecount;
        }
      if (ecount == 0) continue;  // isolated vertex: already a degree error
      const std::size_t faces = chart_detail::count_faces(
          ix.slots, vfrom, vto, sfrom, sto, vin, ein);
      const long long euler = static_cast<long long>(verts.size()) -
                              static_cast<long long>(ecount) +
                              static_cast<long long>(faces);
      if (euler != 2)
        out.push_back({"planarity", c.vertices[verts.front()].id,
                       "component is not planar (V-E+F = " +
                           std::to_string(euler) + ", expected 2)"});
    }

    // Boundary-augmented map: add the base point and the boundary arcs, so
    // the components hanging on the boundary must embed jointly.
    const std::size_t b = c.boundary_order.size();
    if (b > 0 && out.empty()) {
      // Indices: vertices 0..nv-1 as before, base point = nv.
      // Arcs arc_t: t = 0 goes base -> B0, t = i goes B(i-1) -> Bi,
      // t = b goes B(b-1) -> base. Arc edge index = ne + t.
      auto aug_slots = ix.slots;
      aug_slots.resize(nv + 1);
      std::vector<std::size_t> avfrom = vfrom, avto = vto;
      std::vector<int> asfrom = sfrom, asto = sto;
      std::vector<std::size_t> bidx(b);
      for (std::size_t i = 0; i < b; ++i)
        bidx[i] = ix.vertex_index.at(c.boundary_order[i]);
      // Boundary vertex rotation: [slot0 = arriving arc, slot1 = departing
      // arc, slot2 = chart edge] is counterclockwise when the disk interior
      // is on the left of the boundary circle; the existing chart end moves
      // from slot 0 to slot 2.
      for (std::size_t i = 0; i < b; ++i) {
        auto chart_end = aug_slots[bidx[i]][0];
        aug_slots[bidx[i]].assign(3, {0, -1});
        aug_slots[bidx[i]][2] = chart_end;
      }
      // Re-point the chart edge slots at boundary vertices to slot 2.
      for (std::size_t e = 0; e < ne; ++e) {
        if (c.vertices[avfrom[e]].kind == VertexKind::Boundary) asfrom[e] = 2;
        if (c.vertices[avto[e]].kind == VertexKind::Boundary) asto[e] = 2;
      }
      for (std::size_t t = 0; t <= b; ++t) {
        const std::size_t e = ne + t;
        const std::size_t u = (t == 0) ? nv : bidx[t - 1];
        const std::size_t w = (t == b) ? nv : bidx[t];
        avfrom.push_back(u);
        avto.push_back(w);
        // Departing arc sits at slot 1 of a boundary vertex; arriving at 0.
        asfrom.push_back(t == 0 ? 0 : 1);
        asto.push_back(t == b ? 1 : 0);
        if (t == 0) {
          aug_slots[nv].resize(2, {0, -1});
          aug_slots[nv][0] = {e, 0};  // base point: departing arc first
        } else {
          aug_slots[bidx[t - 1]][1] = {e, 0};
        }
        if (t == b) {
          aug_slots[nv][1] = {e, 1};
        } else {
          aug_slots[bidx[t]][0] = {e, 1};
        }
      }
      // Component of the augmented boundary piece.
      std::vector<std::size_t> acomp(nv + 1);
      for (std::size_t v = 0; v <= nv; ++v) acomp[v] = v;
      std::function<std::size_t(std::size_t)> afind =
          [&](std::size_t x) -> std::size_t {
        while (acomp[x] != x) x = acomp[x] = acomp[acomp[x]];
        return x;
      };
      for (std::size_t e = 0; e < avfrom.size(); ++e)
        acomp[afind(avfrom[e])] = afind(avto[e]);
      const std::size_t broot = afind(nv);
      std::vector<bool> vin(nv + 1, false), ein(avfrom.size(), false);
      std::vector<std::size_t> verts;
      for (std::size_t v = 0; v <= nv; ++v)
        if (afind(v) == broot) {
          vin[v] = true;
          verts.push_back(v);
        }
      std::size_t ecount = 0;
      for (std::size_t e = 0; e < avfrom.size(); ++e)
        if (afind(avfrom[e]) == broot) {
          ein[e] = true;
          ++ecount;
        }
      const std::size_t faces = chart_detail::count_faces(
          aug_slots, avfrom, avto, asfrom, asto, vin, ein);
      const long long euler = static_cast<long long>(verts.size()) -
                              static_cast<long long>(ecount) +
                              static_cast<long long>(faces);
      if (euler != 2) {
        out.push_back({"planarity", c.boundary_order.front(),
                       "boundary attachment is not planar (V-E+F = " +
                           std::to_string(euler) + ", expected 2)"});
      } else {
        // The face traced from the outside of the first arc must consist of
        // the boundary arcs only: the chart hangs inside the disk.
        std::size_t d = 2 * ne;  // forward traversal of arc 0
        bool pure = true;
        std::size_t steps = 0;
        const std::size_t d0 = d;
        do {
          if (d / 2 < ne) {
            pure = false;
            break;
          }
          const std::size_t e = d / 2;
          const bool forward = (d % 2) == 0;
          const std::size_t v = forward ? avto[e] : avfrom[e];
          const int s = forward ? asto[e] : asfrom[e];
          const int deg = static_cast<int>(aug_slots[v].size());
          auto [e2, endno] = aug_slots[v][(s + 1) % deg];
          d = 2 * e2 + (endno == 0 ? 0 : 1);
        } while (d != d0 && ++steps <= 2 * avfrom.size());
        if (!pure || steps > 2 * avfrom.size())
          out.push_back({"planarity", c.boundary_order.front(),
                         "a chart edge separates the boundary arcs from the "
                         "outer region"});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Canonical charts

// p nucleons (one negative degree-12 vertex fed by 12 black vertices) plus
// boundary units (U1 U2)^{3q} U1^k along the disk boundary.
inline Chart canonical_chart(long long p, int q, long long k) {
  if (p < 0 || k < 0 || (q != 0 && q != 1))
    throw Error("canonical chart requires p >= 0, q in {0,1}, k >= 0");
  Chart c;
  for (long long j = 0; j < p; ++j) {
    const std::string w = "w" + std::to_string(j + 1);
    c.vertices.push_back({w, VertexKind::Deg12Negative});
    for (int i = 0; i < 12; ++i) {
      const std::string bl =
          "nb" + std::to_string(j + 1) + "_" + std::to_string(i + 1);
      c.vertices.push_back({bl, VertexKind::Black});
      c.edges.push_back({"ne" + std::to_string(j + 1) + "_" +
                             std::to_string(i + 1),
                         i % 2 == 0 ? 1 : 2,
                         {bl, 0},
                         {w, i}});
    }
  }
  const long long units = 6 * q + k;
  for (long long t = 0; t < units; ++t) {
    const int label = (t < 6 * q) ? (t % 2 == 0 ? 1 : 2) : 1;
    const std::string u = "u" + std::to_string(t + 1);
    const std::string bl = "ub" + std::to_string(t + 1);
    c.vertices.push_back({u, VertexKind::Boundary});
    c.vertices.push_back({bl, VertexKind::Black});
    c.edges.push_back({"ue" + std::to_string(t + 1), label, {bl, 0}, {u, 0}});
    c.boundary_order.push_back(u);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Counting

struct BoundaryLetter {
  int label = 1;
  bool toward_boundary = true;  // edge oriented into the boundary vertex
  friend bool operator==(const BoundaryLetter&, const BoundaryLetter&) = default;
};

struct ChartCounts {
  long long black_count = 0;
  long long p_signed = 0;  // negative minus positive degree-12 vertices
  std::vector<BoundaryLetter> boundary_word;
  // Present when the boundary word reads (U1 U2)^{3q} U1^k.
  std::optional<std::pair<int, long long>> boundary_qk;
  // True when the chart shape admits the count identity
  // black_count == 12*p_signed + 6q + k, which is then verified.
  bool count_identity_checked = false;
};

inline std::string to_string(const std::vector<BoundaryLetter>& word) {
  std::string s;
  for (const BoundaryLetter& l : word) {
    if (!s.empty()) s += ' ';
    s += 'U';
    s += std::to_string(l.label);
    if (!l.toward_boundary) s += "^r";
  }
  return s;
}

inline ChartCounts chart_counts(const Chart& c) {
  ValidationReport report = validate(c);
  if (!report.ok())
    throw Error("invalid chart: " + report.violations.front().message +
                " (element " + report.violations.front().element + ")");
  ChartCounts counts;
  std::map<std::string, const ChartVertex*> by_id;
  for (const ChartVertex& v : c.vertices) by_id[v.id] = &v;
  bool has_deg6 = false;
  for (const ChartVertex& v : c.vertices) {
    switch (v.kind) {
      case VertexKind::Black: ++counts.black_count; break;
      case VertexKind::Deg12Negative: ++counts.p_signed; break;
      case VertexKind::Deg12Positive: --counts.p_signed; break;
      case VertexKind::Deg6: has_deg6 = true; break;
      case VertexKind::Boundary: break;
    }
  }
  // Boundary word and black-vertex edge targets.
  std::map<std::string, std::pair<int, bool>> boundary_letter;
  bool blacks_simple = true;  // every black edge ends at deg12 or boundary
  for (const ChartEdge& e : c.edges) {
    for (const EdgeEnd* end : {&e.from, &e.to}) {
      const ChartVertex* v = by_id.at(end->vertex);
      if (v->kind == VertexKind::Boundary)
        boundary_letter[v->id] = {e.label, end == &e.to};
    }
    const ChartVertex* from = by_id.at(e.from.vertex);
    if (from->kind == VertexKind::Black) {
      const ChartVertex* to = by_id.at(e.to.vertex);
      if (to->kind != VertexKind::Deg12Negative &&
          to->kind != VertexKind::Deg12Positive &&
          to->kind != VertexKind::Boundary)
        blacks_simple = false;
    }
  }
  for (const std::string& id : c.boundary_order) {
    auto [label, toward] = boundary_letter.at(id);
    counts.boundary_word.push_back({label, toward});
  }
  // Match (U1 U2)^{3q} U1^k.
  const auto& w = counts.boundary_word;
  auto all_toward = std::all_of(w.begin(), w.end(), [](const BoundaryLetter& l) {
    return l.toward_boundary;
  });
  if (all_toward) {
    auto tail_all_ones = [&](std::size_t from) {
      for (std::size_t i = from; i < w.size(); ++i)
        if (w[i].label != 1) return false;
      return true;
    };
    if (tail_all_ones(0)) {
      counts.boundary_qk = {0, static_cast<long long>(w.size())};
    } else if (w.size() >= 6) {
      bool alt = true;
      for (std::size_t i = 0; i < 6; ++i)
        if (w[i].label != (i % 2 == 0 ? 1 : 2)) alt = false;
      if (alt && tail_all_ones(6))
        counts.boundary_qk = {1, static_cast<long long>(w.size()) - 6};
    }
  }
  if (counts.boundary_qk && !has_deg6 && blacks_simple) {
    counts.count_identity_checked = true;
    const auto [q, k] = *counts.boundary_qk;
    if (counts.black_count != 12 * counts.p_signed + 6 * q + k)
      throw InvariantViolationError(
          "critical-value count does not satisfy c = 12p + 6q + k");
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Intersection words

struct Crossing {
  std::string edge_id;
  int sign = +1;  // +1: edge crosses left to right along the path
};

using CrossingSequence = std::vector<Crossing>;

// Reads the letter s_i^sign for each crossing of a transverse path.
inline GeneratorWord intersection_word(const Chart& c,
                                       const CrossingSequence& path) {
  std::map<std::string, int> label_of;
  for (const ChartEdge& e : c.edges) label_of[e.id] = e.label;
  for (const Hoop& h : c.hoops) label_of[h.id] = h.label;
  GeneratorWord word;
  for (const Crossing& x : path) {
    auto it = label_of.find(x.edge_id);
    if (it == label_of.end())
      throw Error("unknown edge id '" + x.edge_id + "'");
    if (x.sign != 1 && x.sign != -1)
      throw Error("crossing sign must be +1 or -1");
    const Gen letter = it->second == 1 ? Gen::S1 : Gen::S2;
    word.push_back(x.sign == 1 ? letter : inverse(letter));
  }
  return word;
}

// The factorization read off the canonical chart with the obvious generator
// system.
inline Factorization monodromy_of_canonical(long long p, int q, long long k) {
  return canonical_form(p, q, k);
}

}  // namespace mono
