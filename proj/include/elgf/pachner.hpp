#pragma once

#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elgf/elgf.hpp"

namespace elgf {

class MoveNotApplicable : public ElgfError {
public:
  explicit MoveNotApplicable(const std::string& why)
      : ElgfError("move not applicable: " + why) {}
};
class LocalSolveFailed : public ElgfError {
public:
  explicit LocalSolveFailed(const std::string& why)
      : ElgfError("local completion failed: " + why) {}
};

// A bistellar move of kind k replaces the k+1 facets around an (n-k)-face by
// the n-k+1 facets around the complementary k-face on the same n+2 vertices.
// Kind 0 is the stellar subdivision of a facet (the new vertex gets the next
// free id); kind n removes a vertex of minimal degree.
struct PachnerMove {
  std::size_t kind = 0;
  Simplex face;    // the (n-kind)-face whose star is replaced
  Simplex coface;  // the complementary kind-face present after the move
};

inline std::optional<Simplex> move_coface(const SimplicialComplex& tri, std::size_t kind,
                                          Simplex face) {
  std::sort(face.begin(), face.end());
  const std::size_t n = tri.dim();
  if (kind > n || face.size() != n - kind + 1 || !tri.contains(face)) return std::nullopt;
  if (kind == 0) return Simplex{Vertex(tri.vertex_count())};
  const auto& cof = tri.cofacets(face.size() - 1, tri.index_of(face));
  if (cof.size() != kind + 1) return std::nullopt;
  std::set<Vertex> joint;
  for (std::size_t fi : cof)
    for (Vertex v : tri.facets()[fi]) joint.insert(v);
  if (joint.size() != n + 2) return std::nullopt;
  Simplex coface;
  for (Vertex v : joint)
    if (!std::binary_search(face.begin(), face.end(), v)) coface.push_back(v);
  if (tri.contains(coface)) return std::nullopt;
  return coface;
}

inline std::vector<PachnerMove> applicable_moves(const SimplicialComplex& tri) {
  std::vector<PachnerMove> out;
  const std::size_t n = tri.dim();
  for (std::size_t kind = 0; kind <= n; ++kind)
    for (const Simplex& f : tri.simplices(n - kind))
      if (auto co = move_coface(tri, kind, f)) out.push_back({kind, f, *co});
  return out;
}

inline SimplicialComplex apply_move(const SimplicialComplex& tri, const PachnerMove& mv) {
  auto co = move_coface(tri, mv.kind, mv.face);
  if (!co) throw MoveNotApplicable("the face does not admit a bistellar move of this kind");
  Simplex face = mv.face;
  std::sort(face.begin(), face.end());

  std::vector<Simplex> facets;
  for (const Simplex& F : tri.facets())
    if (!std::includes(F.begin(), F.end(), face.begin(), face.end())) facets.push_back(F);
  for (Vertex drop : face) {
    Simplex nf = *co;
    for (Vertex v : face)
      if (v != drop) nf.push_back(v);
    std::sort(nf.begin(), nf.end());
    facets.push_back(std::move(nf));
  }
  return SimplicialComplex(std::move(facets));
}

// ---------------------------------------------------------------------------
// Move scripts: one move per line, `move <kind> <face vertex ids...>`.
// ---------------------------------------------------------------------------

inline std::vector<PachnerMove> parse_move_script(const std::string& text) {
  std::vector<PachnerMove> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;  // blank line
    if (word != "move") throw ElgfError("move script line must start with 'move'");
    std::size_t kind;
    if (!(ls >> kind)) throw ElgfError("move script line is missing the kind");
    Simplex face;
    Vertex v;
    while (ls >> v) face.push_back(v);
    if (face.empty()) throw ElgfError("move script line is missing the face");
    out.push_back({kind, std::move(face), {}});
  }
  return out;
}

inline std::string move_script_line(const PachnerMove& mv) {
  std::string s = "move " + std::to_string(mv.kind);
  for (Vertex v : mv.face) s += " " + std::to_string(v);
  return s;
}

// ---------------------------------------------------------------------------
// Transport of an extended field across a move.
// ---------------------------------------------------------------------------

struct TransportReport {
  PachnerMove move;
  SimplicialComplex before, after;
  std::vector<std::pair<Cell, Cell>> cell_pairs;  // persisting dual cells (old, new)
  std::size_t copied_edges = 0, fresh_edges = 0;
  std::size_t copied_labels = 0, solved_labels = 0;
  int orientation_flip = 1;  // relative sign of the two chosen orientations
  BundleClass class_before, class_after;
};

inline Int class_scalar(const BundleClass& c) {
  if (c.n == 2 && !c.evaluation.coords.empty()) return c.evaluation.coords[0];
  if (c.n == 4 && !c.secondary.coords.empty()) return c.secondary.coords[0];
  return 0;
}

// Classes of fields on two triangulations of the same manifold correspond
// through the shared region: the degree-2 coordinates are generator-specific
// per complex, so surfaces compare by the orientation-paired degree and
// four-dimensional fields by the (orientation-free) top-label total.
inline bool classes_correspond(const BundleClass& a, const BundleClass& b, int flip) {
  if (a.n != b.n || !(a.h2 == b.h2)) return false;
  if (a.n == 2) {
    if (a.evaluation.coords.size() != b.evaluation.coords.size()) return false;
    for (std::size_t i = 0; i < a.evaluation.coords.size(); ++i)
      if (b.evaluation.coords[i] != flip * a.evaluation.coords[i]) return false;
    return true;
  }
  if (a.n == 4) return a.secondary.coords == b.secondary.coords;
  return a.primary.coords == b.primary.coords;
}

template <class Model>
std::pair<ExtendedField<Model>, TransportReport> transport(const CellularNetwork& netA,
                                                           const ExtendedField<Model>& E,
                                                           const PachnerMove& mv,
                                                           const CellularNetwork& netB) {
  const DualCellComplex& CA = netA.complex();
  const DualCellComplex& CB = netB.complex();
  const SimplicialComplex& triA = CA.triangulation();
  const SimplicialComplex& triB = CB.triangulation();
  if (!(apply_move(triA, mv) == triB))
    throw MoveNotApplicable("target network does not realize the move");
  auto before_rep = validate_extended(CA, E);
  if (!before_rep.ok()) throw InvalidExtendedField(before_rep.violations.front());

  Simplex coface = *move_coface(triA, mv.kind, mv.face);
  auto persists = [&](Cell c) {
    const Simplex& s = CB.simplex_of(c);
    return !std::includes(s.begin(), s.end(), coface.begin(), coface.end());
  };
  auto old_cell = [&](Cell c) { return CA.cell_of(CB.simplex_of(c)); };

  TransportReport rep{mv, triA, triB, {}, 0, 0, 0, 0, 1, {}, {}};
  rep.move.coface = coface;
  for (Cell c : CB.all_cells())
    if (persists(c)) rep.cell_pairs.push_back({old_cell(c), c});

  // base: copy the persisting network edges, identity on the fresh ones
  StandardLatticeField<Model> base = identity_field(netB, E.base.model);
  for (std::size_t i = 0; i < netB.edges().size(); ++i) {
    const NetworkEdge& e = netB.edges()[i];
    if (persists(e.cell) && persists(e.vertex)) {
      base.values[i] = E.base.values[netA.edge_index(old_cell(e.cell), old_cell(e.vertex))];
      ++rep.copied_edges;
    } else {
      ++rep.fresh_edges;
    }
  }

  // labels: copy the persisting slots, then solve the relation rows that
  // touch the star interior for the remaining coordinates
  LabelLayout lo = build_layout(CB, E.layout.table, DeckRegime::full);
  IVec labels(lo.width, Int(0));
  std::vector<char> inside(lo.width, 1);
  for (const LabelSlot& s : lo.slots) {
    if (persists(s.small) && persists(s.big) && persists(s.subcell)) {
      const LabelSlot& os =
          E.layout.slot(old_cell(s.small), old_cell(s.big), old_cell(s.subcell));
      for (std::size_t g = 0; g < s.width; ++g) {
        labels[s.offset + g] = E.labels[os.offset + g];
        inside[s.offset + g] = 0;
      }
      rep.copied_labels += s.width;
    } else {
      rep.solved_labels += s.width;
    }
  }

  RelationSet rel = full_relations(CB, lo);
  std::vector<std::size_t> cols;
  std::vector<long> col_of(lo.width, -1);
  for (std::size_t i = 0; i < lo.width; ++i)
    if (inside[i]) {
      col_of[i] = long(cols.size());
      cols.push_back(i);
    }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < rel.m.rows(); ++r)
    for (std::size_t j = 0; j < lo.width; ++j)
      if (inside[j] && rel.m.at(r, j) != 0) {
        rows.push_back(r);
        break;
      }
  if (!rows.empty()) {
    IMat A(rows.size(), cols.size());
    IVec b(rows.size(), Int(0));
    for (std::size_t ri = 0; ri < rows.size(); ++ri)
      for (std::size_t j = 0; j < lo.width; ++j) {
        const Int& coeff = rel.m.at(rows[ri], j);
        if (coeff == 0) continue;
        if (inside[j])
          A.at(ri, std::size_t(col_of[j])) = coeff;
        else
          b[ri] -= coeff * labels[j];
      }
    auto x = solve(A, b);
    if (!x) throw LocalSolveFailed("no integral label completion inside the new star");
    for (std::size_t ci = 0; ci < cols.size(); ++ci) labels[cols[ci]] = (*x)[ci];
  }

  ExtendedField<Model> out{std::move(base), std::move(lo), std::move(labels)};
  rep.class_before = classify(netA, E);
  rep.class_after = classify(netB, out);

  // each triangulation picks its own orientation; their relative sign is
  // constant on the shared facets because the manifold is connected
  int flip = 0;
  for (auto& [oc, nc] : rep.cell_pairs) {
    if (oc.k != 0) continue;
    int r = triA.facet_orientation(oc.idx) * triB.facet_orientation(nc.idx);
    if (flip == 0) flip = r;
    if (flip != r) throw ElgfError("persisting facets disagree about the relative orientation");
  }
  rep.orientation_flip = flip == 0 ? 1 : flip;

  // any valid completion is admissible up to a local deck shift; steer the
  // class back through winding slots when they disagree
  if (!classes_correspond(rep.class_before, rep.class_after, rep.orientation_flip)) {
    Int target = rep.class_before.n == 2
                     ? Int(rep.orientation_flip) * class_scalar(rep.class_before)
                     : class_scalar(rep.class_before);
    auto steer_over = [&](bool want_inside) {
      for (const LabelSlot& s : out.layout.slots) {
        if (s.small.k + 1 != CB.n() || !(s.subcell == s.small)) continue;
        if (bool(inside[s.offset]) != want_inside) continue;
        ExtendedField<Model> probe = out;
        probe.labels[s.offset] += 1;
        BundleClass pc;
        try {
          pc = classify(netB, probe);
        } catch (const ElgfError&) {
          continue;
        }
        Int step = class_scalar(pc) - class_scalar(rep.class_after);
        if (step == 0) continue;
        Int gap = target - class_scalar(rep.class_after);
        if (gap % step != 0) continue;
        probe.labels[s.offset] += gap / step - 1;
        BundleClass ac;
        try {
          ac = classify(netB, probe);
        } catch (const ElgfError&) {
          continue;
        }
        if (classes_correspond(rep.class_before, ac, rep.orientation_flip)) {
          out = std::move(probe);
          rep.class_after = ac;
          return true;
        }
      }
      return false;
    };

    // fresh slots carry the freedom of the local completion; when the move
    // deletes winding slots outright (vertex removals shrink a star to a
    // single facet with no interior slot), shifting a copied slot stands in
    // for a class-neutral relabeling whose balance sat on the vanished cells
    bool fixed = steer_over(true);
    if (!fixed) {
      auto still_there = [&](Cell c) { return triB.contains(CA.simplex_of(c)); };
      bool slot_died = false;
      for (const LabelSlot& s : E.layout.slots)
        if (s.small.k + 1 == CA.n() && s.subcell == s.small &&
            !(still_there(s.small) && still_there(s.big) && still_there(s.subcell)))
          slot_died = true;
      if (slot_died) fixed = steer_over(false);
    }
    if (!fixed) throw LocalSolveFailed("transported class diverges from the original");
  }
  return {std::move(out), std::move(rep)};
}

// ---------------------------------------------------------------------------
// Random transport walks: repeatedly pick an applicable move, apply it, and
// carry the field across, recording one report per step.
// ---------------------------------------------------------------------------

template <class Model>
std::vector<TransportReport> random_transport_walk(SimplicialComplex tri,
                                                   ExtendedField<Model> field,
                                                   std::size_t steps, std::uint64_t seed) {
  std::vector<TransportReport> out;
  std::mt19937_64 rng(seed);
  auto dual = std::make_unique<DualCellComplex>(dualize(tri));
  auto net = std::make_unique<CellularNetwork>(*dual);
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<PachnerMove> moves = applicable_moves(tri);
    if (moves.empty()) break;
    const PachnerMove mv = moves[rng() % moves.size()];
    SimplicialComplex next = apply_move(tri, mv);
    auto dualB = std::make_unique<DualCellComplex>(dualize(next));
    auto netB = std::make_unique<CellularNetwork>(*dualB);
    auto [carried, rep] = transport(*net, field, mv, *netB);
    field = std::move(carried);
    tri = std::move(next);
    dual = std::move(dualB);
    net = std::move(netB);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace elgf
