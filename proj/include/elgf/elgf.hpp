#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "elgf/abelian.hpp"
#include "elgf/dual.hpp"
#include "elgf/gauge.hpp"
#include "elgf/groups.hpp"

namespace elgf {

class ElgfError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class DimensionUnsupported : public ElgfError {
public:
  DimensionUnsupported() : ElgfError("only base dimensions up to four are supported") {}
};
class SecondaryUndefined : public ElgfError {
public:
  SecondaryUndefined()
      : ElgfError("the four-dimensional class needs a simply connected structure group") {}
};
class NotInDeckGroup : public ElgfError {
public:
  explicit NotInDeckGroup(const std::string& why) : ElgfError("not a deck element: " + why) {}
};
class InvalidExtendedField : public ElgfError {
public:
  explicit InvalidExtendedField(const std::string& why)
      : ElgfError("invalid extended field: " + why) {}
};
class ComplexMismatch : public ElgfError {
public:
  ComplexMismatch() : ElgfError("fields live on different complexes or models") {}
  explicit ComplexMismatch(const std::string& why) : ElgfError(why) {}
};

template <class Model>
std::vector<FGAbelianGroup> homotopy_table(const Model& m, std::size_t n) {
  std::vector<FGAbelianGroup> t;
  for (std::size_t k = 0; k <= n; ++k) t.push_back(m.homotopy_group(k));
  return t;
}

// ---------------------------------------------------------------------------
// Label index sets.  Full regime: one slot per (flag small ⊂ big, subcell of
// the small cell) with a nontrivial homotopy group.  Core regime: one slot
// per (ordered adjacent top-cell pair, subcell of their shared face).
// Labels on 1-subcells are windings measured from the lower- to the
// higher-indexed endpoint 0-cell.
// ---------------------------------------------------------------------------

enum class DeckRegime { full, core };

struct LabelSlot {
  Cell small, big, subcell;
  std::size_t k = 1;       // homotopy degree of the slot group
  std::size_t offset = 0;  // first coordinate in the label vector
  std::size_t width = 1;   // generator count of the slot group

  bool operator==(const LabelSlot&) const = default;
};

struct LabelLayout {
  DeckRegime regime = DeckRegime::full;
  std::vector<FGAbelianGroup> table;  // homotopy groups by degree
  std::vector<LabelSlot> slots;
  std::map<std::tuple<Cell, Cell, Cell>, std::size_t> index;
  std::size_t width = 0;

  const LabelSlot& slot(Cell a, Cell b, Cell sub) const {
    auto it = index.find({a, b, sub});
    if (it == index.end()) throw InvalidFlag("no label slot at that address");
    return slots[it->second];
  }
  bool same_slots(const LabelLayout& o) const {
    return regime == o.regime && slots == o.slots;
  }
};

inline std::string cell_str(Cell c) {
  return std::to_string(c.k) + ":" + std::to_string(c.idx);
}

inline Cell meet_cell(const DualCellComplex& C, Cell v, Cell w) {
  if (v.k != C.n() || w.k != C.n() || v == w) throw NotAdjacent();
  Simplex s{C.simplex_of(v)[0], C.simplex_of(w)[0]};
  std::sort(s.begin(), s.end());
  if (!C.triangulation().contains(s)) throw NotAdjacent();
  return C.cell_of(s);
}

inline std::vector<Cell> adjacent_tops(const DualCellComplex& C, Cell v) {
  std::set<Cell> out;
  for (Cell t : C.closure_cells(v, C.n() - 1))
    for (Cell w : C.containing_cells(t, C.n()))
      if (w != v) out.insert(w);
  return {out.begin(), out.end()};
}

// subcells of the host carrying nontrivial label groups, with their degrees
inline std::vector<std::pair<Cell, std::size_t>> label_subcells(
    const DualCellComplex& C, const std::vector<FGAbelianGroup>& table, Cell host) {
  std::vector<std::pair<Cell, std::size_t>> out;
  for (std::size_t k = 1; k <= host.k; ++k) {
    if (k >= table.size() || table[k].is_trivial()) continue;
    for (Cell sub : C.closure_cells(host, k)) out.push_back({sub, k});
  }
  return out;
}

inline LabelLayout build_layout(const DualCellComplex& C, std::vector<FGAbelianGroup> table,
                                DeckRegime regime) {
  LabelLayout lo;
  lo.regime = regime;
  lo.table = std::move(table);
  auto add_slot = [&](Cell a, Cell b, Cell sub, std::size_t k) {
    const FGAbelianGroup& g = lo.table[k];
    assert(g.torsion.empty() && "label groups with torsion are not supported");
    lo.index[{a, b, sub}] = lo.slots.size();
    lo.slots.push_back({a, b, sub, k, lo.width, g.gens()});
    lo.width += g.gens();
  };
  const std::size_t n = C.n();
  if (regime == DeckRegime::full) {
    for (std::size_t ka = 1; ka < n; ++ka)
      for (std::size_t i = 0; i < C.cell_count(ka); ++i) {
        Cell a{ka, i};
        auto subs = label_subcells(C, lo.table, a);
        if (subs.empty()) continue;
        for (std::size_t kb = ka + 1; kb <= n; ++kb) {
          auto bigs = C.containing_cells(a, kb);
          std::sort(bigs.begin(), bigs.end());
          for (Cell b : bigs)
            for (auto& [sub, k] : subs) add_slot(a, b, sub, k);
        }
      }
  } else {
    for (std::size_t i = 0; i < C.cell_count(n); ++i) {
      Cell v{n, i};
      for (Cell w : adjacent_tops(C, v)) {
        Cell tau = meet_cell(C, v, w);
        for (auto& [sub, k] : label_subcells(C, lo.table, tau)) add_slot(v, w, sub, k);
      }
    }
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Relations cutting out the deck groups (and validating label vectors).
// ---------------------------------------------------------------------------

struct RelationSet {
  IMat m{0, 0};
  std::vector<std::string> address;
};

namespace detail {

struct RowBuilder {
  std::size_t width;
  std::vector<IVec> rows;
  std::vector<std::string> address;

  void add(IVec row, std::string addr) {
    rows.push_back(std::move(row));
    address.push_back(std::move(addr));
  }
  RelationSet done() {
    IMat m(rows.size(), width);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t j = 0; j < width; ++j) m.at(r, j) = rows[r][j];
    return {std::move(m), std::move(address)};
  }
};

// The boundary circle of a 2-cell as a closed walk: each 1-subcell appears
// once, with +1 when traversed from its lower to its higher endpoint.
inline std::vector<std::pair<Cell, int>> boundary_walk(const DualCellComplex& C, Cell two) {
  auto edges = C.closure_cells(two, 1);
  std::map<Cell, std::vector<Cell>> at;
  for (Cell e : edges) {
    auto ep = C.closure_cells(e, 0);
    if (ep.size() != 2) throw ElgfError("boundary of a 2-cell is not a circle");
    at[ep[0]].push_back(e);
    at[ep[1]].push_back(e);
  }
  for (auto& [p, es] : at)
    if (es.size() != 2) throw ElgfError("boundary of a 2-cell is not a circle");

  std::vector<std::pair<Cell, int>> walk;
  Cell start = at.begin()->first;
  Cell here = start;
  Cell via = std::min(at[start][0], at[start][1]);
  do {
    auto ep = C.closure_cells(via, 0);
    Cell next = ep[0] == here ? ep[1] : ep[0];
    walk.push_back({via, here < next ? 1 : -1});
    here = next;
    via = at[here][0] == via ? at[here][1] : at[here][0];
  } while (here != start);
  if (walk.size() != edges.size()) throw ElgfError("boundary of a 2-cell is not a circle");
  return walk;
}

// signed sum of labels over the (k-1)-faces of sub must vanish
inline void add_face_rows(const DualCellComplex& C, const LabelLayout& lo, RowBuilder& rb,
                          Cell a, Cell b, Cell host, const std::string& tag) {
  for (std::size_t k = 2; k <= host.k; ++k) {
    if (lo.table[k - 1].is_trivial()) continue;
    for (Cell sub : C.closure_cells(host, k)) {
      const std::size_t width = lo.table[k - 1].gens();
      for (std::size_t g = 0; g < width; ++g) {
        IVec row(lo.width, Int(0));
        if (k == 2) {
          for (auto& [e, sgn] : boundary_walk(C, sub))
            row[lo.slot(a, b, e).offset + g] += sgn;
        } else {
          for (Cell f : C.closure_cells(sub, k - 1))
            row[lo.slot(a, b, f).offset + g] += C.incidence(f, sub);
        }
        rb.add(std::move(row), tag + " boundary at subcell " + cell_str(sub));
      }
    }
  }
}

}  // namespace detail

inline RelationSet full_relations(const DualCellComplex& C, const LabelLayout& lo) {
  detail::RowBuilder rb{lo.width, {}, {}};
  const std::size_t n = C.n();

  // additivity over chains a ⊂ b ⊂ c
  for (std::size_t kc = 3; kc <= n; ++kc)
    for (std::size_t ic = 0; ic < C.cell_count(kc); ++ic) {
      Cell c{kc, ic};
      for (std::size_t kb = 2; kb < kc; ++kb)
        for (Cell b : C.closure_cells(c, kb))
          for (std::size_t ka = 1; ka < kb; ++ka)
            for (Cell a : C.closure_cells(b, ka))
              for (auto& [sub, k] : label_subcells(C, lo.table, a)) {
                const LabelSlot& sab = lo.slot(a, b, sub);
                const LabelSlot& sbc = lo.slot(b, c, sub);
                const LabelSlot& sac = lo.slot(a, c, sub);
                for (std::size_t g = 0; g < sab.width; ++g) {
                  IVec row(lo.width, Int(0));
                  row[sab.offset + g] += 1;
                  row[sbc.offset + g] += 1;
                  row[sac.offset + g] -= 1;
                  rb.add(std::move(row), "chain " + cell_str(a) + " < " + cell_str(b) + " < " +
                                             cell_str(c) + " subcell " + cell_str(sub));
                }
              }
    }

  // boundary constraint inside every flag
  for (std::size_t ka = 1; ka < n; ++ka)
    for (std::size_t ia = 0; ia < C.cell_count(ka); ++ia) {
      Cell a{ka, ia};
      if (label_subcells(C, lo.table, a).empty()) continue;
      for (std::size_t kb = ka + 1; kb <= n; ++kb)
        for (Cell b : C.containing_cells(a, kb))
          detail::add_face_rows(C, lo, rb, a, b, a,
                                "flag " + cell_str(a) + " < " + cell_str(b));
    }
  return rb.done();
}

inline RelationSet core_relations(const DualCellComplex& C, const LabelLayout& lo) {
  detail::RowBuilder rb{lo.width, {}, {}};
  const std::size_t n = C.n();

  // antisymmetry of the ordered pairs
  for (std::size_t i = 0; i < C.cell_count(n); ++i) {
    Cell v{n, i};
    for (Cell w : adjacent_tops(C, v)) {
      if (!(v < w)) continue;
      Cell tau = meet_cell(C, v, w);
      for (auto& [sub, k] : label_subcells(C, lo.table, tau)) {
        const LabelSlot& svw = lo.slot(v, w, sub);
        const LabelSlot& swv = lo.slot(w, v, sub);
        for (std::size_t g = 0; g < svw.width; ++g) {
          IVec row(lo.width, Int(0));
          row[svw.offset + g] += 1;
          row[swv.offset + g] += 1;
          rb.add(std::move(row), "pair symmetry " + cell_str(v) + "," + cell_str(w) +
                                     " subcell " + cell_str(sub));
        }
      }
    }
  }

  // the three clutching labels around a codimension-2 cell sum to zero
  for (std::size_t i = 0; i < C.cell_count(n - 2); ++i) {
    Cell sigma{n - 2, i};
    auto tops = C.containing_cells(sigma, n);
    std::sort(tops.begin(), tops.end());
    if (tops.size() != 3) throw ElgfError("codimension-2 cell without a top-cell triple");
    for (auto& [sub, k] : label_subcells(C, lo.table, sigma)) {
      const LabelSlot& s12 = lo.slot(tops[0], tops[1], sub);
      const LabelSlot& s23 = lo.slot(tops[1], tops[2], sub);
      const LabelSlot& s31 = lo.slot(tops[2], tops[0], sub);
      for (std::size_t g = 0; g < s12.width; ++g) {
        IVec row(lo.width, Int(0));
        row[s12.offset + g] += 1;
        row[s23.offset + g] += 1;
        row[s31.offset + g] += 1;
        rb.add(std::move(row), "triple at " + cell_str(sigma) + " subcell " + cell_str(sub));
      }
    }
  }

  // boundary constraint over each shared face
  for (std::size_t i = 0; i < C.cell_count(n); ++i) {
    Cell v{n, i};
    for (Cell w : adjacent_tops(C, v)) {
      Cell tau = meet_cell(C, v, w);
      detail::add_face_rows(C, lo, rb, v, w, tau,
                            "pair " + cell_str(v) + "," + cell_str(w));
    }
  }
  return rb.done();
}

// ---------------------------------------------------------------------------
// Deck groups: kernels of the stacked relation homomorphisms.
// ---------------------------------------------------------------------------

struct DeckGroup {
  LabelLayout layout;
  RelationSet relations;
  KernelResult kernel;  // subgroup -> ambient Z^width
};

inline DeckGroup deck_group_from_table(const DualCellComplex& C,
                                       std::vector<FGAbelianGroup> table, DeckRegime regime) {
  if (C.n() > 4) throw DimensionUnsupported();
  LabelLayout lo = build_layout(C, std::move(table), regime);
  RelationSet rel =
      regime == DeckRegime::full ? full_relations(C, lo) : core_relations(C, lo);
  AbHom f = make_hom(free_abelian(lo.width), free_abelian(rel.m.rows()), rel.m);
  KernelResult k = kernel(f);
  return {std::move(lo), std::move(rel), std::move(k)};
}

template <class Model>
DeckGroup deck_group(const DualCellComplex& C, const Model& m, DeckRegime regime) {
  return deck_group_from_table(C, homotopy_table(m, C.n()), regime);
}

// ---------------------------------------------------------------------------
// Extended and core fields: a base lattice field plus label coordinates
// relative to the all-zero reference extension.
// ---------------------------------------------------------------------------

template <class Model>
struct ExtendedField {
  StandardLatticeField<Model> base;
  LabelLayout layout;  // full regime
  IVec labels;
};

template <class Model>
struct CoreField {
  StandardLatticeField<Model> base;
  LabelLayout layout;  // core regime
  IVec labels;
};

template <class Model>
ExtendedField<Model> extend_with_zero_labels(const CellularNetwork& net,
                                             StandardLatticeField<Model> base) {
  LabelLayout lo = build_layout(net.complex(), homotopy_table(base.model, net.complex().n()),
                                DeckRegime::full);
  IVec z(lo.width, Int(0));
  return {std::move(base), std::move(lo), std::move(z)};
}

template <class Model>
ExtendedField<Model> zero_extended_field(const CellularNetwork& net, Model m) {
  return extend_with_zero_labels(net, identity_field(net, std::move(m)));
}

template <class Model>
CoreField<Model> zero_core_field(const CellularNetwork& net, Model m) {
  auto base = identity_field(net, std::move(m));
  LabelLayout lo = build_layout(net.complex(), homotopy_table(base.model, net.complex().n()),
                                DeckRegime::core);
  IVec z(lo.width, Int(0));
  return {std::move(base), std::move(lo), std::move(z)};
}

template <class Field>
void set_label(Field& f, Cell a, Cell b, Cell sub, const IVec& v) {
  const LabelSlot& s = f.layout.slot(a, b, sub);
  if (v.size() != s.width) throw ElgfError("label value has the wrong number of coordinates");
  for (std::size_t g = 0; g < s.width; ++g) f.labels[s.offset + g] = v[g];
}

template <class Field>
IVec get_label(const Field& f, Cell a, Cell b, Cell sub) {
  const LabelSlot& s = f.layout.slot(a, b, sub);
  return {f.labels.begin() + long(s.offset), f.labels.begin() + long(s.offset + s.width)};
}

// ---------------------------------------------------------------------------
// Validation: every relation row must annihilate the label vector.
// ---------------------------------------------------------------------------

struct ExtendedValidation {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ExtendedValidation check_labels(const RelationSet& rel, const IVec& labels) {
  ExtendedValidation rep;
  for (std::size_t r = 0; r < rel.m.rows(); ++r) {
    Int acc = 0;
    for (std::size_t j = 0; j < rel.m.cols(); ++j)
      if (rel.m.at(r, j) != 0) acc += rel.m.at(r, j) * labels[j];
    if (acc != 0) rep.violations.push_back(rel.address[r]);
  }
  return rep;
}

template <class Model>
ExtendedValidation validate_extended(const DualCellComplex& C, const ExtendedField<Model>& E) {
  if (E.labels.size() != E.layout.width) return {{"label vector width mismatch"}};
  return check_labels(full_relations(C, E.layout), E.labels);
}

template <class Model>
ExtendedValidation validate_core(const DualCellComplex& C, const CoreField<Model>& K) {
  if (K.labels.size() != K.layout.width) return {{"label vector width mismatch"}};
  return check_labels(core_relations(C, K.layout), K.labels);
}

// ---------------------------------------------------------------------------
// The torsor action of deck elements on label vectors.
// ---------------------------------------------------------------------------

template <class Field>
Field act(const DeckGroup& D, const AbElement& d, const Field& f) {
  if (!(d.group == D.kernel.group))
    throw NotInDeckGroup("element does not belong to the deck subgroup");
  if (!D.layout.same_slots(f.layout))
    throw NotInDeckGroup("deck group and field have different index sets");
  IVec shift = D.kernel.embedding.m.apply(d.coords);
  Field out = f;
  for (std::size_t i = 0; i < out.labels.size(); ++i) out.labels[i] += shift[i];
  return out;
}

// interpret a raw ambient vector as a deck element, rejecting non-members
inline AbElement deck_from_ambient(const DeckGroup& D, const IVec& v) {
  if (v.size() != D.layout.width)
    throw NotInDeckGroup("ambient vector has the wrong width");
  auto x = solve(D.kernel.embedding.m, v);
  if (!x) throw NotInDeckGroup("ambient vector violates the deck relations");
  return make_element(D.kernel.group, *x);
}

// ---------------------------------------------------------------------------
// Core projection.
// ---------------------------------------------------------------------------

template <class Model>
CoreField<Model> core_of(const DualCellComplex& C, const ExtendedField<Model>& E) {
  auto rep = validate_extended(C, E);
  if (!rep.ok()) throw InvalidExtendedField(rep.violations.front());
  LabelLayout co = build_layout(C, E.layout.table, DeckRegime::core);
  IVec out(co.width, Int(0));
  for (const LabelSlot& s : co.slots) {
    Cell tau = meet_cell(C, s.small, s.big);
    const LabelSlot& pw = E.layout.slot(tau, s.big, s.subcell);
    const LabelSlot& pv = E.layout.slot(tau, s.small, s.subcell);
    for (std::size_t g = 0; g < s.width; ++g)
      out[s.offset + g] = E.labels[pw.offset + g] - E.labels[pv.offset + g];
  }
  return {E.base, std::move(co), std::move(out)};
}

// ---------------------------------------------------------------------------
// Classification.
// ---------------------------------------------------------------------------

struct BundleClass {
  std::size_t n = 0;
  FGAbelianGroup h2;    // cohomology of the base in degree 2 with pi_1 coefficients
  AbElement primary;    // in h2
  AbElement evaluation; // pi_1 total against the fundamental class (surfaces)
  AbElement secondary;  // pi_3 total (n = 4)
};

inline bool same_class(const BundleClass& a, const BundleClass& b) {
  return a.n == b.n && a.h2 == b.h2 && a.primary.coords == b.primary.coords &&
         a.evaluation.group == b.evaluation.group &&
         a.evaluation.coords == b.evaluation.coords &&
         a.secondary.group == b.secondary.group && a.secondary.coords == b.secondary.coords;
}

inline std::string class_str(const BundleClass& c) {
  std::string s = "H2 " + c.h2.to_string() + "; primary [";
  for (std::size_t i = 0; i < c.primary.coords.size(); ++i)
    s += (i ? "," : "") + c.primary.coords[i].str();
  s += "]";
  if (!c.evaluation.group.is_trivial()) {
    s += "; degree ";
    s += c.evaluation.coords.empty() ? "0" : c.evaluation.coords[0].str();
  }
  if (!c.secondary.group.is_trivial()) {
    s += "; secondary ";
    s += c.secondary.coords.empty() ? "0" : c.secondary.coords[0].str();
  }
  return s;
}

// Anchored integer lift of the clutch function of the ordered adjacent pair
// (v, w) over the 0-cells of closure(v ∩ w).  Increments along 1-subcells are
// the canonical gaps plus the stored windings; any inconsistent cycle means
// the label data is not realizable by canonical arcs.
inline std::map<Cell, Rational> clutch_lift(const CellularNetwork& net,
                                            const CoreField<U1Model>& K, Cell v, Cell w) {
  const DualCellComplex& C = net.complex();
  Cell tau = meet_cell(C, v, w);
  auto nodes = C.closure_cells(tau, 0);
  auto edges = C.closure_cells(tau, 1);

  std::map<Cell, Rational> val;
  for (Cell p : nodes) val[p] = clutch_value(net, K.base, v, w, p);

  // the winding constraint of a 1-subcell is oriented from its lower to its
  // higher endpoint; traversals against it subtract the same gap
  auto canonical_gap = [&](Cell e, Cell lo, Cell hi) {
    const LabelSlot& s = K.layout.slot(v, w, e);
    return U1Model::cdelta(val[lo], val[hi]) + Rational(K.labels[s.offset]);
  };

  std::map<Cell, std::vector<std::pair<Cell, Cell>>> adj;  // node -> (edge, other)
  for (Cell e : edges) {
    auto ep = C.closure_cells(e, 0);
    if (ep.size() != 2) throw ElgfError("glueing face closure is not a graph");
    adj[ep[0]].push_back({e, ep[1]});
    adj[ep[1]].push_back({e, ep[0]});
  }

  std::map<Cell, Rational> lift;
  Cell anchor = nodes.front();
  lift[anchor] = val[anchor];
  std::vector<Cell> queue{anchor};
  while (!queue.empty()) {
    Cell p = queue.back();
    queue.pop_back();
    for (auto& [e, q] : adj[p]) {
      Rational want =
          p < q ? lift[p] + canonical_gap(e, p, q) : lift[p] - canonical_gap(e, q, p);
      auto it = lift.find(q);
      if (it == lift.end()) {
        lift[q] = want;
        queue.push_back(q);
      } else if (it->second != want) {
        throw InvalidExtendedField(
            "labels are not realizable by canonical arcs over the face " + cell_str(tau));
      }
    }
  }
  if (lift.size() != nodes.size())
    throw ElgfError("glueing face closure is not connected");
  return lift;
}

// The lifting-defect 2-cochain on the triangulation underlying the duals.
inline IVec defect_cochain(const CellularNetwork& net, const CoreField<U1Model>& K) {
  const DualCellComplex& C = net.complex();
  const SimplicialComplex& tri = C.triangulation();
  const std::size_t n = C.n();

  std::map<std::pair<Cell, Cell>, std::map<Cell, Rational>> lifts;
  auto lift_of = [&](Cell v, Cell w) -> const std::map<Cell, Rational>& {
    auto it = lifts.find({v, w});
    if (it == lifts.end()) it = lifts.emplace(std::pair{v, w}, clutch_lift(net, K, v, w)).first;
    return it->second;
  };

  IVec z(tri.count(2), Int(0));
  for (std::size_t i = 0; i < tri.count(2); ++i) {
    const Simplex& s = tri.simplices(2)[i];
    Cell sigma{n - 2, i};
    Cell x = C.closure_cells(sigma, 0).front();
    auto top = [&](Vertex u) { return C.cell_of(Simplex{u}); };
    auto pair_lift = [&](Vertex a, Vertex b) { return lift_of(top(a), top(b)).at(x); };
    Rational total = pair_lift(s[0], s[1]) + pair_lift(s[1], s[2]) - pair_lift(s[0], s[2]);
    if (total.denominator() != 1)
      throw ElgfError("lifting defect is not an integer");
    z[i] = total.numerator();
  }
  return z;
}

template <class Model>
BundleClass classify(const CellularNetwork& net, const CoreField<Model>& K) {
  const DualCellComplex& C = net.complex();
  const std::size_t n = C.n();
  if (n < 2 || n > 4) throw DimensionUnsupported();
  const Model& m = K.base.model;
  FGAbelianGroup pi1 = m.homotopy_group(1), pi3 = m.homotopy_group(3);
  if (n == 4 && !pi1.is_trivial()) throw SecondaryUndefined();
  if (!C.triangulation().report().orientable) throw NotOriented();

  auto rep = validate_core(C, K);
  if (!rep.ok()) throw InvalidExtendedField(rep.violations.front());

  BundleClass out;
  out.n = n;
  out.h2 = free_abelian(0);
  out.primary = zero_element(out.h2);
  out.evaluation = zero_element(n == 2 ? pi1 : free_abelian(0));
  out.secondary = zero_element(n == 4 ? pi3 : free_abelian(0));

  if (!pi1.is_trivial()) {
    if constexpr (std::is_same_v<Model, U1Model>) {
      IVec z = defect_cochain(net, K);
      IntChainComplex chain = C.triangulation().chain_complex();
      HomologyResult h = cochain_cohomology(chain, 2, pi1);
      out.h2 = h.group;
      out.primary = h.class_of(z);
      if (n == 2) {
        Int total = 0;
        for (std::size_t i = 0; i < z.size(); ++i)
          total += Int(C.triangulation().facet_orientation(i)) * z[i];
        out.evaluation = make_element(pi1, {total});
      }
    } else {
      throw ElgfError("no lifting machinery for this structure group");
    }
  }

  if (n == 4 && !pi3.is_trivial()) {
    Int total = 0;
    for (std::size_t i = 0; i < C.cell_count(n - 1); ++i) {
      Cell tau{n - 1, i};
      auto tops = C.containing_cells(tau, n);
      std::sort(tops.begin(), tops.end());
      if (tops.size() != 2) throw ElgfError("glueing face without exactly two top cells");
      const LabelSlot& s = K.layout.slot(tops[0], tops[1], tau);
      total += Int(C.incidence(tau, tops[0])) * K.labels[s.offset];
    }
    out.secondary = make_element(pi3, {total});
  }
  return out;
}

template <class Model>
BundleClass classify(const CellularNetwork& net, const ExtendedField<Model>& E) {
  return classify(net, core_of(net.complex(), E));
}

template <class Model, class FieldA, class FieldB>
bool equivalent_fields(const CellularNetwork& na, const FieldA& a, const CellularNetwork& nb,
                       const FieldB& b) {
  if (!(na.complex().triangulation() == nb.complex().triangulation()) ||
      a.base.model.name() != b.base.model.name())
    throw ComplexMismatch();
  return same_class(classify(na, a), classify(nb, b));
}

template <class Model>
bool cellularly_equivalent(const CellularNetwork& na, const ExtendedField<Model>& a,
                           const CellularNetwork& nb, const ExtendedField<Model>& b) {
  return equivalent_fields<Model>(na, a, nb, b);
}

template <class Model>
bool cellularly_equivalent(const CellularNetwork& na, const CoreField<Model>& a,
                           const CellularNetwork& nb, const CoreField<Model>& b) {
  return equivalent_fields<Model>(na, a, nb, b);
}

// ---------------------------------------------------------------------------
// Kernel of the class homomorphism and the classifying quotient.
// ---------------------------------------------------------------------------

struct ClassKernel {
  DeckGroup deck;
  KernelResult kernel;      // subgroup of deck.kernel.group
  QuotientResult quotient;  // deck.kernel.group / class kernel
};

template <class Model>
ClassKernel class_kernel(const CellularNetwork& net, const Model& m, DeckRegime regime) {
  const DualCellComplex& C = net.complex();
  DeckGroup D = deck_group(C, m, regime);
  FGAbelianGroup pi1 = m.homotopy_group(1), pi3 = m.homotopy_group(3);

  FGAbelianGroup target = free_abelian(0);
  BundleClass ref;
  auto class_coords = [&](const BundleClass& c) -> IVec {
    if (!pi1.is_trivial()) return c.primary.coords;
    if (C.n() == 4 && !pi3.is_trivial()) return c.secondary.coords;
    return {};
  };

  auto run = [&](auto reference) {
    ref = classify(net, reference);
    if (!pi1.is_trivial())
      target = ref.h2;
    else if (C.n() == 4 && !pi3.is_trivial())
      target = pi3;
    IMat mm(target.gens(), D.kernel.group.gens());
    for (std::size_t j = 0; j < D.kernel.group.gens(); ++j) {
      IVec unit(D.kernel.group.gens(), Int(0));
      unit[j] = 1;
      AbElement d = make_element(D.kernel.group, unit);
      BundleClass cj = classify(net, act(D, d, reference));
      IVec diff = sub(make_element(target, class_coords(cj)),
                      make_element(target, class_coords(ref)))
                      .coords;
      for (std::size_t i = 0; i < target.gens(); ++i) mm.at(i, j) = diff[i];
    }
    return make_hom(D.kernel.group, target, std::move(mm));
  };

  AbHom hom = regime == DeckRegime::core ? run(zero_core_field(net, m))
                                         : run(zero_extended_field(net, m));
  KernelResult K = kernel(hom);
  QuotientResult Q = quotient_by_columns(D.kernel.group, K.embedding.m);
  return {std::move(D), std::move(K), std::move(Q)};
}

// ---------------------------------------------------------------------------
// Canonical representatives realizing prescribed classes.
// ---------------------------------------------------------------------------

// surface field whose evaluated degree is exactly k: one winding label on the
// first glueing face
inline ExtendedField<U1Model> winding_field(const CellularNetwork& net, const Int& k) {
  const DualCellComplex& C = net.complex();
  if (C.n() != 2) throw DimensionUnsupported();
  ExtendedField<U1Model> E = zero_extended_field(net, U1Model{});
  Cell tau{1, 0};
  auto tops = C.containing_cells(tau, 2);
  std::sort(tops.begin(), tops.end());
  set_label(E, tau, tops[1], tau, {Int(1)});
  Int sign = classify(net, E).evaluation.coords[0];
  assert(sign == 1 || sign == -1);
  set_label(E, tau, tops[1], tau, {sign * k});
  return E;
}

// four-dimensional field whose secondary total is exactly k: one top label on
// the first glueing face
inline ExtendedField<SU2Model> top_label_field(const CellularNetwork& net, const Int& k) {
  const DualCellComplex& C = net.complex();
  if (C.n() != 4) throw DimensionUnsupported();
  ExtendedField<SU2Model> E = zero_extended_field(net, SU2Model{});
  Cell tau{3, 0};
  auto tops = C.containing_cells(tau, 4);
  std::sort(tops.begin(), tops.end());
  set_label(E, tau, tops[1], tau, {Int(1)});
  Int sign = classify(net, E).secondary.coords[0];
  assert(sign == 1 || sign == -1);
  set_label(E, tau, tops[1], tau, {sign * k});
  return E;
}

}  // namespace elgf
