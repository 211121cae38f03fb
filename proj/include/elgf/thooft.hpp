#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "elgf/elgf.hpp"

namespace elgf {

class NotACycle : public ElgfError {
public:
  NotACycle() : ElgfError("defect locus is not a cycle") {}
};
class NotNullHomologous : public ElgfError {
public:
  NotNullHomologous() : ElgfError("defect locus represents a nonzero homology class") {}
};
class WordMeetsDefect : public ElgfError {
public:
  explicit WordMeetsDefect(const std::string& why) : ElgfError("word meets the defect: " + why) {}
};

// ---------------------------------------------------------------------------
// Defect loci and the hypersurfaces bounding them.
// ---------------------------------------------------------------------------

// An oriented codimension-two defect: distinct (n-2)-cells with signs.
struct DefectLocus {
  std::vector<std::pair<Cell, int>> cells;
};

inline IVec locus_chain(const DualCellComplex& C, const DefectLocus& L) {
  const std::size_t n = C.n();
  if (n < 2) throw DimensionUnsupported();
  IVec z(C.cell_count(n - 2), Int(0));
  std::set<Cell> seen;
  for (const auto& [c, s] : L.cells) {
    if (c.k != n - 2 || c.idx >= C.cell_count(n - 2))
      throw ElgfError("locus member is not an (n-2)-cell of the complex");
    if (s != 1 && s != -1) throw ElgfError("locus signs must be +1 or -1");
    if (!seen.insert(c).second) throw ElgfError("locus cells must be distinct");
    z[c.idx] = Int(s);
  }
  return z;
}

// A combinatorial Seifert hypersurface: an integer chain on (n-1)-cells whose
// boundary is the defect chain.  The side token names the convention that
// stands in for the neighboring perturbation: the hypersurface is pushed off
// its carrier into the coface its signed incidence marks as positive.
struct SeifertSurface {
  IVec chain;  // over (n-1)-cells
  std::string side = "positive-coface push-off";
};

inline IVec surface_boundary(const DualCellComplex& C, const SeifertSurface& S) {
  if (S.chain.size() != C.cell_count(C.n() - 1))
    throw ElgfError("hypersurface chain has the wrong width");
  return C.chain_complex().boundary[C.n() - 1].apply(S.chain);
}

namespace detail {

// total order canonicalizing hypersurface chains: mass first, then the
// absolute pattern, then the signed pattern
inline bool chain_less(const IVec& a, const IVec& b) {
  Int la = 0, lb = 0;
  for (const Int& x : a) la += abs(x);
  for (const Int& x : b) lb += abs(x);
  if (la != lb) return la < lb;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (abs(a[i]) != abs(b[i])) return abs(a[i]) < abs(b[i]);
  return a < b;
}

// greedy integer line searches along a fixed-order basis until stable
inline void reduce_chain(IVec& x, const std::vector<IVec>& basis) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (const IVec& b : basis) {
      std::set<Int> cand;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (b[i] != 0) {
          Int q = -x[i] / b[i];
          cand.insert(q - 1);
          cand.insert(q);
          cand.insert(q + 1);
        }
      IVec best = x;
      bool moved = false;
      for (const Int& t : cand) {
        if (t == 0) continue;
        IVec y = x;
        for (std::size_t i = 0; i < y.size(); ++i)
          if (b[i] != 0) y[i] += t * b[i];
        if (chain_less(y, best)) {
          best = std::move(y);
          moved = true;
        }
      }
      if (moved) {
        x = std::move(best);
        improved = true;
      }
    }
  }
}

}  // namespace detail

// Solve boundary(x) = [L] over the integers, canonicalized by greedy
// reduction against the cycle lattice; unit multiplicities are required.
inline SeifertSurface find_seifert(const DualCellComplex& C, const DefectLocus& L) {
  const std::size_t n = C.n();
  IVec z = locus_chain(C, L);
  IntChainComplex chain = C.chain_complex();
  if (n >= 3) {
    IVec bz = chain.boundary[n - 2].apply(z);
    for (const Int& v : bz)
      if (v != 0) throw NotACycle();
  }
  auto x = solve(chain.boundary[n - 1], z);
  if (!x) throw NotNullHomologous();
  KernelResult ker = kernel(boundary_hom(chain, n - 1));
  std::vector<IVec> basis;
  for (std::size_t j = 0; j < ker.embedding.m.cols(); ++j)
    basis.push_back(ker.embedding.m.column(j));
  detail::reduce_chain(*x, basis);
  for (const Int& v : *x)
    if (v < -1 || v > 1)
      throw ElgfError("chain reduction found no unit-multiplicity hypersurface");
  SeifertSurface S;
  S.chain = std::move(*x);
  return S;
}

// ---------------------------------------------------------------------------
// Side bookkeeping: which coface a hypersurface cell is pushed into, the
// intersection invariant of adjacent top-cell pairs, and crossing counts of
// network edges against the pushed hypersurface.
// ---------------------------------------------------------------------------

inline Cell positive_coface(const DualCellComplex& C, const SeifertSurface& S, Cell tau) {
  if (tau.k + 1 != C.n() || S.chain.at(tau.idx) == 0)
    throw ElgfError("cell does not carry the hypersurface");
  int s = S.chain[tau.idx] > 0 ? 1 : -1;
  for (Cell v : C.containing_cells(tau, C.n()))
    if (s * C.incidence(tau, v) == 1) return v;
  throw ElgfError("hypersurface cell has no positive coface");
}

// 0 when the pair's shared face is off the hypersurface, else the sign of its
// coefficient against the (v, w) orientation; antisymmetric in (v, w)
inline int or_invariant(const DualCellComplex& C, const SeifertSurface& S, Cell v, Cell w) {
  Cell tau = meet_cell(C, v, w);
  if (S.chain.size() != C.cell_count(C.n() - 1))
    throw ElgfError("hypersurface chain has the wrong width");
  const Int& m = S.chain[tau.idx];
  if (m == 0) return 0;
  return (m > 0 ? 1 : -1) * C.incidence(tau, w);
}

// Crossings of the directed network edge (p -> base point of c) with the
// pushed hypersurface.  The push-off of each carrier cell separates, within
// its positive coface, the carrier's corners from the rest of the cell, so
// only top-cell edges rooted at those corners cross; traversal from the
// carrier side to the positive side counts +1.
inline Int edge_crossing(const DualCellComplex& C, const SeifertSurface& S, Cell c, Cell p) {
  if (c.k != C.n()) return 0;
  Int total = 0;
  for (std::size_t i = 0; i < S.chain.size(); ++i) {
    if (S.chain[i] == 0) continue;
    Cell tau{C.n() - 1, i};
    if (C.in_closure(p, tau) && positive_coface(C, S, tau) == c) total += abs(S.chain[i]);
  }
  return total;
}

// Words are kept away from the defect: no step may walk inside a carrier
// cell, and no step endpoint may lie on the closure of a locus cell.
inline void check_word_off_defect(const CellularNetwork& net, const SeifertSurface& S,
                                  const NetworkWord& w) {
  const DualCellComplex& C = net.complex();
  check_word(net, w);
  IVec bd = surface_boundary(C, S);
  std::set<Cell> halo;
  for (std::size_t i = 0; i < bd.size(); ++i)
    if (bd[i] != 0)
      for (Cell p : C.closure_cells(Cell{C.n() - 2, i}, 0)) halo.insert(p);
  for (const WalkStep& s : w) {
    if (s.cell.k + 1 == C.n() && S.chain[s.cell.idx] != 0)
      throw WordMeetsDefect("step walks inside the hypersurface cell " + cell_str(s.cell));
    if (halo.count(s.from) || halo.count(s.to))
      throw WordMeetsDefect("step endpoint lies on the defect locus");
  }
}

inline Int linking_number(const CellularNetwork& net, const SeifertSurface& S,
                          const NetworkWord& w) {
  const DualCellComplex& C = net.complex();
  check_word_off_defect(net, S, w);
  Int total = 0;
  for (const WalkStep& s : w)
    total += edge_crossing(C, S, s.cell, s.from) - edge_crossing(C, S, s.cell, s.to);
  return total;
}

// ---------------------------------------------------------------------------
// The defected field and its gerbe data.
// ---------------------------------------------------------------------------

template <class Model>
typename Model::Element central_power(const Model& m, const typename Model::Element& g,
                                      const Int& k) {
  typename Model::Element acc = m.identity();
  const typename Model::Element step = k < 0 ? m.inverse(g) : g;
  for (Int i = 0, e = abs(k); i < e; ++i) acc = m.multiply(acc, step);
  return acc;
}

// Clutching data of the defected bundle: corrected 0-cell clutch values
// H_vw(p) = g^{Or(S, c_vw)} q_vw(p) around every (n-2)-cell, and the central
// defect map f per (n-2)-cell, stored with its oriented top-cell triple.
template <class Model>
struct GerbeData {
  Model model;
  typename Model::Element g;
  DefectLocus locus;
  SeifertSurface surface;
  std::map<std::tuple<Cell, Cell, Cell>, typename Model::Element> clutch;  // (v, w, p), v < w
  struct FEntry {
    std::array<Cell, 3> triple;
    typename Model::Element value;
  };
  std::map<Cell, FEntry> f;
};

template <class Model>
typename Model::Element gerbe_clutch(const GerbeData<Model>& D, Cell v, Cell w, Cell p) {
  const bool flipped = w < v;
  auto it = D.clutch.find(flipped ? std::tuple{w, v, p} : std::tuple{v, w, p});
  if (it == D.clutch.end()) throw ElgfError("no stored clutch value at that address");
  return flipped ? D.model.inverse(it->second) : it->second;
}

namespace detail {

inline int triple_parity(const std::array<Cell, 3>& from, const std::array<Cell, 3>& to) {
  std::array<int, 3> pos{};
  for (int i = 0; i < 3; ++i) {
    auto it = std::find(from.begin(), from.end(), to[i]);
    if (it == from.end()) throw ElgfError("cells do not form the stored triple");
    pos[i] = int(it - from.begin());
  }
  int inv = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) inv += pos[i] > pos[j];
  return inv % 2;
}

}  // namespace detail

// f of the (n-2)-cell spanned by the tops (a, b, c), adjusted from the stored
// orientation: f is antisymmetric under odd reorderings of its triple.
template <class Model>
typename Model::Element oriented_f(const DualCellComplex& C, const GerbeData<Model>& D, Cell a,
                                   Cell b, Cell c) {
  Simplex s{C.simplex_of(a)[0], C.simplex_of(b)[0], C.simplex_of(c)[0]};
  std::sort(s.begin(), s.end());
  auto it = D.f.find(C.cell_of(s));
  if (it == D.f.end()) throw ElgfError("no stored defect map at that cell");
  int par = detail::triple_parity(it->second.triple, {a, b, c});
  return par == 0 ? it->second.value : D.model.inverse(it->second.value);
}

// Multiply every base value by g to the crossing count of its network edge.
// Labels are untouched: multiplication by a central constant is homotopic to
// the identity on the glueing data, so the attached homotopy classes ride
// along unchanged.  The returned gerbe data describes the defected clutching:
// its cocycle defect is f, trivial off the locus and g^{+-1} on it.
template <class Model>
std::pair<ExtendedField<Model>, GerbeData<Model>> apply_thooft(const CellularNetwork& net,
                                                               const ExtendedField<Model>& E,
                                                               const DefectLocus& L,
                                                               const SeifertSurface& S,
                                                               const typename Model::Element& g) {
  const DualCellComplex& C = net.complex();
  const Model& m = E.base.model;
  if (!m.is_central(g)) throw NotCentral();
  auto rep = validate_extended(C, E);
  if (!rep.ok()) throw InvalidExtendedField(rep.violations.front());
  if (surface_boundary(C, S) != locus_chain(C, L))
    throw ElgfError("hypersurface does not bound the defect locus");

  ExtendedField<Model> out = E;
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const NetworkEdge& e = net.edges()[i];
    Int k = edge_crossing(C, S, e.cell, e.vertex);
    if (k != 0) out.base.values[i] = m.multiply(central_power(m, g, k), out.base.values[i]);
  }

  GerbeData<Model> D{m, g, L, S, {}, {}};
  const std::size_t n = C.n();
  for (const OrientedTriple& t : C.oriented_triples()) {
    std::array<Cell, 3> tri{Cell{n, t.n_cells[0]}, Cell{n, t.n_cells[1]}, Cell{n, t.n_cells[2]}};
    if (t.cyclic_class < 0) std::swap(tri[1], tri[2]);
    Int ehat = Int(or_invariant(C, S, tri[0], tri[1])) + Int(or_invariant(C, S, tri[1], tri[2])) -
               Int(or_invariant(C, S, tri[0], tri[2]));
    D.f[t.sigma] = {tri, central_power(m, g, ehat)};
    const std::array<std::pair<Cell, Cell>, 3> pairs{
        {{tri[0], tri[1]}, {tri[1], tri[2]}, {tri[0], tri[2]}}};
    for (const auto& [v, w] : pairs) {
      Cell a = std::min(v, w), b = std::max(v, w);
      Int orr(or_invariant(C, S, a, b));
      for (Cell p : C.closure_cells(t.sigma, 0)) {
        auto key = std::tuple{a, b, p};
        if (D.clutch.count(key)) continue;
        D.clutch[key] =
            m.multiply(central_power(m, g, orr), clutch_value(net, out.base, a, b, p));
      }
    }
  }
  return {std::move(out), std::move(D)};
}

// Check the gerbe conditions: around every (n-2)-cell the corrected clutch
// cocycle misses closing by exactly f, f is trivial off the locus and a unit
// power of g on it, and around every (n-3)-cell the four corner maps of the
// surrounding top quadruple cancel.
template <class Model>
ExtendedValidation verify_gerbe(const CellularNetwork& net, const GerbeData<Model>& D) {
  const DualCellComplex& C = net.complex();
  const Model& m = D.model;
  const std::size_t n = C.n();
  ExtendedValidation rep;
  IVec lz = locus_chain(C, D.locus);

  for (const auto& [sigma, fe] : D.f) {
    for (Cell p : C.closure_cells(sigma, 0)) {
      auto lhs = m.multiply(gerbe_clutch(D, fe.triple[0], fe.triple[1], p),
                            gerbe_clutch(D, fe.triple[1], fe.triple[2], p));
      auto rhs = m.multiply(fe.value, gerbe_clutch(D, fe.triple[0], fe.triple[2], p));
      if (!m.equal(lhs, rhs))
        rep.violations.push_back("corrected cocycle misses f at cell " + cell_str(sigma) +
                                 " over point " + cell_str(p));
    }
    const bool on_locus = lz[sigma.idx] != 0;
    if (!on_locus && !m.equal(fe.value, m.identity()))
      rep.violations.push_back("defect map is not the identity off the locus at cell " +
                               cell_str(sigma));
    if (on_locus && !(m.equal(fe.value, D.g) || m.equal(fe.value, m.inverse(D.g))))
      rep.violations.push_back("defect map is not a unit power of g on the locus at cell " +
                               cell_str(sigma));
  }

  if (n >= 3) {
    for (std::size_t i = 0; i < C.cell_count(n - 3); ++i) {
      Cell rho{n - 3, i};
      auto tops = C.containing_cells(rho, n);
      std::sort(tops.begin(), tops.end());
      if (tops.size() != 4) {
        rep.violations.push_back("cell " + cell_str(rho) + " lacks a top quadruple");
        continue;
      }
      auto lhs = m.multiply(oriented_f(C, D, tops[1], tops[2], tops[3]),
                            oriented_f(C, D, tops[0], tops[1], tops[3]));
      auto rhs = m.multiply(oriented_f(C, D, tops[0], tops[1], tops[2]),
                            oriented_f(C, D, tops[0], tops[2], tops[3]));
      if (!m.equal(lhs, rhs))
        rep.violations.push_back("corner maps fail to cancel around cell " + cell_str(rho));
    }
  }
  return rep;
}

}  // namespace elgf
