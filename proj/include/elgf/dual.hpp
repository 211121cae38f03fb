#pragma once

#include <array>
#include <compare>
#include <set>

#include "elgf/simplicial.hpp"

namespace elgf {

// k-cell of the dual decomposition, dual to an (n-k)-simplex; idx is the
// simplex index, so the correspondence is the identity on indices.
struct Cell {
  std::size_t k = 0;
  std::size_t idx = 0;
  auto operator<=>(const Cell&) const = default;
};

struct OrientedTriple {
  Cell sigma;                           // the (n-2)-cell
  std::array<std::size_t, 3> n_cells;   // n-cell ids (dual vertices v1 < v2 < v3)
  std::array<std::size_t, 3> co_cells;  // (n-1)-cell ids; co_cells[i] dual to the edge omitting v_i
  int cyclic_class = 1;                 // +1 reads (v1,v2,v3), -1 reads (v1,v3,v2)
};

class DualCellComplex {
public:
  explicit DualCellComplex(SimplicialComplex tri) : tri_(std::move(tri)) {
    if (!tri_.report().ok()) {
      std::string why = "triangulation failed validation";
      for (const std::string& f : tri_.report().failures) why += "; " + f;
      if (!tri_.report().pure) why += "; not pure";
      if (!tri_.report().pseudomanifold) why += "; not a closed pseudomanifold";
      if (!tri_.report().connected) why += "; not connected";
      throw InvalidTriangulation(why);
    }
  }

  std::size_t n() const { return tri_.dim(); }
  const SimplicialComplex& triangulation() const { return tri_; }

  std::size_t cell_count(std::size_t k) const { return tri_.count(n() - k); }

  const Simplex& simplex_of(Cell c) const { return tri_.simplices(n() - c.k).at(c.idx); }

  Cell cell_of(const Simplex& s) const {
    return {n() - (s.size() - 1), tri_.index_of(s)};
  }

  std::vector<Cell> all_cells() const {
    std::vector<Cell> cs;
    for (std::size_t k = 0; k <= n(); ++k)
      for (std::size_t i = 0; i < cell_count(k); ++i) cs.push_back({k, i});
    return cs;
  }

  // a lies in the closure of b (cells; includes a == b)
  bool in_closure(Cell a, Cell b) const {
    if (a.k > b.k) return false;
    const Simplex& sa = simplex_of(a);
    const Simplex& sb = simplex_of(b);
    return std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
  }

  // j-cells in the closure of c (j <= c.k)
  std::vector<Cell> closure_cells(Cell c, std::size_t j) const {
    const Simplex& s = simplex_of(c);
    std::size_t want = n() - j + 1;  // simplex size of a j-cell
    std::set<Cell> out;
    for (std::size_t fi : tri_.cofacets(s.size() - 1, c.idx)) {
      const Simplex& f = tri_.facets()[fi];
      Simplex rest;
      std::set_difference(f.begin(), f.end(), s.begin(), s.end(), std::back_inserter(rest));
      std::size_t extra = want - s.size();
      if (extra > rest.size()) continue;
      std::vector<bool> pick(rest.size(), false);
      std::fill(pick.end() - extra, pick.end(), true);
      do {
        Simplex sup = s;
        for (std::size_t i = 0; i < rest.size(); ++i)
          if (pick[i]) sup.push_back(rest[i]);
        std::sort(sup.begin(), sup.end());
        out.insert(cell_of(sup));
      } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return {out.begin(), out.end()};
  }

  std::vector<Cell> closure(Cell c) const {
    std::vector<Cell> out;
    for (std::size_t j = 0; j <= c.k; ++j) {
      auto part = closure_cells(c, j);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  // k-cells b with c in closure(b), i.e. simplices contained in simplex_of(c)
  std::vector<Cell> containing_cells(Cell c, std::size_t k) const {
    const Simplex& s = simplex_of(c);
    std::size_t want = n() - k + 1;
    std::vector<Cell> out;
    if (want > s.size()) return out;
    std::vector<bool> pick(s.size(), false);
    std::fill(pick.end() - want, pick.end(), true);
    do {
      Simplex sub;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (pick[i]) sub.push_back(s[i]);
      out.push_back(cell_of(sub));
    } while (std::next_permutation(pick.begin(), pick.end()));
    std::sort(out.begin(), out.end());
    return out;
  }

  // boundary[k] of the dual CW chain complex is the transposed simplicial
  // boundary in complementary degree
  IntChainComplex chain_complex() const {
    IntChainComplex c;
    for (std::size_t k = 0; k <= n(); ++k) c.dims.push_back(cell_count(k));
    c.boundary.resize(n() + 1);
    for (std::size_t k = 1; k <= n(); ++k)
      c.boundary[k] = tri_.boundary_matrix(n() - k + 1).transposed();
    return c;
  }

  // incidence coefficient of the (k-1)-cell a in the boundary of the k-cell b
  int incidence(Cell a, Cell b) const {
    if (a.k + 1 != b.k) throw ComplexError("incidence wants consecutive dimensions");
    const IMat& m = tri_.boundary_matrix(n() - b.k + 1);
    return static_cast<int>(m.at(b.idx, a.idx));
  }

  // One triple per (n-2)-cell: the three n-cells and three (n-1)-cells whose
  // closures meet there, with a cyclic class induced by the orientation.
  std::vector<OrientedTriple> oriented_triples() const {
    if (!tri_.report().orientable) throw NotOriented();
    std::vector<OrientedTriple> ts;
    if (n() < 2) return ts;
    for (std::size_t i = 0; i < tri_.count(2); ++i) {
      const Simplex& s = tri_.simplices(2)[i];
      OrientedTriple t;
      t.sigma = Cell{n() - 2, i};
      for (int j = 0; j < 3; ++j) {
        t.n_cells[j] = tri_.index_of({s[j]});
        Simplex e = s;
        e.erase(e.begin() + j);
        t.co_cells[j] = tri_.index_of(e);
      }
      std::size_t fi = tri_.cofacets(2, i).front();
      for (std::size_t g : tri_.cofacets(2, i)) fi = std::min(fi, g);
      const Simplex& f = tri_.facets()[fi];
      std::size_t psum = 0;
      for (int j = 0; j < 3; ++j)
        psum += std::find(f.begin(), f.end(), s[j]) - f.begin();
      int parity = ((psum - 3) % 2 == 0) ? 1 : -1;
      t.cyclic_class = parity * tri_.facet_orientation(fi);
      ts.push_back(t);
    }
    return ts;
  }

  // cells whose closure meets closure(c), and the rest
  std::pair<std::vector<Cell>, std::vector<Cell>> star_and_complement(Cell c) const {
    const Simplex& s = simplex_of(c);
    std::vector<Cell> star, rest;
    for (Cell d : all_cells()) {
      Simplex u;
      const Simplex& sd = simplex_of(d);
      std::set_union(s.begin(), s.end(), sd.begin(), sd.end(), std::back_inserter(u));
      (tri_.contains(u) ? star : rest).push_back(d);
    }
    return {std::move(star), std::move(rest)};
  }

private:
  SimplicialComplex tri_;
};

inline DualCellComplex dualize(const SimplicialComplex& k) { return DualCellComplex(k); }

}  // namespace elgf
