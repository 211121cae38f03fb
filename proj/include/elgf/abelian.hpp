#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "elgf/matrix.hpp"

namespace elgf {

class AbelianError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class EmbeddingNotInjective : public AbelianError {
public:
  EmbeddingNotInjective() : AbelianError("embedding is not injective") {}
};
class NotAChainComplex : public AbelianError {
public:
  NotAChainComplex() : AbelianError("composite of consecutive boundary maps is nonzero") {}
};

// ---------------------------------------------------------------------------
// Smith normal form.  u * input * v = d with u, v unimodular, d diagonal with
// d(0,0) | d(1,1) | ... >= 0.  uinv and vinv are maintained alongside so that
// input = uinv * d * vinv.
// ---------------------------------------------------------------------------

struct SNFResult {
  IMat u, uinv, d, v, vinv;
  std::size_t rank = 0;

  Int diag(std::size_t i) const {
    return (i < d.rows() && i < d.cols()) ? d.at(i, i) : Int(0);
  }
};

inline SNFResult smith_normal_form(IMat a) {
  const std::size_t m = a.rows(), n = a.cols();
  SNFResult r;
  r.u = IMat::identity(m);
  r.uinv = IMat::identity(m);
  r.v = IMat::identity(n);
  r.vinv = IMat::identity(n);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    r.u.swap_rows(i, j);
    r.uinv.swap_cols(i, j);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    r.v.swap_cols(i, j);
    r.vinv.swap_rows(i, j);
  };
  auto row_axpy = [&](std::size_t i, std::size_t j, const Int& q) {
    a.row_axpy(i, j, q);
    r.u.row_axpy(i, j, q);
    r.uinv.col_axpy(j, i, -q);
  };
  auto col_axpy = [&](std::size_t i, std::size_t j, const Int& q) {
    a.col_axpy(i, j, q);
    r.v.col_axpy(i, j, q);
    r.vinv.row_axpy(j, i, -q);
  };

  std::size_t t = 0;
  while (t < m && t < n) {
    // Smallest nonzero entry of the trailing submatrix becomes the pivot.
    std::size_t pi = t, pj = t;
    bool found = false;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a.at(i, j) != 0 && (!found || iabs(a.at(i, j)) < iabs(a.at(pi, pj)))) {
          pi = i;
          pj = j;
          found = true;
        }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool again = true;
      while (again) {
        again = false;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a.at(i, t) == 0) continue;
          Int q = a.at(i, t) / a.at(t, t);
          row_axpy(i, t, -q);
          if (a.at(i, t) != 0) {  // remainder is a strictly smaller pivot
            swap_rows(t, i);
            again = true;
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a.at(t, j) == 0) continue;
          Int q = a.at(t, j) / a.at(t, t);
          col_axpy(j, t, -q);
          if (a.at(t, j) != 0) {
            swap_cols(t, j);
            again = true;
          }
        }
      }
      // Enforce the divisibility chain: pivot must divide everything below.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n && divides; ++j)
          if (a.at(i, j) % a.at(t, t) != 0) {
            row_axpy(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    ++t;
  }
  r.rank = t;
  for (std::size_t i = 0; i < t; ++i)
    if (a.at(i, i) < 0) {
      a.negate_row(i);
      r.u.negate_row(i);
      r.uinv.negate_col(i);
    }
  r.d = std::move(a);
  return r;
}

// Columns form a basis of the integer kernel lattice {x : a x = 0}.
inline IMat kernel_basis(const IMat& a) {
  SNFResult s = smith_normal_form(a);
  IMat k(a.cols(), a.cols() - s.rank);
  for (std::size_t j = s.rank; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) k.at(i, j - s.rank) = s.v.at(i, j);
  return k;
}

// One integer solution of a x = b, if any.
inline std::optional<IVec> solve_with(const SNFResult& s, const IVec& b) {
  assert(b.size() == s.u.cols());
  IVec c = s.u.apply(b);
  IVec y(s.v.rows());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < s.rank) {
      if (c[i] % s.d.at(i, i) != 0) return std::nullopt;
      y[i] = c[i] / s.d.at(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(y);
}

inline std::optional<IVec> solve(const IMat& a, const IVec& b) {
  return solve_with(smith_normal_form(a), b);
}

// Basis of the column-span lattice of a: columns d_i * uinv_i, i < rank.
inline IMat lattice_column_basis(const IMat& a) {
  SNFResult s = smith_normal_form(a);
  IMat b(a.rows(), s.rank);
  for (std::size_t j = 0; j < s.rank; ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      b.at(i, j) = s.d.at(j, j) * s.uinv.at(i, j);
  return b;
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups in invariant-factor form.
// Coordinates: free generators first, then one generator per invariant
// factor in ascending order.
// ---------------------------------------------------------------------------

struct FGAbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // ascending invariant factors, each >= 2

  std::size_t gens() const { return free_rank + torsion.size(); }
  bool is_trivial() const { return gens() == 0; }

  Int gen_order(std::size_t i) const {
    return i < free_rank ? Int(0) : torsion[i - free_rank];
  }

  // Columns d_i * e_{free_rank + i}.
  IMat relation_matrix() const {
    IMat r(gens(), torsion.size());
    for (std::size_t k = 0; k < torsion.size(); ++k) r.at(free_rank + k, k) = torsion[k];
    return r;
  }

  void reduce(IVec& coords) const {
    assert(coords.size() == gens());
    for (std::size_t k = 0; k < torsion.size(); ++k) {
      Int& x = coords[free_rank + k];
      x %= torsion[k];
      if (x < 0) x += torsion[k];
    }
  }
  IVec reduced(IVec coords) const {
    reduce(coords);
    return coords;
  }
  bool is_zero(IVec coords) const {
    reduce(coords);
    return std::all_of(coords.begin(), coords.end(), [](const Int& x) { return x == 0; });
  }

  bool operator==(const FGAbelianGroup&) const = default;

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    auto append = [&](const std::string& part) {
      if (!s.empty()) s += " + ";
      s += part;
    };
    if (free_rank == 1) append("Z");
    if (free_rank > 1) append("Z^" + std::to_string(free_rank));
    for (const Int& d : torsion) append("Z/" + d.str());
    return s;
  }
};

inline FGAbelianGroup free_abelian(std::size_t n) { return {n, {}}; }
inline FGAbelianGroup cyclic_group(const Int& n) {
  assert(n >= 0);
  if (n == 0) return {1, {}};
  if (n == 1) return {0, {}};
  return {0, {n}};
}

struct AbElement {
  FGAbelianGroup group;
  IVec coords;  // reduced

  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Int& x) { return x == 0; });
  }
  bool operator==(const AbElement&) const = default;
};

inline AbElement make_element(const FGAbelianGroup& g, IVec coords) {
  if (coords.size() != g.gens()) throw AbelianError("coordinate length does not match group rank");
  g.reduce(coords);
  return {g, std::move(coords)};
}
inline AbElement zero_element(const FGAbelianGroup& g) { return {g, IVec(g.gens())}; }

inline AbElement add(const AbElement& x, const AbElement& y) {
  if (x.group != y.group) throw AbelianError("elements of different groups");
  IVec c = x.coords;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += y.coords[i];
  return make_element(x.group, std::move(c));
}
inline AbElement negate(const AbElement& x) {
  IVec c = x.coords;
  for (Int& v : c) v = -v;
  return make_element(x.group, std::move(c));
}
inline AbElement sub(const AbElement& x, const AbElement& y) { return add(x, negate(y)); }
inline AbElement scale(const Int& n, const AbElement& x) {
  IVec c = x.coords;
  for (Int& v : c) v *= n;
  return make_element(x.group, std::move(c));
}

// ---------------------------------------------------------------------------
// Homomorphisms, kernels, quotients, homology.
// ---------------------------------------------------------------------------

struct AbHom {
  FGAbelianGroup src, dst;
  IMat m;  // dst.gens() x src.gens()
};

inline bool respects_torsion(const FGAbelianGroup& src, const FGAbelianGroup& dst,
                             const IMat& m) {
  for (std::size_t j = 0; j < src.gens(); ++j) {
    Int d = src.gen_order(j);
    if (d == 0) continue;
    for (std::size_t k = 0; k < dst.gens(); ++k) {
      Int v = d * m.at(k, j);
      Int e = dst.gen_order(k);
      if (e == 0 ? v != 0 : v % e != 0) return false;
    }
  }
  return true;
}

inline AbHom make_hom(const FGAbelianGroup& src, const FGAbelianGroup& dst, IMat m) {
  if (m.rows() != dst.gens() || m.cols() != src.gens())
    throw AbelianError("homomorphism matrix has wrong shape");
  if (!respects_torsion(src, dst, m))
    throw AbelianError("matrix does not respect torsion relations");
  return {src, dst, std::move(m)};
}

inline AbHom zero_hom(const FGAbelianGroup& src, const FGAbelianGroup& dst) {
  return {src, dst, IMat(dst.gens(), src.gens())};
}
inline AbHom identity_hom(const FGAbelianGroup& g) {
  return {g, g, IMat::identity(g.gens())};
}

inline AbElement apply(const AbHom& f, const AbElement& x) {
  if (x.group != f.src) throw AbelianError("element not in homomorphism domain");
  return make_element(f.dst, f.m.apply(x.coords));
}

inline AbHom compose(const AbHom& g, const AbHom& f) {
  if (f.dst != g.src) throw AbelianError("homomorphisms do not compose");
  return {f.src, g.dst, g.m * f.m};
}

inline bool is_zero_hom(const AbHom& f) {
  for (std::size_t j = 0; j < f.m.cols(); ++j)
    if (!f.dst.is_zero(f.m.column(j))) return false;
  return true;
}

struct KernelResult {
  FGAbelianGroup group;
  AbHom embedding;  // group -> src
};

struct QuotientResult {
  FGAbelianGroup group;
  AbHom projection;  // src -> group
};

inline KernelResult kernel(const AbHom& f) {
  const std::size_t gs = f.src.gens();
  // x is in the kernel iff f.m x lies in the destination relation lattice.
  IMat b = f.m.hstack(f.dst.relation_matrix());
  IMat k0 = kernel_basis(b);
  IMat w(gs, k0.cols());
  for (std::size_t i = 0; i < gs; ++i)
    for (std::size_t j = 0; j < k0.cols(); ++j) w.at(i, j) = k0.at(i, j);
  IMat bas = lattice_column_basis(w);  // basis of the kernel lattice in Z^gs
  const std::size_t rk = bas.cols();

  // Relations among the basis vectors: where the source torsion lattice sits.
  SNFResult sb = smith_normal_form(bas);
  IMat rsrc = f.src.relation_matrix();
  IMat c(rk, rsrc.cols());
  for (std::size_t j = 0; j < rsrc.cols(); ++j) {
    auto x = solve_with(sb, rsrc.column(j));
    assert(x && "torsion relation must lie in the kernel lattice");
    for (std::size_t i = 0; i < rk; ++i) c.at(i, j) = (*x)[i];
  }
  SNFResult sc = smith_normal_form(c);

  // New generators uinv_i of Z^rk carry orders diag(i) (0 past the rank).
  std::vector<std::size_t> free_idx, tor_idx;
  for (std::size_t i = 0; i < rk; ++i) {
    Int d = sc.diag(i);
    if (d == 0)
      free_idx.push_back(i);
    else if (d >= 2)
      tor_idx.push_back(i);
  }
  FGAbelianGroup kg;
  kg.free_rank = free_idx.size();
  for (std::size_t i : tor_idx) kg.torsion.push_back(sc.diag(i));

  std::vector<std::size_t> order = free_idx;
  order.insert(order.end(), tor_idx.begin(), tor_idx.end());
  IMat e(gs, order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    IVec g = bas.apply(sc.uinv.column(order[j]));
    for (std::size_t i = 0; i < gs; ++i) e.at(i, j) = g[i];
  }
  return {kg, make_hom(kg, f.src, std::move(e))};
}

// G / image(columns); columns are coordinate vectors in G.
inline QuotientResult quotient_by_columns(const FGAbelianGroup& g, const IMat& cols) {
  assert(cols.rows() == g.gens());
  IMat r = g.relation_matrix().hstack(cols);
  SNFResult s = smith_normal_form(r);
  std::vector<std::size_t> free_idx, tor_idx;
  for (std::size_t i = 0; i < g.gens(); ++i) {
    Int d = s.diag(i);
    if (d == 0)
      free_idx.push_back(i);
    else if (d >= 2)
      tor_idx.push_back(i);
  }
  FGAbelianGroup q;
  q.free_rank = free_idx.size();
  for (std::size_t i : tor_idx) q.torsion.push_back(s.diag(i));

  std::vector<std::size_t> order = free_idx;
  order.insert(order.end(), tor_idx.begin(), tor_idx.end());
  IMat p(order.size(), g.gens());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < g.gens(); ++j) p.at(i, j) = s.u.at(order[i], j);
  return {q, make_hom(g, q, std::move(p))};
}

inline QuotientResult quotient(const FGAbelianGroup& g, const AbHom& embedding) {
  if (embedding.dst != g) throw AbelianError("embedding does not land in the group");
  if (!kernel(embedding).group.is_trivial()) throw EmbeddingNotInjective();
  return quotient_by_columns(g, embedding.m);
}

// ker(d_out) / im(d_in), for d_in: B -> C, d_out: C -> D with d_out . d_in = 0.
struct HomologyResult {
  FGAbelianGroup group;
  KernelResult cycles;      // subgroup of C
  QuotientResult classes;   // cycles.group -> group
  SNFResult lift;           // factorization of [embedding | relations of C]
  std::size_t kgens = 0;

  // Class of a cycle given by coordinates in C.
  AbElement class_of(const IVec& coords) const {
    auto x = solve_with(lift, coords);
    if (!x) throw AbelianError("chain is not a cycle");
    IVec kc(x->begin(), x->begin() + kgens);
    return apply(classes.projection, make_element(cycles.group, std::move(kc)));
  }
};

inline HomologyResult homology(const AbHom& d_out, const AbHom& d_in) {
  if (d_in.dst != d_out.src) throw AbelianError("boundary maps do not meet in the middle");
  AbHom comp = compose(d_out, d_in);
  if (!is_zero_hom(comp)) throw NotAChainComplex();

  HomologyResult h;
  h.cycles = kernel(d_out);
  h.kgens = h.cycles.group.gens();
  h.lift = smith_normal_form(h.cycles.embedding.m.hstack(d_out.src.relation_matrix()));

  IMat y(h.kgens, d_in.src.gens());
  for (std::size_t j = 0; j < d_in.src.gens(); ++j) {
    auto x = solve_with(h.lift, d_in.m.column(j));
    assert(x && "image of d_in must consist of cycles");
    for (std::size_t i = 0; i < h.kgens; ++i) y.at(i, j) = (*x)[i];
  }
  h.classes = quotient_by_columns(h.cycles.group, y);
  h.group = h.classes.group;
  return h;
}

// ---------------------------------------------------------------------------
// Integer chain complexes and cochains with coefficients.
// ---------------------------------------------------------------------------

// dims[k] = rank of C_k for k = 0..n; boundary[k] : C_k -> C_{k-1} for k >= 1.
struct IntChainComplex {
  std::vector<std::size_t> dims;
  std::vector<IMat> boundary;  // boundary[0] is unused

  std::size_t top() const { return dims.size() - 1; }
};

inline AbHom boundary_hom(const IntChainComplex& c, std::size_t k) {
  if (k == 0 || k > c.top())
    return zero_hom(k <= c.top() ? free_abelian(c.dims[k]) : free_abelian(0),
                    k >= 1 && k - 1 <= c.top() ? free_abelian(c.dims[k - 1]) : free_abelian(0));
  return make_hom(free_abelian(c.dims[k]), free_abelian(c.dims[k - 1]), c.boundary[k]);
}

inline HomologyResult chain_homology(const IntChainComplex& c, std::size_t k) {
  assert(k <= c.top());
  return homology(boundary_hom(c, k), boundary_hom(c, k + 1));
}

// A-valued functions on the k-cells.  Free coordinates come first, cell-major
// over the free generators of A; torsion coordinates follow, grouped by
// invariant factor of A so the combined factor list stays ascending.
struct CochainLayout {
  std::size_t cells = 0;
  FGAbelianGroup coeff;

  FGAbelianGroup group() const {
    FGAbelianGroup g;
    g.free_rank = cells * coeff.free_rank;
    for (const Int& d : coeff.torsion) g.torsion.insert(g.torsion.end(), cells, d);
    return g;
  }
  std::size_t index(std::size_t cell, std::size_t gen) const {
    assert(cell < cells && gen < coeff.gens());
    if (gen < coeff.free_rank) return cell * coeff.free_rank + gen;
    return cells * coeff.free_rank + (gen - coeff.free_rank) * cells + cell;
  }
};

inline CochainLayout cochain_layout(const IntChainComplex& c, std::size_t k,
                                    const FGAbelianGroup& a) {
  return {k <= c.top() ? c.dims[k] : 0, a};
}

inline AbHom cochain_coboundary(const IntChainComplex& c, std::size_t k,
                                const FGAbelianGroup& a) {
  CochainLayout lo = cochain_layout(c, k, a);
  CochainLayout hi = cochain_layout(c, k + 1, a);
  IMat m(hi.group().gens(), lo.group().gens());
  if (k + 1 <= c.top()) {
    const IMat& b = c.boundary[k + 1];
    for (std::size_t j = 0; j < hi.cells; ++j)
      for (std::size_t i = 0; i < lo.cells; ++i) {
        if (b.at(i, j) == 0) continue;
        for (std::size_t g = 0; g < a.gens(); ++g)
          m.at(hi.index(j, g), lo.index(i, g)) = b.at(i, j);
      }
  }
  return make_hom(lo.group(), hi.group(), std::move(m));
}

inline HomologyResult cochain_cohomology(const IntChainComplex& c, std::size_t k,
                                         const FGAbelianGroup& a) {
  AbHom out = cochain_coboundary(c, k, a);
  AbHom in = k == 0 ? zero_hom(free_abelian(0), out.src) : cochain_coboundary(c, k - 1, a);
  return homology(out, in);
}

}  // namespace elgf
