#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "elgf/abelian.hpp"
#include "elgf/matrix.hpp"

namespace elgf {

using Vertex = int;
using Simplex = std::vector<Vertex>;  // strictly ascending vertex ids

class ComplexError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class InvalidTriangulation : public ComplexError {
public:
  using ComplexError::ComplexError;
};
class PeriodTooSmall : public ComplexError {
public:
  PeriodTooSmall() : ComplexError("lattice period too small for a simplicial torus (need m >= 3)") {}
};
class NotOriented : public ComplexError {
public:
  NotOriented() : ComplexError("complex carries no orientation") {}
};

struct ValidationReport {
  bool pure = false;
  bool pseudomanifold = false;
  bool connected = false;
  bool orientable = false;
  std::vector<int> orientation;  // per facet, set when orientable
  std::vector<std::string> failures;

  bool ok() const { return pure && pseudomanifold && connected && failures.empty(); }
};

// Closed P.L. triangulation given by its facet list.  All faces, boundary
// matrices, facet adjacency and a compatible orientation (when one exists)
// are derived on construction; instances are immutable afterwards.
class SimplicialComplex {
public:
  SimplicialComplex(std::vector<Simplex> facet_list, std::size_t vertex_count = 0) {
    if (facet_list.empty()) throw InvalidTriangulation("empty facet list");
    std::size_t maxlen = 0;
    for (Simplex& f : facet_list) {
      std::sort(f.begin(), f.end());
      if (std::adjacent_find(f.begin(), f.end()) != f.end())
        throw InvalidTriangulation("facet repeats a vertex");
      if (f.front() < 0) throw InvalidTriangulation("negative vertex id");
      maxlen = std::max(maxlen, f.size());
    }
    std::sort(facet_list.begin(), facet_list.end());
    if (std::adjacent_find(facet_list.begin(), facet_list.end()) != facet_list.end())
      throw InvalidTriangulation("duplicate facet");
    n_ = maxlen - 1;
    Vertex maxid = 0;
    for (const Simplex& f : facet_list) maxid = std::max(maxid, f.back());
    vertices_ = std::max<std::size_t>(vertex_count, maxid + 1);
    if (vertex_count > 0 && std::size_t(maxid) >= vertex_count)
      throw InvalidTriangulation("vertex id out of declared range");

    report_.pure = std::all_of(facet_list.begin(), facet_list.end(),
                               [&](const Simplex& f) { return f.size() == maxlen; });
    if (!report_.pure) report_.failures.push_back("facets of mixed dimension");

    faces_.assign(n_ + 1, {});
    faces_[n_] = std::move(facet_list);
    if (report_.pure) {
      collect_faces();
      build_boundaries();
      check_pseudomanifold();
      check_connected();
      if (report_.pseudomanifold && report_.connected) orient();
    }
    index_.resize(faces_.size());
    for (std::size_t k = 0; k < faces_.size(); ++k)
      for (std::size_t i = 0; i < faces_[k].size(); ++i) index_[k][faces_[k][i]] = i;
  }

  std::size_t dim() const { return n_; }
  std::size_t vertex_count() const { return vertices_; }
  const ValidationReport& report() const { return report_; }

  const std::vector<Simplex>& simplices(std::size_t k) const { return faces_.at(k); }
  std::size_t count(std::size_t k) const { return k < faces_.size() ? faces_[k].size() : 0; }
  const std::vector<Simplex>& facets() const { return faces_[n_]; }

  bool contains(const Simplex& s) const {
    if (s.empty() || s.size() > n_ + 1) return false;
    return index_[s.size() - 1].count(s) > 0;
  }
  std::size_t index_of(const Simplex& s) const {
    auto it = index_.at(s.size() - 1).find(s);
    if (it == index_[s.size() - 1].end()) throw ComplexError("simplex not in complex");
    return it->second;
  }

  // facets containing the given simplex
  const std::vector<std::size_t>& cofacets(std::size_t k, std::size_t i) const {
    return cofacets_.at(k).at(i);
  }

  // signed simplicial boundary matrix, rows (k-1)-simplices, cols k-simplices
  const IMat& boundary_matrix(std::size_t k) const { return boundaries_.at(k); }

  IntChainComplex chain_complex() const {
    IntChainComplex c;
    for (std::size_t k = 0; k <= n_; ++k) c.dims.push_back(count(k));
    c.boundary.resize(n_ + 1);
    for (std::size_t k = 1; k <= n_; ++k) c.boundary[k] = boundaries_[k];
    return c;
  }

  int facet_orientation(std::size_t f) const {
    if (!report_.orientable) throw NotOriented();
    return report_.orientation.at(f);
  }

  SimplicialComplex with_reversed_orientation() const {
    SimplicialComplex c = *this;
    for (int& s : c.report_.orientation) s = -s;
    return c;
  }

  bool operator==(const SimplicialComplex& o) const {
    return n_ == o.n_ && vertices_ == o.vertices_ && faces_[n_] == o.faces_[n_];
  }

private:
  void collect_faces() {
    for (std::size_t k = 0; k < n_; ++k) {
      std::vector<Simplex> all;
      for (const Simplex& f : faces_[n_]) {
        std::vector<bool> pick(f.size(), false);
        std::fill(pick.end() - (k + 1), pick.end(), true);
        do {
          Simplex s;
          for (std::size_t i = 0; i < f.size(); ++i)
            if (pick[i]) s.push_back(f[i]);
          all.push_back(std::move(s));
        } while (std::next_permutation(pick.begin(), pick.end()));
      }
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
      faces_[k] = std::move(all);
    }
    cofacets_.assign(n_ + 1, {});
    for (std::size_t k = 0; k <= n_; ++k) {
      std::map<Simplex, std::size_t> idx;
      for (std::size_t i = 0; i < faces_[k].size(); ++i) idx[faces_[k][i]] = i;
      cofacets_[k].assign(faces_[k].size(), {});
      for (std::size_t fi = 0; fi < faces_[n_].size(); ++fi) {
        const Simplex& f = faces_[n_][fi];
        std::vector<bool> pick(f.size(), false);
        std::fill(pick.end() - (k + 1), pick.end(), true);
        do {
          Simplex s;
          for (std::size_t i = 0; i < f.size(); ++i)
            if (pick[i]) s.push_back(f[i]);
          cofacets_[k][idx[s]].push_back(fi);
        } while (std::next_permutation(pick.begin(), pick.end()));
      }
    }
  }

  void build_boundaries() {
    boundaries_.resize(n_ + 1);
    for (std::size_t k = 1; k <= n_; ++k) {
      std::map<Simplex, std::size_t> idx;
      for (std::size_t i = 0; i < faces_[k - 1].size(); ++i) idx[faces_[k - 1][i]] = i;
      IMat b(faces_[k - 1].size(), faces_[k].size());
      for (std::size_t j = 0; j < faces_[k].size(); ++j) {
        const Simplex& s = faces_[k][j];
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
          Simplex face = s;
          face.erase(face.begin() + pos);
          b.at(idx[face], j) = (pos % 2 == 0) ? 1 : -1;
        }
      }
      boundaries_[k] = std::move(b);
    }
  }

  void check_pseudomanifold() {
    report_.pseudomanifold = true;
    if (n_ == 0) {
      report_.pseudomanifold = false;
      report_.failures.push_back("dimension 0 unsupported");
      return;
    }
    for (std::size_t i = 0; i < faces_[n_ - 1].size(); ++i)
      if (cofacets_[n_ - 1][i].size() != 2) {
        report_.pseudomanifold = false;
        std::ostringstream os;
        os << "ridge #" << i << " lies in " << cofacets_[n_ - 1][i].size() << " facets";
        report_.failures.push_back(os.str());
      }
  }

  void check_connected() {
    std::map<Simplex, std::size_t> ridx;
    for (std::size_t i = 0; i < faces_[n_ - 1].size(); ++i) ridx[faces_[n_ - 1][i]] = i;
    std::vector<int> seen(faces_[n_].size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
      std::size_t f = q.front();
      q.pop();
      const Simplex& fs = faces_[n_][f];
      for (std::size_t pos = 0; pos < fs.size(); ++pos) {
        Simplex r = fs;
        r.erase(r.begin() + pos);
        for (std::size_t g : cofacets_[n_ - 1][ridx[r]])
          if (!seen[g]) {
            seen[g] = 1;
            ++reached;
            q.push(g);
          }
      }
    }
    report_.connected = reached == faces_[n_].size();
    if (!report_.connected) report_.failures.push_back("facet adjacency graph disconnected");
  }

  void orient() {
    // propagate facet signs; adjacent facets must induce opposite signs on
    // their shared ridge
    std::vector<int> eps(faces_[n_].size(), 0);
    std::map<Simplex, std::size_t> ridx;
    for (std::size_t i = 0; i < faces_[n_ - 1].size(); ++i) ridx[faces_[n_ - 1][i]] = i;
    auto ridge_sign = [&](std::size_t f, std::size_t ri) {
      const Simplex& fs = faces_[n_][f];
      const Simplex& rs = faces_[n_ - 1][ri];
      for (std::size_t pos = 0; pos < fs.size(); ++pos) {
        Simplex cand = fs;
        cand.erase(cand.begin() + pos);
        if (cand == rs) return pos % 2 == 0 ? 1 : -1;
      }
      throw ComplexError("ridge not in facet");
    };
    std::queue<std::size_t> q;
    eps[0] = 1;
    q.push(0);
    bool consistent = true;
    while (!q.empty() && consistent) {
      std::size_t f = q.front();
      q.pop();
      const Simplex& fs = faces_[n_][f];
      for (std::size_t pos = 0; pos < fs.size(); ++pos) {
        Simplex r = fs;
        r.erase(r.begin() + pos);
        std::size_t ri = ridx[r];
        for (std::size_t g : cofacets_[n_ - 1][ri]) {
          if (g == f) continue;
          int need = -eps[f] * ridge_sign(f, ri) * ridge_sign(g, ri);
          if (eps[g] == 0) {
            eps[g] = need;
            q.push(g);
          } else if (eps[g] != need) {
            consistent = false;
          }
        }
      }
    }
    report_.orientable = consistent;
    if (consistent) report_.orientation = std::move(eps);
  }

  std::size_t n_ = 0;
  std::size_t vertices_ = 0;
  std::vector<std::vector<Simplex>> faces_;
  std::vector<std::vector<std::vector<std::size_t>>> cofacets_;
  std::vector<IMat> boundaries_;
  std::vector<std::map<Simplex, std::size_t>> index_;
  ValidationReport report_;
};

inline ValidationReport validate_triangulation(const SimplicialComplex& k) { return k.report(); }

// boundary of the (n+1)-simplex on vertices 0..n+1
inline SimplicialComplex sphere_complex(std::size_t n) {
  std::vector<Simplex> facets;
  for (std::size_t drop = 0; drop <= n + 1; ++drop) {
    Simplex f;
    for (std::size_t v = 0; v <= n + 1; ++v)
      if (v != drop) f.push_back(Vertex(v));
    facets.push_back(std::move(f));
  }
  return SimplicialComplex(std::move(facets), n + 2);
}

// Freudenthal triangulation of the n-torus with period m per axis
inline SimplicialComplex epsilon_torus(std::size_t n, std::size_t m) {
  if (m < 3) throw PeriodTooSmall();
  if (n < 1) throw ComplexError("torus dimension must be at least 1");
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  auto vertex_id = [&](const std::vector<std::size_t>& x) {
    Vertex id = 0;
    for (std::size_t i = n; i-- > 0;) id = Vertex(id * m + x[i]);
    return id;
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Simplex> facets;
  for (std::size_t base = 0; base < total; ++base) {
    std::vector<std::size_t> x(n);
    for (std::size_t i = 0, b = base; i < n; ++i, b /= m) x[i] = b % m;
    std::sort(perm.begin(), perm.end());
    do {
      std::vector<std::size_t> y = x;
      Simplex f = {vertex_id(y)};
      for (std::size_t step : perm) {
        y[step] = (y[step] + 1) % m;
        f.push_back(vertex_id(y));
      }
      facets.push_back(std::move(f));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return SimplicialComplex(std::move(facets), total);
}

// ---------------------------------------------------------------------------
// Facet-list text format: `dim n vertices V` then one facet per line.
// ---------------------------------------------------------------------------

inline std::string facet_file(const SimplicialComplex& k) {
  std::ostringstream os;
  os << "dim " << k.dim() << " vertices " << k.vertex_count() << "\n";
  for (const Simplex& f : k.facets()) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
    os << "\n";
  }
  return os.str();
}

inline SimplicialComplex parse_facet_file(const std::string& text) {
  std::istringstream in(text);
  std::string kw1, kw2;
  std::size_t n = 0, v = 0;
  if (!(in >> kw1 >> n >> kw2 >> v) || kw1 != "dim" || kw2 != "vertices")
    throw InvalidTriangulation("facet file must start with 'dim n vertices V'");
  std::vector<Simplex> facets;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    Simplex f;
    Vertex x;
    while (ls >> x) f.push_back(x);
    if (f.empty()) continue;
    if (f.size() != n + 1) throw InvalidTriangulation("facet has wrong vertex count");
    facets.push_back(std::move(f));
  }
  return SimplicialComplex(std::move(facets), v);
}

// FNV-1a over the canonical facet serialization; keys field files to complexes.
inline std::string complex_hash(const SimplicialComplex& k) {
  std::string s = facet_file(k);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace elgf
