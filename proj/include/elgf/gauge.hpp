#pragma once

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "elgf/dual.hpp"
#include "elgf/groups.hpp"

namespace elgf {

class GaugeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class InvalidFlag : public GaugeError {
public:
  explicit InvalidFlag(const std::string& why) : GaugeError("invalid flag: " + why) {}
};
class NotAdjacent : public GaugeError {
public:
  NotAdjacent() : GaugeError("cells are not adjacent through a shared evaluation point") {}
};

// ---------------------------------------------------------------------------
// The evaluation network: one edge per (cell of dimension >= 1, 0-cell in its
// closure).  Edge order is deterministic: cells by (dim, index), then
// 0-cells by index.
// ---------------------------------------------------------------------------

struct NetworkEdge {
  Cell cell;    // dimension >= 1
  Cell vertex;  // 0-cell in closure(cell)
  auto operator<=>(const NetworkEdge&) const = default;
};

class CellularNetwork {
public:
  explicit CellularNetwork(const DualCellComplex& complex) : complex_(&complex) {
    for (std::size_t k = 1; k <= complex.n(); ++k)
      for (std::size_t i = 0; i < complex.cell_count(k); ++i) {
        Cell c{k, i};
        for (Cell p : complex.closure_cells(c, 0)) {
          index_[{c, p}] = edges_.size();
          edges_.push_back({c, p});
        }
      }
  }

  const DualCellComplex& complex() const { return *complex_; }
  const std::vector<NetworkEdge>& edges() const { return edges_; }

  std::size_t edge_index(Cell cell, Cell vertex) const {
    auto it = index_.find({cell, vertex});
    if (it == index_.end())
      throw InvalidFlag("no network edge for that cell/vertex pair");
    return it->second;
  }

private:
  const DualCellComplex* complex_;
  std::vector<NetworkEdge> edges_;
  std::map<std::pair<Cell, Cell>, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// A lattice field: one group value per network edge, read as the transport
// from the 0-cell up into the cell.
// ---------------------------------------------------------------------------

template <class Model>
struct StandardLatticeField {
  Model model;
  std::vector<typename Model::Element> values;  // by network edge index

  const typename Model::Element& value(const CellularNetwork& net, Cell cell, Cell vertex) const {
    return values.at(net.edge_index(cell, vertex));
  }
};

template <class Model>
StandardLatticeField<Model> identity_field(const CellularNetwork& net, Model m) {
  StandardLatticeField<Model> f{std::move(m), {}};
  f.values.assign(net.edges().size(), f.model.identity());
  return f;
}

template <class Model>
StandardLatticeField<Model> random_field(const CellularNetwork& net, Model m,
                                         std::uint64_t seed) {
  StandardLatticeField<Model> f{std::move(m), {}};
  std::mt19937_64 rng(seed);
  f.values.reserve(net.edges().size());
  for (std::size_t i = 0; i < net.edges().size(); ++i)
    f.values.push_back(f.model.random_element(rng));
  return f;
}

// ---------------------------------------------------------------------------
// Glueing and clutching maps derived from a field.
// ---------------------------------------------------------------------------

// transition of the flag (small, big) evaluated at the 0-cell p:
//   value(p -> small)^{-1} * value(p -> big)
template <class Model>
typename Model::Element glue_value(const CellularNetwork& net,
                                   const StandardLatticeField<Model>& f, Cell small, Cell big,
                                   Cell p) {
  const DualCellComplex& C = net.complex();
  if (small.k < 1 || small.k >= big.k || big.k > C.n())
    throw InvalidFlag("flag cells must have increasing dimensions >= 1");
  if (!C.in_closure(small, big)) throw InvalidFlag("first cell not in the closure of the second");
  if (p.k != 0 || !C.in_closure(p, small))
    throw InvalidFlag("evaluation point must be a 0-cell in the closure of the flag");
  return f.model.multiply(f.model.inverse(f.value(net, small, p)), f.value(net, big, p));
}

// clutching value of the ordered pair of adjacent top cells (v, w) at the
// 0-cell p:  value(p -> v)^{-1} * value(p -> w)
template <class Model>
typename Model::Element clutch_value(const CellularNetwork& net,
                                     const StandardLatticeField<Model>& f, Cell v, Cell w,
                                     Cell p) {
  const DualCellComplex& C = net.complex();
  std::size_t n = C.n();
  if (v.k != n || w.k != n || p.k != 0 || v == w) throw NotAdjacent();
  Simplex joint{C.simplex_of(v)[0], C.simplex_of(w)[0]};
  std::sort(joint.begin(), joint.end());
  if (!C.triangulation().contains(joint)) throw NotAdjacent();
  if (!C.in_closure(p, v) || !C.in_closure(p, w)) throw NotAdjacent();
  return f.model.multiply(f.model.inverse(f.value(net, v, p)), f.value(net, w, p));
}

// ---------------------------------------------------------------------------
// Gauge transformations: a group value at every cell (0-cells included).
// ---------------------------------------------------------------------------

template <class Model>
struct GaugeAssignment {
  Model model;
  std::map<Cell, typename Model::Element> at;

  const typename Model::Element& operator()(Cell c) const { return at.at(c); }
};

template <class Model>
GaugeAssignment<Model> identity_gauge(const DualCellComplex& C, Model m) {
  GaugeAssignment<Model> g{std::move(m), {}};
  for (Cell c : C.all_cells()) g.at[c] = g.model.identity();
  return g;
}

template <class Model>
GaugeAssignment<Model> random_gauge(const DualCellComplex& C, Model m, std::uint64_t seed) {
  GaugeAssignment<Model> g{std::move(m), {}};
  std::mt19937_64 rng(seed);
  for (Cell c : C.all_cells()) g.at[c] = g.model.random_element(rng);
  return g;
}

// value'(p -> c) = g(c) * value(p -> c) * g(p)^{-1}
template <class Model>
StandardLatticeField<Model> apply_gauge(const CellularNetwork& net,
                                        const StandardLatticeField<Model>& f,
                                        const GaugeAssignment<Model>& g) {
  StandardLatticeField<Model> out{f.model, {}};
  out.values.reserve(f.values.size());
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const NetworkEdge& e = net.edges()[i];
    out.values.push_back(
        f.model.multiply(g(e.cell), f.model.multiply(f.values[i], f.model.inverse(g(e.vertex)))));
  }
  return out;
}

// compose as maps: (g * h)(c) = g(c) * h(c)
template <class Model>
GaugeAssignment<Model> compose_gauges(const GaugeAssignment<Model>& g,
                                      const GaugeAssignment<Model>& h) {
  GaugeAssignment<Model> out{g.model, {}};
  for (const auto& [c, v] : g.at) out.at[c] = g.model.multiply(v, h.at.at(c));
  return out;
}

// ---------------------------------------------------------------------------
// Words in the network: each step crosses one cell, entering and leaving
// through 0-cells of its closure.
// ---------------------------------------------------------------------------

struct WalkStep {
  Cell cell;
  Cell from, to;  // 0-cells in closure(cell)
};

using NetworkWord = std::vector<WalkStep>;

inline void check_word(const CellularNetwork& net, const NetworkWord& w) {
  const DualCellComplex& C = net.complex();
  for (const WalkStep& s : w) {
    if (s.cell.k < 1 || s.from.k != 0 || s.to.k != 0 || !C.in_closure(s.from, s.cell) ||
        !C.in_closure(s.to, s.cell))
      throw GaugeError("word step endpoints must be 0-cells in the closure of its cell");
  }
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i].to != w[i + 1].from) throw GaugeError("word steps are not chained");
}

inline bool word_is_closed(const NetworkWord& w) {
  return !w.empty() && w.back().to == w.front().from;
}

// transport along the word; later steps act on the left
template <class Model>
typename Model::Element holonomy(const CellularNetwork& net, const StandardLatticeField<Model>& f,
                                 const NetworkWord& w) {
  check_word(net, w);
  typename Model::Element acc = f.model.identity();
  for (const WalkStep& s : w) {
    auto step = f.model.multiply(f.model.inverse(f.value(net, s.cell, s.to)),
                                 f.value(net, s.cell, s.from));
    acc = f.model.multiply(step, acc);
  }
  return acc;
}

}  // namespace elgf
