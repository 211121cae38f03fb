// Acceptance gate: one line per criterion, "PASS"/"FAIL" with the measured
// time; the process exits nonzero when any criterion fails.  All expected
// values are exact (or carry the stated floating-point tolerance) and every
// criterion enforces its wall-clock budget.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "elgf/pachner.hpp"
#include "elgf/thooft.hpp"

using namespace elgf;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& msg) {
    if (ok && !cond) {
      ok = false;
      why = msg;
    }
  }
};

long ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

bool is_free_of_rank(const FGAbelianGroup& g, std::size_t r) {
  return g.free_rank == r && g.torsion.empty();
}

// dual-graph BFS distances between 0-cells (edges through (n-1)-cells)
std::vector<int> dual_distances(const DualCellComplex& C, Cell src) {
  std::vector<int> dist(C.cell_count(0), -1);
  std::map<Cell, std::vector<Cell>> adj;
  for (std::size_t i = 0; i < C.cell_count(C.n() - 1); ++i) {
    auto ps = C.closure_cells(Cell{C.n() - 1, i}, 0);
    if (ps.size() == 2) {
      adj[ps[0]].push_back(ps[1]);
      adj[ps[1]].push_back(ps[0]);
    }
  }
  std::queue<Cell> q;
  dist[src.idx] = 0;
  q.push(src);
  while (!q.empty()) {
    Cell c = q.front();
    q.pop();
    for (Cell d : adj[c])
      if (dist[d.idx] < 0) {
        dist[d.idx] = dist[c.idx] + 1;
        q.push(d);
      }
  }
  return dist;
}

Int det(const IMat& a, const std::vector<std::size_t>& rows,
        const std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return a.at(rows[0], cols[0]);
  Int total = 0;
  std::vector<std::size_t> sub(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (a.at(rows[0], cols[j]) == 0) continue;
    std::vector<std::size_t> rest;
    for (std::size_t l = 0; l < cols.size(); ++l)
      if (l != j) rest.push_back(cols[l]);
    Int minor = det(a, sub, rest);
    total += (j % 2 == 0 ? minor : -minor) * a.at(rows[0], cols[j]);
  }
  return total;
}

void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(k);
  auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= n; ++i) {
      cur[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
}

Int minor_gcd(const IMat& a, std::size_t k) {
  std::vector<std::vector<std::size_t>> rsets, csets;
  subsets(a.rows(), k, rsets);
  subsets(a.cols(), k, csets);
  Int g = 0;
  for (const auto& r : rsets)
    for (const auto& c : csets) g = gcd(g, det(a, r, c));
  return iabs(g);
}

// --- criterion bodies -------------------------------------------------------

void criterion1(Checker& c) {
  DualCellComplex C = dualize(sphere_complex(2));
  CellularNetwork net(C);
  for (int k = -3; k <= 3; ++k) {
    BundleClass b = classify(net, winding_field(net, Int(k)));
    c.require(b.evaluation.coords.size() == 1 && b.evaluation.coords[0] == k,
              "winding " + std::to_string(k) + " classified as " + class_str(b));
  }
}

void criterion2(Checker& c) {
  DualCellComplex C = dualize(sphere_complex(2));
  CellularNetwork net(C);
  DeckGroup full = deck_group(C, U1Model{}, DeckRegime::full);
  DeckGroup core = deck_group(C, U1Model{}, DeckRegime::core);
  c.require(is_free_of_rank(full.kernel.group, 12),
            "full deck group is " + full.kernel.group.to_string() + ", expected Z^12");
  c.require(is_free_of_rank(core.kernel.group, 6),
            "core deck group is " + core.kernel.group.to_string() + ", expected Z^6");
  ClassKernel kf = class_kernel(net, U1Model{}, DeckRegime::full);
  ClassKernel kc = class_kernel(net, U1Model{}, DeckRegime::core);
  c.require(is_free_of_rank(kf.quotient.group, 1),
            "full classifying quotient is " + kf.quotient.group.to_string() + ", expected Z");
  c.require(is_free_of_rank(kc.quotient.group, 1),
            "core classifying quotient is " + kc.quotient.group.to_string() + ", expected Z");
}

template <class Model, class Eq>
void cocycle_check(Checker& c, const CellularNetwork& net, std::uint64_t seed, Eq same) {
  const DualCellComplex& C = net.complex();
  auto f = random_field(net, Model{}, seed);
  for (const OrientedTriple& t : C.oriented_triples()) {
    Cell v1{C.n(), t.n_cells[0]}, v2{C.n(), t.n_cells[1]}, v3{C.n(), t.n_cells[2]};
    for (Cell p : C.closure_cells(t.sigma, 0)) {
      auto lhs = f.model.multiply(clutch_value(net, f, v1, v2, p), clutch_value(net, f, v2, v3, p));
      auto rhs = clutch_value(net, f, v1, v3, p);
      c.require(same(lhs, rhs), "cocycle identity fails at " + cell_str(t.sigma) + " point " +
                                    cell_str(p) + " (seed " + std::to_string(seed) + ")");
    }
  }
}

void criterion3(Checker& c) {
  auto exact = [](const auto& a, const auto& b) { return a == b; };
  auto close = [](const SU2Model::Element& a, const SU2Model::Element& b) {
    return std::abs(a.w - b.w) <= 1e-8 && std::abs(a.x - b.x) <= 1e-8 &&
           std::abs(a.y - b.y) <= 1e-8 && std::abs(a.z - b.z) <= 1e-8;
  };
  for (int which = 0; which < 2; ++which) {
    DualCellComplex C = dualize(which == 0 ? sphere_complex(2) : epsilon_torus(2, 3));
    CellularNetwork net(C);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      switch (seed % 3) {
        case 0: cocycle_check<U1Model>(c, net, seed, exact); break;
        case 1: cocycle_check<ZNModel>(c, net, seed, exact); break;
        default: cocycle_check<SU2Model>(c, net, seed, close); break;
      }
      if (!c.ok) return;
    }
  }
}

void criterion4(Checker& c) {
  SimplicialComplex tri = epsilon_torus(2, 3);
  DualCellComplex C = dualize(tri);
  CellularNetwork net(C);
  DeckGroup D = deck_group(C, U1Model{}, DeckRegime::full);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto E = extend_with_zero_labels(net, random_field(net, U1Model{}, 100 + s));
    std::mt19937_64 rng(200 + s);
    IVec coords(D.kernel.group.gens());
    for (Int& x : coords) x = Int(rng() % 9) - 4;
    E = act(D, make_element(D.kernel.group, coords), E);
    auto reports = random_transport_walk(tri, E, 50, 300 + s);
    c.require(reports.size() == 50, "walk " + std::to_string(s) + " stalled early");
    for (std::size_t i = 0; i < reports.size(); ++i)
      c.require(classes_correspond(reports[i].class_before, reports[i].class_after,
                                   reports[i].orientation_flip),
                "class changed at step " + std::to_string(i + 1) + " of walk " +
                    std::to_string(s));
    if (!c.ok) return;
  }
}

void criterion5(Checker& c) {
  // two-point defect on the torus, g of order two
  auto t0 = Clock::now();
  {
    DualCellComplex C = dualize(epsilon_torus(2, 3));
    CellularNetwork net(C);
    Cell a{0, 0};
    auto dist = dual_distances(C, a);
    std::size_t far = 0;
    while (dist[far] != 3) ++far;
    Cell b{0, far};
    DefectLocus L{{{b, +1}, {a, -1}}};
    SeifertSurface S = find_seifert(C, L);
    auto E = extend_with_zero_labels(net, random_field(net, U1Model{}, 42));
    Rational g(1, 2);
    auto [Ed, D] = apply_thooft(net, E, L, S, g);

    IVec lz = locus_chain(C, L);
    std::size_t on = 0;
    for (const auto& [sigma, fe] : D.f) {
      if (lz[sigma.idx] != 0) {
        c.require(fe.value == g, "defect at " + cell_str(sigma) + " is not g^{+-1}");
        ++on;
      } else {
        c.require(fe.value == Rational(0), "cocycle defect off the locus at " + cell_str(sigma));
      }
    }
    c.require(on == 2, "expected exactly two defect cells");
    c.require(verify_gerbe(net, D).ok(), "gerbe conditions violated on the torus");

    // restriction off the locus is unchanged: labels and all legal
    // zero-linking holonomies
    c.require(Ed.labels == E.labels, "labels changed under the defect operator");
    for (std::size_t i = 0; i < C.cell_count(1); ++i) {
      Cell tau{1, i};
      auto tops = C.containing_cells(tau, 2);
      auto ps = C.closure_cells(tau, 0);
      NetworkWord w{{tops[0], ps[0], ps[1]}, {tops[1], ps[1], ps[0]}};
      Int lk;
      try {
        lk = linking_number(net, S, w);
      } catch (const WordMeetsDefect&) {
        continue;
      }
      if (lk == 0)
        c.require(holonomy(net, Ed.base, w) == holonomy(net, E.base, w),
                  "holonomy off the locus changed at " + cell_str(tau));
    }

    // involution restores the field bit-exactly
    auto [E2, D2] = apply_thooft(net, Ed, L, S, U1Model{}.inverse(g));
    c.require(E2.base.values == E.base.values && E2.labels == E.labels,
              "applying g then g^-1 does not restore the field");
  }
  long part_a = ms_since(t0);
  c.require(part_a <= 5000, "torus part took " + std::to_string(part_a) + " ms (budget 5000)");

  // edge-loop defect in the three-torus
  auto t1 = Clock::now();
  {
    DualCellComplex C = dualize(epsilon_torus(3, 3));
    CellularNetwork net(C);
    IntChainComplex chain = C.chain_complex();
    Cell carrier{2, 0};
    DefectLocus L;
    for (std::size_t r = 0; r < chain.dims[1]; ++r)
      if (chain.boundary[2].at(r, carrier.idx) != 0)
        L.cells.push_back({Cell{1, r}, int(chain.boundary[2].at(r, carrier.idx))});
    SeifertSurface S = find_seifert(C, L);
    auto E = zero_extended_field(net, U1Model{});
    auto [Ed, D] = apply_thooft(net, E, L, S, Rational(1, 2));
    auto rep = verify_gerbe(net, D);
    c.require(rep.violations.empty(),
              "three-torus gerbe check reported " + std::to_string(rep.violations.size()) +
                  " violations");
  }
  long part_b = ms_since(t1);
  c.require(part_b <= 60000,
            "three-torus part took " + std::to_string(part_b) + " ms (budget 60000)");
}

void criterion6(Checker& c) {
  DualCellComplex C = dualize(sphere_complex(4));
  CellularNetwork net(C);
  ClassKernel K = class_kernel(net, SU2Model{}, DeckRegime::full);
  std::mt19937_64 rng(77);
  std::size_t actions = 0;
  for (int k = -2; k <= 2; ++k) {
    auto E = top_label_field(net, Int(k));
    BundleClass b = classify(net, E);
    c.require(b.secondary.coords.size() == 1 && b.secondary.coords[0] == k,
              "top label " + std::to_string(k) + " classified as " + class_str(b));
    for (int a = 0; a < 100; ++a) {
      IVec kc(K.kernel.group.gens());
      for (Int& x : kc) x = Int(rng() % 7) - 3;
      AbElement d = make_element(K.deck.kernel.group, K.kernel.embedding.m.apply(kc));
      BundleClass ba = classify(net, act(K.deck, d, E));
      c.require(ba.secondary.coords.size() == 1 && ba.secondary.coords[0] == k,
                "deck action moved the secondary class of label " + std::to_string(k));
      ++actions;
    }
    if (!c.ok) return;
  }
  c.require(actions == 500, "expected 100 deck actions per label");
}

void criterion7(Checker& c) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500 && c.ok; ++t) {
    std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    IMat A(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) A.at(i, j) = Int(rng() % 19) - 9;
    SNFResult s = smith_normal_form(A);
    c.require(s.u * A * s.v == s.d, "U*A*V != D");
    c.require(s.u * s.uinv == IMat::identity(rows) && s.v * s.vinv == IMat::identity(cols),
              "recorded inverses are wrong");
    bool diag = true;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (i != j && s.d.at(i, j) != 0) diag = false;
    c.require(diag, "D is not diagonal");
    for (std::size_t i = 0; i + 1 < std::min(rows, cols); ++i)
      c.require(s.diag(i + 1) == 0 || (s.diag(i) != 0 && s.diag(i + 1) % s.diag(i) == 0),
                "invariant factors do not divide in order");
    Int prod = 1;
    for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
      prod *= s.diag(k - 1);
      c.require(minor_gcd(A, k) == iabs(prod), "k-minor gcd misses the invariant product");
    }
  }

  auto groups = [](const SimplicialComplex& tri) {
    IntChainComplex cc = tri.chain_complex();
    std::vector<FGAbelianGroup> h;
    for (std::size_t k = 0; k <= cc.top(); ++k) h.push_back(chain_homology(cc, k).group);
    return h;
  };
  auto expect = [&](const std::vector<FGAbelianGroup>& h, const std::vector<std::size_t>& ranks,
                    const std::string& name) {
    c.require(h.size() == ranks.size(), name + ": wrong number of homology degrees");
    for (std::size_t k = 0; k < std::min(h.size(), ranks.size()); ++k)
      c.require(is_free_of_rank(h[k], ranks[k]),
                name + ": H" + std::to_string(k) + " = " + h[k].to_string());
  };
  expect(groups(sphere_complex(2)), {1, 0, 1}, "boundary of the 3-simplex");
  expect(groups(epsilon_torus(2, 3)), {1, 2, 1}, "two-torus");
  expect(groups(epsilon_torus(3, 3)), {1, 3, 3, 1}, "three-torus");
}

void criterion8(Checker& c) {
  std::vector<std::pair<std::string, SimplicialComplex>> all;
  for (std::size_t n = 2; n <= 4; ++n)
    all.emplace_back("sphere " + std::to_string(n), sphere_complex(n));
  for (std::size_t n = 2; n <= 3; ++n)
    all.emplace_back("torus " + std::to_string(n), epsilon_torus(n, 3));
  for (const auto& [name, tri] : all) {
    DualCellComplex C = dualize(tri);
    const std::size_t n = C.n();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < C.cell_count(k); ++i) {
        Cell cell{k, i};
        c.require(C.containing_cells(cell, n).size() == n - k + 1,
                  name + ": " + cell_str(cell) + " misses the top-cell count");
        c.require(C.containing_cells(cell, k + 1).size() == n - k + 1,
                  name + ": " + cell_str(cell) + " misses the coface count");
      }
    if (!c.ok) return;
  }
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](int num, const std::string& name, long budget_ms, auto body) {
    Checker c;
    auto t0 = Clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("unexpected exception: ") + e.what());
    }
    long ms = ms_since(t0);
    if (c.ok && ms > budget_ms)
      c.require(false, "took " + std::to_string(ms) + " ms, budget " +
                           std::to_string(budget_ms) + " ms");
    std::cout << "criterion " << num << " — " << name << ": " << (c.ok ? "PASS" : "FAIL") << " ["
              << ms << " ms]";
    if (!c.ok) std::cout << " — " << c.why;
    std::cout << std::endl;
    if (!c.ok) ++failures;
  };

  run(1, "surface winding classification", 1000, criterion1);
  run(2, "deck-group ranks and classifying quotients", 1000, criterion2);
  run(3, "cocycle identity on random fields", 5000, criterion3);
  run(4, "class constancy along bistellar walks", 60000, criterion4);
  run(5, "defect operators and gerbe conditions", 65000, criterion5);
  run(6, "secondary classes and kernel invariance", 10000, criterion6);
  run(7, "integer normal forms and homology", 10000, criterion7);
  run(8, "dual incidence counts", 10000, criterion8);

  if (failures) std::cout << failures << " criterion(s) failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
