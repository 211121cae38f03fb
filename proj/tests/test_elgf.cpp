#include <random>
#include <set>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "elgf/elgf.hpp"

using namespace elgf;

namespace {

// minimal 6-vertex projective plane (non-orientable control surface)
SimplicialComplex projective_plane() {
  return SimplicialComplex({{0, 1, 4},
                            {0, 1, 5},
                            {0, 2, 3},
                            {0, 2, 5},
                            {0, 3, 4},
                            {1, 2, 3},
                            {1, 2, 4},
                            {1, 3, 5},
                            {2, 4, 5},
                            {3, 4, 5}});
}

AbElement random_deck_element(const DeckGroup& D, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  IVec c(D.kernel.group.gens(), Int(0));
  for (auto& x : c) x = coeff(rng);
  return make_element(D.kernel.group, c);
}

// relation rows must annihilate every deck subgroup generator
void check_relations_annihilate(const DeckGroup& D) {
  const IMat& emb = D.kernel.embedding.m;
  for (std::size_t r = 0; r < D.relations.m.rows(); ++r)
    for (std::size_t j = 0; j < emb.cols(); ++j) {
      Int acc = 0;
      for (std::size_t i = 0; i < D.layout.width; ++i)
        acc += D.relations.m.at(r, i) * emb.at(i, j);
      REQUIRE(acc == 0);
    }
}

}  // namespace

TEST_CASE("deck groups of the tetrahedral sphere over the circle model") {
  DualCellComplex C = dualize(sphere_complex(2));
  U1Model u1;

  DeckGroup full = deck_group(C, u1, DeckRegime::full);
  CHECK(full.layout.width == 12);
  CHECK(full.relations.m.rows() == 0);
  CHECK(full.kernel.group == free_abelian(12));
  for (const LabelSlot& s : full.layout.slots) {
    CHECK(s.small.k == 1);
    CHECK(s.big.k == 2);
    CHECK(s.subcell == s.small);
    CHECK(s.width == 1);
  }

  DeckGroup core = deck_group(C, u1, DeckRegime::core);
  CHECK(core.layout.width == 12);
  CHECK(core.relations.m.rows() == 6);
  CHECK(core.kernel.group == free_abelian(6));
  for (const std::string& a : core.relations.address)
    CHECK(a.find("pair symmetry") != std::string::npos);
  check_relations_annihilate(full);
  check_relations_annihilate(core);
}

TEST_CASE("deck groups of the triangulated torus over the circle model") {
  DualCellComplex C = dualize(epsilon_torus(2, 3));
  U1Model u1;

  DeckGroup full = deck_group(C, u1, DeckRegime::full);
  CHECK(full.layout.width == 54);
  CHECK(full.kernel.group == free_abelian(54));

  DeckGroup core = deck_group(C, u1, DeckRegime::core);
  CHECK(core.layout.width == 54);
  CHECK(core.relations.m.rows() == 27);
  CHECK(core.kernel.group == free_abelian(27));
  check_relations_annihilate(core);
}

TEST_CASE("deck groups of the three-sphere over the circle model") {
  DualCellComplex C = dualize(sphere_complex(3));
  U1Model u1;

  DeckGroup full = deck_group(C, u1, DeckRegime::full);
  // slots: 30 over (1,2)-flags, 30 over (1,3)-flags, 60 over (2,3)-flags
  CHECK(full.layout.width == 120);
  std::size_t chains = 0, circles = 0;
  for (const std::string& a : full.relations.address) {
    if (a.find("chain") == 0) ++chains;
    if (a.find("boundary at subcell") != std::string::npos) ++circles;
  }
  CHECK(chains == 60);
  CHECK(circles == 20);
  CHECK(full.relations.m.rows() == 80);
  check_relations_annihilate(full);

  DeckGroup core = deck_group(C, u1, DeckRegime::core);
  CHECK(core.layout.width == 60);
  // 30 symmetry rows, 10 triple rows, 20 boundary circles
  CHECK(core.relations.m.rows() == 60);
  check_relations_annihilate(core);

  // the full labels of a deck element project onto a core deck element
  std::mt19937_64 rng(2024);
  DeckGroup coreD = core;
  for (int trial = 0; trial < 10; ++trial) {
    AbElement d = random_deck_element(full, rng);
    CellularNetwork net(C);
    ExtendedField<U1Model> E = act(full, d, zero_extended_field(net, u1));
    CHECK(validate_extended(C, E).ok());
    CoreField<U1Model> K = core_of(C, E);
    CHECK(validate_core(C, K).ok());
    CHECK_NOTHROW(deck_from_ambient(coreD, K.labels));
  }
}

TEST_CASE("deck groups of the four-sphere over the quaternion model") {
  DualCellComplex C = dualize(sphere_complex(4));
  SU2Model su2;

  DeckGroup full = deck_group(C, su2, DeckRegime::full);
  CHECK(full.layout.width == 30);
  CHECK(full.relations.m.rows() == 0);
  CHECK(full.kernel.group == free_abelian(30));
  for (const LabelSlot& s : full.layout.slots) {
    CHECK(s.small.k == 3);
    CHECK(s.big.k == 4);
    CHECK(s.subcell == s.small);
    CHECK(s.k == 3);
  }

  DeckGroup core = deck_group(C, su2, DeckRegime::core);
  CHECK(core.layout.width == 30);
  CHECK(core.relations.m.rows() == 15);
  CHECK(core.kernel.group == free_abelian(15));
  check_relations_annihilate(core);
}

TEST_CASE("cyclic models carry no labels at all") {
  DualCellComplex C = dualize(sphere_complex(2));
  ZNModel z7{7};
  DeckGroup full = deck_group(C, z7, DeckRegime::full);
  DeckGroup core = deck_group(C, z7, DeckRegime::core);
  CHECK(full.layout.width == 0);
  CHECK(core.layout.width == 0);
  CHECK(full.kernel.group.is_trivial());
  CHECK(core.kernel.group.is_trivial());
}

TEST_CASE("dimension guard on deck groups") {
  DualCellComplex C = dualize(sphere_complex(5));
  CHECK_THROWS_AS(deck_group(C, U1Model{}, DeckRegime::full), DimensionUnsupported);
}

TEST_CASE("validation pinpoints the violated relation") {
  DualCellComplex C3 = dualize(sphere_complex(3));
  CellularNetwork net3(C3);
  U1Model u1;

  // a single flag label breaks chain additivity
  ExtendedField<U1Model> E = zero_extended_field(net3, u1);
  const LabelSlot* flag12 = nullptr;
  for (const LabelSlot& s : E.layout.slots)
    if (s.small.k == 1 && s.big.k == 2) {
      flag12 = &s;
      break;
    }
  REQUIRE(flag12 != nullptr);
  E.labels[flag12->offset] = 1;
  ExtendedValidation rep = validate_extended(C3, E);
  REQUIRE_FALSE(rep.ok());
  for (const std::string& v : rep.violations) CHECK(v.find("chain") == 0);
  CHECK_THROWS_AS(core_of(C3, E), InvalidExtendedField);

  // a single core label breaks pair symmetry
  DualCellComplex C2 = dualize(sphere_complex(2));
  CellularNetwork net2(C2);
  CoreField<U1Model> K = zero_core_field(net2, u1);
  K.labels[0] = 1;
  ExtendedValidation rep2 = validate_core(C2, K);
  REQUIRE(rep2.violations.size() == 1);
  CHECK(rep2.violations[0].find("pair symmetry") != std::string::npos);

  // width mismatch is reported, not crashed on
  K.labels.pop_back();
  CHECK_FALSE(validate_core(C2, K).ok());
}

TEST_CASE("the deck action is a free additive torsor action") {
  DualCellComplex C = dualize(epsilon_torus(2, 3));
  CellularNetwork net(C);
  U1Model u1;
  DeckGroup D = deck_group(C, u1, DeckRegime::core);
  CoreField<U1Model> K0 = zero_core_field(net, u1);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    AbElement d1 = random_deck_element(D, rng);
    AbElement d2 = random_deck_element(D, rng);
    CoreField<U1Model> once = act(D, d1, act(D, d2, K0));
    CoreField<U1Model> both = act(D, add(d1, d2), K0);
    CHECK(once.labels == both.labels);
    CHECK(validate_core(C, once).ok());

    // freeness: acting by a nonzero element moves the labels
    if (!d1.is_zero()) CHECK(act(D, d1, K0).labels != K0.labels);

    // round trip through the ambient coordinates
    AbElement back = deck_from_ambient(D, act(D, d1, K0).labels);
    CHECK(back.coords == d1.coords);
  }

  // ambient vectors violating the relations are rejected
  IVec bad(D.layout.width, Int(0));
  bad[0] = 1;
  CHECK_THROWS_AS(deck_from_ambient(D, bad), NotInDeckGroup);
  CHECK_THROWS_AS(deck_from_ambient(D, IVec(3, Int(0))), NotInDeckGroup);

  // elements of a different group are rejected
  DeckGroup full = deck_group(C, u1, DeckRegime::full);
  AbElement wrong = zero_element(full.kernel.group);
  CHECK_THROWS_AS(act(D, wrong, K0), NotInDeckGroup);
}

TEST_CASE("core projection subtracts the two flag labels over each shared face") {
  DualCellComplex C = dualize(sphere_complex(2));
  CellularNetwork net(C);
  U1Model u1;

  Cell tau{1, 0};
  auto tops = C.containing_cells(tau, 2);
  std::sort(tops.begin(), tops.end());

  ExtendedField<U1Model> E = zero_extended_field(net, u1);
  set_label(E, tau, tops[1], tau, {Int(5)});
  CoreField<U1Model> K = core_of(C, E);

  CHECK(get_label(K, tops[0], tops[1], tau) == IVec{Int(5)});
  CHECK(get_label(K, tops[1], tops[0], tau) == IVec{Int(-5)});
  // all label values over other shared faces vanish
  for (const LabelSlot& s : K.layout.slots)
    if (s.subcell != tau) CHECK(K.labels[s.offset] == 0);

  CHECK_THROWS_AS(get_label(K, tops[0], tops[0], tau), InvalidFlag);
}

TEST_CASE("core projection intertwines the two deck actions") {
  DualCellComplex C = dualize(sphere_complex(3));
  CellularNetwork net(C);
  U1Model u1;
  DeckGroup full = deck_group(C, u1, DeckRegime::full);
  DeckGroup core = deck_group(C, u1, DeckRegime::core);
  ExtendedField<U1Model> E0 = zero_extended_field(net, u1);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    AbElement d = random_deck_element(full, rng);
    ExtendedField<U1Model> E = act(full, d, E0);
    CoreField<U1Model> K = core_of(C, E);

    // the projected labels are themselves a core deck shift of zero
    AbElement h = deck_from_ambient(core, K.labels);
    CoreField<U1Model> K2 = act(core, h, zero_core_field(net, u1));
    CHECK(K2.labels == K.labels);

    // antisymmetry of the projected labels, slot by slot
    for (const LabelSlot& s : K.layout.slots) {
      IVec fwd = get_label(K, s.small, s.big, s.subcell);
      IVec bwd = get_label(K, s.big, s.small, s.subcell);
      REQUIRE(fwd.size() == bwd.size());
      for (std::size_t g = 0; g < fwd.size(); ++g) CHECK(fwd[g] == -bwd[g]);
    }
  }
}

TEST_CASE("winding fields on the sphere classify by their degree") {
  DualCellComplex C = dualize(sphere_complex(2));
  CellularNetwork net(C);
  U1Model u1;

  BundleClass zero = classify(net, zero_extended_field(net, u1));
  CHECK(zero.h2 == free_abelian(1));
  CHECK(zero.primary.is_zero());
  CHECK(zero.evaluation.is_zero());

  BundleClass unit = classify(net, winding_field(net, 1));
  std::vector<BundleClass> seen;
  for (long k = -3; k <= 3; ++k) {
    BundleClass c = classify(net, winding_field(net, Int(k)));
    CHECK(c.evaluation.coords[0] == k);
    CHECK(c.primary.coords[0] == Int(k) * unit.primary.coords[0]);
    for (const BundleClass& p : seen) CHECK_FALSE(same_class(p, c));
    seen.push_back(c);
  }
}

TEST_CASE("winding fields on the torus classify by their degree") {
  DualCellComplex C = dualize(epsilon_torus(2, 3));
  CellularNetwork net(C);
  U1Model u1;

  BundleClass zero = classify(net, zero_extended_field(net, u1));
  CHECK(zero.h2 == free_abelian(1));
  CHECK(zero.primary.is_zero());

  for (long k : {-2L, 1L, 3L}) {
    BundleClass c = classify(net, winding_field(net, Int(k)));
    CHECK(c.evaluation.coords[0] == k);
    CHECK_FALSE(same_class(c, zero));
  }
}

TEST_CASE("classification is invariant under gauge transformations of the base") {
  U1Model u1;
  std::mt19937_64 rng(11);
  for (const SimplicialComplex& tri : {sphere_complex(2), epsilon_torus(2, 3)}) {
    DualCellComplex C = dualize(tri);
    CellularNetwork net(C);
    ExtendedField<U1Model> E = winding_field(net, 2);
    BundleClass before = classify(net, E);
    for (int trial = 0; trial < 5; ++trial) {
      GaugeAssignment<U1Model> g = random_gauge(C, u1, rng());
      ExtendedField<U1Model> Eg{apply_gauge(net, E.base, g), E.layout, E.labels};
      CHECK(validate_extended(C, Eg).ok());
      CHECK(same_class(before, classify(net, Eg)));
    }
  }
}

TEST_CASE("classification is invariant exactly under the class kernel") {
  DualCellComplex C = dualize(sphere_complex(2));
  CellularNetwork net(C);
  U1Model u1;

  ClassKernel Kmin = class_kernel(net, u1, DeckRegime::core);
  CHECK(Kmin.deck.kernel.group == free_abelian(6));
  CHECK(Kmin.kernel.group == free_abelian(5));
  CHECK(Kmin.quotient.group == free_abelian(1));

  ClassKernel Kfull = class_kernel(net, u1, DeckRegime::full);
  CHECK(Kfull.deck.kernel.group == free_abelian(12));
  CHECK(Kfull.kernel.group == free_abelian(11));
  CHECK(Kfull.quotient.group == free_abelian(1));

  // kernel elements never move the class; some deck element does
  CoreField<U1Model> F = core_of(C, winding_field(net, 1));
  BundleClass base = classify(net, F);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  bool moved = false;
  for (int trial = 0; trial < 20; ++trial) {
    IVec x(Kmin.kernel.group.gens(), Int(0));
    for (auto& c : x) c = coeff(rng);
    AbElement inker =
        make_element(Kmin.deck.kernel.group, Kmin.kernel.embedding.m.apply(x));
    CHECK(same_class(base, classify(net, act(Kmin.deck, inker, F))));

    AbElement any = random_deck_element(Kmin.deck, rng);
    if (!same_class(base, classify(net, act(Kmin.deck, any, F)))) moved = true;
  }
  CHECK(moved);
}

TEST_CASE("three-sphere classification is trivial and the quotient collapses") {
  DualCellComplex C = dualize(sphere_complex(3));
  CellularNetwork net(C);
  U1Model u1;

  BundleClass zero = classify(net, zero_extended_field(net, u1));
  CHECK(zero.h2.is_trivial());
  CHECK(zero.primary.is_zero());

  DeckGroup full = deck_group(C, u1, DeckRegime::full);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    ExtendedField<U1Model> E = act(full, random_deck_element(full, rng),
                                   zero_extended_field(net, u1));
    CHECK(same_class(zero, classify(net, E)));
  }

  ClassKernel K = class_kernel(net, u1, DeckRegime::core);
  CHECK(K.quotient.group.is_trivial());
  CHECK(K.kernel.group == K.deck.kernel.group);
}

TEST_CASE("four-sphere fields classify by the signed top label total") {
  DualCellComplex C = dualize(sphere_complex(4));
  CellularNetwork net(C);
  SU2Model su2;

  BundleClass zero = classify(net, zero_extended_field(net, su2));
  CHECK(zero.secondary.group == free_abelian(1));
  CHECK(zero.secondary.is_zero());
  CHECK(zero.h2.is_trivial());

  std::vector<BundleClass> seen;
  for (long k = -2; k <= 2; ++k) {
    BundleClass c = classify(net, top_label_field(net, Int(k)));
    CHECK(c.secondary.coords[0] == k);
    for (const BundleClass& p : seen) CHECK_FALSE(same_class(p, c));
    seen.push_back(c);
  }

  ClassKernel K = class_kernel(net, su2, DeckRegime::full);
  CHECK(K.deck.kernel.group == free_abelian(30));
  CHECK(K.kernel.group == free_abelian(29));
  CHECK(K.quotient.group == free_abelian(1));

  ExtendedField<SU2Model> F = top_label_field(net, 2);
  BundleClass base = classify(net, F);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    IVec x(K.kernel.group.gens(), Int(0));
    for (auto& c : x) c = coeff(rng);
    AbElement inker = make_element(K.deck.kernel.group, K.kernel.embedding.m.apply(x));
    CHECK(same_class(base, classify(net, act(K.deck, inker, F))));
  }
}

TEST_CASE("classification guards") {
  U1Model u1;

  // dimension one and five are out of range
  DualCellComplex C1 = dualize(sphere_complex(1));
  CellularNetwork net1(C1);
  CHECK_THROWS_AS(classify(net1, zero_core_field(net1, u1)), DimensionUnsupported);

  DualCellComplex C5 = dualize(sphere_complex(5));
  CellularNetwork net5(C5);
  CHECK_THROWS_AS(classify(net5, zero_core_field(net5, u1)), DimensionUnsupported);

  // four-dimensional bases reject structure groups with nontrivial windings
  DualCellComplex C4 = dualize(sphere_complex(4));
  CellularNetwork net4(C4);
  CHECK_THROWS_AS(classify(net4, zero_core_field(net4, u1)), SecondaryUndefined);

  // non-orientable surfaces are rejected
  DualCellComplex Cp = dualize(projective_plane());
  CellularNetwork netp(Cp);
  CHECK_THROWS_AS(classify(netp, zero_core_field(netp, u1)), NotOriented);
}

TEST_CASE("bases whose clutch values wind around a face are not extendable") {
  DualCellComplex C = dualize(sphere_complex(3));
  CellularNetwork net(C);
  U1Model u1;

  Cell v = C.cell_of({0});
  Cell w = C.cell_of({1});
  Cell tau = meet_cell(C, v, w);
  auto nodes = C.closure_cells(tau, 0);
  REQUIRE(nodes.size() == 3);

  CoreField<U1Model> K = zero_core_field(net, u1);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    K.base.values[net.edge_index(w, nodes[i])] = Rational(Int(i), Int(3));

  CHECK(validate_core(C, K).ok());  // the label relations cannot see the base
  CHECK_THROWS_AS(classify(net, K), InvalidExtendedField);
}

TEST_CASE("equivalence requires matching complexes and models") {
  DualCellComplex Cs = dualize(sphere_complex(2));
  DualCellComplex Ct = dualize(epsilon_torus(2, 3));
  CellularNetwork ns(Cs), nt(Ct);
  U1Model u1;

  ExtendedField<U1Model> a = winding_field(ns, 1);
  ExtendedField<U1Model> b = winding_field(nt, 1);
  CHECK_THROWS_AS(cellularly_equivalent(ns, a, nt, b), ComplexMismatch);

  ExtendedField<U1Model> c = winding_field(ns, 1);
  ExtendedField<U1Model> d = winding_field(ns, -1);
  CHECK(cellularly_equivalent(ns, a, ns, c));
  CHECK_FALSE(cellularly_equivalent(ns, a, ns, d));

  // same complex, different cyclic orders
  CoreField<ZNModel> z3 = zero_core_field(ns, ZNModel{3});
  CoreField<ZNModel> z5 = zero_core_field(ns, ZNModel{5});
  CHECK_THROWS_AS(cellularly_equivalent(ns, z3, ns, z5), ComplexMismatch);
}
