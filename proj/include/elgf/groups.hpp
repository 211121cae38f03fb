#pragma once

#include <boost/rational.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "elgf/abelian.hpp"

namespace elgf {

using Rational = boost::rational<Int>;

class GroupError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class EdgeMismatch : public GroupError {
public:
  EdgeMismatch() : GroupError("anchored classes live on different oriented edges") {}
};
class NotInVG : public GroupError {
public:
  NotInVG() : GroupError("pointwise product of the triple is not the identity") {}
};
class NotCentral : public GroupError {
public:
  NotCentral() : GroupError("element is not in the center of the group") {}
};

inline Rational mod1(const Rational& r) {
  Int f = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r < 0) f -= 1;
  return r - f;
}

// ---------------------------------------------------------------------------
// U(1): exact rational angles, r meaning e^{2 pi i r}.
// ---------------------------------------------------------------------------

struct U1Model {
  using Element = Rational;  // reduced into [0,1)

  std::string name() const { return "u1"; }
  Element identity() const { return Rational(0); }
  Element multiply(const Element& a, const Element& b) const { return mod1(a + b); }
  Element inverse(const Element& a) const { return mod1(-a); }
  bool equal(const Element& a, const Element& b) const { return a == b; }
  bool is_central(const Element&) const { return true; }

  FGAbelianGroup homotopy_group(std::size_t k) const {
    return k == 1 ? free_abelian(1) : free_abelian(0);
  }

  Element random_element(std::mt19937_64& rng) const {
    Int q = Int(rng() % 24) + 1;
    Int p = Int(rng() % 97) % q;
    return mod1(Rational(p, q));
  }

  // Signed angular gap of the canonical interpolation a -> b: the unique
  // representative of b - a in (-1/2, 1/2], ties resolved upward.
  static Rational cdelta(const Element& a, const Element& b) {
    return Rational(1, 2) - mod1(Rational(1, 2) - (b - a));
  }
  static Rational liftfrac(const Element& a) { return mod1(a); }
};

// ---------------------------------------------------------------------------
// Z_N: residues; discrete, all higher homotopy trivial.
// ---------------------------------------------------------------------------

struct ZNModel {
  long n = 2;
  using Element = long;  // residue in [0, n)

  std::string name() const { return "zN:" + std::to_string(n); }
  Element identity() const { return 0; }
  Element multiply(Element a, Element b) const { return (a + b) % n; }
  Element inverse(Element a) const { return (n - a % n) % n; }
  bool equal(Element a, Element b) const { return a == b; }
  bool is_central(Element) const { return true; }

  FGAbelianGroup homotopy_group(std::size_t k) const {
    return k == 0 ? cyclic_group(n) : free_abelian(0);
  }

  Element random_element(std::mt19937_64& rng) const { return Element(rng() % std::uint64_t(n)); }
};

// ---------------------------------------------------------------------------
// SU(2): unit quaternions; pi_3 = Z tracked symbolically.
// ---------------------------------------------------------------------------

struct SU2Model {
  struct Element {
    double w = 1, x = 0, y = 0, z = 0;
  };
  static constexpr double tol = 1e-8;

  std::string name() const { return "su2"; }
  Element identity() const { return {}; }

  Element multiply(const Element& a, const Element& b) const {
    Element r{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
              a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
              a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
              a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    double nn = std::sqrt(r.w * r.w + r.x * r.x + r.y * r.y + r.z * r.z);
    r.w /= nn;
    r.x /= nn;
    r.y /= nn;
    r.z /= nn;
    return r;
  }
  Element inverse(const Element& a) const { return {a.w, -a.x, -a.y, -a.z}; }
  bool equal(const Element& a, const Element& b) const {
    return std::abs(a.w - b.w) < tol && std::abs(a.x - b.x) < tol && std::abs(a.y - b.y) < tol &&
           std::abs(a.z - b.z) < tol;
  }
  bool is_central(const Element& a) const {
    return std::abs(std::abs(a.w) - 1) < tol && std::abs(a.x) < tol && std::abs(a.y) < tol &&
           std::abs(a.z) < tol;
  }

  FGAbelianGroup homotopy_group(std::size_t k) const {
    return k == 3 ? free_abelian(1) : free_abelian(0);
  }

  Element random_element(std::mt19937_64& rng) const {
    for (;;) {
      auto u = [&] { return double(rng()) / double(UINT64_MAX) * 2.0 - 1.0; };
      Element e{u(), u(), u(), u()};
      double nn = e.w * e.w + e.x * e.x + e.y * e.y + e.z * e.z;
      if (nn < 1e-4 || nn > 1.0) continue;
      double s = std::sqrt(nn);
      return {e.w / s, e.x / s, e.y / s, e.z / s};
    }
  }
};

// ---------------------------------------------------------------------------
// Anchored homotopy classes of arcs in G, relative to the model's canonical
// interpolation between the endpoint values.
// ---------------------------------------------------------------------------

template <class Model>
struct AnchoredEdgeClass {
  std::string edge;  // oriented carrier id
  typename Model::Element start, end;
  AbElement label;  // in homotopy_group(1)
};

template <class Model>
AnchoredEdgeClass<Model> make_class(const Model& m, std::string edge,
                                    typename Model::Element start, typename Model::Element end,
                                    IVec label_coords = {}) {
  FGAbelianGroup pi1 = m.homotopy_group(1);
  if (label_coords.empty()) label_coords.assign(pi1.gens(), Int(0));
  return {std::move(edge), std::move(start), std::move(end), make_element(pi1, label_coords)};
}

// pointwise inversion of the arc
template <class Model>
AnchoredEdgeClass<Model> reverse_class(const Model& m, const AnchoredEdgeClass<Model>& c) {
  return {c.edge, m.inverse(c.start), m.inverse(c.end), negate(c.label)};
}

// Extra winding collected when the canonical interpolations of the factors
// are composed pointwise and compared to the canonical interpolation of the
// product arc.  Zero whenever pi_1 is trivial.
inline IVec label_correction(const U1Model&, const Rational& as, const Rational& ae,
                             const Rational& bs, const Rational& be) {
  Rational total = U1Model::cdelta(as, ae) + U1Model::cdelta(bs, be) -
                   U1Model::cdelta(mod1(as + bs), mod1(ae + be));
  assert(total.denominator() == 1);
  return {total.numerator()};
}
inline IVec label_correction(const ZNModel&, long, long, long, long) { return {}; }
inline IVec label_correction(const SU2Model&, const SU2Model::Element&, const SU2Model::Element&,
                             const SU2Model::Element&, const SU2Model::Element&) {
  return {};
}

template <class Model>
AnchoredEdgeClass<Model> multiply_classes(const Model& m, const AnchoredEdgeClass<Model>& a,
                                          const AnchoredEdgeClass<Model>& b) {
  if (a.edge != b.edge) throw EdgeMismatch();
  IVec corr = label_correction(m, a.start, a.end, b.start, b.end);
  AbElement label = add(a.label, b.label);
  if (!corr.empty()) label = add(label, make_element(label.group, corr));
  return {a.edge, m.multiply(a.start, b.start), m.multiply(a.end, b.end), std::move(label)};
}

// Obstruction to lifting the triple of arcs through the universal cover:
// total canonical winding plus labels, an exact element of pi_1.
template <class Model>
AbElement vertex_defect(const Model& m, const std::array<AnchoredEdgeClass<Model>, 3>& t) {
  typename Model::Element ps = m.identity(), pe = m.identity();
  for (const auto& c : t) {
    ps = m.multiply(ps, c.start);
    pe = m.multiply(pe, c.end);
  }
  if (!m.equal(ps, m.identity()) || !m.equal(pe, m.identity())) throw NotInVG();

  FGAbelianGroup pi1 = m.homotopy_group(1);
  AbElement d = zero_element(pi1);
  if constexpr (std::is_same_v<Model, U1Model>) {
    Rational winding = 0;
    for (const auto& c : t) winding += U1Model::cdelta(c.start, c.end);
    assert(winding.denominator() == 1);
    d = add(d, make_element(pi1, {winding.numerator()}));
  }
  for (const auto& c : t) d = add(d, c.label);
  return d;
}

// ---------------------------------------------------------------------------
// The S3 action on triples: even permutations shuffle, odd permutations
// shuffle and invert every component.
// ---------------------------------------------------------------------------

struct Perm3 {
  std::array<int, 3> to{0, 1, 2};  // slot i moves to slot to[i]
  int sign = 1;

  bool operator==(const Perm3&) const = default;
};

inline constexpr Perm3 perm_identity{{0, 1, 2}, 1};
inline constexpr Perm3 perm_cycle{{1, 2, 0}, 1};     // (123)
inline constexpr Perm3 perm_cycle2{{2, 0, 1}, 1};    // (132)
inline constexpr Perm3 perm_swap12{{1, 0, 2}, -1};   // (12)
inline constexpr Perm3 perm_swap13{{2, 1, 0}, -1};   // (13)
inline constexpr Perm3 perm_swap23{{0, 2, 1}, -1};   // (23)

inline const std::array<Perm3, 6>& all_perm3() {
  static const std::array<Perm3, 6> ps = {perm_identity, perm_cycle,  perm_cycle2,
                                          perm_swap12,   perm_swap13, perm_swap23};
  return ps;
}

// p after q
inline Perm3 compose(const Perm3& p, const Perm3& q) {
  Perm3 r;
  for (int i = 0; i < 3; ++i) r.to[i] = p.to[q.to[i]];
  r.sign = p.sign * q.sign;
  return r;
}

template <class Model>
std::array<typename Model::Element, 3> triadic_act(const Model& m, const Perm3& p,
                                                   const std::array<typename Model::Element, 3>& t) {
  std::array<typename Model::Element, 3> r;
  for (int i = 0; i < 3; ++i) r[p.to[i]] = p.sign > 0 ? t[i] : m.inverse(t[i]);
  return r;
}

// ---------------------------------------------------------------------------
// Runtime model selection and value text forms.
// ---------------------------------------------------------------------------

using AnyModel = std::variant<U1Model, ZNModel, SU2Model>;

inline AnyModel model_by_name(const std::string& s) {
  if (s == "u1") return U1Model{};
  if (s == "su2") return SU2Model{};
  if (s.rfind("zN:", 0) == 0) {
    long n = 0;
    try {
      std::size_t used = 0;
      n = std::stol(s.substr(3), &used);
      if (used != s.size() - 3) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 1) throw GroupError("bad cyclic order in model name: " + s);
    return ZNModel{n};
  }
  throw GroupError("unknown group model: " + s);
}

inline std::string value_to_string(const U1Model&, const Rational& r) {
  return r.numerator().str() + "/" + r.denominator().str();
}
inline std::string value_to_string(const ZNModel&, long v) { return std::to_string(v); }
inline std::string value_to_string(const SU2Model&, const SU2Model::Element& e) {
  std::array<double, 4> c{e.w, e.x, e.y, e.z};
  std::string out;
  for (int i = 0; i < 4; ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c[i]);
    out += buf;
    if (i < 3) out += ' ';
  }
  return out;
}

inline Rational value_from_string(const U1Model&, const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return mod1(Rational(Int(s)));
    return mod1(Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1))));
  } catch (const std::exception&) {
    throw GroupError("bad circle value: " + s);
  }
}
inline long value_from_string(const ZNModel& m, const std::string& s) {
  long v = 0;
  try {
    std::size_t used = 0;
    v = std::stol(s, &used);
    if (used != s.size()) throw GroupError("");
  } catch (const std::exception&) {
    throw GroupError("bad cyclic value: " + s);
  }
  return ((v % m.n) + m.n) % m.n;
}
inline SU2Model::Element value_from_string(const SU2Model&, const std::string& s) {
  std::istringstream in(s);
  SU2Model::Element e;
  if (!(in >> e.w >> e.x >> e.y >> e.z)) throw GroupError("bad quaternion value: " + s);
  double nn = std::sqrt(e.w * e.w + e.x * e.x + e.y * e.y + e.z * e.z);
  if (std::abs(nn - 1) > 1e-9) throw GroupError("quaternion is not on the unit sphere: " + s);
  return e;
}

}  // namespace elgf
