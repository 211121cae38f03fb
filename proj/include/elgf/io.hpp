#pragma once

// File formats for the command-line front end: extended fields and defect
// loci as JSON documents that embed the content hash of the complex they
// belong to, so data cannot be applied across complexes.  Writing is
// canonical (network edge order, two-space indent, trailing newline) and
// load/save round-trips byte-identically.

#include <sstream>
#include <string>
#include <vector>

#include "elgf/thooft.hpp"
#include "json.hpp"

namespace elgf {

using Json = nlohmann::ordered_json;

inline Cell parse_cell(const std::string& s) {
  std::size_t colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
    throw ElgfError("cell reference must be written dim:index, got '" + s + "'");
  try {
    return Cell{std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ElgfError("cell reference must be written dim:index, got '" + s + "'");
  }
}

// ---------------------------------------------------------------------------
// Group values and model tokens.
// ---------------------------------------------------------------------------

inline std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator() << "/" << r.denominator();
  return os.str();
}

inline Rational parse_rational(const std::string& s) {
  std::size_t slash = s.find('/');
  try {
    Int p(s.substr(0, slash));
    Int q = slash == std::string::npos ? Int(1) : Int(s.substr(slash + 1));
    if (q == 0) throw ElgfError("rational with zero denominator: '" + s + "'");
    return Rational(p, q);
  } catch (const ElgfError&) {
    throw;
  } catch (const std::exception&) {
    throw ElgfError("value must be a rational p/q, got '" + s + "'");
  }
}

inline Json value_json(const U1Model&, const Rational& v) { return rational_str(v); }
inline Json value_json(const ZNModel&, long v) { return v; }
inline Json value_json(const SU2Model&, const SU2Model::Element& v) {
  return Json::array({v.w, v.x, v.y, v.z});
}

inline Rational value_parse(const U1Model&, const Json& j) {
  if (!j.is_string()) throw ElgfError("circle values are stored as 'p/q' strings");
  return mod1(parse_rational(j.get<std::string>()));
}
inline long value_parse(const ZNModel& m, const Json& j) {
  if (!j.is_number_integer()) throw ElgfError("cyclic-group values are stored as integers");
  long v = j.get<long>();
  if (v < 0 || v >= m.n) throw ElgfError("cyclic-group value out of range");
  return v;
}
inline SU2Model::Element value_parse(const SU2Model&, const Json& j) {
  if (!j.is_array() || j.size() != 4)
    throw ElgfError("quaternion values are stored as [w,x,y,z] arrays");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

// Central values on the command line: u1 "p/q", zN "k", su2 "w,x,y,z".
inline Rational central_parse(const U1Model&, const std::string& s) {
  return mod1(parse_rational(s));
}
inline long central_parse(const ZNModel& m, const std::string& s) {
  try {
    long v = std::stol(s);
    return ((v % m.n) + m.n) % m.n;
  } catch (const std::exception&) {
    throw ElgfError("central value for a cyclic group must be an integer, got '" + s + "'");
  }
}
inline SU2Model::Element central_parse(const SU2Model&, const std::string& s) {
  std::istringstream in(s);
  SU2Model::Element e{};
  char c1, c2, c3;
  if (!(in >> e.w >> c1 >> e.x >> c2 >> e.y >> c3 >> e.z) || c1 != ',' || c2 != ',' || c3 != ',')
    throw ElgfError("central value for su2 must be written w,x,y,z, got '" + s + "'");
  return e;
}

// Runtime model dispatch for tokens "u1", "su2", "z<N>".
template <class F>
auto with_model(const std::string& token, F&& f) {
  if (token == "u1") return f(U1Model{});
  if (token == "su2") return f(SU2Model{});
  if (token.size() > 1 && token[0] == 'z') {
    long n = 0;
    try {
      n = std::stol(token.substr(1));
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 2) return f(ZNModel{n});
  }
  throw ElgfError("unknown group model '" + token + "' (expected u1, su2, or z<N>)");
}

inline std::string model_token(const U1Model&) { return "u1"; }
inline std::string model_token(const SU2Model&) { return "su2"; }
inline std::string model_token(const ZNModel& m) { return "z" + std::to_string(m.n); }

// ---------------------------------------------------------------------------
// Extended fields.
// ---------------------------------------------------------------------------

template <class Model>
std::string write_field(const CellularNetwork& net, const ExtendedField<Model>& E) {
  Json doc;
  doc["complex_hash"] = complex_hash(net.complex().triangulation());
  doc["model"] = model_token(E.base.model);
  Json edges = Json::array();
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const NetworkEdge& e = net.edges()[i];
    Json row;
    row["cell"] = cell_str(e.cell);
    row["vertex"] = cell_str(e.vertex);
    row["value"] = value_json(E.base.model, E.base.values[i]);
    edges.push_back(std::move(row));
  }
  doc["edges"] = std::move(edges);
  Json labels = Json::array();
  for (const Int& l : E.labels) labels.push_back(l.str());
  doc["labels"] = std::move(labels);
  return doc.dump(2) + "\n";
}

template <class Model>
ExtendedField<Model> read_field(const CellularNetwork& net, Model m, const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw ElgfError(std::string("field file is not valid JSON: ") + e.what());
  }
  if (doc.value("complex_hash", "") != complex_hash(net.complex().triangulation()))
    throw ComplexMismatch("field file was written for a different complex");
  if (doc.value("model", "") != model_token(m))
    throw ElgfError("field file uses model '" + doc.value("model", "") + "', expected '" +
                    model_token(m) + "'");

  ExtendedField<Model> E = zero_extended_field(net, std::move(m));
  if (!doc.contains("edges") || !doc["edges"].is_array() ||
      doc["edges"].size() != net.edges().size())
    throw ElgfError("field file must list one value per network edge");
  std::vector<bool> seen(net.edges().size(), false);
  for (const Json& row : doc["edges"]) {
    Cell cell = parse_cell(row.at("cell").get<std::string>());
    Cell vertex = parse_cell(row.at("vertex").get<std::string>());
    std::size_t i = net.edge_index(cell, vertex);
    if (seen[i]) throw ElgfError("field file lists edge " + cell_str(cell) + " twice");
    seen[i] = true;
    E.base.values[i] = value_parse(E.base.model, row.at("value"));
  }
  if (!doc.contains("labels") || !doc["labels"].is_array() ||
      doc["labels"].size() != E.layout.width)
    throw ElgfError("field file must carry one label per layout slot");
  for (std::size_t i = 0; i < E.labels.size(); ++i)
    E.labels[i] = Int(doc["labels"][i].get<std::string>());
  return E;
}

// ---------------------------------------------------------------------------
// Defect loci: signed (n-2)-cells.
// ---------------------------------------------------------------------------

inline std::string write_defect(const DualCellComplex& C, const DefectLocus& L) {
  Json doc;
  doc["complex_hash"] = complex_hash(C.triangulation());
  Json cells = Json::array();
  for (const auto& [c, s] : L.cells) cells.push_back(Json{{"cell", cell_str(c)}, {"sign", s}});
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

inline DefectLocus read_defect(const DualCellComplex& C, const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw ElgfError(std::string("defect file is not valid JSON: ") + e.what());
  }
  if (doc.value("complex_hash", "") != complex_hash(C.triangulation()))
    throw ComplexMismatch("defect file was written for a different complex");
  DefectLocus L;
  for (const Json& row : doc.at("cells"))
    L.cells.push_back({parse_cell(row.at("cell").get<std::string>()), row.at("sign").get<int>()});
  return L;
}

}  // namespace elgf
