// Command-line front end: generate triangulations, create and inspect lattice
// gauge fields, classify the bundles they induce, compute deck groups, walk
// bistellar moves, and apply central defect operators.
//
// Exit codes: 0 success, 1 validation or computation failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elgf/io.hpp"
#include "elgf/pachner.hpp"

namespace {

using namespace elgf;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ElgfError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ElgfError("cannot write '" + path + "'");
  out << text;
}

void emit(const Json& doc, const std::string& format) {
  if (format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  for (const auto& [key, v] : doc.items()) {
    if (v.is_array()) {
      std::cout << key << ":";
      if (v.empty()) std::cout << " none";
      std::cout << "\n";
      for (const Json& e : v)
        std::cout << "  - " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
    } else {
      std::cout << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

std::string simplex_str(const Simplex& s) {
  std::string out;
  for (Vertex v : s) out += (out.empty() ? "" : " ") + std::to_string(v);
  return out;
}

std::string peek_model(const std::string& field_text) {
  try {
    return Json::parse(field_text).value("model", "");
  } catch (const std::exception& e) {
    throw ElgfError(std::string("field file is not valid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Subcommand bodies.
// ---------------------------------------------------------------------------

int run_gen(const std::string& kind, std::size_t n, long m, const std::string& out) {
  if (kind == "sphere") {
    spill(out, facet_file(sphere_complex(n)));
    return 0;
  }
  if (m < 0) throw UsageError("torus needs a period: gen torus <n> <m>");
  spill(out, facet_file(epsilon_torus(n, std::size_t(m))));
  return 0;
}

int run_validate(const std::string& tri_path, const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  const ValidationReport& r = tri.report();
  Json doc;
  doc["dim"] = tri.dim();
  doc["vertices"] = tri.vertex_count();
  doc["facets"] = tri.facets().size();
  doc["hash"] = complex_hash(tri);
  doc["pure"] = r.pure;
  doc["pseudomanifold"] = r.pseudomanifold;
  doc["connected"] = r.connected;
  doc["orientable"] = r.orientable;
  doc["failures"] = r.failures;
  doc["ok"] = r.ok();
  emit(doc, format);
  return r.ok() ? 0 : 1;
}

int run_field_gen(const std::string& tri_path, const std::string& token, const std::string& kind,
                  const std::string& value, std::uint64_t seed, const std::string& out) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  DualCellComplex C = dualize(tri);
  CellularNetwork net(C);
  return with_model(token, [&](auto m) {
    using M = decltype(m);
    ExtendedField<M> E = zero_extended_field(net, m);
    if (kind == "zero") {
    } else if (kind == "random") {
      E = extend_with_zero_labels(net, random_field(net, m, seed));
    } else if (kind == "winding") {
      if constexpr (std::is_same_v<M, U1Model>)
        E = winding_field(net, Int(value));
      else
        throw ElgfError("winding fields are defined for the u1 model");
    } else if (kind == "top-label") {
      if constexpr (std::is_same_v<M, SU2Model>)
        E = top_label_field(net, Int(value));
      else
        throw ElgfError("top-label fields are defined for the su2 model");
    } else {
      throw UsageError("unknown field kind '" + kind + "'");
    }
    spill(out, write_field(net, E));
    return 0;
  });
}

int run_classify(const std::string& tri_path, const std::string& field_path,
                 const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  DualCellComplex C = dualize(tri);
  CellularNetwork net(C);
  std::string text = slurp(field_path);
  return with_model(peek_model(text), [&](auto m) {
    auto E = read_field(net, m, text);
    auto rep = validate_extended(C, E);
    if (!rep.ok()) throw InvalidExtendedField(rep.violations.front());
    BundleClass c = classify(net, E);
    ClassKernel K = class_kernel(net, E.base.model, DeckRegime::full);
    Json doc;
    doc["model"] = model_token(E.base.model);
    doc["class"] = class_str(c);
    doc["scalar"] = class_scalar(c).str();
    doc["quotient"] = K.quotient.group.to_string();
    emit(doc, format);
    return 0;
  });
}

int run_deck_group(const std::string& tri_path, const std::string& token,
                   const std::string& regime, const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  DualCellComplex C = dualize(tri);
  DeckRegime r = regime == "core" ? DeckRegime::core : DeckRegime::full;
  return with_model(token, [&](auto m) {
    DeckGroup D = deck_group(C, m, r);
    Json doc;
    doc["model"] = model_token(m);
    doc["regime"] = regime;
    doc["label_width"] = D.layout.width;
    doc["relation_rows"] = D.relations.m.rows();
    doc["group"] = D.kernel.group.to_string();
    doc["rank"] = D.kernel.group.free_rank;
    emit(doc, format);
    return 0;
  });
}

int run_equiv(const std::string& tri_path, const std::string& a_path, const std::string& b_path,
              const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  DualCellComplex C = dualize(tri);
  CellularNetwork net(C);
  std::string ta = slurp(a_path), tb = slurp(b_path);
  return with_model(peek_model(ta), [&](auto m) {
    auto A = read_field(net, m, ta);
    auto B = read_field(net, m, tb);
    BundleClass ca = classify(net, A), cb = classify(net, B);
    bool eq = same_class(ca, cb);
    Json doc;
    doc["class_a"] = class_str(ca);
    doc["class_b"] = class_str(cb);
    doc["equivalent"] = eq;
    emit(doc, format);
    return eq ? 0 : 1;
  });
}

int run_pachner_walk(const std::string& tri_path, const std::string& field_path,
                     std::size_t steps, std::uint64_t seed, const std::string& script_path,
                     const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  std::string text = slurp(field_path);
  return with_model(peek_model(text), [&](auto m) {
    std::vector<TransportReport> reports;
    std::string initial;
    {
      DualCellComplex C = dualize(tri);
      CellularNetwork net(C);
      auto E = read_field(net, m, text);
      initial = class_str(classify(net, E));
      if (!script_path.empty()) {
        auto cur = std::make_unique<SimplicialComplex>(tri);
        auto dual = std::make_unique<DualCellComplex>(dualize(*cur));
        auto netA = std::make_unique<CellularNetwork>(*dual);
        for (const PachnerMove& mv : parse_move_script(slurp(script_path))) {
          auto next = std::make_unique<SimplicialComplex>(apply_move(*cur, mv));
          auto dualB = std::make_unique<DualCellComplex>(dualize(*next));
          auto netB = std::make_unique<CellularNetwork>(*dualB);
          auto [carried, rep] = transport(*netA, E, mv, *netB);
          E = std::move(carried);
          cur = std::move(next);
          dual = std::move(dualB);
          netA = std::move(netB);
          reports.push_back(std::move(rep));
        }
      } else {
        reports = random_transport_walk(tri, E, steps, seed);
      }
    }
    bool constant = true;
    Json log = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const TransportReport& rep = reports[i];
      bool corr = classes_correspond(rep.class_before, rep.class_after, rep.orientation_flip);
      constant = constant && corr;
      Json row;
      row["step"] = i + 1;
      row["kind"] = rep.move.kind;
      row["face"] = simplex_str(rep.move.face);
      row["class"] = class_scalar(rep.class_after).str();
      row["flip"] = rep.orientation_flip;
      row["correspond"] = corr;
      log.push_back(std::move(row));
    }
    Json doc;
    doc["initial_class"] = initial;
    doc["steps"] = reports.size();
    doc["log"] = std::move(log);
    doc["constant"] = constant;
    emit(doc, format);
    return constant ? 0 : 1;
  });
}

template <class Model>
Json thooft_report(const CellularNetwork& net, const ExtendedField<Model>& E,
                   const DefectLocus& L, const typename Model::Element& g,
                   const ExtendedField<Model>& Ed, const GerbeData<Model>& D,
                   const ExtendedValidation& rep) {
  const Model& m = E.base.model;
  const DualCellComplex& C = net.complex();
  Json doc;
  doc["model"] = model_token(m);
  doc["central"] = value_json(m, g);
  Json locus = Json::array();
  for (const auto& [c, s] : L.cells) locus.push_back(Json{{"cell", cell_str(c)}, {"sign", s}});
  doc["locus"] = std::move(locus);
  Int mass = 0;
  for (const Int& v : D.surface.chain) mass += abs(v);
  doc["surface_mass"] = mass.str();
  std::size_t changed = 0;
  for (std::size_t i = 0; i < E.base.values.size(); ++i)
    if (!m.equal(E.base.values[i], Ed.base.values[i])) ++changed;
  doc["changed_edges"] = changed;
  doc["labels_unchanged"] = E.labels == Ed.labels;
  IVec lz = locus_chain(C, L);
  Json fmap = Json::array();
  std::size_t off_locus = 0;
  for (const auto& [sigma, fe] : D.f) {
    if (m.equal(fe.value, m.identity())) continue;
    if (lz[sigma.idx] == 0) ++off_locus;
    fmap.push_back(Json{{"cell", cell_str(sigma)}, {"value", value_json(m, fe.value)}});
  }
  doc["defect_map"] = std::move(fmap);
  doc["off_locus_defects"] = off_locus;
  doc["gerbe_ok"] = rep.ok();
  doc["violations"] = rep.violations;
  return doc;
}

int run_thooft(const std::string& tri_path, const std::string& field_path,
               const std::string& defect_path, const std::string& central,
               const std::string& out, const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  DualCellComplex C = dualize(tri);
  CellularNetwork net(C);
  std::string text = slurp(field_path);
  DefectLocus L = read_defect(C, slurp(defect_path));
  return with_model(peek_model(text), [&](auto m) {
    auto E = read_field(net, m, text);
    auto g = central_parse(m, central);
    SeifertSurface S = find_seifert(C, L);
    auto [Ed, D] = apply_thooft(net, E, L, S, g);
    auto rep = verify_gerbe(net, D);
    if (!out.empty()) spill(out, write_field(net, Ed));
    emit(thooft_report(net, E, L, g, Ed, D, rep), format);
    return rep.ok() ? 0 : 1;
  });
}

int run_verify_gerbe(const std::string& tri_path, const std::string& field_path,
                     const std::string& defect_path, const std::string& central,
                     const std::string& format) {
  SimplicialComplex tri = parse_facet_file(slurp(tri_path));
  DualCellComplex C = dualize(tri);
  CellularNetwork net(C);
  std::string text = slurp(field_path);
  DefectLocus L = read_defect(C, slurp(defect_path));
  return with_model(peek_model(text), [&](auto m) {
    auto E = read_field(net, m, text);
    auto g = central_parse(m, central);
    SeifertSurface S = find_seifert(C, L);
    auto [Ed, D] = apply_thooft(net, E, L, S, g);
    auto rep = verify_gerbe(net, D);
    Json doc;
    doc["model"] = model_token(m);
    doc["cells_checked"] = D.f.size();
    doc["gerbe_ok"] = rep.ok();
    doc["violations"] = rep.violations;
    emit(doc, format);
    return rep.ok() ? 0 : 1;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial lattice gauge fields: complexes, fields, bundle classes,"
               " bistellar transport, and central defect operators"};
  app.require_subcommand(1);
  int rc = 0;

  std::string gen_kind, gen_out = "-";
  std::size_t gen_n = 2;
  long gen_m = -1;
  auto* gen = app.add_subcommand("gen", "generate a triangulation facet file");
  gen->add_option("kind", gen_kind, "sphere or torus")
      ->required()
      ->check(CLI::IsMember({"sphere", "torus"}));
  gen->add_option("n", gen_n, "dimension")->required();
  gen->add_option("m", gen_m, "lattice period (torus only)");
  gen->add_option("-o,--output", gen_out, "output path (default stdout)");
  gen->callback([&] { rc = run_gen(gen_kind, gen_n, gen_m, gen_out); });

  std::string val_tri, val_fmt = "text";
  auto* val = app.add_subcommand("validate", "check a facet file and print its report");
  val->add_option("complex", val_tri, "facet file")->required();
  val->add_option("--format", val_fmt)->check(CLI::IsMember({"text", "json"}));
  val->callback([&] { rc = run_validate(val_tri, val_fmt); });

  std::string fg_tri, fg_model = "u1", fg_kind = "zero", fg_value = "1", fg_out = "-";
  std::uint64_t fg_seed = 0;
  auto* fg = app.add_subcommand("field-gen", "create an extended field on a complex");
  fg->add_option("complex", fg_tri, "facet file")->required();
  fg->add_option("--model", fg_model, "u1, su2, or z<N>");
  fg->add_option("--kind", fg_kind, "zero, random, winding, or top-label")
      ->check(CLI::IsMember({"zero", "random", "winding", "top-label"}));
  fg->add_option("--value", fg_value, "winding / top label (integer)");
  fg->add_option("--seed", fg_seed, "seed for random fields");
  fg->add_option("-o,--output", fg_out, "output path (default stdout)");
  fg->callback([&] { rc = run_field_gen(fg_tri, fg_model, fg_kind, fg_value, fg_seed, fg_out); });

  std::string cl_tri, cl_field, cl_fmt = "text";
  auto* cl = app.add_subcommand("classify", "bundle class and classifying quotient of a field");
  cl->add_option("complex", cl_tri, "facet file")->required();
  cl->add_option("field", cl_field, "field file")->required();
  cl->add_option("--format", cl_fmt)->check(CLI::IsMember({"text", "json"}));
  cl->callback([&] { rc = run_classify(cl_tri, cl_field, cl_fmt); });

  std::string dg_tri, dg_model = "u1", dg_regime = "full", dg_fmt = "text";
  auto* dg = app.add_subcommand("deck-group", "label-shift group of a complex and model");
  dg->add_option("complex", dg_tri, "facet file")->required();
  dg->add_option("--model", dg_model, "u1, su2, or z<N>");
  dg->add_option("--regime", dg_regime)->check(CLI::IsMember({"full", "core"}));
  dg->add_option("--format", dg_fmt)->check(CLI::IsMember({"text", "json"}));
  dg->callback([&] { rc = run_deck_group(dg_tri, dg_model, dg_regime, dg_fmt); });

  std::string eq_tri, eq_a, eq_b, eq_fmt = "text";
  auto* eq = app.add_subcommand("equiv", "decide whether two fields induce the same bundle");
  eq->add_option("complex", eq_tri, "facet file")->required();
  eq->add_option("a", eq_a, "first field file")->required();
  eq->add_option("b", eq_b, "second field file")->required();
  eq->add_option("--format", eq_fmt)->check(CLI::IsMember({"text", "json"}));
  eq->callback([&] { rc = run_equiv(eq_tri, eq_a, eq_b, eq_fmt); });

  std::string pw_tri, pw_field, pw_script, pw_fmt = "text";
  std::size_t pw_steps = 0;
  std::uint64_t pw_seed = 0;
  auto* pw = app.add_subcommand("pachner-walk", "transport a field along bistellar moves");
  pw->add_option("complex", pw_tri, "facet file")->required();
  pw->add_option("field", pw_field, "field file")->required();
  pw->add_option("--steps", pw_steps, "number of random moves");
  pw->add_option("--seed", pw_seed, "seed for move selection");
  pw->add_option("--script", pw_script, "move script (one 'move <kind> <face>' per line)");
  pw->add_option("--format", pw_fmt)->check(CLI::IsMember({"text", "json"}));
  pw->callback([&] { rc = run_pachner_walk(pw_tri, pw_field, pw_steps, pw_seed, pw_script, pw_fmt); });

  std::string th_tri, th_field, th_defect, th_central, th_out, th_fmt = "text";
  auto* th = app.add_subcommand("thooft", "apply a central defect operator to a field");
  th->add_option("complex", th_tri, "facet file")->required();
  th->add_option("field", th_field, "field file")->required();
  th->add_option("defect", th_defect, "defect locus file")->required();
  th->add_option("--central", th_central, "central value (u1: p/q, z<N>: k, su2: w,x,y,z)")
      ->required();
  th->add_option("-o,--output", th_out, "write the defected field here");
  th->add_option("--format", th_fmt)->check(CLI::IsMember({"text", "json"}));
  th->callback([&] { rc = run_thooft(th_tri, th_field, th_defect, th_central, th_out, th_fmt); });

  std::string vg_tri, vg_field, vg_defect, vg_central, vg_fmt = "text";
  auto* vg = app.add_subcommand("verify-gerbe", "check the defect cocycle conditions");
  vg->add_option("complex", vg_tri, "facet file")->required();
  vg->add_option("field", vg_field, "field file")->required();
  vg->add_option("defect", vg_defect, "defect locus file")->required();
  vg->add_option("--central", vg_central, "central value")->required();
  vg->add_option("--format", vg_fmt)->check(CLI::IsMember({"text", "json"}));
  vg->callback([&] { rc = run_verify_gerbe(vg_tri, vg_field, vg_defect, vg_central, vg_fmt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
