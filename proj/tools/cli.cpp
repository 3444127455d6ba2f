#include "gtd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gtd/errors.hpp"
#include "gtd/oracle.hpp"
#include "gtd/transforms.hpp"

namespace gtd::cli {

using json = nlohmann::ordered_json;

namespace {

class Unwritable : public std::runtime_error {
 public:
  explicit Unwritable(const std::string& path) : std::runtime_error("cannot write '" + path + "'") {}
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Unwritable(path);
  f << content;
  f.close();
  if (!f) throw Unwritable(path);
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Error schema_error(const std::string& what) { return Error(ErrorKind::InvalidArgument, "system file: " + what); }

}  // namespace

SystemDefinition parse_system_file(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw schema_error(e.what());
  }
  if (!doc.is_object()) throw schema_error("top level must be an object");

  auto require_string = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_string()) throw schema_error(std::string("'") + key + "' must be a string");
    return doc[key].get<std::string>();
  };

  SystemDefinition def;
  def.id = require_string("id");
  def.potential_name = require_string("potential_name");
  def.relation = require_string("relation");
  def.representation = doc.value("representation", std::string("custom"));
  if (doc.contains("excluded_index") && doc["excluded_index"].is_string())
    def.excluded = doc["excluded_index"].get<std::string>();
  else
    throw schema_error("'excluded_index' must name a coordinate");

  if (!doc.contains("coords") || !doc["coords"].is_array() || doc["coords"].empty())
    throw schema_error("'coords' must be a non-empty array");
  for (const auto& c : doc["coords"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string())
      throw schema_error("every coordinate needs a 'name'");
    Coordinate coord{c["name"].get<std::string>(), CoordRole::Extensive};
    const std::string role = c.value("role", std::string("extensive"));
    if (role == "intensive")
      coord.role = CoordRole::Intensive;
    else if (role != "extensive")
      throw schema_error("coordinate role must be 'extensive' or 'intensive'");
    def.coords.push_back(std::move(coord));
  }

  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw schema_error("'params' must be an object");
    for (const auto& [name, value] : doc["params"].items()) {
      if (!value.is_number()) throw schema_error("parameter '" + name + "' must be a number");
      def.params[name] = value.get<double>();
    }
  }
  if (doc.contains("domain")) {
    if (!doc["domain"].is_array()) throw schema_error("'domain' must be an array of strings");
    for (const auto& d : doc["domain"]) {
      if (!d.is_string()) throw schema_error("'domain' must be an array of strings");
      def.domain.push_back(d.get<std::string>());
    }
  }
  if (doc.contains("reference")) {
    if (!doc["reference"].is_array()) throw schema_error("'reference' must be an array of numbers");
    for (const auto& x : doc["reference"]) {
      if (!x.is_number()) throw schema_error("'reference' must be an array of numbers");
      def.reference.push_back(x.get<double>());
    }
  }
  def.legendre_complete = doc.value("legendre_complete", false);
  def.homogeneity_note = doc.value("homogeneity_note", std::string());
  return def;
}

SystemDefinition load_system_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read system file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_system_file(ss.str());
}

std::map<std::string, double> parse_assignments(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw Error(ErrorKind::InvalidArgument, "expected name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != value.size()) throw Error(ErrorKind::InvalidArgument, "not a number: '" + value + "'");
    if (!out.emplace(name, v).second) throw Error(ErrorKind::InvalidArgument, "'" + name + "' given twice");
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty assignment list");
  return out;
}

Point point_from_assignments(const SystemSpec& spec, const std::map<std::string, double>& values) {
  Point x(spec.dimension());
  for (const auto& [name, v] : values) x[spec.slot(name)] = v;
  for (const auto& c : spec.coords)
    if (!values.contains(c.name)) throw Error(ErrorKind::InvalidArgument, "missing coordinate '" + c.name + "'");
  return x;
}

FigureRecipe figure_recipe(const std::string& id) {
  FigureRecipe r;
  r.id = id;
  if (id == "vdW1" || id == "vdW2") {
    r.axis = {"v_r", 0.4, 3.0, 521};
  } else if (id == "ising") {
    r.axis = {"T", 0.2, 10.0, 197};
    r.fields = {0.5, 1.0, 1.5, 2.0};
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown figure '" + id + "' (vdW1, vdW2, ising)");
  }
  return r;
}

namespace {

std::string flag(const CurvatureSample& s) { return s.failed || s.nonfinite ? "1" : "0"; }
std::string value(const CurvatureSample& s) {
  return s.failed ? "nan" : num(s.ricci_scalar);
}

std::string vdw_figure(const FigureRecipe& r) {
  const std::map<std::string, double> params{{"a", r.a}, {"b", r.b}};
  const bool first = r.id == "vdW1";
  const SystemSpec lhs = catalog_system(first ? "vdw_s" : "vdw_u", params);
  const SystemSpec rhs = catalog_system(first ? "vdw_u" : "vdw_F", params);
  const CurvatureView vl = vdw_pressure_view(lhs, true);
  const CurvatureView vr = vdw_pressure_view(rhs, true);

  // Grid rows plus the analytic locus points, in increasing v_r.
  std::vector<std::pair<double, bool>> rows;
  for (std::size_t i = 0; i < r.axis.count; ++i) rows.emplace_back(r.axis.at(i), false);
  const double P = from_reduced_variables(1.0, r.P_r, r.a, r.b).P;
  for (double v : vdw_locus_volumes(P, r.a, r.b)) {
    const double v_r = reduced_variables(v, P, r.a, r.b).v;
    if (v_r >= r.axis.min && v_r <= r.axis.max) rows.emplace_back(v_r, true);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  GridSpec grid{{{"v_r", 0, 0, rows.size()}, {"P_r", r.P_r, r.P_r, 1}}};
  std::vector<CurvatureSample> sl(rows.size()), sr(rows.size());
  // Rows are not evenly spaced, so evaluate through one-point grids.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    GridSpec one{{{"v_r", rows[i].first, rows[i].first, 1}, {"P_r", r.P_r, r.P_r, 1}}};
    sl[i] = evaluate_grid(vl, one)[0];
    sr[i] = evaluate_grid(vr, one)[0];
  }

  const std::string a = first ? "entropy" : "energy";
  const std::string b = first ? "energy" : "Helmholtz";
  std::string csv = "# figure " + r.id + ": van der Waals R in " + a + " and " + b + " representations, P_r=" +
                    format_g(r.P_r) + " a=" + format_g(r.a) + " b=" + format_g(r.b) + " v_r=" + format_g(r.axis.min) + ":" +
                    format_g(r.axis.max) + ":" + std::to_string(r.axis.count) + ", locus rows added\n";
  csv += "v_r,R_" + a + ",R_" + b + ",nonfinite_" + a + ",nonfinite_" + b + ",locus\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    csv += num(rows[i].first) + "," + value(sl[i]) + "," + value(sr[i]) + "," + flag(sl[i]) + "," + flag(sr[i]) +
           "," + (rows[i].second ? "1" : "0") + "\n";
  return csv;
}

std::string ising_figure(const FigureRecipe& r) {
  const auto curves = ising_profile(r.J, r.fields, r.axis.min, r.axis.max, r.axis.count);
  std::string csv = "# figure ising: one-dimensional Ising R(T) at J=" + format_g(r.J) + ", T=" + format_g(r.axis.min) + ":" +
                    format_g(r.axis.max) + ":" + std::to_string(r.axis.count) + ", H in {";
  for (std::size_t i = 0; i < r.fields.size(); ++i) csv += (i ? "," : "") + format_g(r.fields[i]);
  csv += "}\nT,H,R,nonfinite\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.T.size(); ++i)
      csv += num(c.T[i]) + "," + num(c.H) + "," + num(c.R[i]) + "," + (c.nonfinite[i] ? "1" : "0") + "\n";
  return csv;
}

}  // namespace

std::string figure_csv(const FigureRecipe& recipe) {
  if (recipe.id == "ising") return ising_figure(recipe);
  return vdw_figure(recipe);
}

namespace {

PointMap to_entropy_partner(const SystemSpec& s) {
  return [s](const Point& x) { return Point{evaluate(s, x), x[1]}; };
}

GridSpec grid2(const char* n0, double a0, double b0, const char* n1, double a1, double b1, std::size_t count) {
  return GridSpec{{{n0, a0, b0, count}, {n1, a1, b1, count}}};
}

void invariance_checks(std::vector<CheckResult>& out) {
  auto add = [&](const std::string& name, const InvarianceReport& r, bool expect_equal, double tol) {
    CheckResult c{"invariance", name, false, expect_equal ? r.max_rel_delta : r.max_abs_delta, ""};
    c.passed = expect_equal ? r.failures == 0 && !r.rows.empty() && r.max_rel_delta < tol
                            : !r.rows.empty() && r.max_abs_delta > tol;
    c.detail = (expect_equal ? "max relative delta " : "intentionally different, max |delta| ") + format_g(c.value) +
               " over " + std::to_string(r.rows.size()) + " points, " + std::to_string(r.failures) + " failures";
    out.push_back(std::move(c));
  };

  const SystemSpec vs = catalog_system("vdw_s"), vu = catalog_system("vdw_u");
  add("vdw entropy vs energy", invariance_report(vs, vu, to_entropy_partner(vs), grid2("u", 0.5, 5, "v", 1.5, 6, 15)),
      true, 1e-6);
  const SystemSpec cs = catalog_system("chap_s"), cu = catalog_system("chap_u");
  add("chaplygin entropy vs energy",
      invariance_report(cs, cu, to_entropy_partner(cs), grid2("u", 0.5, 3, "v", 0.5, 3, 15)), true, 1e-6);
  const SystemSpec is = catalog_system("ideal_s"), iu = catalog_system("ideal_u");
  add("ideal entropy vs energy", invariance_report(is, iu, to_entropy_partner(is), grid2("u", 0.5, 5, "v", 0.5, 5, 15)),
      true, 1e-8);
  const LegendrePartner g = total_legendre(iu);
  add("ideal energy vs gibbs (total Legendre)",
      invariance_report(iu, g.spec, g.forward, grid2("s", 0.5, 3, "v", 0.5, 3, 10)), true, 1e-6);
  const LegendrePartner vt = total_legendre(vu, Solve::Numeric);
  add("vdw energy vs total Legendre image",
      invariance_report(vu, vt.spec, vt.forward, grid2("s", 0.5, 2, "v", 2, 5, 5)), true, 1e-6);
  const LegendrePartner vf = partial_legendre(vu, 0);
  add("vdw energy vs Helmholtz (partial Legendre)",
      invariance_report(vu, vf.spec, vf.forward, grid2("s", -1, 3, "v", 1.5, 6, 15)), false, 0.1);
}

void homogeneity_checks(std::vector<CheckResult>& out) {
  auto field = [](const std::string& src) {
    return compile(parse_relation(src, {"x", "y"}, {}), {});
  };
  const std::vector<double> lambdas{0.5, 2.0, 3.0};
  auto degree = [&](const std::string& name, const std::string& src, double beta) {
    const HomogeneityReport r = homogeneity_degree(*field(src), {1.0, 2.0}, lambdas);
    CheckResult c{"homogeneity", name, false, r.fitted_degree, ""};
    c.passed = r.is_homogeneous && std::abs(*r.degree - beta) < 1e-10 && r.max_residual < 1e-10;
    c.detail = "degree " + format_g(r.fitted_degree) + ", residual " + format_g(r.max_residual);
    out.push_back(std::move(c));
  };
  degree("xy/(x+y) has degree 1", "x*y/(x + y)", 1.0);
  degree("x^2 y has degree 3", "x^2*y", 3.0);

  {
    const HomogeneityReport a = homogeneity_degree(*field("x*y/(x + y)"), {2.5, 5.0});
    const HomogeneityReport b = homogeneity_degree(*field("x*y/(x + y)"), {1.0, 2.0});
    CheckResult c{"homogeneity", "degree independent of the starting scale", false, a.fitted_degree - b.fitted_degree, ""};
    c.passed = a.is_homogeneous && b.is_homogeneous && std::abs(*a.degree - *b.degree) <= 1e-10 &&
               a.max_residual <= 1e-10 * 5 && b.max_residual <= 1e-10 * 5;
    c.detail = "degrees " + format_g(a.fitted_degree) + " and " + format_g(b.fitted_degree);
    out.push_back(std::move(c));
  }
  {
    const HomogeneityReport r = homogeneity_degree(catalog_system("ideal_s"), {2.0, 3.0});
    CheckResult c{"homogeneity", "molar ideal-gas entropy rejected", !r.is_homogeneous, r.max_residual, ""};
    c.detail = "residual " + format_g(r.max_residual);
    out.push_back(std::move(c));
  }
}

void oracle_checks(std::vector<CheckResult>& out) {
  auto add = [&](OracleId id, const OracleComparison& r) {
    CheckResult c{"oracle", to_string(id), false, r.max_deviation, ""};
    c.passed = r.evaluated > 0 && r.max_deviation < 1e-6;
    c.detail = "sign " + format_g(r.sign_factor) + ", max deviation " + format_g(r.max_deviation) + " over " +
               std::to_string(r.evaluated) + " points";
    if (!c.passed && !r.worst_point.empty()) {
      c.detail += "; worst at (";
      for (std::size_t i = 0; i < r.worst_point.size(); ++i) c.detail += (i ? ", " : "") + format_g(r.worst_point[i]);
      c.detail += "): pipeline " + format_g(r.worst_pipeline) + ", oracle " + format_g(r.worst_oracle);
    }
    out.push_back(std::move(c));
  };
  const SystemSpec vs = catalog_system("vdw_s"), vu = catalog_system("vdw_u"), vf = catalog_system("vdw_F");
  add(OracleId::vdw_R_s, oracle_vs_pipeline(OracleId::vdw_R_s, vs, grid2("u", 0.5, 5, "v", 1.5, 6, 10)));
  add(OracleId::vdw_R_u, oracle_vs_pipeline(OracleId::vdw_R_u, vu, grid2("s", -1, 3, "v", 1.5, 6, 10)));
  add(OracleId::vdw_R_vP, oracle_vs_pipeline(OracleId::vdw_R_vP, vdw_pressure_view(vs, false), vs.params,
                                             grid2("v", 1.5, 6, "P", 0.01, 0.2, 10)));
  add(OracleId::vdw_R_F_Tv, oracle_vs_pipeline(OracleId::vdw_R_F_Tv, vf, grid2("T", 0.5, 3, "v", 1.5, 6, 10)));
  add(OracleId::vdw_R_F_vP, oracle_vs_pipeline(OracleId::vdw_R_F_vP, vdw_pressure_view(vf, false), vf.params,
                                               grid2("v", 1.5, 6, "P", 0.01, 0.2, 10)));
  add(OracleId::chap_R_s,
      oracle_vs_pipeline(OracleId::chap_R_s, catalog_system("chap_s"), grid2("u", 0.5, 5, "v", 0.5, 5, 10)));
  add(OracleId::chap_R_u,
      oracle_vs_pipeline(OracleId::chap_R_u, catalog_system("chap_u"), grid2("s", 2, 5, "v", 0.5, 2, 10)));
  add(OracleId::chap_R_const,
      oracle_vs_pipeline(OracleId::chap_R_const, catalog_system("chap_s", {{"alpha", 1.0}, {"beta", 1.0}}),
                         grid2("u", 0.5, 5, "v", 0.5, 5, 10)));
  add(OracleId::ideal_zero,
      oracle_vs_pipeline(OracleId::ideal_zero, catalog_system("ideal_s"), grid2("u", 0.5, 5, "v", 0.5, 5, 10)));

  // Determinant: only the vanishing at alpha = beta = 0 is compared.
  const SystemSpec c0 = catalog_system("chap_s", {{"alpha", 0.0}, {"beta", 0.0}});
  const Point x{2.0, 3.0};
  const double det = natural_metric_unchecked(jet_eval(c0, x, 2), x, c0.excluded_index).det;
  const double oracle = oracle_eval(OracleId::chap_det, {{"s", evaluate(c0, x)}, {"v", 3.0}}, c0.params);
  CheckResult c{"oracle", "chap_det", std::abs(det) < 1e-12 && std::abs(oracle) < 1e-12, det, ""};
  c.detail = "alpha = beta = 0: pipeline det " + format_g(det) + ", oracle " + format_g(oracle);
  out.push_back(std::move(c));
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& suite) {
  std::vector<CheckResult> out;
  if (suite != "invariance" && suite != "homogeneity" && suite != "oracle" && suite != "all")
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' (invariance, homogeneity, oracle, all)");
  if (suite == "invariance" || suite == "all") invariance_checks(out);
  if (suite == "homogeneity" || suite == "all") homogeneity_checks(out);
  if (suite == "oracle" || suite == "all") oracle_checks(out);
  return out;
}

namespace {

struct SystemOptions {
  std::string id;
  std::string file;
  std::string params;
};

void add_system_options(CLI::App* cmd, SystemOptions& o) {
  auto* sys = cmd->add_option("--system", o.id, "catalog system id");
  auto* file = cmd->add_option("--file", o.file, "JSON system definition");
  sys->excludes(file);
  cmd->add_option("--param", o.params, "parameter overrides, e.g. a=1,b=2");
}

SystemSpec load(const SystemOptions& o) {
  std::map<std::string, double> overrides;
  if (!o.params.empty()) overrides = parse_assignments(o.params);
  if (!o.file.empty()) return make_system(load_system_file(o.file), overrides);
  if (o.id.empty()) throw Error(ErrorKind::InvalidArgument, "one of --system or --file is required");
  return catalog_system(o.id, overrides);
}

// Oracle that shares the system's coordinates, for reporting the global sign.
std::optional<OracleId> native_oracle(const SystemSpec& spec) {
  static const std::map<std::string, OracleId> table{
      {"vdw_s", OracleId::vdw_R_s},   {"vdw_u", OracleId::vdw_R_u},   {"vdw_F", OracleId::vdw_R_F_Tv},
      {"chap_s", OracleId::chap_R_s}, {"chap_u", OracleId::chap_R_u}, {"ideal_s", OracleId::ideal_zero},
      {"ideal_u", OracleId::ideal_zero}, {"ideal_F", OracleId::ideal_zero}, {"ideal_g", OracleId::ideal_zero}};
  const auto* entry = find_catalog_entry(spec.id);
  if (!entry || !spec.relation || spec.relation->source != entry->definition.relation) return std::nullopt;
  auto it = table.find(spec.id);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

double sign_factor(const SystemSpec& spec) {
  const auto id = native_oracle(spec);
  if (!id) return 1.0;
  GridSpec one;
  for (std::size_t a = 0; a < spec.dimension(); ++a)
    one.axes.push_back({spec.coords[a].name, spec.reference[a], spec.reference[a], 1});
  try {
    return oracle_vs_pipeline(*id, spec, one).sign_factor;
  } catch (const Error&) {
    return 1.0;
  }
}

int cmd_curvature(const SystemOptions& so, const std::string& at, std::ostream& out) {
  const SystemSpec spec = load(so);
  const Point x = point_from_assignments(spec, parse_assignments(at));
  if (auto violated = domain_check(spec, x); !violated.empty()) throw DomainViolation(std::move(violated));
  const CurvatureResult r = curvature(spec, x);
  json j;
  j["system"] = spec.id;
  json point = json::object();
  for (std::size_t a = 0; a < x.size(); ++a) point[spec.coords[a].name] = x[a];
  j["point"] = point;
  j["ricci_scalar"] = number_or_null(r.ricci_scalar);
  j["det_g"] = r.det_g;
  j["conformal_factor"] = r.conformal_factor;
  j["degenerate"] = r.degenerate;
  j["nonfinite"] = r.nonfinite;
  j["sign_factor"] = sign_factor(spec);
  out << j.dump(2) << "\n";
  return kOk;
}

struct ScanArgs {
  std::vector<std::string> grid;
  std::string chart = "native";
  double threshold = 1e8;
  std::string out;
  std::string loci;
};

int cmd_scan(const SystemOptions& so, const ScanArgs& args, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = load(so);
  if (args.grid.empty()) throw Error(ErrorKind::InvalidArgument, "at least one --grid axis is required");
  GridSpec grid;
  for (const auto& g : args.grid) grid.axes.push_back(GridAxis::parse(g));

  CurvatureView view;
  ScanOptions options;
  options.blowup_threshold = args.threshold;
  if (args.chart == "native") {
    view = direct_view(spec);
  } else if (args.chart == "vP" || args.chart == "reduced") {
    const bool reduced = args.chart == "reduced";
    view = vdw_pressure_view(spec, reduced);
    options.locus = VdwLocus{spec.params.at("a"), spec.params.at("b"), reduced};
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown chart '" + args.chart + "' (native, vP, reduced)");
  }
  if (grid.axes.size() != view.coords.size())
    throw Error(ErrorKind::InvalidArgument, "grid needs one axis per coordinate of " + view.label);
  for (std::size_t a = 0; a < grid.axes.size(); ++a)
    if (grid.axes[a].name != view.coords[a])
      throw Error(ErrorKind::InvalidArgument, "grid axis " + std::to_string(a) + " must be '" + view.coords[a] + "'");

  const ScanReport report = singularity_scan(view, grid, options);

  std::string csv = "# scan " + spec.id + " chart=" + args.chart + " threshold=" + format_g(args.threshold) + "\n";
  for (const auto& ax : grid.axes) csv += ax.name + ",";
  csv += "R,nonfinite\n";
  for (const auto& s : report.samples) {
    for (double c : s.at) csv += num(c) + ",";
    csv += value(s) + "," + flag(s) + "\n";
  }

  auto named = [&](const Point& p) {
    json o = json::object();
    for (std::size_t a = 0; a < p.size(); ++a) o[grid.axes[a].name] = p[a];
    return o;
  };
  json j;
  j["system"] = spec.id;
  j["chart"] = args.chart;
  j["threshold"] = args.threshold;
  j["sign_factor"] = report.sign_factor;
  j["failures"] = report.failures;
  j["singular"] = json::array();
  for (const auto& sp : report.singular) {
    json s;
    s["point"] = named(sp.at);
    s["ricci_scalar"] = number_or_null(sp.ricci_scalar);
    if (options.locus) {
      s["on_locus"] = sp.on_locus;
      s["locus_distance"] = number_or_null(sp.locus_distance);
    }
    j["singular"].push_back(s);
  }
  if (options.locus) {
    j["analytic_locus"] = json::array();
    for (const auto& p : report.analytic_locus) j["analytic_locus"].push_back(named(p));
    j["other_denominator_zeros"] = json::array();
    for (const auto& p : report.other_denominator_zeros) j["other_denominator_zeros"].push_back(named(p));
    j["max_locus_deviation"] = report.max_locus_deviation;
  }

  if (args.out.empty()) {
    out << csv;
  } else {
    write_file(args.out, csv);
  }
  const std::string loci = !args.loci.empty() ? args.loci : args.out.empty() ? "" : args.out + ".loci.json";
  if (loci.empty())
    err << j.dump() << "\n";
  else
    write_file(loci, j.dump(2) + "\n");
  return kOk;
}

int cmd_figure(const std::string& id, const std::string& path, std::ostream& out) {
  const std::string csv = figure_csv(figure_recipe(id));
  if (path.empty() || path == "-")
    out << csv;
  else
    write_file(path, csv);
  return kOk;
}

int cmd_check(const std::string& suite, std::ostream& out) {
  const auto results = run_checks(suite);
  bool all = true;
  json summary = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    char line[512];
    std::snprintf(line, sizeof line, "%-4s %-12s %-44s %s\n", r.passed ? "PASS" : "FAIL", r.suite.c_str(),
                  r.name.c_str(), r.detail.c_str());
    out << line;
    summary.push_back({{"suite", r.suite}, {"name", r.name}, {"passed", r.passed},
                       {"value", number_or_null(r.value)}, {"detail", r.detail}});
  }
  json j;
  j["suite"] = suite;
  j["passed"] = all;
  j["results"] = summary;
  out << j.dump() << "\n";
  return all ? kOk : kCheckFailed;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::DegenerateMetric:
      return kDegenerate;
    case ErrorKind::DomainViolation:
    case ErrorKind::NonFinite:
    case ErrorKind::SingularPrefactor:
    case ErrorKind::InversionFailure:
    case ErrorKind::SingularDenominator:
    case ErrorKind::PreconditionFailure:
      return kDomain;
    default:
      return kUsage;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Natural-metric curvature of thermodynamic fundamental relations", "geothermo"};
  app.require_subcommand(1);

  SystemOptions so;
  std::string at;
  auto* curv = app.add_subcommand("curvature", "Ricci scalar at a point, as JSON");
  add_system_options(curv, so);
  curv->add_option("--at", at, "coordinates, e.g. u=1,v=1")->required();

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "curvature over a grid with singularity detection");
  add_system_options(scan, so);
  scan->add_option("--grid", scan_args.grid, "axis as name=min:max:count, one per coordinate")->required();
  scan->add_option("--chart", scan_args.chart, "native, vP or reduced (van der Waals only)");
  scan->add_option("--threshold", scan_args.threshold, "blow-up threshold for |R|");
  scan->add_option("--out", scan_args.out, "CSV path (default stdout)");
  scan->add_option("--loci", scan_args.loci, "JSON path for the detected loci (default <out>.loci.json)");

  std::string figure_id, figure_out;
  auto* fig = app.add_subcommand("figure", "reproduce a figure as CSV");
  fig->add_option("--id", figure_id, "vdW1, vdW2 or ising")->required();
  fig->add_option("--out", figure_out, "CSV path (default stdout)");

  std::string suite;
  auto* check = app.add_subcommand("check", "run a validation suite; exit 5 on any failure");
  check->add_option("suite", suite, "invariance, homogeneity, oracle or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (curv->parsed()) return cmd_curvature(so, at, out);
    if (scan->parsed()) return cmd_scan(so, scan_args, out, err);
    if (fig->parsed()) return cmd_figure(figure_id, figure_out, out);
    if (check->parsed()) return cmd_check(suite, out);
  } catch (const DomainViolation& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const Unwritable& e) {
    err << "error: " << e.what() << "\n";
    return kUnwritable;
  }
  return kUsage;
}

}  // namespace gtd::cli
