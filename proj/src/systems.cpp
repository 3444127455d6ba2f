#include "gtd/systems.hpp"

#include <algorithm>
#include <set>

#include "gtd/errors.hpp"

namespace gtd {

std::vector<std::string> SystemSpec::coord_names() const {
  std::vector<std::string> names;
  names.reserve(coords.size());
  for (const auto& c : coords) names.push_back(c.name);
  return names;
}

std::size_t SystemSpec::slot(const std::string& name) const {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i].name == name) return i;
  throw Error(ErrorKind::InvalidArgument, "system '" + id + "' has no coordinate '" + name + "'");
}

SystemSpec make_system(const SystemDefinition& def, const std::map<std::string, double>& overrides) {
  SystemSpec spec;
  spec.id = def.id;
  spec.representation = def.representation;
  spec.potential_name = def.potential_name;
  spec.coords = def.coords;
  spec.params = def.params;
  spec.legendre_complete = def.legendre_complete;
  spec.homogeneity_note = def.homogeneity_note;
  for (const auto& [name, value] : overrides) {
    if (!spec.params.contains(name))
      throw Error(ErrorKind::InvalidArgument, "system '" + def.id + "' has no parameter '" + name + "'");
    spec.params[name] = value;
  }

  const auto names = spec.coord_names();
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    throw Error(ErrorKind::InvalidArgument, "coordinate names must be unique");
  spec.excluded_index = spec.slot(def.excluded);

  std::vector<std::string> param_names;
  std::vector<double> param_values;
  for (const auto& [name, value] : spec.params) {
    param_names.push_back(name);
    param_values.push_back(value);
  }

  spec.relation = parse_relation(def.relation, names, param_names);
  spec.field = compile(*spec.relation, spec.params);

  for (const auto& text : def.domain) {
    auto pred = std::make_shared<const Predicate>(Predicate::parse(text, names, param_names));
    spec.domain.push_back({text, [pred, param_values](std::span<const double> x) {
                             return pred->holds(x, param_values);
                           }});
  }

  spec.reference = def.reference.empty() ? Point(names.size(), 1.0) : def.reference;
  if (spec.reference.size() != names.size())
    throw Error(ErrorKind::InvalidArgument, "reference point dimension mismatch");
  return spec;
}

namespace {

Coordinate ext(std::string name) { return {std::move(name), CoordRole::Extensive}; }
Coordinate intensive(std::string name) { return {std::move(name), CoordRole::Intensive}; }

const char* kExtensiveNote = "homogeneous for the extensive (N-dependent) extension";

// The direct form -T ln(cosh(H/T) + sqrt(sinh(H/T)^2 + exp(-4J/T))) keeps the
// J dependence in digits below double precision once H/T and J/T are
// moderately large (T < 0.5 at H = J = 1), and the Hessian is made of
// exactly those digits. Factoring out exp(|H|/T) and rationalising leaves
// f = -|H| - T ln(1 + d) with d computed without cancellation.
const char* kIsingRelation =
    "-sqrt(H^2) - T*ln(1 + exp(-(4*J + 2*sqrt(H^2))/T)"
    "/(sqrt(((1 - exp(-2*sqrt(H^2)/T))/2)^2 + exp(-(4*J + 2*sqrt(H^2))/T)) + (1 - exp(-2*sqrt(H^2)/T))/2))";

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;

  entries.push_back({{"ideal_s", "entropy", "s", {ext("u"), ext("v")}, "u", {},
                      {"u > 0", "v > 0"}, "(3/2)*ln(u) + ln(v)", {2.0, 3.0}, false, kExtensiveNote},
                     {{PartnerKind::Inverse, {0}, "ideal_u", {}}}});
  entries.push_back({{"ideal_u", "energy", "u", {ext("s"), ext("v")}, "s", {},
                      {"v > 0"}, "(exp(s)/v)^(2/3)", {1.0, 2.0}, false, kExtensiveNote},
                     {{PartnerKind::Inverse, {0}, "ideal_s", {}},
                      {PartnerKind::Partial, {0}, "ideal_F", {1.0}},
                      {PartnerKind::Total, {0, 1}, "ideal_g", {1.0, -1.0}}}});
  entries.push_back({{"ideal_F", "helmholtz", "F", {intensive("T"), ext("v")}, "T", {},
                      {"T > 0", "v > 0"}, "(1/2)*T*(3 - 2*ln(v) - 3*ln((3/2)*T))", {1.0, 2.0}, false,
                      "not canonical: depends on the intensive T"},
                     {{PartnerKind::Partial, {0}, "ideal_u", {-1.0}}}});
  entries.push_back({{"ideal_g", "gibbs", "g", {intensive("T"), intensive("P")}, "T", {},
                      {"T > 0", "P > 0"}, "(5/2)*T - (3/2)*T*ln((3/2)*T) - T*ln(T/P)", {1.0, 1.0},
                      true, "total Legendre image of the energy representation"},
                     {{PartnerKind::Total, {0, 1}, "ideal_u", {-1.0, 1.0}}}});

  entries.push_back({{"vdw_s", "entropy", "s", {ext("u"), ext("v")}, "u", {{"a", 1.0}, {"b", 1.0}},
                      {"v > b", "u + a/v > 0"}, "(3/2)*ln(u + a/v) + ln(v - b)", {2.0, 3.0}, false,
                      kExtensiveNote},
                     {{PartnerKind::Inverse, {0}, "vdw_u", {}}}});
  entries.push_back({{"vdw_u", "energy", "u", {ext("s"), ext("v")}, "s", {{"a", 1.0}, {"b", 1.0}},
                      {"v > b"}, "exp((2/3)*s)*(v - b)^(-2/3) - a/v", {1.0, 3.0}, false, kExtensiveNote},
                     {{PartnerKind::Inverse, {0}, "vdw_s", {}},
                      {PartnerKind::Partial, {0}, "vdw_F", {1.0}}}});
  entries.push_back({{"vdw_F", "helmholtz", "F", {intensive("T"), ext("v")}, "T", {{"a", 1.0}, {"b", 1.0}},
                      {"T > 0", "v > b"}, "(3/2)*T - a/v - (3/2)*T*ln((3/2)*T) - T*ln(v - b)",
                      {1.5, 3.0}, false, "not canonical: depends on the intensive T"},
                     {{PartnerKind::Partial, {0}, "vdw_u", {-1.0}}}});

  entries.push_back({{"ising_f", "free-energy", "f", {intensive("T"), intensive("H")}, "T", {{"J", 1.0}},
                      {"T > 0", "H^2 > 0"}, kIsingRelation, {1.0, 1.0}, true,
                      "total Legendre image of the internal energy"},
                     {}});

  const std::map<std::string, double> chap_params{{"s0", 1.0}, {"C", 1.0}, {"alpha", 2.0}, {"beta", 1.0}};
  entries.push_back({{"chap_s", "entropy", "s", {ext("u"), ext("v")}, "u", chap_params,
                      {"u > 0", "v > 0"}, "s0*ln(u^(1 + alpha) + C*v^(1 + beta))", {2.0, 3.0}, false, ""},
                     {{PartnerKind::Inverse, {0}, "chap_u", {}}}});
  entries.push_back({{"chap_u", "energy", "u", {ext("s"), ext("v")}, "s", chap_params,
                      {"v > 0", "exp(s/s0) - C*v^(1 + beta) > 0"},
                      "(exp(s/s0) - C*v^(1 + beta))^(1/(1 + alpha))", {3.0, 2.0}, false, ""},
                     {{PartnerKind::Inverse, {0}, "chap_s", {}}}});
  return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& id) {
  for (const auto& e : catalog_entries())
    if (e.definition.id == id) return &e;
  return nullptr;
}

std::vector<SystemSpec> catalog() {
  std::vector<SystemSpec> out;
  for (const auto& e : catalog_entries()) out.push_back(make_system(e.definition));
  return out;
}

SystemSpec catalog_system(const std::string& id, const std::map<std::string, double>& overrides) {
  const CatalogEntry* entry = find_catalog_entry(id);
  if (!entry) throw Error(ErrorKind::InvalidArgument, "unknown system '" + id + "'");
  return make_system(entry->definition, overrides);
}

std::vector<std::string> domain_check(const SystemSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dimension())
    throw Error(ErrorKind::InvalidArgument, "point dimension does not match system '" + spec.id + "'");
  std::vector<std::string> violated;
  for (const auto& p : spec.domain)
    if (!p.holds(x)) violated.push_back(p.text);
  return violated;
}

double evaluate(const SystemSpec& spec, std::span<const double> x) {
  if (auto violated = domain_check(spec, x); !violated.empty()) throw DomainViolation(std::move(violated));
  return spec.field->evaluate(x);
}

Jet4 jet_eval(const SystemSpec& spec, std::span<const double> x, std::size_t order) {
  if (auto violated = domain_check(spec, x); !violated.empty()) throw DomainViolation(std::move(violated));
  return jet_eval(*spec.field, x, order);
}

}  // namespace gtd
