#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtd/jets.hpp"
#include "gtd/relation.hpp"

namespace gtd {

enum class CoordRole { Extensive, Intensive };

struct Coordinate {
  std::string name;
  CoordRole role = CoordRole::Extensive;
};

struct DomainPredicate {
  std::string text;
  std::function<bool(std::span<const double>)> holds;
};

/// A fundamental relation together with everything the geometry needs to
/// know about it. Immutable once built.
struct SystemSpec {
  std::string id;
  std::string representation;  // entropy, energy, helmholtz, gibbs, free-energy, derived
  std::string potential_name;
  std::vector<Coordinate> coords;
  /// Slot of the pair left out of the conformal sum.
  std::size_t excluded_index = 0;
  std::map<std::string, double> params;
  std::vector<DomainPredicate> domain;
  ScalarFieldEvaluator field;
  /// A point known to lie in the domain. Numeric transforms seed from it.
  Point reference;
  /// Set when the relation came from DSL source.
  std::optional<RelationAst> relation;
  /// Every coordinate is already intensive, i.e. a total transform was applied.
  bool legendre_complete = false;
  std::string homogeneity_note;

  std::size_t dimension() const noexcept { return coords.size(); }
  std::vector<std::string> coord_names() const;
  /// Throws InvalidArgument for an unknown name.
  std::size_t slot(const std::string& name) const;
};

/// DSL-level description of a system; the catalog and the JSON system file
/// both go through this.
struct SystemDefinition {
  std::string id;
  std::string representation;
  std::string potential_name;
  std::vector<Coordinate> coords;
  std::string excluded;  // coordinate name
  std::map<std::string, double> params;
  std::vector<std::string> domain;
  std::string relation;
  Point reference;
  bool legendre_complete = false;
  std::string homogeneity_note;
};

/// Parse and compile a definition. `overrides` replace parameter values;
/// unknown override names are rejected.
SystemSpec make_system(const SystemDefinition& def, const std::map<std::string, double>& overrides = {});

/// The one-dimensional Ising free energy in its direct form. The catalog
/// entry evaluates an algebraically equal form that stays accurate at low T.
inline constexpr const char* kIsingDirectRelation = "-T*ln(cosh(H/T) + sqrt(sinh(H/T)^2 + exp(-4*J/T)))";

enum class PartnerKind { Inverse, Partial, Total };

/// Closed-form partner of a catalog system. `slots` are the transformed
/// slots of the source. For Legendre partners, `conjugate_signs[k]` relates
/// the partner coordinate to dPhi/dE at slot k (e.g. P = -du/dv).
struct PartnerLink {
  PartnerKind kind;
  std::vector<std::size_t> slots;
  std::string partner_id;
  std::vector<double> conjugate_signs;
};

struct CatalogEntry {
  SystemDefinition definition;
  std::vector<PartnerLink> links;
};

const std::vector<CatalogEntry>& catalog_entries();

/// All catalog systems with default parameters.
std::vector<SystemSpec> catalog();

/// Catalog system by id with parameter overrides. Throws InvalidArgument for
/// an unknown id.
SystemSpec catalog_system(const std::string& id, const std::map<std::string, double>& overrides = {});

const CatalogEntry* find_catalog_entry(const std::string& id);

/// Every violated predicate, empty when x is in the domain.
std::vector<std::string> domain_check(const SystemSpec& spec, std::span<const double> x);

/// Phi(x); throws DomainViolation naming the violated predicates.
double evaluate(const SystemSpec& spec, std::span<const double> x);

/// jet_eval after a domain check.
Jet4 jet_eval(const SystemSpec& spec, std::span<const double> x, std::size_t order = 4);

}  // namespace gtd
