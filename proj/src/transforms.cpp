#include "gtd/transforms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gtd/errors.hpp"

namespace gtd {

IntensiveVector equations_of_state(const SystemSpec& spec, const Point& x) {
  const Jet4 jet = jet_eval(spec, x, 1);
  IntensiveVector out;
  out.at = x;
  out.values.assign(jet.grad().begin(), jet.grad().end());
  return out;
}

namespace {

bool in_domain(const SystemSpec& spec, std::span<const double> x) {
  for (const auto& p : spec.domain)
    if (!p.holds(x)) return false;
  return true;
}

bool contains(const std::vector<std::size_t>& slots, std::size_t k) {
  return std::find(slots.begin(), slots.end(), k) != slots.end();
}

std::string join_names(const SystemSpec& spec, const std::vector<std::size_t>& slots) {
  std::string out;
  for (auto k : slots) {
    if (!out.empty()) out += ",";
    out += spec.coords[k].name;
  }
  return out;
}

// Solves dPhi/dE^k = y_k for k in `slots`, with the remaining E^j = y_j, by
// damped Newton from the source reference point.
Point solve_legendre_point(const SystemSpec& src, const std::vector<std::size_t>& slots,
                           std::span<const double> y) {
  const std::size_t n = src.dimension();
  const std::size_t m = slots.size();
  Point E = src.reference;
  for (std::size_t j = 0; j < n; ++j)
    if (!contains(slots, j)) E[j] = y[j];
  if (!in_domain(src, E))
    throw InversionFailure("Legendre seed point lies outside the source domain", E);

  auto residual = [&](const Jet4& jet) {
    Eigen::VectorXd r(m);
    for (std::size_t i = 0; i < m; ++i) r(i) = jet.d(slots[i]) - y[slots[i]];
    return r;
  };
  auto converged = [&](const Eigen::VectorXd& r) {
    for (std::size_t i = 0; i < m; ++i)
      if (std::abs(r(i)) > kNewtonTolerance * std::max(1.0, std::abs(y[slots[i]]))) return false;
    return true;
  };

  Jet4 jet = jet_eval(*src.field, E, 2);
  Eigen::VectorXd r = residual(jet);
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    if (converged(r)) return E;
    Eigen::MatrixXd H(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) H(i, k) = jet.d(slots[i], slots[k]);
    const Eigen::VectorXd step = H.fullPivLu().solve(r);
    if (!step.allFinite()) break;

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60 && !accepted; ++halving, t *= 0.5) {
      Point trial = E;
      for (std::size_t i = 0; i < m; ++i) trial[slots[i]] -= t * step(i);
      if (!in_domain(src, trial)) continue;
      Jet4 trial_jet(n);
      try {
        trial_jet = jet_eval(*src.field, trial, 2);
      } catch (const Error&) {
        continue;
      }
      Eigen::VectorXd trial_r = residual(trial_jet);
      if (trial_r.norm() < r.norm() || converged(trial_r)) {
        E = std::move(trial);
        jet = std::move(trial_jet);
        r = std::move(trial_r);
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  if (converged(r)) return E;
  throw InversionFailure("Newton iteration for the Legendre transform did not converge", E);
}

// Solves Phi(E) = y_target for E^target with the other E^j = y_j.
Point solve_inverse_point(const SystemSpec& src, std::size_t target, std::span<const double> y) {
  const std::size_t n = src.dimension();
  Point E(y.begin(), y.end());
  E[target] = src.reference[target];
  if (!in_domain(src, E)) throw InversionFailure("inversion seed point lies outside the source domain", E);

  const double goal = y[target];
  const double tol = kNewtonTolerance * std::max(1.0, std::abs(goal));
  Jet4 jet = jet_eval(*src.field, E, 1);
  double f = jet.value() - goal;
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    if (std::abs(f) <= tol) return E;
    const double step = f / jet.d(target);
    if (!std::isfinite(step)) break;
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60 && !accepted; ++halving, t *= 0.5) {
      Point trial = E;
      trial[target] -= t * step;
      if (!in_domain(src, trial)) continue;
      Jet4 trial_jet(n);
      try {
        trial_jet = jet_eval(*src.field, trial, 1);
      } catch (const Error&) {
        continue;
      }
      const double trial_f = trial_jet.value() - goal;
      if (std::abs(trial_f) < std::abs(f) || std::abs(trial_f) <= tol) {
        E = std::move(trial);
        jet = std::move(trial_jet);
        f = trial_f;
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  if (std::abs(f) <= tol) return E;
  throw InversionFailure("Newton iteration for the inverse representation did not converge", E);
}

// Offsets of a Taylor vector from its value slots.
std::vector<Taylor> deviations(std::span<const Taylor> y) {
  std::vector<Taylor> d;
  d.reserve(y.size());
  for (const auto& t : y) d.push_back(t - Taylor(t.value()));
  return d;
}

std::shared_ptr<const MonomialBasis> basis_of(std::span<const Taylor> y) {
  for (const auto& t : y)
    if (t.basis()) return t.basis();
  return nullptr;
}

class LegendreField final : public ScalarField {
 public:
  LegendreField(SystemSpec source, std::vector<std::size_t> slots)
      : source_(std::move(source)), slots_(std::move(slots)) {}

  std::size_t dimension() const override { return source_.dimension(); }

  Point solve(std::span<const double> y) const { return solve_legendre_point(source_, slots_, y); }

  double evaluate(std::span<const double> y) const override {
    const Point E = solve(y);
    double phi = source_.field->evaluate(E);
    for (auto k : slots_) phi -= y[k] * E[k];
    return phi;
  }

  Taylor evaluate(std::span<const Taylor> y) const override {
    const std::size_t n = dimension();
    Point y0(n);
    for (std::size_t a = 0; a < n; ++a) y0[a] = y[a].value();
    const Point E0 = solve(y0);
    auto basis = basis_of(y);
    if (!basis) return Taylor(evaluate(y0));

    // Polynomial model of Phi around E0 gives the gradient as polynomials in
    // dE; Newton with the frozen Jacobian gains one order per sweep.
    const Taylor model = taylor_eval(*source_.field, E0, basis->order());
    std::vector<Taylor> grad;
    for (auto k : slots_) grad.push_back(model.derivative(k));
    const Jet4 jet = jet_eval(*source_.field, E0, 2);
    const std::size_t m = slots_.size();
    Eigen::MatrixXd H(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) H(i, k) = jet.d(slots_[i], slots_[k]);
    const Eigen::MatrixXd Hinv = H.inverse();

    const std::vector<Taylor> dy = deviations(y);
    std::vector<Taylor> dE(n, Taylor(0.0));
    for (std::size_t j = 0; j < n; ++j)
      if (!contains(slots_, j)) dE[j] = dy[j];
    for (std::size_t sweep = 0; sweep <= basis->order() + 1; ++sweep) {
      std::vector<Taylor> r;
      for (std::size_t i = 0; i < m; ++i) r.push_back(substitute(grad[i], dE) - Taylor(y0[slots_[i]]) - dy[slots_[i]]);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) dE[slots_[i]] -= Taylor(Hinv(i, k)) * r[k];
    }

    std::vector<Taylor> E;
    for (std::size_t a = 0; a < n; ++a) E.push_back(Taylor(E0[a]) + dE[a]);
    Taylor phi = source_.field->evaluate(E);
    for (auto k : slots_) phi -= y[k] * E[k];
    // Value slot identical to the double path.
    std::vector<double> c(phi.coeffs().begin(), phi.coeffs().end());
    c[0] = evaluate(y0);
    return Taylor(phi.basis(), std::move(c));
  }

 private:
  SystemSpec source_;
  std::vector<std::size_t> slots_;
};

class InverseField final : public ScalarField {
 public:
  InverseField(SystemSpec source, std::size_t target) : source_(std::move(source)), target_(target) {}

  std::size_t dimension() const override { return source_.dimension(); }

  Point solve(std::span<const double> y) const { return solve_inverse_point(source_, target_, y); }

  double evaluate(std::span<const double> y) const override { return solve(y)[target_]; }

  Taylor evaluate(std::span<const Taylor> y) const override {
    const std::size_t n = dimension();
    Point y0(n);
    for (std::size_t a = 0; a < n; ++a) y0[a] = y[a].value();
    const Point E0 = solve(y0);
    auto basis = basis_of(y);
    if (!basis) return Taylor(E0[target_]);

    const double slope = jet_eval(*source_.field, E0, 1).d(target_);
    std::vector<Taylor> E(y.begin(), y.end());
    E[target_] = Taylor(E0[target_]);
    for (std::size_t sweep = 0; sweep <= basis->order() + 1; ++sweep) {
      const Taylor f = source_.field->evaluate(E) - y[target_];
      E[target_] -= f / Taylor(slope);
    }
    std::vector<double> c(E[target_].coeffs().begin(), E[target_].coeffs().end());
    c.resize(basis->size(), 0.0);
    c[0] = E0[target_];
    return Taylor(basis, std::move(c));
  }

 private:
  SystemSpec source_;
  std::size_t target_;
};

// Sign and magnitude of q along a 32-sample line through the reference point
// in the direction of `slot`. Throws InversionFailure with the first sample
// where q vanishes or changes sign.
template <typename Q>
void check_monotone(const SystemSpec& spec, std::size_t slot, Q&& q, const std::string& what) {
  const Point& ref = spec.reference;
  const double half = 0.5 * std::max(1.0, std::abs(ref[slot]));
  std::vector<std::pair<Point, double>> samples;
  double scale = 0.0;
  for (std::size_t i = 0; i < kMonotonicitySamples; ++i) {
    Point p = ref;
    p[slot] = ref[slot] - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(kMonotonicitySamples - 1);
    if (!in_domain(spec, p)) continue;
    double value = 0.0;
    try {
      value = q(jet_eval(*spec.field, p, 2));
    } catch (const Error&) {
      continue;
    }
    samples.emplace_back(p, value);
    scale = std::max(scale, std::abs(value));
  }
  if (samples.empty()) throw InversionFailure(what + ": no in-domain samples", ref);
  const double sign = samples.front().second >= 0.0 ? 1.0 : -1.0;
  for (const auto& [p, value] : samples) {
    if (!(std::abs(value) > 1e-12 * std::max(1.0, scale)) || value * sign <= 0.0)
      throw InversionFailure(what + " is not monotone on the sample line", p);
  }
}

const PartnerLink* find_link(const SystemSpec& spec, PartnerKind kind, const std::vector<std::size_t>& slots) {
  const CatalogEntry* entry = find_catalog_entry(spec.id);
  if (!entry || !spec.relation || spec.relation->source != entry->definition.relation) return nullptr;
  for (const auto& link : entry->links)
    if (link.kind == kind && link.slots == slots) return &link;
  return nullptr;
}

// Point map for a Legendre partner: transformed slots carry sign * dPhi/dE.
PointMap legendre_map(const SystemSpec& spec, std::vector<std::size_t> slots, std::vector<double> signs) {
  return [spec, slots = std::move(slots), signs = std::move(signs)](const Point& x) {
    const Jet4 jet = jet_eval(spec, x, 1);
    Point y = x;
    for (std::size_t i = 0; i < slots.size(); ++i) y[slots[i]] = signs[i] * jet.d(slots[i]);
    return y;
  };
}

LegendrePartner legendre(const SystemSpec& spec, std::vector<std::size_t> slots, Solve solve) {
  const std::size_t n = spec.dimension();
  if (slots.empty()) throw Error(ErrorKind::InvalidArgument, "Legendre transform needs at least one slot");
  for (auto k : slots)
    if (k >= n) throw Error(ErrorKind::InvalidArgument, "slot " + std::to_string(k) + " out of range");
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  const bool total = slots.size() == n;

  LegendrePartner out;
  out.source_id = spec.id;
  out.slots = slots;

  if (solve == Solve::Auto) {
    if (const auto* link = find_link(spec, total ? PartnerKind::Total : PartnerKind::Partial, slots)) {
      out.spec = catalog_system(link->partner_id, spec.params);
      out.forward = legendre_map(spec, slots, link->conjugate_signs);
      out.closed_form = true;
      return out;
    }
  }

  for (auto k : slots)
    check_monotone(spec, k, [k](const Jet4& j) { return j.d(k, k); },
                   "map " + spec.coords[k].name + " -> dPhi/d" + spec.coords[k].name);
  if (slots.size() > 1) {
    for (auto k : slots)
      check_monotone(spec, k, [&](const Jet4& j) {
        Eigen::MatrixXd H(slots.size(), slots.size());
        for (std::size_t i = 0; i < slots.size(); ++i)
          for (std::size_t l = 0; l < slots.size(); ++l) H(i, l) = j.d(slots[i], slots[l]);
        return H.determinant();
      }, "gradient map Jacobian");
  }

  SystemSpec derived;
  const std::string tag = "~L[" + join_names(spec, slots) + "]";
  derived.id = spec.id + tag;
  derived.representation = "derived";
  derived.potential_name = spec.potential_name + tag;
  derived.coords = spec.coords;
  for (auto k : slots) derived.coords[k] = {"I_" + spec.coords[k].name, CoordRole::Intensive};
  derived.excluded_index = spec.excluded_index;
  derived.params = spec.params;
  derived.legendre_complete = std::all_of(derived.coords.begin(), derived.coords.end(),
                                          [](const Coordinate& c) { return c.role == CoordRole::Intensive; });
  derived.homogeneity_note = total ? "total Legendre image" : "partial Legendre image";
  auto field = std::make_shared<const LegendreField>(spec, slots);
  derived.field = field;
  derived.domain.push_back({"Legendre preimage inside the domain of " + spec.id,
                            [field, spec](std::span<const double> y) {
                              try {
                                return in_domain(spec, field->solve(y));
                              } catch (const Error&) {
                                return false;
                              }
                            }});
  out.forward = legendre_map(spec, slots, std::vector<double>(slots.size(), 1.0));
  derived.reference = out.forward(spec.reference);
  out.spec = std::move(derived);
  return out;
}

}  // namespace

LegendrePartner partial_legendre(const SystemSpec& spec, std::size_t slot, Solve solve) {
  if (slot >= spec.dimension()) throw Error(ErrorKind::InvalidArgument, "slot " + std::to_string(slot) + " out of range");
  return legendre(spec, {slot}, solve);
}

LegendrePartner total_legendre(const SystemSpec& spec, Solve solve) {
  if (spec.legendre_complete) {
    LegendrePartner out;
    out.source_id = spec.id;
    for (std::size_t k = 0; k < spec.dimension(); ++k) out.slots.push_back(k);
    out.spec = spec;
    out.forward = [](const Point& x) { return x; };
    out.passthrough = true;
    return out;
  }
  std::vector<std::size_t> all(spec.dimension());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return legendre(spec, all, solve);
}

LegendrePartner invert_representation(const SystemSpec& spec, std::size_t target, Solve solve) {
  if (target >= spec.dimension())
    throw Error(ErrorKind::InvalidArgument, "slot " + std::to_string(target) + " out of range");
  LegendrePartner out;
  out.source_id = spec.id;
  out.slots = {target};
  out.forward = [spec, target](const Point& x) {
    Point y = x;
    y[target] = evaluate(spec, x);
    return y;
  };

  if (solve == Solve::Auto) {
    if (const auto* link = find_link(spec, PartnerKind::Inverse, {target})) {
      out.spec = catalog_system(link->partner_id, spec.params);
      out.closed_form = true;
      return out;
    }
  }

  check_monotone(spec, target, [target](const Jet4& j) { return j.d(target); },
                 "potential as a function of " + spec.coords[target].name);

  SystemSpec derived;
  derived.id = spec.id + "~inv[" + spec.coords[target].name + "]";
  derived.representation = "derived";
  derived.potential_name = spec.coords[target].name;
  derived.coords = spec.coords;
  derived.coords[target] = {spec.potential_name, CoordRole::Extensive};
  derived.excluded_index = spec.excluded_index;
  derived.params = spec.params;
  derived.homogeneity_note = spec.homogeneity_note;
  auto field = std::make_shared<const InverseField>(spec, target);
  derived.field = field;
  derived.domain.push_back({"inverse preimage inside the domain of " + spec.id,
                            [field, spec](std::span<const double> y) {
                              try {
                                return in_domain(spec, field->solve(y));
                              } catch (const Error&) {
                                return false;
                              }
                            }});
  derived.reference = out.forward(spec.reference);
  out.spec = std::move(derived);
  return out;
}

namespace {

std::pair<double, double> vdw_params(const SystemSpec& spec) {
  auto a = spec.params.find("a");
  auto b = spec.params.find("b");
  if (a == spec.params.end() || b == spec.params.end())
    throw Error(ErrorKind::InvalidArgument, "system '" + spec.id + "' has no van der Waals parameters a, b");
  return {a->second, b->second};
}

}  // namespace

VolumePressure to_vP(const SystemSpec& vdw_s, double u, double v) {
  const auto [a, b] = vdw_params(vdw_s);
  if (!(v > b)) throw DomainViolation({"v > b"});
  return {v, (2.0 * u * v * v - a * v + 3.0 * a * b) / (3.0 * v * v * (v - b))};
}

double vdw_energy_from_vP(double v, double P, double a, double b) {
  if (!(v > b)) throw DomainViolation({"v > b"});
  return (3.0 * P * v * v * (v - b) + a * v - 3.0 * a * b) / (2.0 * v * v);
}

VolumePressure reduced_variables(double v, double P, double a, double b) {
  return {v / (3.0 * b), P * 27.0 * b * b / a};
}

VolumePressure from_reduced_variables(double v_r, double P_r, double a, double b) {
  return {v_r * 3.0 * b, P_r * a / (27.0 * b * b)};
}

double first_law_residual(const SystemSpec& spec, const std::vector<Point>& path) {
  double worst = 0.0;
  for (const auto& p : path)
    if (auto violated = domain_check(spec, p); !violated.empty()) throw DomainViolation(std::move(violated));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Point& p = path[i];
    const Point& q = path[i + 1];
    Point mid(p.size());
    double length2 = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
      mid[a] = 0.5 * (p[a] + q[a]);
      length2 += (q[a] - p[a]) * (q[a] - p[a]);
    }
    if (length2 == 0.0) continue;
    const IntensiveVector I = equations_of_state(spec, mid);
    double work = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) work += I.values[a] * (q[a] - p[a]);
    const double dphi = evaluate(spec, q) - evaluate(spec, p);
    worst = std::max(worst, std::abs(dphi - work) / std::sqrt(length2));
  }
  return worst;
}

}  // namespace gtd
