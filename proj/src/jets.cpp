#include "gtd/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtd/errors.hpp"

namespace gtd {

Jet4::Jet4(std::size_t n)
    : n_(n), grad_(n, 0.0), hess_(n * n, 0.0), third_(n * n * n, 0.0), fourth_(n * n * n * n, 0.0) {}

double Jet4::partial(std::span<const std::size_t> mi) const {
  switch (mi.size()) {
    case 0: return value_;
    case 1: return d(mi[0]);
    case 2: return d(mi[0], mi[1]);
    case 3: return d(mi[0], mi[1], mi[2]);
    case 4: return d(mi[0], mi[1], mi[2], mi[3]);
    default: throw Error(ErrorKind::InvalidArgument, "jets carry derivatives through order 4 only");
  }
}

bool Jet4::all_finite() const noexcept {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::isfinite(value_) && std::all_of(grad_.begin(), grad_.end(), finite) &&
         std::all_of(hess_.begin(), hess_.end(), finite) &&
         std::all_of(third_.begin(), third_.end(), finite) &&
         std::all_of(fourth_.begin(), fourth_.end(), finite);
}

void Jet4::set(std::span<const std::size_t> mi, double value) {
  // Writes every permutation of the multi-index.
  std::vector<std::size_t> p(mi.begin(), mi.end());
  std::sort(p.begin(), p.end());
  do {
    std::size_t flat = 0;
    for (auto a : p) flat = flat * n_ + a;
    switch (p.size()) {
      case 0: value_ = value; break;
      case 1: grad_[flat] = value; break;
      case 2: hess_[flat] = value; break;
      case 3: third_[flat] = value; break;
      case 4: fourth_[flat] = value; break;
      default: throw Error(ErrorKind::InvalidArgument, "jets carry derivatives through order 4 only");
    }
  } while (std::next_permutation(p.begin(), p.end()));
}

Jet4& Jet4::operator*=(double s) {
  value_ *= s;
  for (auto* v : {&grad_, &hess_, &third_, &fourth_})
    for (auto& x : *v) x *= s;
  return *this;
}

Jet4& Jet4::operator+=(const Jet4& rhs) {
  value_ += rhs.value_;
  auto add = [](std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  add(grad_, rhs.grad_);
  add(hess_, rhs.hess_);
  add(third_, rhs.third_);
  add(fourth_, rhs.fourth_);
  return *this;
}

Jet4 Jet4::from_taylor(const Taylor& t, std::size_t n, std::size_t order) {
  Jet4 jet(n);
  jet.value_ = t.value();
  if (!t.basis()) return jet;
  const auto& basis = *t.basis();
  std::vector<std::size_t> mi;
  for (std::size_t i = 1; i < basis.size(); ++i) {
    if (basis.degree(i) > order) continue;
    auto e = basis.exponents(i);
    mi.clear();
    for (std::size_t a = 0; a < n; ++a)
      for (int k = 0; k < e[a]; ++k) mi.push_back(a);
    jet.set(mi, t.partial(i));
  }
  return jet;
}

Taylor taylor_eval(const ScalarField& field, std::span<const double> x, std::size_t order) {
  if (x.size() != field.dimension())
    throw Error(ErrorKind::InvalidArgument, "point dimension does not match the field");
  auto basis = MonomialBasis::get(x.size(), order);
  std::vector<Taylor> seeds;
  seeds.reserve(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) seeds.push_back(Taylor::variable(basis, a, x[a]));
  return field.evaluate(seeds);
}

Jet4 jet_eval(const ScalarField& field, std::span<const double> x, std::size_t order) {
  if (order > Jet4::kMaxOrder) throw Error(ErrorKind::InvalidArgument, "jet order above 4");
  for (double c : x)
    if (!std::isfinite(c)) throw DomainViolation({"finite coordinates"});
  Jet4 jet = Jet4::from_taylor(taylor_eval(field, x, order), x.size(), order);
  if (!jet.all_finite()) throw Error(ErrorKind::NonFinite, "jet has non-finite derivative entries");
  return jet;
}

double fd_step(std::size_t order, double coordinate) {
  const double eps = std::numeric_limits<double>::epsilon();
  return std::pow(eps, 1.0 / static_cast<double>(order + 2)) * std::max(1.0, std::abs(coordinate));
}

namespace {

// Product of fourth-order central differences, one per index:
// (-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h along each direction.
double stencil(const ScalarField& field, std::span<const double> x,
               std::span<const std::size_t> mi, std::span<const double> steps) {
  if (mi.empty()) return field.evaluate(x);
  static constexpr double kOffset[] = {2.0, 1.0, -1.0, -2.0};
  static constexpr double kWeight[] = {-1.0, 8.0, -8.0, 1.0};
  const std::size_t k = mi.size();
  std::vector<double> p(x.begin(), x.end());
  double sum = 0.0;
  for (std::size_t code = 0; code < (std::size_t{1} << (2 * k)); ++code) {
    std::copy(x.begin(), x.end(), p.begin());
    double w = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t digit = (code >> (2 * j)) & 3U;
      p[mi[j]] += kOffset[digit] * steps[j];
      w *= kWeight[digit];
    }
    double f = 0.0;
    try {
      f = field.evaluate(p);
    } catch (const Error& e) {
      throw DomainViolation("finite-difference stencil leaves the domain: " + std::string(e.what()),
                            {"stencil inside domain"});
    }
    if (!std::isfinite(f)) throw DomainViolation({"stencil inside domain"});
    sum += w * f;
  }
  double denom = 1.0;
  for (double h : steps) denom *= 12.0 * h;
  return sum / denom;
}

}  // namespace

double fd_partial(const ScalarField& field, std::span<const double> x,
                  std::span<const std::size_t> multi_index, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  std::vector<double> steps(multi_index.size(), step);
  return stencil(field, x, multi_index, steps);
}

double fd_partial(const ScalarField& field, std::span<const double> x,
                  std::span<const std::size_t> multi_index) {
  std::vector<double> steps;
  steps.reserve(multi_index.size());
  for (auto a : multi_index) steps.push_back(fd_step(multi_index.size(), x[a]));
  return stencil(field, x, multi_index, steps);
}

Jet4 fd_jet(const ScalarField& field, std::span<const double> x) {
  Jet4 jet(x.size());
  jet.set({}, field.evaluate(x));
  for_each_multi_index(x.size(), Jet4::kMaxOrder, [&](std::span<const std::size_t> mi) {
    jet.set(mi, fd_partial(field, x, mi));
  });
  return jet;
}

}  // namespace gtd
