#include "gtd/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace gtd {

namespace {

void enumerate(std::size_t nvars, std::size_t degree, std::size_t var, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (var + 1 == nvars) {
    current[var] = static_cast<int>(degree);
    out.push_back(current);
    return;
  }
  for (std::size_t k = degree + 1; k-- > 0;) {
    current[var] = static_cast<int>(k);
    enumerate(nvars, degree - k, var + 1, current, out);
  }
  current[var] = 0;
}

double int_factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t nvars, std::size_t order)
    : nvars_(nvars), order_(order) {
  if (nvars == 0) throw std::invalid_argument("MonomialBasis needs at least one variable");
  std::vector<int> current(nvars, 0);
  for (std::size_t d = 0; d <= order; ++d) enumerate(nvars, d, 0, current, exponents_);

  degree_.reserve(exponents_.size());
  factorial_.reserve(exponents_.size());
  for (const auto& e : exponents_) {
    int deg = 0;
    double fact = 1.0;
    for (int k : e) {
      deg += k;
      fact *= int_factorial(k);
    }
    degree_.push_back(static_cast<std::size_t>(deg));
    factorial_.push_back(fact);
  }

  std::vector<int> sum(nvars);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (degree_[i] + degree_[j] > order_) continue;
      for (std::size_t v = 0; v < nvars; ++v) sum[v] = exponents_[i][v] + exponents_[j][v];
      products_.push_back({i, j, index_of(sum)});
    }
  }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(std::size_t nvars, std::size_t order) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(nvars, order);
  return slot;
}

std::size_t MonomialBasis::index_of(std::span<const int> exps) const {
  // Exponent vectors are stored degree by degree in reverse-lex order, so a
  // linear scan over the matching degree block is enough for the sizes used.
  int deg = 0;
  for (int k : exps) deg += k;
  if (static_cast<std::size_t>(deg) > order_) return size();
  for (std::size_t i = 0; i < size(); ++i) {
    if (degree_[i] != static_cast<std::size_t>(deg)) continue;
    if (std::equal(exps.begin(), exps.end(), exponents_[i].begin())) return i;
  }
  return size();
}

std::size_t MonomialBasis::index_of_multi(std::span<const std::size_t> vars) const {
  std::vector<int> exps(nvars_, 0);
  for (auto v : vars) {
    if (v >= nvars_) throw std::out_of_range("variable index out of range");
    ++exps[v];
  }
  return index_of(exps);
}

Taylor::Taylor(std::shared_ptr<const MonomialBasis> basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (basis_ && coeffs_.size() != basis_->size())
    throw std::invalid_argument("coefficient count does not match basis");
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Taylor Taylor::constant(std::shared_ptr<const MonomialBasis> basis, double value) {
  std::vector<double> c(basis->size(), 0.0);
  c[0] = value;
  return Taylor(std::move(basis), std::move(c));
}

Taylor Taylor::variable(std::shared_ptr<const MonomialBasis> basis, std::size_t var, double x0) {
  auto t = constant(basis, x0);
  if (basis->order() >= 1) {
    std::vector<int> e(basis->nvars(), 0);
    e.at(var) = 1;
    t.coeffs_[basis->index_of(e)] = 1.0;
  }
  return t;
}

bool Taylor::is_constant() const noexcept {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

double Taylor::partial(std::size_t i) const noexcept {
  if (!basis_) return i == 0 ? coeffs_[0] : 0.0;
  return basis_->factorial(i) * coeffs_[i];
}

Taylor Taylor::derivative(std::size_t var) const {
  if (!basis_) return Taylor(0.0);
  std::vector<double> out(basis_->size(), 0.0);
  std::vector<int> e(basis_->nvars());
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    auto src = basis_->exponents(i);
    if (src[var] == 0) continue;
    std::copy(src.begin(), src.end(), e.begin());
    --e[var];
    out[basis_->index_of(e)] += src[var] * coeffs_[i];
  }
  return Taylor(basis_, std::move(out));
}

void Taylor::promote(const std::shared_ptr<const MonomialBasis>& basis) {
  if (!basis || basis_ == basis) return;
  if (basis_) throw std::invalid_argument("Taylor operands expanded on different bases");
  double c = coeffs_[0];
  coeffs_.assign(basis->size(), 0.0);
  coeffs_[0] = c;
  basis_ = basis;
}

Taylor& Taylor::operator+=(const Taylor& rhs) {
  promote(rhs.basis_);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& rhs) {
  promote(rhs.basis_);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Taylor& Taylor::operator*=(const Taylor& rhs) {
  if (!rhs.basis_) {
    for (auto& c : coeffs_) c *= rhs.coeffs_[0];
    return *this;
  }
  if (!basis_) {
    double c = coeffs_[0];
    *this = rhs;
    for (auto& x : coeffs_) x = c * x;
    return *this;
  }
  promote(rhs.basis_);
  std::vector<double> out(basis_->size(), 0.0);
  for (const auto& p : basis_->products()) out[p.out] += coeffs_[p.lhs] * rhs.coeffs_[p.rhs];
  // Keep the value slot as the plain product so order-0 evaluation matches doubles.
  out[0] = coeffs_[0] * rhs.coeffs_[0];
  coeffs_ = std::move(out);
  return *this;
}

Taylor& Taylor::operator/=(const Taylor& rhs) {
  if (!rhs.basis_ || rhs.is_constant()) {
    double d = rhs.coeffs_[0];
    for (auto& c : coeffs_) c /= d;
    return *this;
  }
  const double y0 = rhs.value();
  const double x0 = value();
  const std::size_t order = rhs.basis_->order();
  std::vector<double> derivs(order + 1);
  double inv = 1.0 / y0;
  double term = inv;
  for (std::size_t k = 0; k <= order; ++k) {
    derivs[k] = term;
    term *= -static_cast<double>(k + 1) * inv;
  }
  *this *= rhs.compose(derivs);
  coeffs_[0] = x0 / y0;
  return *this;
}

Taylor operator-(Taylor x) {
  for (auto& c : x.coeffs_) c = -c;
  return x;
}

Taylor Taylor::compose(std::span<const double> derivs) const {
  if (!basis_) return Taylor(derivs[0]);
  const std::size_t order = basis_->order();
  Taylor h = *this;
  h.coeffs_[0] = 0.0;
  Taylor result = Taylor::constant(basis_, 0.0);
  Taylor power = Taylor::constant(basis_, 1.0);
  double fact = 1.0;
  for (std::size_t k = 1; k <= order && k < derivs.size(); ++k) {
    power *= h;
    fact *= static_cast<double>(k);
    const double scale = derivs[k] / fact;
    for (std::size_t i = 1; i < result.coeffs_.size(); ++i) result.coeffs_[i] += scale * power.coeffs_[i];
  }
  result.coeffs_[0] = derivs[0];
  return result;
}

namespace {

std::size_t order_of(const Taylor& x) { return x.basis() ? x.basis()->order() : 0; }

}  // namespace

Taylor exp(const Taylor& x) {
  std::vector<double> d(order_of(x) + 1, std::exp(x.value()));
  return x.compose(d);
}

Taylor log(const Taylor& x) {
  const double a = x.value();
  std::vector<double> d(order_of(x) + 1);
  d[0] = std::log(a);
  double term = 1.0 / a;
  for (std::size_t k = 1; k < d.size(); ++k) {
    d[k] = term;
    term *= -static_cast<double>(k) / a;
  }
  return x.compose(d);
}

Taylor pow(const Taylor& base, double exponent) {
  const double a = base.value();
  std::vector<double> d(order_of(base) + 1);
  d[0] = std::pow(a, exponent);
  const bool nonneg_integer = exponent >= 0.0 && std::floor(exponent) == exponent;
  double falling = 1.0;
  for (std::size_t k = 1; k < d.size(); ++k) {
    falling *= exponent - static_cast<double>(k - 1);
    if (nonneg_integer && static_cast<double>(k) > exponent) {
      d[k] = 0.0;
    } else {
      d[k] = falling * std::pow(a, exponent - static_cast<double>(k));
    }
  }
  return base.compose(d);
}

Taylor pow(const Taylor& base, const Taylor& exponent) {
  if (exponent.is_constant()) return pow(base, exponent.value());
  Taylor out = exp(exponent * log(base));
  std::vector<double> c(out.coeffs().begin(), out.coeffs().end());
  c[0] = std::pow(base.value(), exponent.value());
  return Taylor(out.basis(), std::move(c));
}

Taylor sqrt(const Taylor& x) {
  Taylor out = pow(x, 0.5);
  std::vector<double> c(out.coeffs().begin(), out.coeffs().end());
  c[0] = std::sqrt(x.value());
  return Taylor(out.basis(), std::move(c));
}

Taylor sinh(const Taylor& x) {
  const double s = std::sinh(x.value());
  const double c = std::cosh(x.value());
  std::vector<double> d(order_of(x) + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (k % 2 == 0) ? s : c;
  return x.compose(d);
}

Taylor cosh(const Taylor& x) {
  const double s = std::sinh(x.value());
  const double c = std::cosh(x.value());
  std::vector<double> d(order_of(x) + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (k % 2 == 0) ? c : s;
  return x.compose(d);
}

Taylor tanh(const Taylor& x) {
  // d^k tanh / dx^k is a polynomial in t = tanh(x); differentiate it with
  // p -> p' (1 - t^2).
  const double t = std::tanh(x.value());
  std::vector<double> d(order_of(x) + 1);
  std::vector<double> poly{0.0, 1.0};
  for (std::size_t k = 0; k < d.size(); ++k) {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) v = v * t + poly[i];
    d[k] = v;
    std::vector<double> dp(poly.size() + 1, 0.0);
    for (std::size_t i = 1; i < poly.size(); ++i) {
      const double c = static_cast<double>(i) * poly[i];
      dp[i - 1] += c;
      dp[i + 1] -= c;
    }
    poly = std::move(dp);
  }
  d[0] = t;
  return x.compose(d);
}

Taylor substitute(const Taylor& poly, std::span<const Taylor> args) {
  if (!poly.basis()) return Taylor(poly.value());
  const auto& basis = *poly.basis();
  if (args.size() != basis.nvars()) throw std::invalid_argument("substitute needs one argument per variable");
  std::vector<std::vector<Taylor>> powers(args.size());
  for (std::size_t v = 0; v < args.size(); ++v) {
    powers[v].push_back(Taylor(1.0));
    for (std::size_t k = 1; k <= basis.order(); ++k) powers[v].push_back(powers[v].back() * args[v]);
  }
  Taylor out(0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double c = poly.coeff(i);
    if (c == 0.0) continue;
    Taylor term(c);
    auto e = basis.exponents(i);
    for (std::size_t v = 0; v < args.size(); ++v)
      if (e[v] > 0) term *= powers[v][static_cast<std::size_t>(e[v])];
    out += term;
  }
  return out;
}

}  // namespace gtd
