#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gtd {

/// Graded monomial basis for polynomials in `nvars` variables truncated at
/// total degree `order`. Index 0 is the constant monomial; monomials of
/// degree k precede those of degree k + 1.
class MonomialBasis {
 public:
  struct Product {
    std::size_t lhs, rhs, out;
  };

  static std::shared_ptr<const MonomialBasis> get(std::size_t nvars, std::size_t order);

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  std::size_t degree(std::size_t i) const noexcept { return degree_[i]; }
  std::span<const int> exponents(std::size_t i) const noexcept {
    return {exponents_[i].data(), exponents_[i].size()};
  }
  /// Index of the monomial with the given exponents, or size() if it exceeds the order.
  std::size_t index_of(std::span<const int> exps) const;
  /// Index of the monomial for the multiset of variable indices.
  std::size_t index_of_multi(std::span<const std::size_t> vars) const;
  /// All (i, j, k) with monomial_i * monomial_j = monomial_k and degree(k) <= order.
  const std::vector<Product>& products() const noexcept { return products_; }
  /// Multi-index factorial alpha! for monomial i.
  double factorial(std::size_t i) const noexcept { return factorial_[i]; }

  MonomialBasis(std::size_t nvars, std::size_t order);

 private:
  std::size_t nvars_;
  std::size_t order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<std::size_t> degree_;
  std::vector<double> factorial_;
  std::vector<Product> products_;
};

/// Truncated multivariate Taylor polynomial. Arithmetic on these is exact
/// forward-mode differentiation through the basis order. A Taylor with no
/// basis is a plain constant and mixes freely with any other Taylor.
class Taylor {
 public:
  Taylor() : coeffs_{0.0} {}
  Taylor(double constant) : coeffs_{constant} {}  // NOLINT(google-explicit-constructor)
  Taylor(std::shared_ptr<const MonomialBasis> basis, std::vector<double> coeffs);

  static Taylor constant(std::shared_ptr<const MonomialBasis> basis, double value);
  /// x0 + d(x_var): the seed for coordinate `var` expanded around `x0`.
  static Taylor variable(std::shared_ptr<const MonomialBasis> basis, std::size_t var,
                         double x0);

  double value() const noexcept { return coeffs_[0]; }
  const std::shared_ptr<const MonomialBasis>& basis() const noexcept { return basis_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0.0; }
  bool is_constant() const noexcept;

  /// Partial derivative for the monomial index (alpha! * coefficient).
  double partial(std::size_t i) const noexcept;

  /// The derivative polynomial d/dx_var, one order lower in content but on the
  /// same basis (top-degree coefficients become zero).
  Taylor derivative(std::size_t var) const;

  Taylor& operator+=(const Taylor& rhs);
  Taylor& operator-=(const Taylor& rhs);
  Taylor& operator*=(const Taylor& rhs);
  Taylor& operator/=(const Taylor& rhs);

  friend Taylor operator+(Taylor lhs, const Taylor& rhs) { return lhs += rhs; }
  friend Taylor operator-(Taylor lhs, const Taylor& rhs) { return lhs -= rhs; }
  friend Taylor operator*(Taylor lhs, const Taylor& rhs) { return lhs *= rhs; }
  friend Taylor operator/(Taylor lhs, const Taylor& rhs) { return lhs /= rhs; }
  friend Taylor operator-(Taylor x);

  /// f(x) given f and its derivatives at x.value(): derivs[k] = f^(k)(x0).
  /// derivs[0] becomes the value slot verbatim.
  Taylor compose(std::span<const double> derivs) const;

 private:
  void promote(const std::shared_ptr<const MonomialBasis>& basis);

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<double> coeffs_;
};

/// Evaluates the polynomial `poly` (in the variables of its own basis) at
/// Taylor arguments, one per basis variable.
Taylor substitute(const Taylor& poly, std::span<const Taylor> args);

// Elementary functions. The value slot always equals the corresponding
// <cmath> call on the value, so order-0 evaluation is bit-identical to
// plain double evaluation.
Taylor exp(const Taylor& x);
Taylor log(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor sinh(const Taylor& x);
Taylor cosh(const Taylor& x);
Taylor tanh(const Taylor& x);
Taylor pow(const Taylor& base, double exponent);
Taylor pow(const Taylor& base, const Taylor& exponent);

}  // namespace gtd
