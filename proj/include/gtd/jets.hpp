#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "gtd/taylor.hpp"

namespace gtd {

/// A point on the space of equilibrium states, in whatever coordinates the
/// owning system declares.
using Point = std::vector<double>;

/// A scalar function of n coordinates that can be evaluated on plain doubles
/// and on truncated Taylor polynomials. Implementations are immutable.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual std::size_t dimension() const = 0;
  virtual double evaluate(std::span<const double> x) const = 0;
  virtual Taylor evaluate(std::span<const Taylor> x) const = 0;
};

using ScalarFieldEvaluator = std::shared_ptr<const ScalarField>;

/// Value and all partial derivatives of a scalar field through fourth order.
/// Derivative arrays are stored in full (row-major over n^k entries) so that
/// every index permutation can be read directly.
class Jet4 {
 public:
  static constexpr std::size_t kMaxOrder = 4;

  explicit Jet4(std::size_t n = 2);

  std::size_t dimension() const noexcept { return n_; }

  double value() const noexcept { return value_; }
  double d(std::size_t a) const { return grad_[a]; }
  double d(std::size_t a, std::size_t b) const { return hess_[a * n_ + b]; }
  double d(std::size_t a, std::size_t b, std::size_t c) const { return third_[(a * n_ + b) * n_ + c]; }
  double d(std::size_t a, std::size_t b, std::size_t c, std::size_t e) const {
    return fourth_[((a * n_ + b) * n_ + c) * n_ + e];
  }

  /// Partial for an arbitrary multi-index of length 0..4.
  double partial(std::span<const std::size_t> multi_index) const;

  std::span<const double> grad() const noexcept { return grad_; }
  std::span<const double> hess() const noexcept { return hess_; }
  std::span<const double> third() const noexcept { return third_; }
  std::span<const double> fourth() const noexcept { return fourth_; }

  bool all_finite() const noexcept;

  /// Fill from a Taylor polynomial expanded around the jet's point.
  static Jet4 from_taylor(const Taylor& t, std::size_t n, std::size_t order);

  /// Builds a jet entry by entry; used by finite-difference pipelines.
  void set(std::span<const std::size_t> multi_index, double value);

  Jet4& operator*=(double s);
  Jet4& operator+=(const Jet4& rhs);

 private:
  std::size_t n_;
  double value_ = 0.0;
  std::vector<double> grad_, hess_, third_, fourth_;
};

/// Exact Taylor-mode derivatives of `field` at `x` through `order` (0..4).
/// Slots above `order` are zero. Throws DomainViolation when the field
/// cannot be evaluated at x, NonFinite when any entry overflows.
Jet4 jet_eval(const ScalarField& field, std::span<const double> x, std::size_t order = 4);

/// Taylor polynomial of the field around x (the object jet_eval reads from).
Taylor taylor_eval(const ScalarField& field, std::span<const double> x, std::size_t order);

/// Central finite-difference estimate of the mixed partial named by
/// multi_index, built as the product of one-dimensional five-point central
/// differences (fourth-order accurate) with the given step. Throws DomainViolation if a stencil point cannot be
/// evaluated.
double fd_partial(const ScalarField& field, std::span<const double> x,
                  std::span<const std::size_t> multi_index, double step);

/// Step h = eps^(1/(k+2)) * max(1, |x_a|) for an order-k partial along a.
double fd_step(std::size_t order, double coordinate);

/// fd_partial with the default step chosen per direction from fd_step.
double fd_partial(const ScalarField& field, std::span<const double> x,
                  std::span<const std::size_t> multi_index);

/// A jet built only from finite differences (fd_partial at default steps).
Jet4 fd_jet(const ScalarField& field, std::span<const double> x);

/// Calls f(multi_index) for every multiset of indices of length 1..max_order
/// in canonical non-decreasing order.
template <typename F>
void for_each_multi_index(std::size_t n, std::size_t max_order, F&& f) {
  std::vector<std::size_t> idx;
  auto rec = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
    for (std::size_t a = start; a < n; ++a) {
      idx.push_back(a);
      f(std::span<const std::size_t>(idx));
      if (remaining > 1) self(self, a, remaining - 1);
      idx.pop_back();
    }
  };
  rec(rec, 0, max_order);
}

}  // namespace gtd
