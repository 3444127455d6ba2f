#pragma once

#include <cstddef>
#include <vector>

#include "gtd/jets.hpp"
#include "gtd/systems.hpp"

namespace gtd {

/// Metric components at a point with first and second coordinate
/// derivatives: dg(a, b, c) = d_c g_ab, ddg(a, b, c, d) = d_d d_c g_ab.
class MetricTensor {
 public:
  explicit MetricTensor(std::size_t n = 2);

  std::size_t dimension() const noexcept { return n_; }

  double g(std::size_t a, std::size_t b) const { return g_[a * n_ + b]; }
  double dg(std::size_t a, std::size_t b, std::size_t c) const { return dg_[(a * n_ + b) * n_ + c]; }
  double ddg(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return ddg_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double& g(std::size_t a, std::size_t b) { return g_[a * n_ + b]; }
  double& dg(std::size_t a, std::size_t b, std::size_t c) { return dg_[(a * n_ + b) * n_ + c]; }
  double& ddg(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return ddg_[((a * n_ + b) * n_ + c) * n_ + d];
  }

  /// Recomputes det from g; call after filling components by hand.
  void update_determinant();
  /// Same metric multiplied by a constant.
  MetricTensor scaled(double lambda) const;

  Point at;
  double det = 0.0;
  double conformal_factor = 1.0;

 private:
  std::size_t n_;
  std::vector<double> g_, dg_, ddg_;
};

/// Gamma^a_bc and its derivatives dgamma(a, b, c, d) = d_d Gamma^a_bc.
class ChristoffelArray {
 public:
  explicit ChristoffelArray(std::size_t n = 2);

  std::size_t dimension() const noexcept { return n_; }
  double gamma(std::size_t a, std::size_t b, std::size_t c) const { return gamma_[(a * n_ + b) * n_ + c]; }
  double dgamma(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return dgamma_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double& gamma(std::size_t a, std::size_t b, std::size_t c) { return gamma_[(a * n_ + b) * n_ + c]; }
  double& dgamma(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return dgamma_[((a * n_ + b) * n_ + c) * n_ + d];
  }

 private:
  std::size_t n_;
  std::vector<double> gamma_, dgamma_;
};

/// All-lower Riemann tensor R_abcd.
class RiemannTensor {
 public:
  explicit RiemannTensor(std::size_t n = 2) : n_(n), r_(n * n * n * n, 0.0) {}
  std::size_t dimension() const noexcept { return n_; }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return r_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return r_[((a * n_ + b) * n_ + c) * n_ + d];
  }

 private:
  std::size_t n_;
  std::vector<double> r_;
};

struct CurvatureResult {
  Point at;
  double ricci_scalar = 0.0;
  /// 2 R_0101 / det g; only meaningful for n = 2.
  double ricci_scalar_2d = 0.0;
  double det_g = 0.0;
  double conformal_factor = 0.0;
  bool degenerate = false;
  /// |R| above 1e12 or not finite: the point sits on or next to a singular locus.
  bool nonfinite = false;
};

inline constexpr double kDegeneracyThreshold = 1e-12;
inline constexpr double kNonFiniteCurvature = 1e12;

/// g_ab = c * d_a d_b Phi with c = sum over j != excluded of 1/(x_j d_j Phi).
/// Throws SingularPrefactor when some x_j d_j Phi vanishes, DegenerateMetric
/// when |det g| falls below the degeneracy threshold.
MetricTensor natural_metric(const Jet4& jet, const Point& x, std::size_t excluded_index);

/// natural_metric without the degeneracy check (used by determinant sweeps).
MetricTensor natural_metric_unchecked(const Jet4& jet, const Point& x, std::size_t excluded_index);

/// |det g| < threshold * (max |g_ab|)^2.
bool is_degenerate(const MetricTensor& m);

double metric_determinant(const MetricTensor& m);

/// Levi-Civita connection and its first derivatives. Throws DegenerateMetric.
ChristoffelArray christoffel(const MetricTensor& m);

RiemannTensor riemann_tensor(const MetricTensor& m, const ChristoffelArray& gamma);

/// R = g^ab R_ab with R^r_smn = d_m Gamma^r_ns - d_n Gamma^r_ms
/// + Gamma^r_ml Gamma^l_ns - Gamma^r_nl Gamma^l_ms and R_sn = R^r_srn.
/// Large or non-finite values are flagged rather than thrown.
CurvatureResult ricci_scalar(const MetricTensor& m);

/// Domain check, jet, natural metric and Ricci scalar for a system at x.
CurvatureResult curvature(const SystemSpec& spec, const Point& x);

/// The same pipeline from a jet computed elsewhere (e.g. finite differences).
CurvatureResult curvature_from_jet(const Jet4& jet, const Point& x, std::size_t excluded_index);

}  // namespace gtd
