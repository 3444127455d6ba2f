#include "gtd/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gtd/errors.hpp"

namespace gtd {

MetricTensor::MetricTensor(std::size_t n)
    : at(n, 0.0), n_(n), g_(n * n, 0.0), dg_(n * n * n, 0.0), ddg_(n * n * n * n, 0.0) {}

void MetricTensor::update_determinant() { det = metric_determinant(*this); }

MetricTensor MetricTensor::scaled(double lambda) const {
  MetricTensor out = *this;
  for (auto* v : {&out.g_, &out.dg_, &out.ddg_})
    for (auto& x : *v) x *= lambda;
  out.conformal_factor *= lambda;
  out.update_determinant();
  return out;
}

ChristoffelArray::ChristoffelArray(std::size_t n)
    : n_(n), gamma_(n * n * n, 0.0), dgamma_(n * n * n * n, 0.0) {}

namespace {

Eigen::MatrixXd to_matrix(const MetricTensor& m) {
  const std::size_t n = m.dimension();
  Eigen::MatrixXd g(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g(a, b) = m.g(a, b);
  return g;
}

double metric_scale(const MetricTensor& m) {
  double scale = 0.0;
  for (std::size_t a = 0; a < m.dimension(); ++a)
    for (std::size_t b = 0; b < m.dimension(); ++b) scale = std::max(scale, std::abs(m.g(a, b)));
  return scale;
}

}  // namespace

double metric_determinant(const MetricTensor& m) {
  if (m.dimension() == 2) return m.g(0, 0) * m.g(1, 1) - m.g(0, 1) * m.g(1, 0);
  return to_matrix(m).determinant();
}

bool is_degenerate(const MetricTensor& m) {
  const double scale = metric_scale(m);
  return !(std::abs(m.det) >= kDegeneracyThreshold * scale * scale) || scale == 0.0;
}

MetricTensor natural_metric_unchecked(const Jet4& jet, const Point& x, std::size_t excluded) {
  const std::size_t n = jet.dimension();
  if (x.size() != n) throw Error(ErrorKind::InvalidArgument, "point and jet dimensions differ");
  if (excluded >= n) throw Error(ErrorKind::InvalidArgument, "excluded index out of range");

  // Conformal factor c = sum_j 1/w_j, w_j = x_j Phi_j, with its first and
  // second coordinate derivatives.
  double c = 0.0;
  std::vector<double> dc(n, 0.0), ddc(n * n, 0.0);
  std::vector<double> dw(n), ddw(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == excluded) continue;
    const double w = x[j] * jet.d(j);
    const double tol = 1e-13 * std::max(1.0, std::abs(x[j])) * std::max(1.0, std::abs(jet.d(j)));
    if (!(std::abs(w) > tol))
      throw Error(ErrorKind::SingularPrefactor,
                  "E^j dPhi/dE^j vanishes for coordinate slot " + std::to_string(j));
    for (std::size_t k = 0; k < n; ++k) {
      dw[k] = (j == k ? jet.d(j) : 0.0) + x[j] * jet.d(j, k);
      for (std::size_t l = 0; l < n; ++l) {
        ddw[k * n + l] = (j == k ? jet.d(j, l) : 0.0) + (j == l ? jet.d(j, k) : 0.0) + x[j] * jet.d(j, k, l);
      }
    }
    c += 1.0 / w;
    for (std::size_t k = 0; k < n; ++k) {
      dc[k] -= dw[k] / (w * w);
      for (std::size_t l = 0; l < n; ++l)
        ddc[k * n + l] += -ddw[k * n + l] / (w * w) + 2.0 * dw[k] * dw[l] / (w * w * w);
    }
  }

  MetricTensor m(n);
  m.at = x;
  m.conformal_factor = c;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      m.g(a, b) = c * jet.d(a, b);
      for (std::size_t k = 0; k < n; ++k) {
        m.dg(a, b, k) = dc[k] * jet.d(a, b) + c * jet.d(a, b, k);
        for (std::size_t l = 0; l < n; ++l) {
          m.ddg(a, b, k, l) = ddc[k * n + l] * jet.d(a, b) + dc[k] * jet.d(a, b, l) +
                              dc[l] * jet.d(a, b, k) + c * jet.d(a, b, k, l);
        }
      }
    }
  }
  m.update_determinant();
  return m;
}

MetricTensor natural_metric(const Jet4& jet, const Point& x, std::size_t excluded) {
  MetricTensor m = natural_metric_unchecked(jet, x, excluded);
  if (is_degenerate(m))
    throw Error(ErrorKind::DegenerateMetric, "metric is degenerate: det g = " + format_g(m.det));
  return m;
}

namespace {

// Connection coefficients in scalar type T. The curvature contraction runs
// in long double: the inputs are doubles, but the index gymnastics lose a
// few digits when g is badly conditioned.
template <typename T>
struct Connection {
  std::size_t n;
  std::vector<T> gamma, dgamma;
  T G(std::size_t a, std::size_t b, std::size_t c) const { return gamma[(a * n + b) * n + c]; }
  T dG(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const { return dgamma[((a * n + b) * n + c) * n + d]; }
};

template <typename T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
MatrixT<T> metric_matrix(const MetricTensor& m) {
  const std::size_t n = m.dimension();
  MatrixT<T> g(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) g(a, b) = m.g(a, b);
  return g;
}

template <typename T>
Connection<T> connection(const MetricTensor& m, const MatrixT<T>& ginv) {
  const std::size_t n = m.dimension();

  // Christoffel symbols of the first kind and their derivatives.
  std::vector<T> first(n * n * n), dfirst(n * n * n * n);
  auto idx3 = [n](std::size_t a, std::size_t b, std::size_t c) { return (a * n + b) * n + c; };
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        first[idx3(d, b, c)] = T(0.5) * (T(m.dg(d, c, b)) + T(m.dg(d, b, c)) - T(m.dg(b, c, d)));
        for (std::size_t e = 0; e < n; ++e)
          dfirst[idx3(d, b, c) * n + e] =
              T(0.5) * (T(m.ddg(d, c, b, e)) + T(m.ddg(d, b, c, e)) - T(m.ddg(b, c, d, e)));
      }

  // d_e g^{ad} = -g^{ap} d_e g_pq g^{qd}
  std::vector<T> dginv(n * n * n, T(0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t d = 0; d < n; ++d)
      for (std::size_t e = 0; e < n; ++e) {
        T s = 0;
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q) s -= ginv(a, p) * T(m.dg(p, q, e)) * ginv(q, d);
        dginv[idx3(a, d, e)] = s;
      }

  Connection<T> out{n, std::vector<T>(n * n * n), std::vector<T>(n * n * n * n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        T gamma = 0;
        for (std::size_t d = 0; d < n; ++d) gamma += ginv(a, d) * first[idx3(d, b, c)];
        out.gamma[idx3(a, b, c)] = gamma;
        for (std::size_t e = 0; e < n; ++e) {
          T dgamma = 0;
          for (std::size_t d = 0; d < n; ++d)
            dgamma += dginv[idx3(a, d, e)] * first[idx3(d, b, c)] + ginv(a, d) * dfirst[idx3(d, b, c) * n + e];
          out.dgamma[idx3(a, b, c) * n + e] = dgamma;
        }
      }
  return out;
}

// R^r_smn
template <typename C>
auto riemann_up(const C& G, std::size_t n, std::size_t r, std::size_t s, std::size_t mu, std::size_t nu) {
  auto v = G.dG(r, nu, s, mu) - G.dG(r, mu, s, nu);
  for (std::size_t l = 0; l < n; ++l) v += G.G(r, mu, l) * G.G(l, nu, s) - G.G(r, nu, l) * G.G(l, mu, s);
  return v;
}

// Adapter so the public array goes through the same formula.
struct ArrayView {
  const ChristoffelArray& a;
  double G(std::size_t i, std::size_t j, std::size_t k) const { return a.gamma(i, j, k); }
  double dG(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const { return a.dgamma(i, j, k, l); }
};

}  // namespace

ChristoffelArray christoffel(const MetricTensor& m) {
  const std::size_t n = m.dimension();
  if (is_degenerate(m)) throw Error(ErrorKind::DegenerateMetric, "metric is degenerate");
  const Connection<double> c = connection<double>(m, metric_matrix<double>(m).inverse());
  ChristoffelArray out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d) {
        out.gamma(a, b, d) = c.G(a, b, d);
        for (std::size_t e = 0; e < n; ++e) out.dgamma(a, b, d, e) = c.dG(a, b, d, e);
      }
  return out;
}

RiemannTensor riemann_tensor(const MetricTensor& m, const ChristoffelArray& G) {
  const std::size_t n = m.dimension();
  RiemannTensor out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double v = 0.0;
          for (std::size_t r = 0; r < n; ++r) v += m.g(a, r) * riemann_up(ArrayView{G}, n, r, b, c, d);
          out(a, b, c, d) = v;
        }
  return out;
}

CurvatureResult ricci_scalar(const MetricTensor& m) {
  const std::size_t n = m.dimension();
  CurvatureResult result;
  result.at = m.at;
  result.det_g = m.det;
  result.conformal_factor = m.conformal_factor;
  if (is_degenerate(m)) throw Error(ErrorKind::DegenerateMetric, "metric is degenerate");

  using T = long double;
  const MatrixT<T> ginv = metric_matrix<T>(m).inverse();
  const Connection<T> G = connection<T>(m, ginv);
  T R = 0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t nu = 0; nu < n; ++nu) {
      T ricci = 0;
      for (std::size_t r = 0; r < n; ++r) ricci += riemann_up(G, n, r, s, r, nu);
      R += ginv(s, nu) * ricci;
    }
  result.ricci_scalar = static_cast<double>(R);
  if (n == 2) {
    T r0101 = 0;
    for (std::size_t r = 0; r < n; ++r) r0101 += T(m.g(0, r)) * riemann_up(G, n, r, 1, 0, 1);
    const T det = T(m.g(0, 0)) * T(m.g(1, 1)) - T(m.g(0, 1)) * T(m.g(1, 0));
    result.ricci_scalar_2d = static_cast<double>(2 * r0101 / det);
  }
  result.nonfinite = !std::isfinite(result.ricci_scalar) || std::abs(result.ricci_scalar) > kNonFiniteCurvature;
  return result;
}

CurvatureResult curvature_from_jet(const Jet4& jet, const Point& x, std::size_t excluded) {
  return ricci_scalar(natural_metric(jet, x, excluded));
}

CurvatureResult curvature(const SystemSpec& spec, const Point& x) {
  const Jet4 jet = jet_eval(spec, x, 4);
  return curvature_from_jet(jet, x, spec.excluded_index);
}

}  // namespace gtd
