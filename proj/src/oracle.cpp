#include "gtd/oracle.hpp"

#include <cmath>

#include "gtd/errors.hpp"

namespace gtd {

namespace {

struct Names {
  OracleId id;
  const char* name;
};

constexpr Names kNames[] = {
    {OracleId::vdw_R_s, "vdw_R_s"},
    {OracleId::vdw_R_u, "vdw_R_u"},
    {OracleId::vdw_R_vP, "vdw_R_vP"},
    {OracleId::vdw_R_F_Tv, "vdw_R_F_Tv"},
    {OracleId::vdw_R_F_vP, "vdw_R_F_vP"},
    {OracleId::chap_R_s, "chap_R_s"},
    {OracleId::chap_R_u, "chap_R_u"},
    {OracleId::chap_R_const, "chap_R_const"},
    {OracleId::chap_det, "chap_det"},
    {OracleId::numR_at_critical, "numR_at_critical"},
    {OracleId::ideal_zero, "ideal_zero"},
};

double coord(const NamedValues& point, const char* name) {
  auto it = point.find(name);
  if (it == point.end()) throw Error(ErrorKind::InvalidArgument, std::string("oracle needs coordinate '") + name + "'");
  return it->second;
}

double param(const NamedValues& params, const char* name) {
  auto it = params.find(name);
  if (it == params.end()) throw Error(ErrorKind::UnboundParameter, std::string("oracle needs parameter '") + name + "'");
  return it->second;
}

double nonzero(double value, const char* factor) {
  if (value == 0.0 || !std::isfinite(value))
    throw Error(ErrorKind::SingularDenominator, std::string("denominator factor vanishes: ") + factor);
  return value;
}

double vdw_R_s(double u, double v, double a, double b) {
  const double N = a * a * a * (27 * std::pow(b, 5) - 243 * std::pow(b, 4) * v + 504 * std::pow(b, 3) * v * v -
                                378 * b * b * std::pow(v, 3) + 113 * b * std::pow(v, 4) - 11 * std::pow(v, 5)) +
                   2 * a * a * u * v * v *
                       (-72 * std::pow(b, 4) + 174 * std::pow(b, 3) * v - 111 * b * b * v * v +
                        16 * b * std::pow(v, 3) + std::pow(v, 4)) +
                   4 * a * u * u * std::pow(v, 4) * (-3 * std::pow(b, 3) + 12 * b * b * v - 11 * b * v * v + std::pow(v, 3)) -
                   8 * b * u * u * u * std::pow(v, 7);
  const double d1 = nonzero(3 * a * b - a * v + 2 * u * v * v, "3ab - av + 2uv^2");
  const double d2 = nonzero(a * (-3 * b * b + 6 * b * v - 2 * v * v) + u * v * v * v, "a(-3b^2 + 6bv - 2v^2) + uv^3");
  return N / (4 * d1 * d2 * d2);
}

double vdw_R_u(double s, double v, double a, double b) {
  const double e = std::exp(2 * s / 3);
  const double w = v - b;
  const double N = -9 * a * a * a * std::pow(w, 16.0 / 3) * (3 * b * b - 2 * b * v + v * v) -
                   6 * a * a * e * v * v * std::pow(w, 11.0 / 3) * (24 * b * b - 14 * b * v + v * v) +
                   4 * a * e * e * std::pow(v, 4) *
                       (3 * std::pow(b, 4) - 15 * std::pow(b, 3) * v + 17 * b * b * v * v - 6 * b * std::pow(v, 3) +
                        std::pow(v, 4)) -
                   8 * b * std::exp(2 * s) * std::pow(v, 7) * std::cbrt(w);
  const double d0 = nonzero(std::cbrt(w), "(v - b)^(1/3)");
  const double d1 = nonzero(2 * e * v * v - 3 * a * std::pow(w, 5.0 / 3), "2e^(2s/3)v^2 - 3a(v - b)^(5/3)");
  const double d2 = nonzero(e * v * v * v - 3 * a * std::pow(w, 8.0 / 3), "e^(2s/3)v^3 - 3a(v - b)^(8/3)");
  return N / (4 * d0 * d1 * d2 * d2);
}

double vdw_R_vP(double v, double P, double a, double b) {
  const double N = -a * a * P * v * v * (18 * std::pow(b, 3) - 5 * b * b * v - 4 * b * v * v + std::pow(v, 3)) -
                   a * a * a * (v - 6 * b) * (v - 2 * b) * (v - 2 * b) -
                   a * P * P * std::pow(v, 4) * (-3 * std::pow(b, 3) + 21 * b * b * v - 14 * b * v * v + std::pow(v, 3)) +
                   3 * b * P * P * P * std::pow(v, 7) * (v - b);
  const double d1 = nonzero(3 * P * v * v * (v - b), "3Pv^2(v - b)");
  const double d2 = nonzero(2 * a * b - a * v + P * v * v * v, "2ab - av + Pv^3");
  return N / (d1 * d2 * d2);
}

double vdw_R_F_Tv(double T, double v, double a, double b) {
  const double w = v - b;
  const double N = -15 * b * T * T * T * std::pow(v, 7) - 3 * a * a * T * w * w * v * v * (v * v - 14 * b * v + 24 * b * b) -
                   3 * a * a * a * w * w * w * (v * v - 2 * b * v + 3 * b * b) +
                   a * T * T * std::pow(v, 4) * (5 * std::pow(v, 3) - 25 * b * v * v + 54 * b * b * v - 9 * std::pow(b, 3));
  const double d1 = nonzero(T * v * v - a * w, "Tv^2 - a(v - b)");
  const double d2 = nonzero(6 * a * w * w - 5 * T * std::pow(v, 3), "6a(v - b)^2 - 5Tv^3");
  return N / (d1 * d2 * d2);
}

double vdw_R_F_vP(double v, double P, double a, double b) {
  const double N = a * a * a * (v - 2 * b) * (v - 6 * b) * (v - 6 * b) - 15 * b * P * P * P * std::pow(v, 7) * (v - b) -
                   a * P * P * std::pow(v, 4) * (5 * std::pow(v, 3) - 70 * b * v * v + 99 * b * b * v - 9 * std::pow(b, 3)) -
                   a * P * v * v * (7 * std::pow(v, 3) - 50 * b * v * v + 39 * b * b * v + 54 * std::pow(b, 3));
  const double d1 = nonzero(P * v * v * (v - b), "Pv^2(v - b)");
  const double d2 = nonzero(5 * P * std::pow(v, 3) - a * v + 6 * a * b, "5Pv^3 - av + 6ab");
  return -N / (d1 * d2 * d2);
}

double chap_R_s(double u, double v, double C, double alpha, double beta) {
  const double ua = std::pow(u, alpha + 1);
  const double vb = std::pow(v, beta + 1);
  const double d = nonzero(C * alpha * vb + beta * ua, "C alpha v^(beta+1) + beta u^(alpha+1)");
  return -(beta + 1) * (beta + 1) * (C * C * alpha * vb * vb + 2 * C * alpha * ua * vb + beta * ua * ua) / (2 * d * d);
}

double chap_R_u(double s, double v, double s0, double C, double alpha, double beta) {
  const double e = std::exp(s / s0);
  const double vb = std::pow(v, beta + 1);
  const double d = nonzero(beta * e - C * vb * (beta - alpha), "beta e^(s/s0) - C v^(beta+1)(beta - alpha)");
  return -(beta + 1) * (beta + 1) *
         (-2 * C * e * vb * (beta - alpha) + beta * std::exp(2 * s / s0) + C * C * vb * vb * (beta - alpha)) /
         (2 * d * d);
}

double chap_R_const(double alpha) { return -0.5 * (1 + alpha) * (1 + alpha) / nonzero(alpha, "alpha"); }

double chap_det(double s, double v, double C, double alpha, double beta) {
  const double es = std::exp(s);
  const double num = (C * (alpha - beta) * std::pow(v, 1 + beta) + beta * es) * es;
  const double d1 = nonzero(C * (1 + alpha) * (1 + beta), "C(1 + alpha)(1 + beta)");
  const double d2 = nonzero(std::pow(v, 3 + beta), "v^(3+beta)");
  const double d3 = nonzero(-es + C * std::pow(v, alpha + beta), "-e^s + C v^(alpha+beta)");
  return num / (d1 * d2 * d3);
}

double numR_at_critical(double v, double a, double b) {
  const double v2 = nonzero(v * v, "v_c^2");
  return -(1.0 / v2) * (a * a * a * (v - 2 * b) * (v - 2 * b) *
                        (-9 * b * b * b + 21 * b * b * v - 13 * b * v * v + v * v * v));
}

}  // namespace

const char* to_string(OracleId id) noexcept {
  for (const auto& n : kNames)
    if (n.id == id) return n.name;
  return "unknown";
}

OracleId oracle_from_string(const std::string& name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.id;
  throw Error(ErrorKind::InvalidArgument, "unknown oracle '" + name + "'");
}

const std::vector<OracleId>& all_oracles() {
  static const std::vector<OracleId> ids = [] {
    std::vector<OracleId> out;
    for (const auto& n : kNames) out.push_back(n.id);
    return out;
  }();
  return ids;
}

double oracle_eval(OracleId id, const NamedValues& point, const NamedValues& params) {
  switch (id) {
    case OracleId::vdw_R_s:
      return vdw_R_s(coord(point, "u"), coord(point, "v"), param(params, "a"), param(params, "b"));
    case OracleId::vdw_R_u:
      return vdw_R_u(coord(point, "s"), coord(point, "v"), param(params, "a"), param(params, "b"));
    case OracleId::vdw_R_vP:
      return vdw_R_vP(coord(point, "v"), coord(point, "P"), param(params, "a"), param(params, "b"));
    case OracleId::vdw_R_F_Tv:
      return vdw_R_F_Tv(coord(point, "T"), coord(point, "v"), param(params, "a"), param(params, "b"));
    case OracleId::vdw_R_F_vP:
      return vdw_R_F_vP(coord(point, "v"), coord(point, "P"), param(params, "a"), param(params, "b"));
    case OracleId::chap_R_s:
      return chap_R_s(coord(point, "u"), coord(point, "v"), param(params, "C"), param(params, "alpha"),
                      param(params, "beta"));
    case OracleId::chap_R_u:
      return chap_R_u(coord(point, "s"), coord(point, "v"), param(params, "s0"), param(params, "C"),
                      param(params, "alpha"), param(params, "beta"));
    case OracleId::chap_R_const:
      return chap_R_const(param(params, "alpha"));
    case OracleId::chap_det:
      return chap_det(coord(point, "s"), coord(point, "v"), param(params, "C"), param(params, "alpha"),
                      param(params, "beta"));
    case OracleId::numR_at_critical:
      return numR_at_critical(coord(point, "v"), param(params, "a"), param(params, "b"));
    case OracleId::ideal_zero:
      return 0.0;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown oracle");
}

OracleComparison oracle_vs_pipeline(OracleId id, const CurvatureView& view, const NamedValues& params,
                                    const GridSpec& grid) {
  if (id == OracleId::chap_det || id == OracleId::numR_at_critical)
    throw Error(ErrorKind::InvalidArgument, std::string(to_string(id)) + " is not a curvature oracle");
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "grid has no points");

  const std::vector<CurvatureSample> samples = evaluate_grid(view, grid);
  OracleComparison out;
  out.id = id;
  bool sign_chosen = false;
  for (const auto& sample : samples) {
    if (sample.failed || sample.nonfinite) {
      ++out.failures;
      continue;
    }
    NamedValues point;
    for (std::size_t a = 0; a < view.coords.size(); ++a) point[view.coords[a]] = sample.at[a];
    double r_oracle = 0.0;
    try {
      r_oracle = oracle_eval(id, point, params);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularDenominator) throw;
      ++out.failures;
      continue;
    }
    const double r = sample.ricci_scalar;
    if (!sign_chosen) {
      out.sign_factor = std::abs(r - r_oracle) <= std::abs(r + r_oracle) ? 1.0 : -1.0;
      sign_chosen = true;
    }
    const double deviation = std::abs(r - out.sign_factor * r_oracle) / (1.0 + std::abs(r_oracle));
    ++out.evaluated;
    if (deviation > out.max_deviation || out.worst_point.empty()) {
      out.max_deviation = std::max(out.max_deviation, deviation);
      out.worst_point = sample.at;
      out.worst_pipeline = r;
      out.worst_oracle = r_oracle;
    }
  }
  return out;
}

OracleComparison oracle_vs_pipeline(OracleId id, const SystemSpec& spec, const GridSpec& grid) {
  return oracle_vs_pipeline(id, direct_view(spec), spec.params, grid);
}

}  // namespace gtd
