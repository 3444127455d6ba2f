#include "gtd/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gtd/oracle.hpp"

namespace gtd {

double GridAxis::at(std::size_t i) const {
  if (count <= 1) return min;
  if (i + 1 == count) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

GridAxis GridAxis::parse(const std::string& text) {
  const auto eq = text.find('=');
  auto bad = [&]() { return Error(ErrorKind::InvalidArgument, "malformed grid axis '" + text + "', expected name=min:max:count"); };
  if (eq == std::string::npos || eq == 0) throw bad();
  GridAxis axis;
  axis.name = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : rest.find(':', c1 + 1);
  if (c2 == std::string::npos) throw bad();
  try {
    std::size_t used = 0;
    const std::string smin = rest.substr(0, c1), smax = rest.substr(c1 + 1, c2 - c1 - 1), scount = rest.substr(c2 + 1);
    axis.min = std::stod(smin, &used);
    if (used != smin.size()) throw bad();
    axis.max = std::stod(smax, &used);
    if (used != smax.size()) throw bad();
    const long long count = std::stoll(scount, &used);
    if (used != scount.size() || count < 1) throw bad();
    axis.count = static_cast<std::size_t>(count);
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) throw bad();
  return axis;
}

std::size_t GridSpec::size() const noexcept {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

std::size_t GridSpec::line_count() const noexcept {
  if (axes.empty() || axes[0].count == 0) return 0;
  return size() / axes[0].count;
}

Point GridSpec::point(std::size_t flat) const {
  Point p(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) {
    p[a] = axes[a].at(flat % axes[a].count);
    flat /= axes[a].count;
  }
  return p;
}

CurvatureView direct_view(const SystemSpec& spec) {
  return {spec.id, spec.coord_names(), [spec](const Point& x) { return curvature(spec, x); }};
}

CurvatureView vdw_pressure_view(const SystemSpec& spec, bool reduced) {
  auto pa = spec.params.find("a");
  auto pb = spec.params.find("b");
  if (pa == spec.params.end() || pb == spec.params.end())
    throw Error(ErrorKind::InvalidArgument, "system '" + spec.id + "' has no van der Waals parameters a, b");
  const double a = pa->second, b = pb->second;
  const std::string rep = spec.representation;
  if (rep != "entropy" && rep != "energy" && rep != "helmholtz")
    throw Error(ErrorKind::InvalidArgument, "no (v, P) chart for representation '" + rep + "'");

  const SystemSpec entropy = catalog_system("vdw_s", {{"a", a}, {"b", b}});
  CurvatureView view;
  view.label = spec.id + (reduced ? "(v_r,P_r)" : "(v,P)");
  view.coords = reduced ? std::vector<std::string>{"v_r", "P_r"} : std::vector<std::string>{"v", "P"};
  view.eval = [spec, entropy, rep, a, b, reduced](const Point& x) {
    VolumePressure vp{x[0], x[1]};
    if (reduced) vp = from_reduced_variables(x[0], x[1], a, b);
    const double u = vdw_energy_from_vP(vp.v, vp.P, a, b);
    Point native;
    if (rep == "entropy") {
      native = {u, vp.v};
    } else if (rep == "energy") {
      native = {evaluate(entropy, Point{u, vp.v}), vp.v};
    } else {
      native = {2.0 / 3.0 * (u + a / vp.v), vp.v};
    }
    CurvatureResult r = curvature(spec, native);
    r.at = x;
    return r;
  };
  return view;
}

double CurvatureSample::magnitude() const noexcept {
  if (nonfinite || degenerate) return std::numeric_limits<double>::infinity();
  if (failed) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(ricci_scalar);
}

std::size_t worker_count() {
  std::size_t n = 0;
  if (const char* env = std::getenv("GEOTHERMO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<std::size_t>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace {

// Runs f(i) for i in [0, n) on the worker pool. Each index is handled by
// exactly one worker and results go to caller-owned slots.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&]() {
    try {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
  }
  if (error) std::rethrow_exception(error);
}

CurvatureSample sample_at(const CurvatureView& view, const Point& x) {
  CurvatureSample s;
  s.at = x;
  try {
    const CurvatureResult r = view.eval(x);
    s.ricci_scalar = r.ricci_scalar;
    s.det_g = r.det_g;
    s.nonfinite = r.nonfinite;
  } catch (const Error& e) {
    s.failed = true;
    s.error_kind = e.kind();
    s.error = e.what();
    s.degenerate = e.kind() == ErrorKind::DegenerateMetric;
  }
  return s;
}

}  // namespace

std::vector<CurvatureSample> evaluate_grid(const CurvatureView& view, const GridSpec& grid) {
  std::vector<CurvatureSample> out(grid.size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = sample_at(view, grid.point(i)); });
  return out;
}

namespace {

HomogeneityReport fit_homogeneity(const std::function<double(const Point&)>& phi, const Point& base,
                                  const std::vector<double>& lambdas) {
  HomogeneityReport report;
  report.lambdas = lambdas;
  const double phi0 = phi(base);
  std::vector<double> values;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "homogeneity samples need lambda > 0");
    Point x = base;
    for (auto& c : x) c *= lambda;
    values.push_back(phi(x));
  }

  // log-ratio fit through the origin; impossible when a ratio is not positive.
  double sxy = 0.0, sxx = 0.0;
  bool fittable = phi0 != 0.0;
  for (std::size_t i = 0; i < lambdas.size() && fittable; ++i) {
    const double ratio = values[i] / phi0;
    if (!(ratio > 0.0)) {
      fittable = false;
      break;
    }
    const double x = std::log(lambdas[i]);
    sxy += x * std::log(ratio);
    sxx += x * x;
  }
  const double beta = fittable && sxx > 0.0 ? sxy / sxx : 0.0;
  report.fitted_degree = beta;

  double worst = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    worst = std::max(worst, std::abs(values[i] - std::pow(lambdas[i], beta) * phi0));
  if (phi0 == 0.0) {
    // Phi vanishes at the base: homogeneous of any degree only if it vanishes
    // along the whole ray.
    for (double v : values) worst = std::max(worst, std::abs(v));
  }
  report.max_residual = worst;
  report.is_homogeneous = fittable && worst < 1e-8 * (1.0 + std::abs(phi0));
  if (report.is_homogeneous) report.degree = beta;
  return report;
}

}  // namespace

HomogeneityReport homogeneity_degree(const ScalarField& field, const Point& base, const std::vector<double>& lambdas) {
  return fit_homogeneity([&field](const Point& x) { return field.evaluate(x); }, base, lambdas);
}

HomogeneityReport homogeneity_degree(const SystemSpec& spec, const Point& base, const std::vector<double>& lambdas) {
  return fit_homogeneity([&spec](const Point& x) { return evaluate(spec, x); }, base, lambdas);
}

namespace {

InvarianceReport assemble(std::vector<CurvatureSample> sa, std::vector<CurvatureSample> sb) {
  InvarianceReport report;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const auto& a = sa[i];
    const auto& b = sb[i];
    if (a.failed || b.failed || a.nonfinite || b.nonfinite) {
      ++report.failures;
      continue;
    }
    InvarianceRow row{a.at, b.at, a.ricci_scalar, b.ricci_scalar, 0.0, 0.0};
    row.abs_delta = std::abs(row.r_a - row.r_b);
    row.rel_delta = row.abs_delta / (1.0 + std::abs(row.r_a));
    report.max_abs_delta = std::max(report.max_abs_delta, row.abs_delta);
    report.max_rel_delta = std::max(report.max_rel_delta, row.rel_delta);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

InvarianceReport invariance_report(const SystemSpec& a, const SystemSpec& b, const PointMap& map_ab,
                                   const GridSpec& grid) {
  const CurvatureView va = direct_view(a);
  const CurvatureView vb = direct_view(b);
  std::vector<CurvatureSample> sa(grid.size()), sb(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Point x = grid.point(i);
    sa[i] = sample_at(va, x);
    try {
      sb[i] = sample_at(vb, map_ab(x));
    } catch (const Error& e) {
      sb[i].at = x;
      sb[i].failed = true;
      sb[i].error_kind = e.kind();
      sb[i].error = e.what();
    }
  });
  return assemble(std::move(sa), std::move(sb));
}

InvarianceReport invariance_report(const CurvatureView& a, const CurvatureView& b, const GridSpec& grid) {
  return assemble(evaluate_grid(a, grid), evaluate_grid(b, grid));
}

std::vector<double> vdw_locus_volumes(double P, double a, double b) {
  // P v^3 - a v + 2ab = 0 through the companion matrix.
  std::vector<double> roots;
  if (P == 0.0) {
    roots.push_back(2.0 * b);
  } else {
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 1) = 1.0;
    companion(1, 2) = 1.0;
    companion(2, 0) = -2.0 * a * b / P;
    companion(2, 1) = a / P;
    const Eigen::Vector3cd eig = companion.eigenvalues();
    for (const auto& z : eig) {
      if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real()))) continue;
      double v = z.real();
      // Polish with Newton on the cubic.
      for (int it = 0; it < 5; ++it) {
        const double f = P * v * v * v - a * v + 2 * a * b;
        const double df = 3 * P * v * v - a;
        if (df == 0.0) break;
        v -= f / df;
      }
      if (v > b) roots.push_back(v);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              roots.end());
  return roots;
}

namespace {

struct LocusAxes {
  std::size_t v_axis = 0;
  std::size_t P_axis = 1;
};

std::optional<LocusAxes> locus_axes(const GridSpec& grid, bool reduced) {
  const std::string vn = reduced ? "v_r" : "v";
  const std::string pn = reduced ? "P_r" : "P";
  LocusAxes axes;
  bool has_v = false, has_P = false;
  for (std::size_t i = 0; i < grid.axes.size(); ++i) {
    if (grid.axes[i].name == vn) axes.v_axis = i, has_v = true;
    if (grid.axes[i].name == pn) axes.P_axis = i, has_P = true;
  }
  if (!has_v || !has_P) return std::nullopt;
  return axes;
}

// Golden-section minimisation of 1/|R| along axis 0 between lo and hi.
Point refine(const CurvatureView& view, Point base, double lo, double hi, double& r_out) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) {
    base[0] = t;
    const CurvatureSample s = sample_at(view, base);
    const double m = s.magnitude();
    if (std::isnan(m)) return std::numeric_limits<double>::infinity();
    return 1.0 / m;
  };
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-13 * scale && (f1 > 0.0 || f2 > 0.0)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  base[0] = f1 <= f2 ? x1 : x2;
  const CurvatureSample s = sample_at(view, base);
  r_out = s.degenerate ? std::numeric_limits<double>::infinity() : s.ricci_scalar;
  return base;
}

}  // namespace

ScanReport singularity_scan(const CurvatureView& view, const GridSpec& grid, const ScanOptions& options) {
  ScanReport report;
  report.grid = grid;
  report.samples = evaluate_grid(view, grid);
  for (const auto& s : report.samples)
    if (s.failed && !s.degenerate) ++report.failures;
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "grid has no points");

  const std::size_t n0 = grid.axes[0].count;
  const std::size_t lines = grid.line_count();
  std::vector<std::vector<SingularPoint>> found(lines);

  parallel_for(lines, [&](std::size_t line) {
    const std::size_t offset = line * n0;
    std::vector<double> m(n0);
    for (std::size_t i = 0; i < n0; ++i) m[i] = report.samples[offset + i].magnitude();
    auto valid = [&](std::size_t i) { return !std::isnan(m[i]); };

    std::size_t i = 0;
    while (i < n0) {
      if (!valid(i)) {
        ++i;
        continue;
      }
      // Runs of equal magnitude (typically consecutive infinities) form one candidate.
      std::size_t j = i;
      while (j + 1 < n0 && valid(j + 1) && m[j + 1] == m[i]) ++j;
      const bool left_lower = i == 0 || !valid(i - 1) || m[i - 1] < m[i];
      const bool right_lower = j + 1 == n0 || !valid(j + 1) || m[j + 1] < m[i];
      const bool interior = i > 0 || j + 1 < n0;
      // Every local maximum of |R| is refined, not only samples above the
      // threshold or after a jump: near a double pole the grid can straddle
      // the pole with both neighbors still moderate.
      if (left_lower && right_lower && interior) {
        const double lo = grid.axes[0].at(i > 0 ? i - 1 : i);
        const double hi = grid.axes[0].at(j + 1 < n0 ? j + 1 : j);
        double r = 0.0;
        const Point at = refine(view, report.samples[offset + i].at, lo, hi, r);
        // Growth that is still climbing at the end of the line is not a
        // divergence inside the grid: an edge candidate counts only when the
        // edge cell holds something larger than the edge sample.
        const auto& axis = grid.axes[0];
        const double edge_tol = 1e-9 * std::max({1.0, std::abs(axis.min), std::abs(axis.max)});
        const bool edge_sample = i == 0 || j + 1 == n0;
        const bool at_edge = std::abs(at[0] - axis.min) <= edge_tol || std::abs(at[0] - axis.max) <= edge_tol ||
                             (edge_sample && !(std::abs(r) > m[i]));
        if (!at_edge && !(std::abs(r) <= options.blowup_threshold)) found[line].push_back({at, r, false, 0.0});
      }
      i = j + 1;
    }
  });
  for (auto& f : found)
    for (auto& p : f) report.singular.push_back(std::move(p));

  if (options.locus) {
    const auto axes = locus_axes(grid, options.locus->reduced);
    if (axes) {
      const double a = options.locus->a, b = options.locus->b;
      const bool red = options.locus->reduced;
      auto to_grid_v = [&](double v) { return red ? v / (3.0 * b) : v; };
      auto to_grid_P = [&](double P) { return red ? P * 27.0 * b * b / a : P; };
      auto to_phys = [&](const Point& x) {
        return red ? from_reduced_variables(x[axes->v_axis], x[axes->P_axis], a, b)
                   : VolumePressure{x[axes->v_axis], x[axes->P_axis]};
      };
      auto in_hull = [&](std::size_t axis, double value) {
        const auto& ax = grid.axes[axis];
        return value >= std::min(ax.min, ax.max) && value <= std::max(ax.min, ax.max);
      };

      // Analytic locus per grid line.
      for (std::size_t line = 0; line < lines; ++line) {
        const Point base = grid.point(line * n0);
        const VolumePressure phys = to_phys(base);
        if (axes->v_axis == 0) {
          for (double v : vdw_locus_volumes(phys.P, a, b)) {
            Point p = base;
            p[0] = to_grid_v(v);
            if (in_hull(0, p[0])) report.analytic_locus.push_back(p);
          }
        } else if (axes->P_axis == 0 && phys.v > b) {
          Point p = base;
          p[0] = to_grid_P((a * phys.v - 2 * a * b) / (phys.v * phys.v * phys.v));
          if (in_hull(0, p[0])) report.analytic_locus.push_back(p);
        }
        for (double v0 : {0.0, b}) {
          Point p = base;
          p[axes->v_axis] = to_grid_v(v0);
          if (axes->v_axis == 0 && in_hull(0, p[0])) report.other_denominator_zeros.push_back(p);
        }
        if (axes->P_axis == 0 && in_hull(0, 0.0)) {
          Point p = base;
          p[0] = 0.0;
          report.other_denominator_zeros.push_back(p);
        }
      }

      for (auto& sp : report.singular) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& lp : report.analytic_locus) {
          bool same_line = true;
          for (std::size_t k = 1; k < lp.size(); ++k) same_line = same_line && lp[k] == sp.at[k];
          if (same_line) best = std::min(best, std::abs(lp[0] - sp.at[0]));
        }
        sp.locus_distance = best;
        sp.on_locus = best <= 1e-4;
        if (sp.on_locus) report.max_locus_deviation = std::max(report.max_locus_deviation, best);
      }
    }
  }
  return report;
}

std::vector<LocusNumerator> locus_numerator_check(double a, double b,
                                                  const std::vector<std::pair<double, double>>& critical_points) {
  std::vector<LocusNumerator> out;
  for (const auto& [v, P] : critical_points) {
    LocusNumerator row;
    row.v_c = v;
    row.P_c = P;
    row.locus_residual = 2 * a * b - a * v + P * v * v * v;
    if (!(std::abs(row.locus_residual) <= 1e-8))
      throw Error(ErrorKind::PreconditionFailure, "point (v=" + format_g(v) + ", P=" + format_g(P) +
                                                      ") is not on the transition locus");
    row.numerator = oracle_eval(OracleId::numR_at_critical, {{"v", v}, {"P", P}}, {{"a", a}, {"b", b}});
    row.finite = std::isfinite(row.numerator);
    row.vanishes = row.numerator == 0.0;
    out.push_back(row);
  }
  return out;
}

ConstantCurvature constant_curvature_check(const SystemSpec& spec, const GridSpec& grid) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "grid has no points");
  const auto samples = evaluate_grid(direct_view(spec), grid);
  ConstantCurvature out;
  double sum = 0.0;
  for (const auto& s : samples) {
    if (s.failed) throw Error(s.error_kind, s.error);
    sum += s.ricci_scalar;
  }
  out.count = samples.size();
  out.mean = sum / static_cast<double>(out.count);
  for (const auto& s : samples) out.spread = std::max(out.spread, std::abs(s.ricci_scalar - out.mean));
  return out;
}

std::vector<DegeneracyCell> degeneracy_sweep(const std::vector<double>& alphas, const std::vector<double>& betas,
                                             const GridSpec& grid, double s0, double C) {
  if (alphas.empty() || betas.empty() || grid.empty())
    throw Error(ErrorKind::EmptyGrid, "degeneracy sweep needs parameter values and grid points");
  std::vector<DegeneracyCell> out;
  for (double alpha : alphas)
    for (double beta : betas) out.push_back({alpha, beta, std::numeric_limits<double>::infinity(), true});

  parallel_for(out.size(), [&](std::size_t c) {
    DegeneracyCell& cell = out[c];
    const SystemSpec spec =
        catalog_system("chap_s", {{"alpha", cell.alpha}, {"beta", cell.beta}, {"s0", s0}, {"C", C}});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point x = grid.point(i);
      try {
        const MetricTensor m = natural_metric_unchecked(jet_eval(spec, x, 2), x, spec.excluded_index);
        cell.min_abs_det = std::min(cell.min_abs_det, std::abs(m.det));
        cell.all_degenerate = cell.all_degenerate && is_degenerate(m);
      } catch (const Error&) {
        continue;
      }
    }
  });
  return out;
}

std::vector<IsingCurve> ising_profile(double J, const std::vector<double>& H_values, double T_min, double T_max,
                                      std::size_t samples) {
  if (!(T_min >= kIsingMinTemperature) || !(T_max > T_min))
    throw Error(ErrorKind::InvalidArgument, "temperature range must satisfy 0.05 <= T_min < T_max");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two temperature samples");
  for (double H : H_values)
    if (H == 0.0) throw Error(ErrorKind::InvalidArgument, "H must be nonzero");

  const SystemSpec spec = catalog_system("ising_f", {{"J", J}});
  const CurvatureView view = direct_view(spec);
  GridSpec grid{{{"T", T_min, T_max, samples}, {"H", 0.0, 0.0, 1}}};
  std::vector<IsingCurve> out;
  for (double H : H_values) {
    grid.axes[1] = {"H", H, H, 1};
    const auto s = evaluate_grid(view, grid);
    IsingCurve curve;
    curve.H = H;
    for (const auto& p : s) {
      curve.T.push_back(p.at[0]);
      curve.R.push_back(p.failed ? std::numeric_limits<double>::quiet_NaN() : p.ricci_scalar);
      curve.nonfinite.push_back(p.failed || p.nonfinite);
    }
    const double span = T_max - T_min;
    double sum = 0.0;
    std::size_t count = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t low = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      if (curve.nonfinite[i]) continue;
      if (curve.T[i] >= T_max - 0.1 * span) sum += curve.R[i], ++count;
      if (curve.T[i] <= T_min + 0.1 * span || low < 2) {
        const double x = std::log(curve.T[i]), y = std::log(std::abs(curve.R[i]));
        sx += x, sy += y, sxx += x * x, sxy += x * y, ++low;
      }
    }
    curve.plateau = count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
    const double d = static_cast<double>(low) * sxx - sx * sx;
    curve.growth_exponent = low >= 2 && d != 0.0 ? (static_cast<double>(low) * sxy - sx * sy) / d
                                                 : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace gtd
