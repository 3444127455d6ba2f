#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gtd/errors.hpp"
#include "gtd/geometry.hpp"
#include "gtd/transforms.hpp"

namespace gtd {

/// Linearly spaced axis; count == 1 gives the single value `min`.
struct GridAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  double at(std::size_t i) const;
  /// "name=min:max:count". Throws InvalidArgument.
  static GridAxis parse(const std::string& text);
};

/// Tensor-product grid. Flat index runs fastest along axes[0].
struct GridSpec {
  std::vector<GridAxis> axes;

  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  Point point(std::size_t flat) const;
  /// Number of grid lines along axes[0] (product of the other counts).
  std::size_t line_count() const noexcept;
};

/// The curvature of a system read in some chart. Charts other than the
/// system's own coordinates (e.g. (v, P)) map their points back before the
/// pipeline runs.
struct CurvatureView {
  std::string label;
  std::vector<std::string> coords;
  std::function<CurvatureResult(const Point&)> eval;
};

CurvatureView direct_view(const SystemSpec& spec);

/// van der Waals curvature over (v, P), or (v_r, P_r) when `reduced`. The
/// spec may be any of the entropy, energy or Helmholtz catalog systems.
CurvatureView vdw_pressure_view(const SystemSpec& spec, bool reduced);

struct CurvatureSample {
  Point at;
  double ricci_scalar = 0.0;
  double det_g = 0.0;
  bool nonfinite = false;
  /// The metric degenerated here, which on a singular locus is the limit
  /// of |R| -> infinity.
  bool degenerate = false;
  /// The pipeline threw at this point; `error` has the message.
  bool failed = false;
  ErrorKind error_kind = ErrorKind::InvalidArgument;
  std::string error;

  /// |R|; infinite when nonfinite or degenerate, NaN for other failures.
  double magnitude() const noexcept;
};

/// One worker count for every grid evaluation: GEOTHERMO_THREADS, or the
/// hardware concurrency when unset or 0.
std::size_t worker_count();

/// Evaluates the view at every grid point. Results are in flat-index order
/// and do not depend on the worker count.
std::vector<CurvatureSample> evaluate_grid(const CurvatureView& view, const GridSpec& grid);

struct HomogeneityReport {
  bool is_homogeneous = false;
  /// Set only when is_homogeneous.
  std::optional<double> degree;
  /// Least-squares degree before the homogeneity verdict.
  double fitted_degree = 0.0;
  double max_residual = 0.0;
  std::vector<double> lambdas;
};

inline const std::vector<double> kHomogeneityLambdas{1.0 / 3.0, 0.5, 2.0 / 3.0, 1.5, 2.0, 3.0};

/// Fits beta in Phi(lambda E) = lambda^beta Phi(E) by least squares over
/// log lambda. Homogeneous iff every residual is below 1e-8 (1 + |Phi(E)|).
HomogeneityReport homogeneity_degree(const ScalarField& field, const Point& base,
                                     const std::vector<double>& lambdas = kHomogeneityLambdas);
/// As above with a domain check of every scaled point.
HomogeneityReport homogeneity_degree(const SystemSpec& spec, const Point& base,
                                     const std::vector<double>& lambdas = kHomogeneityLambdas);

struct InvarianceRow {
  Point at_a;
  Point at_b;
  double r_a = 0.0;
  double r_b = 0.0;
  double abs_delta = 0.0;
  /// |R_a - R_b| / (1 + |R_a|)
  double rel_delta = 0.0;
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  double max_abs_delta = 0.0;
  double max_rel_delta = 0.0;
  /// Grid points where either side threw or overflowed.
  std::size_t failures = 0;
};

InvarianceReport invariance_report(const SystemSpec& a, const SystemSpec& b, const PointMap& map_ab,
                                   const GridSpec& grid);
InvarianceReport invariance_report(const CurvatureView& a, const CurvatureView& b, const GridSpec& grid);

/// The analytic van der Waals transition locus 2ab - av + Pv^3 = 0, used to
/// classify scan detections. Axis names pick out v (or v_r) and P (or P_r).
struct VdwLocus {
  double a = 1.0;
  double b = 1.0;
  bool reduced = false;
};

/// Real roots v > b of P v^3 - a v + 2ab = 0.
std::vector<double> vdw_locus_volumes(double P, double a, double b);

struct SingularPoint {
  Point at;
  double ricci_scalar = 0.0;  // at the refined point; may be huge or non-finite
  bool on_locus = false;
  double locus_distance = 0.0;  // to the nearest analytic locus point, along axes[0]
};

struct ScanOptions {
  double blowup_threshold = 1e8;
  std::optional<VdwLocus> locus;
};

struct ScanReport {
  GridSpec grid;
  std::vector<CurvatureSample> samples;
  std::vector<SingularPoint> singular;
  /// Analytic locus points inside the grid hull.
  std::vector<Point> analytic_locus;
  /// Other zeros of the (v, P) curvature denominator inside the hull
  /// (v = 0, v = b, P = 0). They sit outside the physical domain.
  std::vector<Point> other_denominator_zeros;
  /// Max over detections classified on the locus.
  double max_locus_deviation = 0.0;
  double sign_factor = 1.0;
  std::size_t failures = 0;
};

/// Scans every grid line along axes[0] for curvature blow-ups and refines
/// each candidate by minimising |1/R| along the line.
ScanReport singularity_scan(const CurvatureView& view, const GridSpec& grid, const ScanOptions& options = {});

struct LocusNumerator {
  double v_c = 0.0;
  double P_c = 0.0;
  double locus_residual = 0.0;
  double numerator = 0.0;
  bool finite = false;
  bool vanishes = false;
};

/// The curvature numerator on the locus. PreconditionFailure for a point off
/// the locus by more than 1e-8.
std::vector<LocusNumerator> locus_numerator_check(double a, double b,
                                                  const std::vector<std::pair<double, double>>& critical_points);

struct ConstantCurvature {
  double mean = 0.0;
  double spread = 0.0;  // max |R - mean|
  std::size_t count = 0;
};

ConstantCurvature constant_curvature_check(const SystemSpec& spec, const GridSpec& grid);

struct DegeneracyCell {
  double alpha = 0.0;
  double beta = 0.0;
  double min_abs_det = 0.0;
  bool all_degenerate = false;
};

/// Minimum |det g| of the Chaplygin entropy metric over the grid for every
/// (alpha, beta). Throws EmptyGrid if any input is empty.
std::vector<DegeneracyCell> degeneracy_sweep(const std::vector<double>& alphas, const std::vector<double>& betas,
                                             const GridSpec& grid, double s0 = 1.0, double C = 1.0);

inline constexpr double kIsingMinTemperature = 0.05;

struct IsingCurve {
  double H = 0.0;
  std::vector<double> T;
  std::vector<double> R;
  std::vector<bool> nonfinite;
  /// Mean R over the top tenth of the T range.
  double plateau = 0.0;
  /// Slope of log|R| against log T over the bottom tenth.
  double growth_exponent = 0.0;
};

/// R(T) of the Ising free energy for each H on linearly spaced T. Throws
/// InvalidArgument for T below the cutoff or H == 0.
std::vector<IsingCurve> ising_profile(double J, const std::vector<double>& H_values, double T_min, double T_max,
                                      std::size_t samples);

}  // namespace gtd
