#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gtd/systems.hpp"

namespace gtd {

using PointMap = std::function<Point(const Point&)>;

/// I_a = dPhi/dE^a at a point.
struct IntensiveVector {
  std::vector<double> values;
  Point at;
};

IntensiveVector equations_of_state(const SystemSpec& spec, const Point& x);

/// How transforms obtain the new relation.
enum class Solve {
  Auto,     // closed-form catalog partner when one exists, numeric otherwise
  Numeric,  // always damped Newton on the source relation
};

/// A derived system plus the map carrying source points to the
/// corresponding points of the derived system.
struct LegendrePartner {
  std::string source_id;
  std::vector<std::size_t> slots;
  SystemSpec spec;
  PointMap forward;
  bool closed_form = false;
  /// Total transform requested on an all-intensive relation: spec is the source.
  bool passthrough = false;
};

/// Phi - I_slot E^slot in coordinates (I_slot, remaining E). Throws
/// InvalidArgument for a bad slot, InversionFailure when the sampled map
/// E^slot -> I_slot is not monotone.
LegendrePartner partial_legendre(const SystemSpec& spec, std::size_t slot, Solve solve = Solve::Auto);

/// partial_legendre over every slot. All-intensive relations pass through.
LegendrePartner total_legendre(const SystemSpec& spec, Solve solve = Solve::Auto);

/// Swap the potential with coordinate `target_slot`: the new relation gives
/// E^target as a function of (Phi, remaining E), with Phi in the target slot.
LegendrePartner invert_representation(const SystemSpec& spec, std::size_t target_slot,
                                      Solve solve = Solve::Auto);

struct VolumePressure {
  double v;
  double P;
};

/// Pressure of the van der Waals fluid from the entropy-representation
/// state (u, v): P = (2uv^2 - av + 3ab) / (3v^2 (v - b)).
VolumePressure to_vP(const SystemSpec& vdw_s, double u, double v);

/// The u that gives pressure P at volume v.
double vdw_energy_from_vP(double v, double P, double a, double b);

/// (v / 3b, 27 b^2 P / a).
VolumePressure reduced_variables(double v, double P, double a, double b);
/// Inverse of reduced_variables.
VolumePressure from_reduced_variables(double v_r, double P_r, double a, double b);

/// max over segments of |dPhi - I_a dE^a| / |dE| with I at the segment midpoint.
double first_law_residual(const SystemSpec& spec, const std::vector<Point>& path);

/// Newton settings for the numeric transforms.
inline constexpr int kNewtonMaxIterations = 100;
inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr std::size_t kMonotonicitySamples = 32;

}  // namespace gtd
