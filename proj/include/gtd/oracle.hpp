#pragma once

#include <map>
#include <string>

#include "gtd/analysis.hpp"

namespace gtd {

/// Closed-form curvature and determinant expressions, transcribed term for
/// term as printed, typos included.
enum class OracleId {
  vdw_R_s,           // (u, v)
  vdw_R_u,           // (s, v)
  vdw_R_vP,          // (v, P)
  vdw_R_F_Tv,        // (T, v)
  vdw_R_F_vP,        // (v, P)
  chap_R_s,          // (u, v)
  chap_R_u,          // (s, v)
  chap_R_const,      // alpha only
  chap_det,          // (s, v), s0 = 1
  numR_at_critical,  // v
  ideal_zero,
};

const char* to_string(OracleId id) noexcept;
/// Throws InvalidArgument for an unknown name.
OracleId oracle_from_string(const std::string& name);
const std::vector<OracleId>& all_oracles();

using NamedValues = std::map<std::string, double>;

/// Throws InvalidArgument for a missing coordinate, UnboundParameter for a
/// missing parameter, SingularDenominator naming a vanishing factor.
double oracle_eval(OracleId id, const NamedValues& point, const NamedValues& params);

struct OracleComparison {
  OracleId id;
  /// The s in {+1, -1} that best matches at the first evaluable grid point.
  double sign_factor = 1.0;
  /// max |R_pipeline - s R_oracle| / (1 + |R_oracle|)
  double max_deviation = 0.0;
  Point worst_point;
  double worst_pipeline = 0.0;
  double worst_oracle = 0.0;
  std::size_t evaluated = 0;
  std::size_t failures = 0;
};

/// Compares the oracle with the pipeline read through `view`; the view's
/// coordinate names are the oracle's point keys.
OracleComparison oracle_vs_pipeline(OracleId id, const CurvatureView& view, const NamedValues& params,
                                    const GridSpec& grid);
OracleComparison oracle_vs_pipeline(OracleId id, const SystemSpec& spec, const GridSpec& grid);

}  // namespace gtd
