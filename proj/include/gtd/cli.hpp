#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gtd/analysis.hpp"
#include "gtd/systems.hpp"

namespace gtd::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kDegenerate = 3,
  kUnwritable = 4,
  kCheckFailed = 5,
};

/// Reads a JSON system definition:
///   {"id", "representation"?, "potential_name", "coords": [{"name", "role"}],
///    "excluded_index": <coordinate name>, "params": {..}, "domain": [..],
///    "relation", "reference"?: [..], "legendre_complete"?: bool}
/// Throws InvalidArgument for schema problems; relation errors propagate.
SystemDefinition parse_system_file(const std::string& json_text);
SystemDefinition load_system_file(const std::string& path);

/// "a=1,b=2" -> {{"a", 1}, {"b", 2}}. Throws InvalidArgument.
std::map<std::string, double> parse_assignments(const std::string& text);

/// Orders named coordinate values by the system's coordinates. Throws
/// InvalidArgument for missing or unknown names.
Point point_from_assignments(const SystemSpec& spec, const std::map<std::string, double>& values);

/// Fixed settings behind each reproduced figure.
struct FigureRecipe {
  std::string id;
  double P_r = 0.8;
  GridAxis axis;
  std::vector<double> fields;  // Ising H values
  double a = 1.0, b = 1.0, J = 1.0;
};

/// Throws InvalidArgument for an unknown id.
FigureRecipe figure_recipe(const std::string& id);

/// Full CSV text of the figure, header comment line first.
std::string figure_csv(const FigureRecipe& recipe);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

/// Runs one suite (invariance, homogeneity, oracle) or all. Throws
/// InvalidArgument for an unknown suite.
std::vector<CheckResult> run_checks(const std::string& suite);

/// The whole command line. Writes results to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gtd::cli
