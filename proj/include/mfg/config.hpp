#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "mfg/analytic.hpp"
#include "mfg/model.hpp"
#include "mfg/optimizer.hpp"
#include "mfg/verify.hpp"

namespace mfg {

/// Raised for malformed or inconsistent configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleSelection {
  /// zero_flux | positive_flux | exponential | holomorphic
  std::string family;
  Branch branch = Branch::plus;
  /// Holomorphic family only.
  std::string function = "z^2";
  std::vector<double> polynomial;  // real coefficients when function = poly
  double density_scale = 1.0;
  double q = 1.0;

  bool operator==(const OracleSelection&) const = default;
};

struct CompareTolerances {
  double m = 2e-2;
  double du = 5e-2;
  double objective = 1e-2;

  bool operator==(const CompareTolerances&) const = default;
};

struct RunConfig {
  ProblemSpec problem;
  std::array<int, 2> cells{64, 64};
  SolveOptions solver;
  std::string output_dir = "out";
  std::optional<OracleSelection> oracle;
  CompareTolerances compare;
  Thresholds thresholds;
  std::optional<double> eps_m;
  std::uint64_t seed = 1;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json expr_to_json(const Expr& e);
/// A bare number is a constant.
Expr expr_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const ProblemSpec& p);
ProblemSpec problem_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Reads JSON with // and /* */ comments allowed. Throws ConfigError.
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& c, const std::string& path);

}  // namespace mfg
