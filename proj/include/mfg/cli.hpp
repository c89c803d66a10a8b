#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mfg/config.hpp"
#include "mfg/grid.hpp"

namespace mfg {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 1,
  exit_not_converged = 2,
  exit_verification = 3,
};

/// Command-line overrides applied on top of a RunConfig.
struct CliFlags {
  std::optional<std::string> out;
  std::optional<std::array<int, 2>> n;
  std::optional<std::uint64_t> seed;
  /// Directory holding u.csv and m.csv for `verify` (defaults to the output
  /// directory).
  std::optional<std::string> input;
  bool strict = false;
  bool force = false;
};

/// Config with the flag overrides applied.
RunConfig apply_flags(RunConfig config, const CliFlags& flags);

Grid grid_for(const RunConfig& config);

/// Parses "N" or "NX,NY".
std::array<int, 2> parse_resolution(const std::string& text);

int cmd_solve(const RunConfig& config, const CliFlags& flags, std::ostream& out,
              std::ostream& err);
int cmd_oracle(const RunConfig& config, const CliFlags& flags,
               std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, const CliFlags& flags,
               std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, const CliFlags& flags,
                std::ostream& out, std::ostream& err);
int cmd_gradcheck(const RunConfig& config, const CliFlags& flags,
                  std::ostream& out, std::ostream& err);

/// Full entry point: parses argv, loads --config and dispatches.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mfg
