#pragma once

// Command bodies behind the lame-bethe executable. Each takes parsed JSON
// documents and returns the report plus the process exit code, so tests can
// drive them without spawning processes.

#include <cstdint>
#include <functional>
#include <string>

#include <lamebethe/diffop.hpp>
#include <lamebethe/errors.hpp>
#include <lamebethe/json_io.hpp>

namespace lamebethe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,
  kExitVerification = 3,
  kExitResource = 4,
};

int exit_code_for(ErrorCode code);

struct RunOptions {
  std::uint64_t seed = 1;
  std::uint64_t starts = 0;
  double tol = kDefaultResidualTol;
  double quantum = kDefaultQuantum;
  double identity_tol = kIdentityTolerance;
  Caps caps{};
  bool csv = false;
  bool real_classical = false;
  std::string level = "all";
  Arithmetic arithmetic = Arithmetic::Auto;
  int orbit_index = 0;
};

struct CommandOutput {
  Json report;
  /// csv text when requested, otherwise empty
  std::string table;
  int exit_code = kExitOk;
};

/// "separating=N,compositions=M"; either key may be omitted.
Caps parse_caps(const std::string& text);
Arithmetic parse_arithmetic(const std::string& text);

CommandOutput cmd_count(const Json& ws_doc, const RunOptions& options);
CommandOutput cmd_solve(const Json& ws_doc, const RunOptions& options);
/// orbit_doc is a critical point ({"coords": ...}) or a whole OrbitSet, in
/// which case options.orbit_index picks the orbit.
CommandOutput cmd_verify(const Json& ws_doc, const Json& orbit_doc, const RunOptions& options);
CommandOutput cmd_classical(const Json& ws_doc, const RunOptions& options);

/// Runs a command, turning library errors into {"error", "message"} reports
/// with the matching exit code.
CommandOutput guarded(const std::function<CommandOutput()>& body);

/// Report text as printed: two-space indented JSON and a trailing newline.
std::string render(const CommandOutput& out);

}  // namespace lamebethe::cli
