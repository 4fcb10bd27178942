#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latdesign/catalog.hpp"
#include "latdesign/design.hpp"
#include "latdesign/gram.hpp"
#include "latdesign/height.hpp"
#include "latdesign/modular.hpp"

namespace latdesign {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInconclusive = 2 };

struct RunReport {
  std::string command;
  std::optional<LatticeDescriptor> input;
  /// Subcommand-specific result (fully-critical report, height report,
  /// design verdicts, table rows, ...).
  nlohmann::json outcome = nlohmann::json::object();
  double wall_seconds = 0;
  /// Enumeration bounds and lattice-sum radii actually used.
  nlohmann::json truncation = nlohmann::json::object();
  std::string version = kVersion;
  int exit_code = kExitOk;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);
};

/// Runs one subcommand (argv[0] is the program name).  Human-readable or JSON
/// output goes to `out`, diagnostics to `err`.  Never throws for bad input:
/// usage and parse errors come back as exit code 2.
RunReport run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

nlohmann::json to_json(const DesignVerdict& v);
nlohmann::json to_json(const FullyCriticalReport& r);
nlohmann::json to_json(const HeightReport& r);
nlohmann::json to_json(const TableRow& r);

/// Transcript lines for a fully-critical run, e.g.
/// "150 = 150, 2-DESIGN on the layer (x,x)=3".  Sums are over one vector of
/// each antipodal pair.
std::string transcript(const FullyCriticalReport& r);
std::string transcript_line(const DesignVerdict& v);

}  // namespace latdesign
