#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "onoff/search.hpp"

namespace onoff::cli {

/// Bad flags, files or combinations; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Scan, Optimize, Threshold, OracleCheck, Bound };
enum class Format { Csv, Json };

struct RunConfig {
  Command command = Command::Scan;
  std::string state = "bell-psi-plus";
  std::optional<double> r;
  std::optional<double> phi;
  std::optional<double> transmissivity;
  std::optional<double> ips_eff;
  double eta = 1.0;
  double dark = 0.0;
  Background background = Background::Thermal;
  std::optional<std::string> scheme;  // natural scheme of the state when absent
  std::optional<double> kappa;
  std::optional<Axis> grid;        // j axis
  std::optional<Axis> kappa_grid;  // optimize/threshold: search kappa too
  std::optional<Axis> state_grid;  // r or phi axis
  std::string protocol = "fixed-scheme";
  int points = 20;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  Format format = Format::Csv;
  bool report_abs = false;
  std::optional<std::string> plot_script;

  bool operator==(const RunConfig&) const = default;
};

[[nodiscard]] nlohmann::json to_json(const RunConfig& config);
/// Throws UsageError on unknown keys or malformed values.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);

[[nodiscard]] std::string command_name(Command c);
[[nodiscard]] Command parse_command(const std::string& name);

/// "lo:hi:steps".
[[nodiscard]] Axis parse_axis(const std::string& text);

/// State from the name and state flags; flags that do not apply are usage errors.
[[nodiscard]] StateSpec build_state(const RunConfig& config);

/// True for families whose violation is reported as -B (Psi, unbalanced Psi, two-photon).
[[nodiscard]] bool negative_convention(const StateSpec& state);

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// CSV: header, 9 significant digits, comma, LF. JSON: {"columns", "rows"}.
[[nodiscard]] std::string render(const Table& table, Format format);

struct CommandResult {
  Table table;
  int exit_code = 0;
  std::string message;  // for stderr
};

[[nodiscard]] CommandResult run(const RunConfig& config);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace onoff::cli
