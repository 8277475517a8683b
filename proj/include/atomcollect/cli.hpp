#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "atomcollect/emission_dynamics.hpp"
#include "atomcollect/ensemble_model.hpp"

namespace atomcollect::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { xi, optimize, sweep, dynamics, farfield, validate };
enum class OutputFormat { csv, json };

const char* to_string(Command command);

/// Bad or missing input; the message names the offending field. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct PhysicalUnits {
  double wavelength_nm = 0.0;
  std::optional<double> sigma_perp_um;
  std::optional<double> sigma_z_um;
};

/// lo:hi:n, expanded to n log-spaced values.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

GridSpec parse_grid_spec(const std::string& text, const std::string& field);

struct RunConfig {
  Command command = Command::xi;
  std::optional<PhysicalUnits> physical_units;
  std::optional<double> gamma_per_s;

  // Resolved dimensionless parameters.
  std::optional<double> sigma_perp_bar;
  std::optional<double> sigma_z_bar;
  std::optional<double> waist_bar;
  PhaseKind phase = PhaseKind::uniform;
  std::int64_t n_atoms = 1000;

  PulseKind pulse = PulseKind::constant;
  double rabi = 0.05;
  double t_end = 2000.0;
  std::optional<double> t_step;
  std::optional<double> pulse_center;
  std::optional<double> pulse_width;

  std::optional<GridSpec> grid_perp;
  std::optional<GridSpec> grid_z;
  std::optional<std::string> preset;

  std::size_t samples = 100000;
  std::size_t n_theta = 91;
  double theta_max = 3.141592653589793;
  std::size_t n_phi = 1;

  std::string suite = "all";
  bool brute_force = false;

  std::string out_path;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  bool verbose = false;
};

/// sigma_bar = k_e sigma = 2 pi sigma / lambda.
double to_dimensionless(double length_um, double wavelength_nm);

/// Parse argv (argv[0] is the program name). A `--config PATH` JSON file
/// supplies defaults keyed by flag name; explicit flags win. Throws
/// UsageError.
RunConfig parse_config(const std::vector<std::string>& args);

/// The resolved configuration as written into output metadata.
nlohmann::json config_to_json(const RunConfig& config);

/// Execute a resolved configuration; results go to config.out_path (or
/// `out`), diagnostics to `err`. Returns 0, 1 on numerical failure, 2 on
/// usage errors detected while running.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run with exit-code mapping; what main() calls.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Tabular output shared by all subcommands.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// '#'-prefixed metadata lines, then an RFC 4180 header and records (CRLF).
/// Reals are written with 17 significant digits.
void write_csv(const Table& table, const nlohmann::json& metadata, std::ostream& os);

/// {"metadata": ..., "columns": [...], "rows": [{column: value}, ...]}.
void write_json(const Table& table, const nlohmann::json& metadata, std::ostream& os);

std::string format_real(double value);
std::string csv_escape(const std::string& field);

}  // namespace atomcollect::cli
