#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "atomcollect/cli.hpp"

namespace atomcollect::cli {

const char* to_string(Command command) {
  switch (command) {
    case Command::xi:
      return "xi";
    case Command::optimize:
      return "optimize";
    case Command::sweep:
      return "sweep";
    case Command::dynamics:
      return "dynamics";
    case Command::farfield:
      return "farfield";
    case Command::validate:
      return "validate";
  }
  return "unknown";
}

double to_dimensionless(double length_um, double wavelength_nm) {
  return 2.0 * std::numbers::pi * length_um * 1000.0 / wavelength_nm;
}

GridSpec parse_grid_spec(const std::string& text, const std::string& field) {
  GridSpec spec;
  std::stringstream ss(text);
  std::string lo, hi, n;
  if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, n) || n.find(':') != std::string::npos) {
    throw UsageError(field + ": expected lo:hi:n, got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    spec.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    spec.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    const long long count = std::stoll(n, &used);
    if (used != n.size() || count < 1) throw std::invalid_argument(n);
    spec.n = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw UsageError(field + ": expected lo:hi:n with numbers, got '" + text + "'");
  }
  if (!(spec.lo > 0.0) || !(spec.hi >= spec.lo) || (spec.n > 1 && !(spec.hi > spec.lo))) {
    throw UsageError(field + ": need 0 < lo < hi (or lo == hi with n = 1)");
  }
  return spec;
}

namespace {

class HelpRequested : public std::runtime_error {
 public:
  explicit HelpRequested(const std::string& text) : std::runtime_error(text) {}
};

bool flag_present(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

const std::vector<std::string> kCommands = {"xi", "optimize", "sweep", "dynamics", "farfield", "validate"};

// Splice values from a JSON config file into the argument list, skipping keys
// the command line already sets.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config: missing file path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;

  std::ifstream in(*path);
  if (!in) throw UsageError("--config: cannot open '" + *path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: invalid JSON in '" + *path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("--config: top level must be an object");

  const bool has_command =
      std::any_of(args.begin() + 1, args.end(), [](const std::string& a) {
        return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
      });
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      if (!value.is_string()) throw UsageError("command: must be a string");
      if (!has_command) args.insert(args.begin() + 1, value.get<std::string>());
      continue;
    }
    if (flag_present(args, key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_string()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      args.push_back("--" + key);
      args.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      args.push_back("--" + key);
      args.push_back(format_real(value.get<double>()));
    } else {
      throw UsageError(key + ": unsupported value type in config file");
    }
  }
  return args;
}

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) throw UsageError(std::string(field) + ": must be positive");
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& raw_args) {
  const std::vector<std::string> args = merge_config_file(raw_args);

  CLI::App app{"Photon collection from a coherently prepared cold-atom ensemble", "atomcollect"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  double sigma_perp_bar = 0, sigma_z_bar = 0, sigma_perp_um = 0, sigma_z_um = 0, wavelength_nm = 0;
  double gamma_per_s = 0, waist_bar = 0, rabi = 0.05, t_end = 2000, t_step = 0, pulse_center = 0, pulse_width = 0;
  double tol = 1e-6, theta_max = std::numbers::pi;
  long long n_atoms = 1000, samples = 100000, n_theta = 91, n_phi = 1;
  unsigned long long seed = 1;
  std::string phase = "uniform", pulse = "constant", grid_perp, grid_z, preset, out, format = "csv", suite = "all";
  bool verbose = false, brute_force = false;

  auto* o_sp_bar = app.add_option("--sigma-perp-bar", sigma_perp_bar, "Cloud width k_e*sigma_perp");
  auto* o_sz_bar = app.add_option("--sigma-z-bar", sigma_z_bar, "Cloud length k_e*sigma_z");
  auto* o_sp_um = app.add_option("--sigma-perp-um", sigma_perp_um, "Cloud width in micrometres");
  auto* o_sz_um = app.add_option("--sigma-z-um", sigma_z_um, "Cloud length in micrometres");
  auto* o_lambda = app.add_option("--wavelength-nm", wavelength_nm, "Emission wavelength in nanometres");
  auto* o_gamma = app.add_option("--gamma-per-s", gamma_per_s, "Decay rate in 1/s (adds physical time to dynamics)");
  auto* o_waist = app.add_option("--waist-bar", waist_bar, "Beam waist k_e*w0");
  app.add_option("--phase", phase, "Stored spin-wave phase")->check(CLI::IsMember({"uniform", "gouy", "full"}));
  auto* o_n = app.add_option("--n-atoms", n_atoms, "Number of atoms");
  app.add_option("--rabi", rabi, "Peak Rabi frequency in units of Gamma");
  app.add_option("--pulse", pulse, "Read-out pulse shape")->check(CLI::IsMember({"constant", "gaussian"}));
  auto* o_center = app.add_option("--pulse-center", pulse_center, "Gaussian pulse centre (1/Gamma)");
  auto* o_width = app.add_option("--pulse-width", pulse_width, "Gaussian pulse width (1/Gamma)");
  app.add_option("--t-end", t_end, "End of the time grid (1/Gamma)");
  auto* o_step = app.add_option("--t-step", t_step, "Time grid spacing (1/Gamma)");
  auto* o_gp = app.add_option("--grid-perp", grid_perp, "sigma_perp_bar axis lo:hi:n (log-spaced)");
  auto* o_gz = app.add_option("--grid-z", grid_z, "sigma_z_bar axis lo:hi:n (log-spaced)");
  auto* o_preset = app.add_option("--preset", preset, "Figure preset fig2a1..fig2b3")
                       ->check(CLI::IsMember({"fig2a1", "fig2a2", "fig2a3", "fig2b1", "fig2b2", "fig2b3"}));
  app.add_option("--samples", samples, "Monte-Carlo atoms for farfield");
  app.add_option("--n-theta", n_theta, "Polar angles from 0 to --theta-max");
  app.add_option("--theta-max", theta_max, "Largest polar angle (rad)");
  app.add_option("--n-phi", n_phi, "Azimuth samples in [0, 2pi)");
  app.add_option("--suite", suite, "validate suite")->check(CLI::IsMember({"overlap", "optimum", "dynamics", "all"}));
  app.add_flag("--brute-force", brute_force, "xi: also evaluate the direct quadrature oracle");
  app.add_option("--out", out, "Output path (default stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", tol, "Tolerance (optimizer waist tolerance, validate threshold)");
  app.add_option("--seed", seed, "Random seed");
  app.add_flag("--verbose", verbose, "Print the resolved configuration");

  std::map<std::string, Command> commands = {{"xi", Command::xi},           {"optimize", Command::optimize},
                                             {"sweep", Command::sweep},     {"dynamics", Command::dynamics},
                                             {"farfield", Command::farfield}, {"validate", Command::validate}};
  for (const auto& [name, _] : commands) app.add_subcommand(name);

  if (args.empty()) throw UsageError("missing program name");
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(kToolVersion) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  for (const auto& [name, command] : commands) {
    if (app.got_subcommand(name)) config.command = command;
  }

  const bool physical = o_sp_um->count() > 0 || o_sz_um->count() > 0;
  if (physical && o_sp_bar->count() > 0) throw UsageError("--sigma-perp-bar: conflicts with physical-unit sizes");
  if (physical && o_sz_bar->count() > 0) throw UsageError("--sigma-z-bar: conflicts with physical-unit sizes");
  if (physical) {
    if (o_lambda->count() == 0) throw UsageError("--wavelength-nm: required with physical-unit sizes");
    require_positive(wavelength_nm, "--wavelength-nm");
    PhysicalUnits units;
    units.wavelength_nm = wavelength_nm;
    if (o_sp_um->count()) {
      require_positive(sigma_perp_um, "--sigma-perp-um");
      units.sigma_perp_um = sigma_perp_um;
      config.sigma_perp_bar = to_dimensionless(sigma_perp_um, wavelength_nm);
    }
    if (o_sz_um->count()) {
      if (!(sigma_z_um >= 0.0)) throw UsageError("--sigma-z-um: must be non-negative");
      units.sigma_z_um = sigma_z_um;
      config.sigma_z_bar = to_dimensionless(sigma_z_um, wavelength_nm);
    }
    config.physical_units = units;
  } else {
    if (o_sp_bar->count()) {
      require_positive(sigma_perp_bar, "--sigma-perp-bar");
      config.sigma_perp_bar = sigma_perp_bar;
    }
    if (o_sz_bar->count()) {
      if (!(sigma_z_bar >= 0.0) || !std::isfinite(sigma_z_bar)) throw UsageError("--sigma-z-bar: must be non-negative");
      config.sigma_z_bar = sigma_z_bar;
    }
  }
  if (o_gamma->count()) {
    require_positive(gamma_per_s, "--gamma-per-s");
    config.gamma_per_s = gamma_per_s;
  }
  if (o_waist->count()) {
    require_positive(waist_bar, "--waist-bar");
    config.waist_bar = waist_bar;
  }
  config.phase = *parse_phase_kind(phase);
  if (o_n->count() && n_atoms < 1) throw UsageError("--n-atoms: must be at least 1");
  config.n_atoms = n_atoms;

  config.pulse = pulse == "gaussian" ? PulseKind::gaussian_pulse : PulseKind::constant;
  if (!(rabi >= 0.0)) throw UsageError("--rabi: must be non-negative");
  config.rabi = rabi;
  require_positive(t_end, "--t-end");
  config.t_end = t_end;
  if (o_step->count()) {
    require_positive(t_step, "--t-step");
    config.t_step = t_step;
  }
  if (o_center->count()) config.pulse_center = pulse_center;
  if (o_width->count()) {
    require_positive(pulse_width, "--pulse-width");
    config.pulse_width = pulse_width;
  }

  if (o_gp->count()) config.grid_perp = parse_grid_spec(grid_perp, "--grid-perp");
  if (o_gz->count()) config.grid_z = parse_grid_spec(grid_z, "--grid-z");
  if (o_preset->count()) config.preset = preset;

  if (samples < 1) throw UsageError("--samples: must be at least 1");
  if (n_theta < 1) throw UsageError("--n-theta: must be at least 1");
  if (n_phi < 1) throw UsageError("--n-phi: must be at least 1");
  if (!(theta_max >= 0.0) || theta_max > std::numbers::pi) throw UsageError("--theta-max: must lie in [0, pi]");
  config.samples = static_cast<std::size_t>(samples);
  config.n_theta = static_cast<std::size_t>(n_theta);
  config.n_phi = static_cast<std::size_t>(n_phi);
  config.theta_max = theta_max;

  config.suite = suite;
  config.brute_force = brute_force;
  config.out_path = out;
  config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  require_positive(tol, "--tol");
  config.tol = tol;
  config.seed = seed;
  config.verbose = verbose;

  // Per-command requirements, reported in flag order.
  const auto need_cloud = [&](bool positive_length) {
    if (!config.sigma_perp_bar) throw UsageError("--sigma-perp-bar: required (or --sigma-perp-um with --wavelength-nm)");
    if (!config.sigma_z_bar) throw UsageError("--sigma-z-bar: required (or --sigma-z-um with --wavelength-nm)");
    if (positive_length && !(*config.sigma_z_bar > 0.0)) throw UsageError("--sigma-z-bar: must be positive for this command");
  };
  switch (config.command) {
    case Command::xi:
      need_cloud(false);
      if (!config.waist_bar) throw UsageError("--waist-bar: required");
      break;
    case Command::optimize:
    case Command::dynamics:
      need_cloud(false);
      break;
    case Command::farfield:
      need_cloud(true);
      if (config.phase != PhaseKind::uniform && !config.waist_bar) {
        throw UsageError("--waist-bar: required for a compensated phase");
      }
      break;
    case Command::sweep:
      if (config.preset) {
        const PhaseKind preset_phase = preset.back() == '1'   ? PhaseKind::uniform
                                       : preset.back() == '2' ? PhaseKind::gouy_compensated
                                                              : PhaseKind::full_gaussian;
        if (flag_present(args, "phase") && config.phase != preset_phase) {
          throw UsageError("--phase: conflicts with --preset " + preset);
        }
        if (config.grid_perp || config.grid_z) throw UsageError("--grid-perp: cannot be combined with --preset");
        config.phase = preset_phase;
        config.grid_perp = GridSpec{1.0, 50.0, 50};
        config.grid_z = GridSpec{1.0, 1000.0, 60};
        config.n_atoms = 1000;
      }
      if (!config.grid_perp) throw UsageError("--grid-perp: required (or --preset)");
      if (!config.grid_z) throw UsageError("--grid-z: required (or --preset)");
      break;
    case Command::validate:
      break;
  }
  return config;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  if (c.physical_units) {
    nlohmann::json units;
    units["wavelength_nm"] = c.physical_units->wavelength_nm;
    if (c.physical_units->sigma_perp_um) units["sigma_perp_um"] = *c.physical_units->sigma_perp_um;
    if (c.physical_units->sigma_z_um) units["sigma_z_um"] = *c.physical_units->sigma_z_um;
    j["physical_units"] = units;
  }
  if (c.gamma_per_s) j["gamma_per_s"] = *c.gamma_per_s;
  if (c.sigma_perp_bar) j["sigma_perp_bar"] = *c.sigma_perp_bar;
  if (c.sigma_z_bar) j["sigma_z_bar"] = *c.sigma_z_bar;
  if (c.waist_bar) j["waist_bar"] = *c.waist_bar;
  j["phase"] = std::string(to_string(c.phase));
  j["n_atoms"] = c.n_atoms;
  switch (c.command) {
    case Command::dynamics:
      j["pulse"] = c.pulse == PulseKind::gaussian_pulse ? "gaussian" : "constant";
      j["rabi"] = c.rabi;
      j["t_end"] = c.t_end;
      if (c.t_step) j["t_step"] = *c.t_step;
      if (c.pulse_center) j["pulse_center"] = *c.pulse_center;
      if (c.pulse_width) j["pulse_width"] = *c.pulse_width;
      break;
    case Command::sweep:
      if (c.preset) j["preset"] = *c.preset;
      if (c.grid_perp) j["grid_perp"] = {c.grid_perp->lo, c.grid_perp->hi, c.grid_perp->n};
      if (c.grid_z) j["grid_z"] = {c.grid_z->lo, c.grid_z->hi, c.grid_z->n};
      break;
    case Command::farfield:
      j["samples"] = c.samples;
      j["n_theta"] = c.n_theta;
      j["theta_max"] = c.theta_max;
      j["n_phi"] = c.n_phi;
      break;
    case Command::validate:
      j["suite"] = c.suite;
      break;
    case Command::xi:
      j["brute_force"] = c.brute_force;
      break;
    case Command::optimize:
      break;
  }
  j["format"] = c.format == OutputFormat::json ? "json" : "csv";
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  return j;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (config.verbose) err << config_to_json(config).dump(2) << '\n';
  return run(config, out, err);
}

}  // namespace atomcollect::cli
