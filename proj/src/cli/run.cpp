#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include "atomcollect/cli.hpp"
#include "atomcollect/error.hpp"
#include "atomcollect/far_field.hpp"
#include "atomcollect/overlap_engine.hpp"
#include "atomcollect/waist_optimizer.hpp"

namespace atomcollect::cli {

namespace {

struct Output {
  Table table;
  nlohmann::json metadata = nlohmann::json::object();
  int exit_code = 0;
};

std::string phase_name(PhaseKind kind) { return std::string(to_string(kind)); }

CloudGeometry cloud_of(const RunConfig& c) { return CloudGeometry(*c.sigma_perp_bar, *c.sigma_z_bar, c.n_atoms); }

void note_paraxial(double w0, Output& out, std::ostream& err) {
  if (w0 < 2.0) {
    out.metadata["warning_paraxial"] = "waist below 2/k_e; paraxial mode is approximate";
    err << "warning: w0_bar = " << format_real(w0) << " is outside the paraxial regime\n";
  }
}

std::vector<Cell> overlap_row(const CloudGeometry& cloud, double w0, PhaseKind phase, const OverlapResult& r) {
  return {cloud.sigma_perp(), cloud.sigma_z(), w0, phase_name(phase), std::string(to_string(r.method)),
          r.xi.real(), r.xi.imag(), r.xi_abs_sq, r.geometric_factor,
          r.geometric_factor * static_cast<double>(cloud.n_atoms())};
}

Output run_xi(const RunConfig& c, std::ostream& err) {
  Output out;
  const CloudGeometry cloud = cloud_of(c);
  const double w0 = *c.waist_bar;
  note_paraxial(w0, out, err);
  out.table.columns = {"sigma_perp_bar", "sigma_z_bar", "w0_bar", "phase", "method", "xi_re",
                       "xi_im", "xi_abs_sq", "g_factor", "g_times_n"};
  out.table.rows.push_back(overlap_row(cloud, w0, c.phase, xi_for_phase(cloud, w0, c.phase)));
  if (c.brute_force) {
    const PhaseProfile profile = PhaseProfile::matched(c.phase, BeamGeometry(w0));
    out.table.rows.push_back(overlap_row(cloud, w0, c.phase, xi_brute_force(cloud, w0, profile)));
  }
  if (std::get<double>(out.table.rows.front()[9]) > 1.0) {
    out.metadata["warning_n_exceeds_one"] = "n(infinity) = G*N is above 1 photon";
  }
  return out;
}

NumericOptions optimizer_options(const RunConfig& c) {
  NumericOptions options;
  options.tol = std::min(c.tol, 1e-6);
  return options;
}

std::vector<Cell> optimum_row(const OptimumRecord& r) {
  const double ratio = r.w0_max_bar / (std::numbers::sqrt2 * r.cloud.sigma_perp());
  return {r.cloud.sigma_perp(), r.cloud.sigma_z(), phase_name(r.profile), r.w0_max_bar, ratio, r.xi_abs_sq_at_max,
          r.g_max, r.g_max * static_cast<double>(r.cloud.n_atoms())};
}

Output run_optimize(const RunConfig& c, std::ostream& err) {
  Output out;
  const CloudGeometry cloud = cloud_of(c);
  const OptimumRecord record = optimal_waist_numeric(cloud, c.phase, optimizer_options(c)).record;
  out.table.columns = {"sigma_perp_bar", "sigma_z_bar", "phase",    "w0_max_bar", "w0_ratio",
                       "xi_abs_sq",      "g_factor",    "g_times_n", "method"};
  auto row = optimum_row(record);
  row.emplace_back(std::string(to_string(record.method)));
  out.table.rows.push_back(std::move(row));
  try {
    out.metadata["w0_max_bar_small_cloud"] = optimal_waist_analytic(cloud).w0_max_bar;
  } catch (const NumericalError& e) {
    out.metadata["w0_max_bar_small_cloud"] = std::string("unavailable: ") + e.what();
  }
  note_paraxial(record.w0_max_bar, out, err);
  return out;
}

std::vector<double> axis_values(const GridSpec& spec) { return log_spaced(spec.lo, spec.hi, spec.n); }

Output run_sweep(const RunConfig& c, std::ostream& err) {
  Output out;
  const SweepGrid grid =
      sweep(axis_values(*c.grid_perp), axis_values(*c.grid_z), c.phase, c.n_atoms, optimizer_options(c), 0);
  out.table.columns = {"sigma_perp_bar", "sigma_z_bar", "phase",    "w0_max_bar", "w0_ratio",
                       "xi_abs_sq",      "g_factor",    "g_times_n", "status"};
  std::size_t failures = 0;
  for (std::size_t i = 0; i < grid.sigma_perp_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.sigma_z_values.size(); ++j) {
      const SweepCell& cell = grid.at(i, j);
      std::vector<Cell> row;
      if (cell.record) {
        row = optimum_row(*cell.record);
      } else {
        ++failures;
        row = {grid.sigma_perp_values[i], grid.sigma_z_values[j], phase_name(c.phase), {}, {}, {}, {}, {}};
      }
      row.emplace_back(cell.status);
      out.table.rows.push_back(std::move(row));
    }
  }
  out.metadata["failed_cells"] = failures;
  if (failures) err << "warning: " << failures << " sweep cell(s) failed; see the status column\n";
  return out;
}

PulseShape pulse_of(const RunConfig& c) {
  if (c.pulse == PulseKind::gaussian_pulse) {
    return PulseShape::gaussian(c.rabi, c.pulse_center.value_or(c.t_end / 2.0),
                                c.pulse_width.value_or(c.t_end / 10.0));
  }
  return PulseShape::constant(c.rabi);
}

std::vector<double> time_grid(const RunConfig& c) {
  const double step = c.t_step.value_or(c.t_end / 1000.0);
  if (!(step > 0.0) || !(c.t_end > 0.0)) throw UsageError("--t-step: grid needs t_end > 0 and step > 0");
  const auto count = static_cast<std::size_t>(std::ceil(c.t_end / step - 1e-9));
  std::vector<double> grid(count + 1);
  for (std::size_t k = 0; k <= count; ++k) grid[k] = std::min(c.t_end, step * static_cast<double>(k));
  return grid;
}

Output run_dynamics(const RunConfig& c, std::ostream& err) {
  Output out;
  const CloudGeometry cloud = cloud_of(c);
  const PulseShape pulse = pulse_of(c);
  const double w0 = c.waist_bar ? *c.waist_bar : optimal_waist_numeric(cloud, c.phase, optimizer_options(c)).record.w0_max_bar;
  note_paraxial(w0, out, err);

  const std::vector<double> grid = time_grid(c);
  const EmissionCurve curve = photon_number(cloud, c.phase, w0, pulse, grid);
  const OverlapResult overlap = xi_for_phase(cloud, w0, c.phase);
  const double n_inf = overlap.geometric_factor * static_cast<double>(cloud.n_atoms()) *
                       total_emission_closed_form(pulse);

  out.table.columns = {"t", "omega", "beta", "big_b", "n"};
  if (c.gamma_per_s) out.table.columns.emplace_back("t_seconds");
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    std::vector<Cell> row{curve.times[k], pulse.rabi(curve.times[k]), curve.beta[k], curve.big_b[k], curve.n[k]};
    if (c.gamma_per_s) row.emplace_back(curve.times[k] / *c.gamma_per_s);
    out.table.rows.push_back(std::move(row));
  }
  out.metadata["w0_bar"] = w0;
  out.metadata["g_factor"] = overlap.geometric_factor;
  out.metadata["xi_abs_sq"] = overlap.xi_abs_sq;
  out.metadata["n_infinity"] = n_inf;
  if (n_inf > 1.0) {
    out.metadata["warning_n_exceeds_one"] = "n(infinity) is above 1 photon";
    err << "warning: n(infinity) = " << format_real(n_inf) << " exceeds 1\n";
  }
  if (weak_drive_warning(pulse)) {
    out.metadata["warning_strong_drive"] = "peak Rabi frequency above 0.2 Gamma";
    err << "warning: peak Rabi frequency exceeds 0.2 Gamma\n";
  }
  return out;
}

Output run_farfield(const RunConfig& c, std::ostream& err) {
  Output out;
  const CloudGeometry cloud = cloud_of(c);
  if (c.n_theta < 1 || c.n_phi < 1 || c.samples < 1) throw UsageError("--n-theta: grid and sample counts must be >= 1");
  std::vector<double> thetas(c.n_theta), phis(c.n_phi);
  for (std::size_t i = 0; i < c.n_theta; ++i) {
    thetas[i] = c.n_theta == 1 ? 0.0 : c.theta_max * static_cast<double>(i) / static_cast<double>(c.n_theta - 1);
  }
  for (std::size_t j = 0; j < c.n_phi; ++j) {
    phis[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(c.n_phi);
  }
  const PhaseProfile profile = c.phase == PhaseKind::uniform ? PhaseProfile::uniform()
                                                             : PhaseProfile::matched(c.phase, BeamGeometry(*c.waist_bar));
  if (c.waist_bar) note_paraxial(*c.waist_bar, out, err);
  const DirectionGrid raw = structure_factor(cloud, profile, c.samples, c.seed, make_direction_grid(thetas, phis));
  const DirectionGrid normalized = normalized_to_forward(raw);
  out.table.columns = {"theta", "phi", "S", "S_normalized"};
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < phis.size(); ++j) {
      out.table.rows.push_back({thetas[i], phis[j], raw.intensity[i][j], normalized.intensity[i][j]});
    }
  }
  return out;
}

struct Check {
  std::string suite;
  std::string name;
  double value;
  double threshold;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void overlap_suite(const RunConfig& c, std::mt19937_64& rng, std::vector<Check>& checks) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PhaseKind kinds[] = {PhaseKind::uniform, PhaseKind::gouy_compensated, PhaseKind::full_gaussian};
  for (int k = 0; k < 6; ++k) {
    const double sp = 0.5 * std::pow(40.0, unit(rng));
    const double sz = std::pow(300.0, unit(rng));
    const double w0 = std::max(2.0, std::numbers::sqrt2 * sp * std::pow(4.0, unit(rng) - 0.5));
    const CloudGeometry cloud(sp, sz);
    for (PhaseKind kind : kinds) {
      const double fast = xi_for_phase(cloud, w0, kind).xi_abs_sq;
      const double slow = xi_brute_force(cloud, w0, PhaseProfile::matched(kind, BeamGeometry(w0))).xi_abs_sq;
      char name[128];
      std::snprintf(name, sizeof name, "%s sp=%.4g sz=%.4g w0=%.4g", phase_name(kind).c_str(), sp, sz, w0);
      checks.push_back({"overlap", name, rel_diff(fast, slow), c.tol});
    }
    const double compact = xi_gouy_compensated(cloud, w0).xi_abs_sq;
    const double curvature = xi_gouy_compensated_curvature_form(cloud, w0).xi_abs_sq;
    checks.push_back({"overlap", "gouy curvature form sample " + std::to_string(k), rel_diff(curvature, compact), c.tol});
  }
}

void optimum_suite(const RunConfig& c, std::mt19937_64& rng, std::vector<Check>& checks) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const CloudGeometry cloud(0.5 * std::pow(40.0, unit(rng)), 0.01 * std::pow(1e4, unit(rng)));
    const double analytic = optimal_waist_analytic(cloud).w0_max_bar;
    NumericOptions options;
    options.tol = 1e-10;
    const double numeric =
        maximize_geometric_factor([&](double w) { return xi_small_cloud(cloud, w); }, cloud, PhaseKind::uniform,
                                  options)
            .record.w0_max_bar;
    char name[128];
    std::snprintf(name, sizeof name, "small-cloud optimum sp=%.4g sz=%.4g", cloud.sigma_perp(), cloud.sigma_z());
    checks.push_back({"optimum", name, rel_diff(numeric, analytic), c.tol});
  }
}

void dynamics_suite(const RunConfig& c, std::vector<Check>& checks) {
  const PulseShape weak = PulseShape::constant(0.05);
  const AmplitudeTrajectory trajectory = integrate_amplitudes(weak, 500.0, 0.01);
  checks.push_back({"dynamics", "rk4 vs adiabatic |b| (rabi 0.05, t in [10,500])",
                    max_adiabatic_deviation(weak, trajectory, 10.0, 500.0), 0.05});

  const std::vector<double> grid{0.0, 2500.0, 5000.0, 7500.0, 10000.0};
  const EmissionCurve curve = adiabatic_beta(weak, grid, 1e-10);
  checks.push_back({"dynamics", "B(10000) vs closed form", rel_diff(curve.big_b.back(), -std::expm1(-4.0 * 0.0025 * 1e4)),
                    c.tol});

  const PulseShape gaussian = PulseShape::gaussian(0.1, 100.0, 20.0);
  std::vector<double> long_grid;
  for (int k = 0; k <= 40; ++k) long_grid.push_back(5.0 * k);
  const EmissionCurve g_curve = adiabatic_beta(gaussian, long_grid, 1e-10);
  checks.push_back({"dynamics", "gaussian pulse B(200) vs closed form",
                    rel_diff(g_curve.big_b.back(), total_emission_closed_form(gaussian)), c.tol});

  AmplitudeOptions decay;
  decay.c0 = 0.0;
  decay.b0 = 1.0;
  const AmplitudeTrajectory free = integrate_amplitudes(PulseShape::constant(0.0), 10.0, 0.001, decay);
  double worst = 0.0;
  for (std::size_t k = 0; k < free.times.size(); ++k) {
    worst = std::max(worst, std::abs(std::norm(free.b_values[k]) - std::exp(-free.times[k])));
  }
  checks.push_back({"dynamics", "free decay |b|^2 vs exp(-t)", worst, 1e-8});
}

Output run_validate(const RunConfig& c, std::ostream& err) {
  Output out;
  const std::string& suite = c.suite;
  if (suite != "all" && suite != "overlap" && suite != "optimum" && suite != "dynamics") {
    throw UsageError("--suite: expected overlap, optimum, dynamics or all");
  }
  std::mt19937_64 rng(c.seed);
  std::vector<Check> checks;
  if (suite == "all" || suite == "overlap") overlap_suite(c, rng, checks);
  if (suite == "all" || suite == "optimum") optimum_suite(c, rng, checks);
  if (suite == "all" || suite == "dynamics") dynamics_suite(c, checks);

  out.table.columns = {"suite", "check", "value", "threshold", "status"};
  std::size_t failed = 0;
  for (const Check& check : checks) {
    const bool pass = check.value <= check.threshold;
    if (!pass) ++failed;
    out.table.rows.push_back({check.suite, check.name, check.value, check.threshold, std::string(pass ? "pass" : "fail")});
  }
  out.metadata["checks"] = checks.size();
  out.metadata["failed"] = failed;
  if (failed) {
    err << failed << " of " << checks.size() << " validation checks failed\n";
    out.exit_code = 1;
  }
  return out;
}

Output dispatch(const RunConfig& c, std::ostream& err) {
  switch (c.command) {
    case Command::xi:
      return run_xi(c, err);
    case Command::optimize:
      return run_optimize(c, err);
    case Command::sweep:
      return run_sweep(c, err);
    case Command::dynamics:
      return run_dynamics(c, err);
    case Command::farfield:
      return run_farfield(c, err);
    case Command::validate:
      return run_validate(c, err);
  }
  throw UsageError("command: unknown");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Output result;
  try {
    result = dispatch(config, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  }

  nlohmann::json metadata = nlohmann::json::object();
  metadata["tool"] = "atomcollect";
  metadata["version"] = kToolVersion;
  metadata["seed"] = config.seed;
  metadata["config"] = config_to_json(config);
  for (const auto& [key, value] : result.metadata.items()) metadata[key] = value;

  std::ofstream file;
  std::ostream* sink = &out;
  if (!config.out_path.empty()) {
    file.open(config.out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: --out: cannot open '" << config.out_path << "'\n";
      return 2;
    }
    sink = &file;
  }
  if (config.format == OutputFormat::json) {
    write_json(result.table, metadata, *sink);
  } else {
    write_csv(result.table, metadata, *sink);
  }
  sink->flush();
  if (!*sink) {
    err << "error: failed writing output\n";
    return 1;
  }
  return result.exit_code;
}

}  // namespace atomcollect::cli
