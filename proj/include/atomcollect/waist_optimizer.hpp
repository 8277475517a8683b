#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atomcollect/ensemble_model.hpp"
#include "atomcollect/overlap_engine.hpp"

namespace atomcollect {

enum class OptimumMethod { analytic, numeric };

std::string_view to_string(OptimumMethod method);

struct OptimumRecord {
  double w0_max_bar = 0.0;
  double g_max = 0.0;
  double xi_abs_sq_at_max = 0.0;
  PhaseKind profile = PhaseKind::uniform;
  CloudGeometry cloud;
  OptimumMethod method = OptimumMethod::numeric;
};

/// Closed-form maximiser of 6|xi|^2/w0^2 for the small-cloud overlap.
///
/// The cube-root auxiliary is evaluated in complex arithmetic (principal
/// branch) so that clouds with sigma_perp^8 + 22 sigma_perp^4 sigma_z^2 <
/// 4 sigma_z^4 are handled; the bracket is real there up to rounding. Throws
/// NumericalError if its imaginary part exceeds 1e-9 relative or the squared
/// waist comes out non-positive. The record is tagged uniform/analytic
/// whatever regime the cloud is in.
OptimumRecord optimal_waist_analytic(const CloudGeometry& cloud);

struct ScanPoint {
  double w0_bar;
  double g;
};

struct NumericOptions {
  /// Search interval for w0_bar; default_bracket(cloud) when empty. Must lie
  /// within [0.5, 1e4].
  std::optional<std::pair<double, double>> bracket;
  /// Relative waist tolerance of the golden-section refinement.
  double tol = 1e-6;
  std::size_t scan_points = 64;
  bool keep_scan = false;
  ZQuadratureOptions quadrature;
};

struct NumericOptimum {
  OptimumRecord record;
  std::vector<ScanPoint> scan;  // filled when keep_scan
};

/// [max(0.5, 0.2 sqrt2 sigma_perp), min(1e4, 50 sqrt2 sigma_perp)].
std::pair<double, double> default_bracket(const CloudGeometry& cloud);

/// Maximise 6|xi(w0)|^2/w0^2 for an arbitrary overlap evaluator: log-spaced
/// scan over the bracket, then golden-section refinement around the best
/// sample. Throws NumericalError when the objective is flat over the bracket.
NumericOptimum maximize_geometric_factor(const std::function<OverlapResult(double)>& overlap,
                                         const CloudGeometry& cloud, PhaseKind profile,
                                         const NumericOptions& options = {});

/// maximize_geometric_factor with the stored phase matched to each trial beam.
NumericOptimum optimal_waist_numeric(const CloudGeometry& cloud, PhaseKind profile,
                                     const NumericOptions& options = {});

struct SweepCell {
  std::optional<OptimumRecord> record;
  std::string status = "ok";  // otherwise the failure message
};

struct SweepGrid {
  std::vector<double> sigma_perp_values;
  std::vector<double> sigma_z_values;
  PhaseKind profile = PhaseKind::uniform;
  std::int64_t n_atoms = 1000;
  std::vector<SweepCell> cells;  // row-major: perp index outer, z index inner

  const SweepCell& at(std::size_t perp_index, std::size_t z_index) const {
    return cells[perp_index * sigma_z_values.size() + z_index];
  }
};

/// Optimise every (sigma_perp, sigma_z) cell. Cells run concurrently on up to
/// `threads` workers (0 = hardware concurrency); the result does not depend on
/// the schedule. A failing cell is recorded, not thrown.
SweepGrid sweep(const std::vector<double>& sigma_perp_values, const std::vector<double>& sigma_z_values,
                PhaseKind profile, std::int64_t n_atoms, const NumericOptions& options = {},
                unsigned threads = 0);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

}  // namespace atomcollect
