#include "atomcollect/waist_optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "atomcollect/error.hpp"

namespace atomcollect {

std::string_view to_string(OptimumMethod method) {
  return method == OptimumMethod::analytic ? "analytic" : "numeric";
}

OptimumRecord optimal_waist_analytic(const CloudGeometry& cloud) {
  const double s = cloud.sigma_perp();
  const double t = cloud.sigma_z();
  const double s2 = s * s;
  const double s4 = s2 * s2;
  const double t2 = t * t;

  const double discriminant = s4 * s4 + 22.0 * s4 * t2 - 4.0 * t2 * t2;
  const std::complex<double> root = std::sqrt(std::complex<double>(6.0 * t2 * discriminant, 0.0));
  const std::complex<double> inner = s4 * s2 + 36.0 * s2 * t2 + 3.0 * root;
  const std::complex<double> p = std::pow(inner, 1.0 / 3.0);
  const std::complex<double> bracket = s2 + p + (s4 + 6.0 * t2) / p;

  if (std::abs(bracket.imag()) > 1e-9 * std::abs(bracket)) {
    throw NumericalError("optimal_waist_analytic: bracket has imaginary residue " +
                         std::to_string(bracket.imag()));
  }
  const double w0_sq = 2.0 / 3.0 * bracket.real();
  if (!(w0_sq > 0.0)) throw NumericalError("optimal_waist_analytic: non-positive squared waist");

  const double w0 = std::sqrt(w0_sq);
  const OverlapResult overlap = xi_small_cloud(cloud, w0);
  return OptimumRecord{w0, overlap.geometric_factor, overlap.xi_abs_sq, PhaseKind::uniform, cloud,
                       OptimumMethod::analytic};
}

std::pair<double, double> default_bracket(const CloudGeometry& cloud) {
  const double matched = std::numbers::sqrt2 * cloud.sigma_perp();
  const double lo = std::max(0.5, 0.2 * matched);
  const double hi = std::min(1e4, 50.0 * matched);
  return {lo, std::max(hi, 2.0 * lo)};
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0) || n == 0) throw std::invalid_argument("log_spaced: bad range");
  if (n == 1) return {lo};
  std::vector<double> values(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) values[i] = lo * std::exp(step * static_cast<double>(i));
  values.back() = hi;
  return values;
}

NumericOptimum maximize_geometric_factor(const std::function<OverlapResult(double)>& overlap,
                                         const CloudGeometry& cloud, PhaseKind profile,
                                         const NumericOptions& options) {
  const auto [lo, hi] = options.bracket.value_or(default_bracket(cloud));
  if (!(lo >= 0.5) || !(hi <= 1e4) || !(lo < hi)) {
    throw std::invalid_argument("optimal_waist_numeric: bracket must satisfy 0.5 <= lo < hi <= 1e4");
  }
  if (!(options.tol > 0.0)) throw std::invalid_argument("optimal_waist_numeric: tol must be positive");
  if (options.scan_points < 3) throw std::invalid_argument("optimal_waist_numeric: need at least 3 scan points");

  const std::vector<double> grid = log_spaced(lo, hi, options.scan_points);
  std::vector<ScanPoint> scan;
  scan.reserve(grid.size());
  for (double w : grid) scan.push_back({w, overlap(w).geometric_factor});

  const auto best_it = std::max_element(scan.begin(), scan.end(),
                                        [](const ScanPoint& a, const ScanPoint& b) { return a.g < b.g; });
  const double g_min = std::min_element(scan.begin(), scan.end(), [](const ScanPoint& a, const ScanPoint& b) {
                         return a.g < b.g;
                       })->g;
  if (!(best_it->g > 0.0) || best_it->g < g_min * (1.0 + 1e-12)) {
    throw NumericalError("optimal_waist_numeric: objective is flat across the bracket");
  }

  const std::size_t i = static_cast<std::size_t>(best_it - scan.begin());
  double a = grid[i == 0 ? 0 : i - 1];
  double b = grid[std::min(i + 1, grid.size() - 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = overlap(c).geometric_factor;
  double gd = overlap(d).geometric_factor;
  while (b - a > options.tol * 0.5 * (a + b)) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = overlap(c).geometric_factor;
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = overlap(d).geometric_factor;
    }
  }

  double w_best = gc > gd ? c : d;
  if (best_it->g > std::max(gc, gd)) w_best = best_it->w0_bar;
  const OverlapResult at_best = overlap(w_best);

  NumericOptimum result{OptimumRecord{w_best, at_best.geometric_factor, at_best.xi_abs_sq, profile, cloud,
                                      OptimumMethod::numeric},
                        {}};
  if (options.keep_scan) result.scan = std::move(scan);
  return result;
}

NumericOptimum optimal_waist_numeric(const CloudGeometry& cloud, PhaseKind profile,
                                     const NumericOptions& options) {
  return maximize_geometric_factor(
      [&](double w0) { return xi_for_phase(cloud, w0, profile, options.quadrature); }, cloud, profile,
      options);
}

SweepGrid sweep(const std::vector<double>& sigma_perp_values, const std::vector<double>& sigma_z_values,
                PhaseKind profile, std::int64_t n_atoms, const NumericOptions& options, unsigned threads) {
  const auto check_axis = [](const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw std::invalid_argument(std::string("sweep: empty axis ") + name);
    for (std::size_t k = 0; k < axis.size(); ++k) {
      if (!(axis[k] > 0.0) || !std::isfinite(axis[k])) {
        throw std::invalid_argument(std::string("sweep: non-positive value on axis ") + name);
      }
      if (k > 0 && !(axis[k] > axis[k - 1])) {
        throw std::invalid_argument(std::string("sweep: axis not strictly increasing: ") + name);
      }
    }
  };
  check_axis(sigma_perp_values, "sigma_perp");
  check_axis(sigma_z_values, "sigma_z");
  if (n_atoms < 1) throw std::invalid_argument("sweep: n_atoms must be at least 1");

  SweepGrid grid;
  grid.sigma_perp_values = sigma_perp_values;
  grid.sigma_z_values = sigma_z_values;
  grid.profile = profile;
  grid.n_atoms = n_atoms;
  const std::size_t total = sigma_perp_values.size() * sigma_z_values.size();
  grid.cells.resize(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t k = next++; k < total; k = next++) {
      const double sp = sigma_perp_values[k / sigma_z_values.size()];
      const double sz = sigma_z_values[k % sigma_z_values.size()];
      SweepCell& cell = grid.cells[k];
      try {
        cell.record = optimal_waist_numeric(CloudGeometry(sp, sz, n_atoms), profile, options).record;
      } catch (const std::exception& e) {
        cell.record.reset();
        cell.status = e.what();
      }
    }
  };

  unsigned count = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  count = static_cast<unsigned>(std::min<std::size_t>(count, total));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  return grid;
}

}  // namespace atomcollect
