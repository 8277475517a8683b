#include "atomcollect/far_field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace atomcollect {

DirectionGrid make_direction_grid(std::vector<double> theta_values, std::vector<double> phi_values) {
  if (theta_values.empty() || phi_values.empty()) {
    throw std::invalid_argument("make_direction_grid: both axes need at least one value");
  }
  DirectionGrid grid{std::move(theta_values), std::move(phi_values), {}};
  grid.intensity.assign(grid.theta_values.size(), std::vector<double>(grid.phi_values.size(), 0.0));
  return grid;
}

double single_atom_intensity(double r_bar, double t, const AmplitudeTrajectory& trajectory) {
  if (!(r_bar > 0.0)) throw std::invalid_argument("single_atom_intensity: r_bar must be positive");
  const double t_ret = t - r_bar;
  if (t_ret < 0.0) return 0.0;
  const auto& times = trajectory.times;
  if (times.empty() || t_ret > times.back()) {
    throw std::invalid_argument("single_atom_intensity: retarded time outside the trajectory");
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t_ret);
  std::complex<double> b;
  if (it == times.end()) {
    b = trajectory.b_values.back();
  } else {
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double f = (t_ret - times[k - 1]) / (times[k] - times[k - 1]);
    b = (1.0 - f) * trajectory.b_values[k - 1] + f * trajectory.b_values[k];
  }
  return std::norm(b) / (8.0 * std::numbers::pi * r_bar * r_bar);
}

double structure_factor_at(const std::vector<Point3>& positions, const PhaseProfile& profile, double theta,
                           double phi) {
  if (positions.empty()) throw std::invalid_argument("structure_factor_at: no positions");
  // Scattering vector z_hat - n_hat.
  const double qx = -std::sin(theta) * std::cos(phi);
  const double qy = -std::sin(theta) * std::sin(phi);
  const double qz = 1.0 - std::cos(theta);
  std::complex<double> sum = 0.0;
  for (const Point3& p : positions) {
    sum += std::polar(1.0, qx * p.x + qy * p.y + qz * p.z + phase_at(profile, p));
  }
  return std::norm(sum / static_cast<double>(positions.size()));
}

DirectionGrid structure_factor(const CloudGeometry& cloud, const PhaseProfile& profile, std::size_t count,
                               std::uint64_t seed, DirectionGrid directions) {
  const std::vector<Point3> positions = sample_positions(cloud, count, seed);
  directions.intensity.assign(directions.theta_values.size(), std::vector<double>(directions.phi_values.size()));
  for (std::size_t i = 0; i < directions.theta_values.size(); ++i) {
    for (std::size_t j = 0; j < directions.phi_values.size(); ++j) {
      directions.intensity[i][j] =
          structure_factor_at(positions, profile, directions.theta_values[i], directions.phi_values[j]);
    }
  }
  return directions;
}

DirectionGrid normalized_to_forward(const DirectionGrid& grid) {
  const auto forward = std::find(grid.theta_values.begin(), grid.theta_values.end(), 0.0);
  if (forward == grid.theta_values.end()) return grid;
  const auto& row = grid.intensity[static_cast<std::size_t>(forward - grid.theta_values.begin())];
  double reference = 0.0;
  for (double v : row) reference += v;
  reference /= static_cast<double>(row.size());
  if (reference == 0.0) return grid;
  DirectionGrid scaled = grid;
  for (auto& r : scaled.intensity) {
    for (double& v : r) v /= reference;
  }
  return scaled;
}

}  // namespace atomcollect
