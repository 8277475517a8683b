#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "atomcollect/emission_dynamics.hpp"
#include "atomcollect/ensemble_model.hpp"

namespace atomcollect {

/// Directions (polar angle theta from +z, azimuth phi) and the structure
/// factor sampled on their tensor product; intensity[i][j] belongs to
/// (theta_values[i], phi_values[j]).
struct DirectionGrid {
  std::vector<double> theta_values;
  std::vector<double> phi_values;
  std::vector<std::vector<double>> intensity;
};

DirectionGrid make_direction_grid(std::vector<double> theta_values, std::vector<double> phi_values);

/// Intensity of the spherical wave from one atom at the origin, in units of
/// hbar omega_e Gamma per k_e^-2: |b(t - r)|^2 / (8 pi r^2), with c = 1 and
/// b linearly interpolated on the trajectory. Zero before the wavefront
/// arrives; throws std::invalid_argument for r_bar <= 0 or a retarded time
/// past the end of the trajectory.
double single_atom_intensity(double r_bar, double t, const AmplitudeTrajectory& trajectory);

/// |(1/M) sum_j exp(i (z_hat - n_hat).r_j + i phase(r_j))|^2 over M = count
/// atoms sampled from the cloud, using the far-field phase linearisation.
/// Fills `directions.intensity`; the forward direction is exactly 1 for the
/// uniform phase. Deterministic for a fixed seed.
DirectionGrid structure_factor(const CloudGeometry& cloud, const PhaseProfile& profile, std::size_t count,
                               std::uint64_t seed, DirectionGrid directions);

/// Copy of `grid` divided by its forward (theta = 0) value, averaged over phi.
/// Returned unchanged when theta = 0 is not on the grid or S(z_hat) is zero.
DirectionGrid normalized_to_forward(const DirectionGrid& grid);

/// Same sum for explicit positions, at a single direction.
double structure_factor_at(const std::vector<Point3>& positions, const PhaseProfile& profile, double theta,
                           double phi);

}  // namespace atomcollect
