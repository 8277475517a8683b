#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "atomcollect/far_field.hpp"
#include "atomcollect/special_math.hpp"

using namespace atomcollect;

namespace {

AmplitudeTrajectory excited_decay(double t_end) {
  AmplitudeOptions options;
  options.c0 = 0.0;
  options.b0 = 1.0;
  return integrate_amplitudes(PulseShape::constant(0.0), t_end, 0.005, options);
}

// Expected S and its Monte-Carlo standard error for the uniform profile.
std::pair<double, double> form_factor(const CloudGeometry& cloud, double theta, std::size_t m) {
  const double qp = std::sin(theta), qz = 1.0 - std::cos(theta);
  const double v = qp * qp * cloud.sigma_perp() * cloud.sigma_perp() + qz * qz * cloud.sigma_z() * cloud.sigma_z();
  const double e = std::exp(-0.5 * v);
  const double mean = e * e + (1.0 - e * e) / static_cast<double>(m);
  const double se = 2.0 * e * std::sqrt(0.5 * std::pow(1.0 - std::exp(-v), 2) / static_cast<double>(m));
  return {mean, se};
}

}  // namespace

TEST_CASE("single atom intensity causality and scale") {
  const auto traj = excited_decay(30.0);
  CHECK(single_atom_intensity(5.0, 4.9, traj) == 0.0);
  CHECK(single_atom_intensity(1.0, 1.0, traj) == doctest::Approx(1.0 / (8.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(single_atom_intensity(2.0, 3.0, traj) == doctest::Approx(std::exp(-1.0) / (32.0 * std::numbers::pi)).epsilon(1e-7));
  CHECK_THROWS_AS(single_atom_intensity(0.0, 1.0, traj), std::invalid_argument);
  CHECK_THROWS_AS(single_atom_intensity(1.0, 40.0, traj), std::invalid_argument);
}

TEST_CASE("radiated energy through a sphere") {
  const double t_end = 40.0, r = 3.0;
  const auto traj = excited_decay(t_end);
  const auto flux = [&](double t) {
    return std::complex<double>(4.0 * std::numbers::pi * r * r * single_atom_intensity(r, t, traj));
  };
  const double energy = integrate_adaptive(flux, r, r + t_end - 1.0, 1e-10).value.real();
  const double lost = 1.0 - std::norm(traj.c_values.back()) - std::norm(traj.b_values.back());
  CHECK(std::abs(energy - 0.5 * lost) < 1e-3);
}

TEST_CASE("forward direction is fully coherent") {
  const CloudGeometry cloud(5.0, 100.0);
  const auto grid = structure_factor(cloud, PhaseProfile::uniform(), 20000, 9, make_direction_grid({0.0}, {0.0, 1.0}));
  CHECK(grid.intensity[0][0] == 1.0);
  CHECK(grid.intensity[0][1] == 1.0);
}

TEST_CASE("small angle form factor") {
  const CloudGeometry cloud(5.0, 100.0);
  const std::size_t m = 20000;
  const double theta = 0.5 / cloud.sigma_perp();
  const auto [mean, se] = form_factor(cloud, theta, m);
  const auto positions = sample_positions(cloud, m, 11);
  const double s = structure_factor_at(positions, PhaseProfile::uniform(), theta, 0.0);
  CHECK(std::abs(s - mean) < 3.0 * se);
}

TEST_CASE("backward suppression") {
  const CloudGeometry cloud(5.0, 100.0);
  const auto positions = sample_positions(cloud, 100000, 5);
  CHECK(structure_factor_at(positions, PhaseProfile::uniform(), std::numbers::pi, 0.0) < 1e-3);
}

TEST_CASE("azimuthal symmetry and range") {
  const CloudGeometry cloud(3.0, 40.0);
  const std::size_t m = 20000;
  std::vector<double> phis;
  for (int j = 0; j < 8; ++j) phis.push_back(2.0 * std::numbers::pi * j / 8.0);
  const auto grid = structure_factor(cloud, PhaseProfile::uniform(), m, 3, make_direction_grid({0.0, 0.1, 0.3, 1.0}, phis));
  for (const auto& row : grid.intensity) {
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    CHECK(*hi - *lo < 5.0 / std::sqrt(static_cast<double>(m)));
    for (double s : row) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0 + 5.0 / std::sqrt(static_cast<double>(m)));
    }
  }
}

TEST_CASE("incoherent floor variance halves with twice the atoms") {
  const CloudGeometry cloud(3.0, 40.0);
  const auto mean_floor = [&](std::size_t m) {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      total += structure_factor_at(sample_positions(cloud, m, seed), PhaseProfile::uniform(), 2.0, 0.0);
    }
    return total / 40.0;
  };
  const double ratio = mean_floor(2000) / mean_floor(4000);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("compensated phase moves the coherent peak off the forward direction") {
  const CloudGeometry cloud(3.0, 200.0);
  const BeamGeometry beam(5.0);
  const auto positions = sample_positions(cloud, 20000, 2);
  CHECK(structure_factor_at(positions, PhaseProfile::gouy_compensated(beam), 0.0, 0.0) < 0.99);
}

TEST_CASE("determinism and normalisation") {
  const CloudGeometry cloud(2.0, 30.0);
  const auto directions = make_direction_grid({0.0, 0.2, 0.4}, {0.0});
  const auto a = structure_factor(cloud, PhaseProfile::uniform(), 5000, 4, directions);
  const auto b = structure_factor(cloud, PhaseProfile::uniform(), 5000, 4, directions);
  CHECK(a.intensity == b.intensity);

  const auto gouy = structure_factor(cloud, PhaseProfile::gouy_compensated(BeamGeometry(4.0)), 5000, 4, directions);
  const auto normalized = normalized_to_forward(gouy);
  CHECK(normalized.intensity[0][0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normalized.intensity[1][0] == doctest::Approx(gouy.intensity[1][0] / gouy.intensity[0][0]).epsilon(1e-15));

  CHECK_THROWS_AS(structure_factor(CloudGeometry(2.0, 0.0), PhaseProfile::uniform(), 10, 1, directions),
                  std::invalid_argument);
  CHECK_THROWS_AS(structure_factor(cloud, PhaseProfile::uniform(), 0, 1, directions), std::invalid_argument);
}
