#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "atomcollect/paraxial_beam.hpp"

namespace atomcollect {

/// Cylindrically symmetric Gaussian cloud centred on the beam focus.
/// sigma_z_bar == 0 denotes the flat (pancake) limit, which consumers handle
/// analytically.
class CloudGeometry {
 public:
  /// Throws std::invalid_argument on sigma_perp <= 0, sigma_z < 0 or n_atoms < 1.
  CloudGeometry(double sigma_perp_bar, double sigma_z_bar, std::int64_t n_atoms = 1000);

  double sigma_perp() const { return sigma_perp_; }
  double sigma_z() const { return sigma_z_; }
  std::int64_t n_atoms() const { return n_atoms_; }
  bool is_flat() const { return sigma_z_ == 0.0; }

 private:
  double sigma_perp_;
  double sigma_z_;
  std::int64_t n_atoms_;
};

enum class PhaseKind { uniform, gouy_compensated, full_gaussian };

std::string_view to_string(PhaseKind kind);
/// Accepts "uniform", "gouy", "gouy_compensated", "full", "full_gaussian".
std::optional<PhaseKind> parse_phase_kind(std::string_view text);

/// Spatial phase imprinted on the stored spin wave. The two compensating
/// variants copy the phase structure of a reference Gaussian beam.
class PhaseProfile {
 public:
  static PhaseProfile uniform() { return PhaseProfile(PhaseKind::uniform, std::nullopt); }
  static PhaseProfile gouy_compensated(const BeamGeometry& beam) {
    return PhaseProfile(PhaseKind::gouy_compensated, beam);
  }
  static PhaseProfile full_gaussian(const BeamGeometry& beam) {
    return PhaseProfile(PhaseKind::full_gaussian, beam);
  }
  /// Profile of the given kind referencing `beam` (ignored for uniform).
  static PhaseProfile matched(PhaseKind kind, const BeamGeometry& beam);

  PhaseKind kind() const { return kind_; }
  /// Present iff kind() != uniform.
  const std::optional<BeamGeometry>& reference_beam() const { return beam_; }

 private:
  PhaseProfile(PhaseKind kind, std::optional<BeamGeometry> beam) : kind_(kind), beam_(beam) {}

  PhaseKind kind_;
  std::optional<BeamGeometry> beam_;
};

/// Atom number density in units of k_e^3. Requires sigma_z > 0.
double density(const CloudGeometry& cloud, const Point3& p);

/// `count` positions drawn from the cloud distribution; identical for
/// identical (cloud, count, seed).
std::vector<Point3> sample_positions(const CloudGeometry& cloud, std::size_t count, std::uint64_t seed);

/// Stored phase: 0, -phi_Gouy(z), or rho^2/(2R(z)) - phi_Gouy(z).
double phase_at(const PhaseProfile& profile, const Point3& p);

}  // namespace atomcollect
