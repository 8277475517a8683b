#include "atomcollect/ensemble_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace atomcollect {

CloudGeometry::CloudGeometry(double sigma_perp_bar, double sigma_z_bar, std::int64_t n_atoms)
    : sigma_perp_(sigma_perp_bar), sigma_z_(sigma_z_bar), n_atoms_(n_atoms) {
  if (!std::isfinite(sigma_perp_bar) || sigma_perp_bar <= 0.0) {
    throw std::invalid_argument("CloudGeometry: sigma_perp_bar must be positive, got " +
                                std::to_string(sigma_perp_bar));
  }
  if (!std::isfinite(sigma_z_bar) || sigma_z_bar < 0.0) {
    throw std::invalid_argument("CloudGeometry: sigma_z_bar must be non-negative, got " +
                                std::to_string(sigma_z_bar));
  }
  if (n_atoms < 1) {
    throw std::invalid_argument("CloudGeometry: n_atoms must be at least 1, got " +
                                std::to_string(n_atoms));
  }
}

std::string_view to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::uniform:
      return "uniform";
    case PhaseKind::gouy_compensated:
      return "gouy";
    case PhaseKind::full_gaussian:
      return "full";
  }
  return "unknown";
}

std::optional<PhaseKind> parse_phase_kind(std::string_view text) {
  if (text == "uniform") return PhaseKind::uniform;
  if (text == "gouy" || text == "gouy_compensated") return PhaseKind::gouy_compensated;
  if (text == "full" || text == "full_gaussian") return PhaseKind::full_gaussian;
  return std::nullopt;
}

PhaseProfile PhaseProfile::matched(PhaseKind kind, const BeamGeometry& beam) {
  switch (kind) {
    case PhaseKind::uniform:
      return uniform();
    case PhaseKind::gouy_compensated:
      return gouy_compensated(beam);
    case PhaseKind::full_gaussian:
      return full_gaussian(beam);
  }
  throw std::invalid_argument("PhaseProfile::matched: unknown kind");
}

double density(const CloudGeometry& cloud, const Point3& p) {
  if (cloud.is_flat()) {
    throw std::invalid_argument("density: sigma_z_bar = 0 has no finite density; use the flat-cloud limits");
  }
  const double sp = cloud.sigma_perp();
  const double sz = cloud.sigma_z();
  const double norm = std::pow(2.0 * std::numbers::pi, 1.5) * sp * sp * sz;
  const double exponent = -(p.x * p.x + p.y * p.y) / (2.0 * sp * sp) - p.z * p.z / (2.0 * sz * sz);
  return static_cast<double>(cloud.n_atoms()) * std::exp(exponent) / norm;
}

std::vector<Point3> sample_positions(const CloudGeometry& cloud, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample_positions: count must be positive");
  if (cloud.is_flat()) throw std::invalid_argument("sample_positions: sigma_z_bar must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> transverse(0.0, cloud.sigma_perp());
  std::normal_distribution<double> axial(0.0, cloud.sigma_z());
  std::vector<Point3> points(count);
  for (auto& p : points) {
    p.x = transverse(rng);
    p.y = transverse(rng);
    p.z = axial(rng);
  }
  return points;
}

double phase_at(const PhaseProfile& profile, const Point3& p) {
  if (profile.kind() == PhaseKind::uniform) return 0.0;
  const BeamGeometry& beam = *profile.reference_beam();
  const double gouy = gouy_phase(beam, p.z);
  if (profile.kind() == PhaseKind::gouy_compensated) return -gouy;
  // Curvature term vanishes at the focus (infinite R).
  const double zeta = beam.rayleigh();
  const double inv_r = p.z / (p.z * p.z + zeta * zeta);
  return 0.5 * (p.x * p.x + p.y * p.y) * inv_r - gouy;
}

}  // namespace atomcollect
