#include "atomcollect/paraxial_beam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace atomcollect {

using namespace std::complex_literals;

BeamGeometry::BeamGeometry(double w0_bar) : w0_(w0_bar) {
  if (!std::isfinite(w0_bar) || w0_bar <= 0.0) {
    throw std::invalid_argument("BeamGeometry: waist must be positive and finite, got " +
                                std::to_string(w0_bar));
  }
}

double beam_width(const BeamGeometry& beam, double z_bar) {
  const double ratio = z_bar / beam.rayleigh();
  return beam.waist() * std::sqrt(1.0 + ratio * ratio);
}

double radius_of_curvature(const BeamGeometry& beam, double z_bar) {
  if (z_bar == 0.0) return std::numeric_limits<double>::infinity();
  const double zeta = beam.rayleigh();
  return z_bar + zeta * zeta / z_bar;
}

double gouy_phase(const BeamGeometry& beam, double z_bar) {
  return std::atan(z_bar / beam.rayleigh());
}

std::complex<double> beam_parameter(const BeamGeometry& beam, double z_bar) {
  return {z_bar, beam.rayleigh()};
}

std::complex<double> mode_amplitude(const BeamGeometry& beam, const Point3& p) {
  const std::complex<double> q_conj = std::conj(beam_parameter(beam, p.z));
  const double rho2 = p.x * p.x + p.y * p.y;
  return beam.rayleigh() / q_conj * std::exp(1i * (p.z + rho2 / (2.0 * q_conj)));
}

std::complex<double> mode_amplitude_expanded(const BeamGeometry& beam, const Point3& p) {
  const double w = beam_width(beam, p.z);
  const double rho2 = p.x * p.x + p.y * p.y;
  // 1/R is finite everywhere, unlike R itself.
  const double zeta = beam.rayleigh();
  const double inv_r = p.z / (p.z * p.z + zeta * zeta);
  const double phase = p.z + 0.5 * rho2 * inv_r - gouy_phase(beam, p.z);
  return 1i * (beam.waist() / w) * std::exp(-rho2 / (w * w)) * std::polar(1.0, phase);
}

bool outside_paraxial_regime(const BeamGeometry& beam) { return beam.waist() < 2.0; }

}  // namespace atomcollect
