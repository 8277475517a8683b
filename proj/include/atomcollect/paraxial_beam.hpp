#pragma once

#include <complex>

namespace atomcollect {

// All lengths are scaled by the emission wavenumber k_e (x_bar = k_e x).

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Fundamental Gaussian beam focused at z = 0, described by its waist.
class BeamGeometry {
 public:
  /// Throws std::invalid_argument unless w0_bar is finite and positive.
  explicit BeamGeometry(double w0_bar);

  double waist() const { return w0_; }
  /// Rayleigh length w0^2 / 2 (k = 1 in scaled units).
  double rayleigh() const { return 0.5 * w0_ * w0_; }

 private:
  double w0_;
};

/// w(z) = w0 sqrt(1 + z^2/zeta^2).
double beam_width(const BeamGeometry& beam, double z_bar);

/// R(z) = z + zeta^2/z; +infinity at the focus.
double radius_of_curvature(const BeamGeometry& beam, double z_bar);

/// arctan(z/zeta), in (-pi/2, pi/2).
double gouy_phase(const BeamGeometry& beam, double z_bar);

/// Complex beam parameter q(z) = z + i zeta.
std::complex<double> beam_parameter(const BeamGeometry& beam, double z_bar);

/// Mode profile (zeta/q*(z)) exp[i(z + rho^2/(2 q*(z)))]; equals i at the origin.
std::complex<double> mode_amplitude(const BeamGeometry& beam, const Point3& p);

/// The same profile written through w(z), R(z) and the Gouy phase:
/// i (w0/w) exp[i z - rho^2/w^2 + i rho^2/(2R) - i phi_Gouy].
std::complex<double> mode_amplitude_expanded(const BeamGeometry& beam, const Point3& p);

/// True when the waist is small enough (w0_bar < 2) that the paraxial
/// description is questionable. Results are still computed.
bool outside_paraxial_regime(const BeamGeometry& beam);

}  // namespace atomcollect
