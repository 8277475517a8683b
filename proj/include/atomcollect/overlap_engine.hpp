#pragma once

#include <complex>
#include <functional>
#include <string_view>

#include "atomcollect/ensemble_model.hpp"
#include "atomcollect/paraxial_beam.hpp"

namespace atomcollect {

enum class OverlapMethod { closed_form, quadrature, brute_force };

std::string_view to_string(OverlapMethod method);

/// Overlap xi between the phased emission of the cloud and the collection
/// mode, with |xi|^2 and the geometric factor 6|xi|^2 / w0^2.
///
/// The phase convention follows the direct definition of xi (the forms used
/// below agree with it exactly, so e.g. the uniform flat-cloud value is -i).
/// Only |xi|^2 enters any downstream quantity.
struct OverlapResult {
  std::complex<double> xi;
  double xi_abs_sq = 0.0;
  double geometric_factor = 0.0;
  OverlapMethod method = OverlapMethod::closed_form;
};

OverlapResult make_overlap_result(std::complex<double> xi, double w0_bar, OverlapMethod method);

/// 6 |xi|^2 / w0^2.
double geometric_factor(std::complex<double> xi, double w0_bar);

struct ZQuadratureOptions {
  /// Gauss-Hermite order; the result is confirmed against twice as many nodes.
  int nodes = 128;
  /// Relative disagreement that triggers the adaptive fallback, and the
  /// fallback's own relative target.
  double tol = 1e-10;
};

/// Gaussian-integral result for a cloud much smaller than the Rayleigh length
/// (flat mode, linearised Gouy phase, uniform stored phase).
OverlapResult xi_small_cloud(const CloudGeometry& cloud, double w0_bar);

/// Uniform stored phase, exact for any sigma_z > 0 via erfcx.
OverlapResult xi_uniform(const CloudGeometry& cloud, double w0_bar);

/// Gouy-compensated stored phase: z-integral of
/// e^{-z^2/2sz^2 - i phi_Gouy(z)} / (z + i zeta + i sigma_perp^2).
OverlapResult xi_gouy_compensated(const CloudGeometry& cloud, double w0_bar,
                                  const ZQuadratureOptions& options = {});

/// Same quantity written with w(z) and R(z); kept as an independent route.
OverlapResult xi_gouy_compensated_curvature_form(const CloudGeometry& cloud, double w0_bar,
                                                 const ZQuadratureOptions& options = {});

/// Stored phase matching the full Gaussian wavefront. Analytic for a flat cloud.
OverlapResult xi_full_compensation(const CloudGeometry& cloud, double w0_bar,
                                   const ZQuadratureOptions& options = {});

struct BruteForceOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
};

/// Direct evaluation of the overlap integral over the cloud: radial x axial
/// adaptive quadrature of density * conj(mode) * e^{i z} * e^{i phase}.
/// The azimuthal integral is trivial since nothing depends on it.
/// Requires sigma_z > 0. This path shares no algebra with the forms above.
OverlapResult xi_brute_force(const CloudGeometry& cloud, double w0_bar, const PhaseProfile& profile,
                             const BruteForceOptions& options = {});

/// Preferred evaluator for a stored phase that references the collection
/// beam itself. Flat clouds route to the analytic limit.
OverlapResult xi_for_phase(const CloudGeometry& cloud, double w0_bar, PhaseKind kind,
                           const ZQuadratureOptions& options = {});

/// Integral of e^{-z^2/(2 sigma_z^2)} f(z) over the real line: Gauss-Hermite
/// with an adaptive Gauss-Kronrod fallback when doubling the order moves the
/// result by more than options.tol.
std::complex<double> integrate_gaussian_weighted(const std::function<std::complex<double>(double)>& f,
                                                 double sigma_z, const ZQuadratureOptions& options = {});

}  // namespace atomcollect
