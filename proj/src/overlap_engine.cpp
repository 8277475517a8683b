#include "atomcollect/overlap_engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "atomcollect/special_math.hpp"

namespace atomcollect {

using namespace std::complex_literals;

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;

void require_positive_waist(double w0_bar) {
  if (!std::isfinite(w0_bar) || w0_bar <= 0.0) {
    throw std::invalid_argument("overlap: waist must be positive and finite");
  }
}

void require_extended(const CloudGeometry& cloud, const char* who) {
  if (cloud.is_flat()) {
    throw std::invalid_argument(std::string(who) + ": sigma_z_bar must be positive (flat cloud has an analytic limit)");
  }
}

// Flat-cloud limit shared by every stored-phase variant.
OverlapResult flat_cloud(const CloudGeometry& cloud, double w0_bar) {
  const double w2 = w0_bar * w0_bar;
  const double s2 = cloud.sigma_perp() * cloud.sigma_perp();
  return make_overlap_result(-1i * (w2 / (w2 + 2.0 * s2)), w0_bar, OverlapMethod::closed_form);
}

}  // namespace

std::string_view to_string(OverlapMethod method) {
  switch (method) {
    case OverlapMethod::closed_form:
      return "closed_form";
    case OverlapMethod::quadrature:
      return "quadrature";
    case OverlapMethod::brute_force:
      return "brute_force";
  }
  return "unknown";
}

double geometric_factor(std::complex<double> xi, double w0_bar) {
  require_positive_waist(w0_bar);
  return 6.0 * std::norm(xi) / (w0_bar * w0_bar);
}

OverlapResult make_overlap_result(std::complex<double> xi, double w0_bar, OverlapMethod method) {
  return OverlapResult{xi, std::norm(xi), geometric_factor(xi, w0_bar), method};
}

std::complex<double> integrate_gaussian_weighted(const std::function<std::complex<double>(double)>& f,
                                                 double sigma_z, const ZQuadratureOptions& options) {
  if (!(sigma_z > 0.0)) throw std::invalid_argument("integrate_gaussian_weighted: sigma_z must be positive");
  const double scale = std::numbers::sqrt2 * sigma_z;
  const auto in_u = [&](double u) { return f(scale * u); };
  const std::complex<double> coarse = integrate_gauss_hermite(in_u, options.nodes);
  const std::complex<double> fine = integrate_gauss_hermite(in_u, 2 * options.nodes);
  if (std::abs(fine - coarse) <= options.tol * std::abs(fine)) return scale * fine;

  // Integrable features narrow compared with sigma_z (a pole close to the real
  // axis) defeat the Hermite rule; integrate the weighted integrand directly.
  const auto weighted = [&](double z) {
    const double t = z / sigma_z;
    return std::exp(-0.5 * t * t) * f(z);
  };
  const AdaptiveOptions adaptive{1e-300, options.tol, 1'000'000};
  const double limit = 8.5 * sigma_z;
  return integrate_adaptive(weighted, -limit, 0.0, adaptive).value +
         integrate_adaptive(weighted, 0.0, limit, adaptive).value;
}

OverlapResult xi_small_cloud(const CloudGeometry& cloud, double w0_bar) {
  require_positive_waist(w0_bar);
  const double w2 = w0_bar * w0_bar;
  const double s2 = cloud.sigma_perp() * cloud.sigma_perp();
  const double zeta = 0.5 * w2;
  const double ratio = cloud.sigma_z() / zeta;
  // Linear Gouy phase z/zeta averaged over the axial Gaussian.
  const std::complex<double> xi = -1i * (w2 / (w2 + 2.0 * s2)) * std::exp(-0.5 * ratio * ratio);
  return make_overlap_result(xi, w0_bar, OverlapMethod::closed_form);
}

OverlapResult xi_uniform(const CloudGeometry& cloud, double w0_bar) {
  require_positive_waist(w0_bar);
  require_extended(cloud, "xi_uniform");
  const double w2 = w0_bar * w0_bar;
  const double s2 = cloud.sigma_perp() * cloud.sigma_perp();
  const double sz = cloud.sigma_z();
  const double arg = (0.5 * w2 + s2) / (std::numbers::sqrt2 * sz);
  const double magnitude = std::sqrt(std::numbers::pi / 8.0) * (w2 / sz) * erfcx(arg);
  return make_overlap_result(-1i * magnitude, w0_bar, OverlapMethod::closed_form);
}

OverlapResult xi_gouy_compensated(const CloudGeometry& cloud, double w0_bar,
                                  const ZQuadratureOptions& options) {
  require_positive_waist(w0_bar);
  require_extended(cloud, "xi_gouy_compensated");
  const BeamGeometry beam(w0_bar);
  const double zeta = beam.rayleigh();
  const double pole = zeta + cloud.sigma_perp() * cloud.sigma_perp();
  const auto integrand = [&](double z) {
    return std::polar(1.0, -gouy_phase(beam, z)) / std::complex<double>(z, pole);
  };
  const std::complex<double> integral = integrate_gaussian_weighted(integrand, cloud.sigma_z(), options);
  return make_overlap_result(zeta / (kSqrt2Pi * cloud.sigma_z()) * integral, w0_bar,
                             OverlapMethod::quadrature);
}

OverlapResult xi_gouy_compensated_curvature_form(const CloudGeometry& cloud, double w0_bar,
                                                 const ZQuadratureOptions& options) {
  require_positive_waist(w0_bar);
  require_extended(cloud, "xi_gouy_compensated_curvature_form");
  const BeamGeometry beam(w0_bar);
  const double zeta = beam.rayleigh();
  const double s2 = cloud.sigma_perp() * cloud.sigma_perp();
  const auto integrand = [&](double z) {
    const double w = beam_width(beam, z);
    const double inv_r = z / (z * z + zeta * zeta);
    return w / std::complex<double>(2.0 * s2 + w * w, w * w * s2 * inv_r);
  };
  const std::complex<double> integral = integrate_gaussian_weighted(integrand, cloud.sigma_z(), options);
  return make_overlap_result(-1i * w0_bar / (kSqrt2Pi * cloud.sigma_z()) * integral, w0_bar,
                             OverlapMethod::quadrature);
}

OverlapResult xi_full_compensation(const CloudGeometry& cloud, double w0_bar,
                                   const ZQuadratureOptions& options) {
  require_positive_waist(w0_bar);
  if (cloud.is_flat()) return flat_cloud(cloud, w0_bar);
  const BeamGeometry beam(w0_bar);
  const double s2 = cloud.sigma_perp() * cloud.sigma_perp();
  const auto integrand = [&](double z) -> std::complex<double> {
    const double w = beam_width(beam, z);
    return w / (w * w + 2.0 * s2);
  };
  const std::complex<double> integral = integrate_gaussian_weighted(integrand, cloud.sigma_z(), options);
  return make_overlap_result(-1i * w0_bar / (kSqrt2Pi * cloud.sigma_z()) * integral, w0_bar,
                             OverlapMethod::quadrature);
}

OverlapResult xi_brute_force(const CloudGeometry& cloud, double w0_bar, const PhaseProfile& profile,
                             const BruteForceOptions& options) {
  require_positive_waist(w0_bar);
  require_extended(cloud, "xi_brute_force");
  const BeamGeometry beam(w0_bar);
  const double per_atom = 1.0 / static_cast<double>(cloud.n_atoms());
  // The integrand modulus is bounded by the cloud's transverse Gaussian, so the
  // radial range does not need to follow the beam's growth.
  const double rho_max = 8.5 * cloud.sigma_perp();
  const double z_max = 8.5 * cloud.sigma_z();

  const AdaptiveOptions inner_options{1e-300, 0.1 * options.rel_tol, 1'000'000};
  const AdaptiveOptions outer_options{options.abs_tol, options.rel_tol, 1'000'000};

  const auto radial = [&](double z) {
    const auto integrand = [&](double rho) {
      const Point3 p{rho, 0.0, z};
      const std::complex<double> emitted = std::polar(1.0, z + phase_at(profile, p));
      return 2.0 * std::numbers::pi * rho * density(cloud, p) * per_atom *
             std::conj(mode_amplitude(beam, p)) * emitted;
    };
    return integrate_adaptive(integrand, 0.0, rho_max, inner_options).value;
  };

  const std::complex<double> xi = integrate_adaptive(radial, -z_max, 0.0, outer_options).value +
                                  integrate_adaptive(radial, 0.0, z_max, outer_options).value;
  return make_overlap_result(xi, w0_bar, OverlapMethod::brute_force);
}

OverlapResult xi_for_phase(const CloudGeometry& cloud, double w0_bar, PhaseKind kind,
                           const ZQuadratureOptions& options) {
  require_positive_waist(w0_bar);
  if (cloud.is_flat()) return flat_cloud(cloud, w0_bar);
  switch (kind) {
    case PhaseKind::uniform:
      return xi_uniform(cloud, w0_bar);
    case PhaseKind::gouy_compensated:
      return xi_gouy_compensated(cloud, w0_bar, options);
    case PhaseKind::full_gaussian:
      return xi_full_compensation(cloud, w0_bar, options);
  }
  throw std::invalid_argument("xi_for_phase: unknown phase kind");
}

}  // namespace atomcollect
