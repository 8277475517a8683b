#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "atomcollect/paraxial_beam.hpp"
#include "atomcollect/special_math.hpp"

using namespace atomcollect;

TEST_CASE("beam geometry validation") {
  CHECK_THROWS_AS(BeamGeometry(0.0), std::invalid_argument);
  CHECK_THROWS_AS(BeamGeometry(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(BeamGeometry(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK(BeamGeometry(10.0).rayleigh() == 50.0);
}

TEST_CASE("beam width") {
  const BeamGeometry beam(10.0);
  CHECK(beam_width(beam, 0.0) == 10.0);
  CHECK(beam_width(beam, beam.rayleigh()) == doctest::Approx(10.0 * std::numbers::sqrt2).epsilon(1e-15));
  CHECK(beam_width(beam, 500.0) == doctest::Approx(100.4987562112089).epsilon(1e-13));
  CHECK(beam_width(beam, 500.0) == doctest::Approx(std::abs(beam_parameter(beam, 500.0)) * 10.0 / 50.0).epsilon(1e-14));
}

TEST_CASE("radius of curvature") {
  const BeamGeometry beam(10.0);
  CHECK(std::isinf(radius_of_curvature(beam, 0.0)));
  CHECK(radius_of_curvature(beam, 50.0) == doctest::Approx(100.0));
  CHECK(radius_of_curvature(beam, 25.0) == doctest::Approx(125.0).epsilon(1e-15));
  CHECK(radius_of_curvature(beam, -25.0) == doctest::Approx(-125.0).epsilon(1e-15));
}

TEST_CASE("gouy phase") {
  const BeamGeometry beam(10.0);
  CHECK(gouy_phase(beam, 0.0) == 0.0);
  CHECK(gouy_phase(beam, 50.0) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
  CHECK(std::abs(gouy_phase(beam, 5000.0) - std::numbers::pi / 2.0) < 0.01);
  CHECK(std::abs(gouy_phase(beam, -5000.0) + std::numbers::pi / 2.0) < 0.01);
}

TEST_CASE("mode amplitude at the focus") {
  const BeamGeometry beam(7.0);
  const auto v = mode_amplitude(beam, {0.0, 0.0, 0.0});
  CHECK(v.real() == doctest::Approx(0.0));
  CHECK(v.imag() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("on-axis modulus follows the beam width") {
  const BeamGeometry beam(10.0);
  for (double z : {-300.0, -50.0, 3.0, 50.0, 1234.0}) {
    CHECK(std::abs(mode_amplitude(beam, {0.0, 0.0, z})) == doctest::Approx(10.0 / beam_width(beam, z)).epsilon(1e-14));
  }
}

TEST_CASE("compact and expanded forms agree") {
  const BeamGeometry beam(10.0);
  const Point3 p{3.0, -4.0, 7.0};
  CHECK(std::abs(mode_amplitude(beam, p) - mode_amplitude_expanded(beam, p)) < 1e-12);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> transverse(0.0, 10.0), axial(0.0, 100.0);
  double worst = 0.0, max_modulus = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Point3 q{transverse(rng), transverse(rng), axial(rng)};
    worst = std::max(worst, std::abs(mode_amplitude(beam, q) - mode_amplitude_expanded(beam, q)));
    max_modulus = std::max(max_modulus, std::abs(mode_amplitude(beam, q)));
  }
  CHECK(worst < 1e-12);
  CHECK(max_modulus < 1.0);
}

TEST_CASE("transverse power is conserved") {
  const BeamGeometry beam(6.0);
  for (double z : {0.0, beam.rayleigh(), 10.0 * beam.rayleigh()}) {
    const double w = beam_width(beam, z);
    const auto radial = [&](double rho) {
      return std::complex<double>(2.0 * std::numbers::pi * rho * std::norm(mode_amplitude(beam, {rho, 0.0, z})));
    };
    const double power = integrate_adaptive(radial, 0.0, 12.0 * w, 1e-12).value.real();
    CHECK(power == doctest::Approx(std::numbers::pi * 36.0 / 2.0).epsilon(1e-8));
  }
}

TEST_CASE("paraxial regime flag") {
  CHECK(outside_paraxial_regime(BeamGeometry(1.5)));
  CHECK_FALSE(outside_paraxial_regime(BeamGeometry(2.0)));
}
