#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "atomcollect/ensemble_model.hpp"
#include "atomcollect/special_math.hpp"

using namespace atomcollect;

TEST_CASE("cloud geometry validation") {
  CHECK_THROWS_AS(CloudGeometry(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CloudGeometry(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(CloudGeometry(1.0, 1.0, 0), std::invalid_argument);
  CHECK(CloudGeometry(1.0, 0.0).is_flat());
  CHECK_FALSE(CloudGeometry(1.0, 1e-9).is_flat());
}

TEST_CASE("density peak and falloff") {
  const CloudGeometry cloud(5.0, 100.0, 1000);
  const double peak = density(cloud, {0.0, 0.0, 0.0});
  CHECK(peak == doctest::Approx(1000.0 / (std::pow(2.0 * std::numbers::pi, 1.5) * 25.0 * 100.0)).epsilon(1e-14));
  CHECK(peak == doctest::Approx(0.025330).epsilon(1e-4));
  const double r = std::sqrt(2.0) * 5.0;
  CHECK(density(cloud, {r / std::sqrt(2.0), r / std::sqrt(2.0), 0.0}) == doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(density(CloudGeometry(5.0, 0.0), {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("density integrates to the atom number") {
  const CloudGeometry cloud(3.0, 40.0, 1000);
  const auto radial = [&](double z) {
    return integrate_adaptive(
               [&](double rho) { return std::complex<double>(2.0 * std::numbers::pi * rho * density(cloud, {rho, 0.0, z})); },
               0.0, 8.0 * cloud.sigma_perp(), 1e-13)
        .value;
  };
  const double total = integrate_adaptive(radial, -8.0 * cloud.sigma_z(), 8.0 * cloud.sigma_z(), 1e-12).value.real();
  CHECK(total == doctest::Approx(1000.0).epsilon(1e-6));
}

TEST_CASE("sampling is deterministic") {
  const CloudGeometry cloud(4.0, 30.0);
  const auto a = sample_positions(cloud, 500, 42);
  const auto b = sample_positions(cloud, 500, 42);
  const auto c = sample_positions(cloud, 500, 43);
  REQUIRE(a.size() == 500);
  bool same = true, differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    same = same && a[k].x == b[k].x && a[k].y == b[k].y && a[k].z == b[k].z;
    differs = differs || a[k].x != c[k].x;
  }
  CHECK(same);
  CHECK(differs);

  const auto single = sample_positions(cloud, 1, 1);
  REQUIRE(single.size() == 1);
  CHECK(std::isfinite(single[0].x));
  CHECK(std::isfinite(single[0].z));
  CHECK_THROWS_AS(sample_positions(cloud, 0, 1), std::invalid_argument);
}

TEST_CASE("sample moments match the cloud") {
  const CloudGeometry cloud(4.0, 30.0);
  const auto points = sample_positions(cloud, 200000, 3);
  double sx = 0, sz = 0;
  for (const auto& p : points) {
    sx += p.x * p.x;
    sz += p.z * p.z;
  }
  CHECK(std::sqrt(sx / points.size()) == doctest::Approx(4.0).epsilon(0.01));
  CHECK(std::sqrt(sz / points.size()) == doctest::Approx(30.0).epsilon(0.01));
}

TEST_CASE("stored phases") {
  const BeamGeometry beam(10.0);
  CHECK(phase_at(PhaseProfile::uniform(), {1.0, 2.0, 3.0}) == 0.0);
  CHECK(phase_at(PhaseProfile::gouy_compensated(beam), {0.0, 0.0, 50.0}) ==
        doctest::Approx(-std::numbers::pi / 4.0).epsilon(1e-15));
  CHECK(phase_at(PhaseProfile::full_gaussian(beam), {2.0, 0.0, 50.0}) ==
        doctest::Approx(0.02 - std::numbers::pi / 4.0).epsilon(1e-14));
  CHECK(phase_at(PhaseProfile::full_gaussian(beam), {3.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("phase kind names") {
  CHECK(to_string(PhaseKind::gouy_compensated) == "gouy");
  CHECK(parse_phase_kind("full") == PhaseKind::full_gaussian);
  CHECK(parse_phase_kind("gouy_compensated") == PhaseKind::gouy_compensated);
  CHECK_FALSE(parse_phase_kind("bogus").has_value());
  CHECK_FALSE(PhaseProfile::uniform().reference_beam().has_value());
  CHECK(PhaseProfile::matched(PhaseKind::full_gaussian, BeamGeometry(4.0)).reference_beam()->waist() == 4.0);
}
