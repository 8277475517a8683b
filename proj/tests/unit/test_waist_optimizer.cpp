#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "atomcollect/error.hpp"
#include "atomcollect/waist_optimizer.hpp"

using namespace atomcollect;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double numeric_small_cloud_optimum(const CloudGeometry& cloud) {
  NumericOptions options;
  options.tol = 1e-10;
  return maximize_geometric_factor([&](double w) { return xi_small_cloud(cloud, w); }, cloud, PhaseKind::uniform,
                                   options)
      .record.w0_max_bar;
}

}  // namespace

TEST_CASE("analytic optimum in the flat limit") {
  for (double sp : {0.5, 1.0, 3.0, 12.0}) {
    const auto r = optimal_waist_analytic(CloudGeometry(sp, 0.0));
    CHECK(rel(r.w0_max_bar, std::numbers::sqrt2 * sp) < 1e-12);
    CHECK(rel(r.g_max, 3.0 / (4.0 * sp * sp)) < 1e-12);
    CHECK(r.method == OptimumMethod::analytic);
  }
}

TEST_CASE("analytic optimum matches a numeric search") {
  const CloudGeometry cloud(3.0, 4.0);
  CHECK(rel(optimal_waist_analytic(cloud).w0_max_bar, numeric_small_cloud_optimum(cloud)) < 1e-8);
}

TEST_CASE("analytic optimum on the negative discriminant branch") {
  const CloudGeometry cloud(1.0, 50.0);
  const double s4 = 1.0, t2 = 2500.0;
  REQUIRE(s4 * s4 + 22.0 * s4 * t2 - 4.0 * t2 * t2 < 0.0);
  const auto r = optimal_waist_analytic(cloud);
  CHECK(r.w0_max_bar > 0.0);
  CHECK(rel(r.w0_max_bar, numeric_small_cloud_optimum(cloud)) < 1e-6);
}

TEST_CASE("analytic optimum solves the stationarity cubic") {
  for (double sp : {0.7, 2.0, 9.0}) {
    for (double sz : {0.3, 5.0, 80.0}) {
      const double w2 = std::pow(optimal_waist_analytic(CloudGeometry(sp, sz)).w0_max_bar, 2);
      const double s = sp * sp, t = sz;
      const double cubic = w2 * w2 * w2 - 2.0 * s * w2 * w2 - 8.0 * t * t * w2 - 16.0 * s * t * t;
      CHECK(std::abs(cubic) < 1e-9 * w2 * w2 * w2);
    }
  }
}

TEST_CASE("numeric optimum for a wide cloud sits near the matched waist") {
  const auto r = optimal_waist_numeric(CloudGeometry(20.0, 100.0), PhaseKind::uniform).record;
  CHECK(std::abs(r.w0_max_bar / (std::numbers::sqrt2 * 20.0) - 1.0) < 0.05);
}

TEST_CASE("numeric optimum in the flat limit for every profile") {
  for (PhaseKind kind : {PhaseKind::uniform, PhaseKind::gouy_compensated, PhaseKind::full_gaussian}) {
    const auto r = optimal_waist_numeric(CloudGeometry(3.0, 1e-3), kind).record;
    CHECK(rel(r.w0_max_bar, 3.0 * std::numbers::sqrt2) < 1e-3);
    CHECK(r.profile == kind);
  }
}

TEST_CASE("numeric optimum agrees with a dense scan") {
  const CloudGeometry cloud(5.0, 100.0);
  const auto r = optimal_waist_numeric(cloud, PhaseKind::uniform).record;
  const auto [lo, hi] = default_bracket(cloud);
  const auto grid = log_spaced(lo, hi, 10000);
  std::size_t best = 0;
  double best_g = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double g = xi_uniform(cloud, grid[k]).geometric_factor;
    if (g > best_g) {
      best_g = g;
      best = k;
    }
  }
  const double step = grid[best + 1] - grid[best];
  CHECK(std::abs(r.w0_max_bar - grid[best]) <= step);
  CHECK(r.g_max >= best_g);
}

TEST_CASE("numeric optimum is stationary") {
  for (PhaseKind kind : {PhaseKind::uniform, PhaseKind::gouy_compensated, PhaseKind::full_gaussian}) {
    const CloudGeometry cloud(4.0, 250.0);
    const auto r = optimal_waist_numeric(cloud, kind).record;
    CHECK(xi_for_phase(cloud, r.w0_max_bar * (1.0 + 1e-4), kind).geometric_factor <= r.g_max);
    CHECK(xi_for_phase(cloud, r.w0_max_bar * (1.0 - 1e-4), kind).geometric_factor <= r.g_max);
  }
}

TEST_CASE("bracket and option validation") {
  const CloudGeometry cloud(1.0, 1.0);
  NumericOptions options;
  options.bracket = std::make_pair(0.1, 10.0);
  CHECK_THROWS_AS(optimal_waist_numeric(cloud, PhaseKind::uniform, options), std::invalid_argument);
  options.bracket = std::make_pair(5.0, 4.0);
  CHECK_THROWS_AS(optimal_waist_numeric(cloud, PhaseKind::uniform, options), std::invalid_argument);
  options.bracket.reset();
  options.scan_points = 2;
  CHECK_THROWS_AS(optimal_waist_numeric(cloud, PhaseKind::uniform, options), std::invalid_argument);
}

TEST_CASE("flat objective is reported") {
  const CloudGeometry cloud(1.0, 1.0);
  CHECK_THROWS_AS(maximize_geometric_factor([](double) { return make_overlap_result({0.0, 0.0}, 1.0, OverlapMethod::closed_form); },
                                            cloud, PhaseKind::uniform, {}),
                  NumericalError);
}

TEST_CASE("sweep of one cell equals a direct call") {
  const auto grid = sweep({5.0}, {100.0}, PhaseKind::gouy_compensated, 1000, {}, 1);
  const auto direct = optimal_waist_numeric(CloudGeometry(5.0, 100.0, 1000), PhaseKind::gouy_compensated).record;
  REQUIRE(grid.at(0, 0).record.has_value());
  CHECK(grid.at(0, 0).record->w0_max_bar == direct.w0_max_bar);
  CHECK(grid.at(0, 0).record->g_max == direct.g_max);
  CHECK(grid.at(0, 0).status == "ok");
}

TEST_CASE("sweep is independent of the thread count") {
  const std::vector<double> perp{1.0, 4.0, 16.0}, z{2.0, 40.0, 800.0};
  const auto serial = sweep(perp, z, PhaseKind::uniform, 1000, {}, 1);
  const auto parallel = sweep(perp, z, PhaseKind::uniform, 1000, {}, 4);
  for (std::size_t i = 0; i < perp.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      REQUIRE(serial.at(i, j).record.has_value());
      CHECK(serial.at(i, j).record->w0_max_bar == parallel.at(i, j).record->w0_max_bar);
      CHECK(serial.at(i, j).record->cloud.sigma_perp() == perp[i]);
      CHECK(serial.at(i, j).record->cloud.sigma_z() == z[j]);
    }
  }
}

TEST_CASE("sweep axis validation") {
  CHECK_THROWS_AS(sweep({}, {1.0}, PhaseKind::uniform, 1000, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep({2.0, 1.0}, {1.0}, PhaseKind::uniform, 1000, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep({1.0}, {0.0}, PhaseKind::uniform, 1000, {}, 1), std::invalid_argument);
}

TEST_CASE("log spacing") {
  const auto v = log_spaced(1.0, 1000.0, 4);
  REQUIRE(v.size() == 4);
  CHECK(v[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(v.back() == 1000.0);
  CHECK(log_spaced(3.0, 7.0, 1) == std::vector<double>{3.0});
}
