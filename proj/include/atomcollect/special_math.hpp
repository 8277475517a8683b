#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace atomcollect {

/// Scaled complementary error function e^{x^2} erfc(x).
///
/// Relative error below 1e-12 for x >= 0. For x < 0 the reflection
/// erfcx(x) = 2 e^{x^2} - erfcx(-x) is used; throws NumericalError when that
/// overflows (x below roughly -26.6).
double erfcx(double x);

enum class QuadratureKind { gauss_hermite, adaptive_interval };

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureKind kind = QuadratureKind::gauss_hermite;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Hermite rule for the weight e^{-x^2} on the real line, exact for
/// polynomials of degree up to 2n-1. Valid for 1 <= n <= 512.
///
/// Rules are built once per n (Golub-Welsch, then Newton-polished) and cached;
/// the returned reference stays valid for the lifetime of the program. For
/// n above ~360 the outermost weights underflow to zero in double precision.
const QuadratureRule& gauss_hermite(int n);

/// Integral of e^{-x^2} f(x) over the real line with an n-point rule.
std::complex<double> integrate_gauss_hermite(const std::function<std::complex<double>(double)>& f,
                                             int n);

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_evaluations = 1'000'000;
};

struct AdaptiveResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod integration on [a, b].
///
/// Stops once the summed error estimate is at most max(abs_tol, rel_tol*|I|).
/// Throws NumericalError when max_evaluations is exhausted first, and
/// std::invalid_argument unless a < b and both tolerances are usable.
AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                  double b, const AdaptiveOptions& options);

/// Single-tolerance form: error at most tol absolute or tol relative.
AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                  double b, double tol);

}  // namespace atomcollect
