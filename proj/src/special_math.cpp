#include "atomcollect/special_math.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

#include "atomcollect/error.hpp"

namespace atomcollect {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;  // 1/sqrt(pi)

// e^{x^2} erf(x) = (2/sqrt(pi)) * sum_n x (2x^2)^n / (2n+1)!!; every term is
// positive so the series carries no cancellation.
double erfcx_series(double x) {
  const double two_x2 = 2.0 * x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= two_x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(x * x) - 2.0 * kInvSqrtPi * sum;
}

// Laplace continued fraction erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz algorithm.
double erfcx_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int j = 1; j < 5000; ++j) {
    const double a = 0.5 * j;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return kInvSqrtPi / f;
}

std::unique_ptr<QuadratureRule> build_gauss_hermite(int n) {
  auto rule = std::make_unique<QuadratureRule>();
  rule->kind = QuadratureKind::gauss_hermite;
  rule->nodes.resize(n);
  rule->weights.resize(n);

  if (n == 1) {
    rule->nodes[0] = 0.0;
    rule->weights[0] = std::sqrt(std::numbers::pi);
    return rule;
  }

  // Golub-Welsch: eigenvalues of the symmetric Jacobi matrix of the
  // orthonormal Hermite recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("gauss_hermite: Jacobi eigen-decomposition failed for n=" +
                         std::to_string(n));
  }
  const Eigen::VectorXd& eig = solver.eigenvalues();

  // Normalised Hermite functions psi_k(x) = p_k(x) e^{-x^2/2}; returns
  // (psi_n, psi_{n-1}).
  const auto hermite_functions = [n](double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (int k = 0; k < n; ++k) {
      const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(double(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
    return std::pair{cur, prev};
  };

  for (int i = 0; i < n; ++i) {
    double x = eig[i];
    for (int it = 0; it < 3; ++it) {
      const auto [psi_n, psi_nm1] = hermite_functions(x);
      x -= psi_n / (std::sqrt(2.0 * n) * psi_nm1);
    }
    const auto [psi_n, psi_nm1] = hermite_functions(x);
    (void)psi_n;
    // Christoffel-Darboux at a root: sum_{k<n} p_k^2 = n p_{n-1}^2.
    rule->nodes[i] = x;
    rule->weights[i] = std::exp(-x * x - std::log(double(n)) - 2.0 * std::log(std::abs(psi_nm1)));
  }

  std::vector<std::size_t> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rule->nodes[a] < rule->nodes[b]; });
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rule->nodes[order[i]];
    w[i] = rule->weights[order[i]];
  }
  // Enforce exact mirror symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double xs = 0.5 * (x[j] - x[i]);
    const double ws = 0.5 * (w[i] + w[j]);
    x[i] = -xs;
    x[j] = xs;
    w[i] = ws;
    w[j] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  rule->nodes = std::move(x);
  rule->weights = std::move(w);
  return rule;
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  std::complex<double> value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<std::complex<double>(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<std::complex<double>, 15> fv;
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  std::complex<double> kronrod = kWgk[7] * fv[7];
  std::complex<double> gauss = kWg[3] * fv[7];
  double res_abs = kWgk[7] * std::abs(fv[7]);
  for (int j = 0; j < 7; ++j) {
    kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
    res_abs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  const std::complex<double> mean = 0.5 * kronrod;
  double res_asc = kWgk[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }
  const double scale = std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  res_abs *= scale;
  res_asc *= scale;
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * res_abs, err);
  }
  return Segment{a, b, kronrod * half, err};
}

}  // namespace

double erfcx(double x) {
  if (std::isnan(x)) throw std::invalid_argument("erfcx: argument is NaN");
  if (x < 0.0) {
    const double x2 = x * x;
    if (x2 > std::log(std::numeric_limits<double>::max() / 2.0)) {
      throw NumericalError("erfcx: overflow for x = " + std::to_string(x));
    }
    return 2.0 * std::exp(x2) - erfcx(-x);
  }
  if (std::isinf(x)) return 0.0;
  if (x < 2.0) return erfcx_series(x);
  return erfcx_continued_fraction(x);
}

const QuadratureRule& gauss_hermite(int n) {
  if (n < 1 || n > 512) {
    throw std::invalid_argument("gauss_hermite: n must lie in [1, 512], got " + std::to_string(n));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_hermite(n)).first;
  return *it->second;
}

std::complex<double> integrate_gauss_hermite(const std::function<std::complex<double>(double)>& f,
                                             int n) {
  const QuadratureRule& rule = gauss_hermite(n);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                  double b, const AdaptiveOptions& options) {
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: requires a < b");
  if (!(options.abs_tol >= 0.0) || !(options.rel_tol >= 0.0) ||
      (options.abs_tol == 0.0 && options.rel_tol == 0.0)) {
    throw std::invalid_argument("integrate_adaptive: tolerances must be non-negative and not both zero");
  }

  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  std::complex<double> total = first.value;
  double total_error = first.error;
  std::size_t evaluations = 15;
  heap.push(first);

  while (total_error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    if (evaluations + 30 > options.max_evaluations) {
      throw NumericalError("integrate_adaptive: no convergence after " + std::to_string(evaluations) +
                           " evaluations (error estimate " + std::to_string(total_error) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw NumericalError("integrate_adaptive: interval cannot be subdivided further");
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed drift accumulated by the running updates.
  std::complex<double> value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return AdaptiveResult{value, error, evaluations};
}

AdaptiveResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                  double b, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be positive");
  return integrate_adaptive(f, a, b, AdaptiveOptions{tol, tol, 1'000'000});
}

}  // namespace atomcollect
