#include "atomcollect/emission_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "atomcollect/error.hpp"
#include "atomcollect/overlap_engine.hpp"

namespace atomcollect {

using namespace std::complex_literals;

PulseShape PulseShape::constant(double amplitude) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("PulseShape: amplitude must be non-negative");
  }
  PulseShape pulse;
  pulse.kind_ = PulseKind::constant;
  pulse.amplitude_ = amplitude;
  return pulse;
}

PulseShape PulseShape::gaussian(double amplitude, double center, double width) {
  PulseShape pulse = constant(amplitude);
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("PulseShape: width must be positive");
  if (!std::isfinite(center)) throw std::invalid_argument("PulseShape: center must be finite");
  pulse.kind_ = PulseKind::gaussian_pulse;
  pulse.center_ = center;
  pulse.width_ = width;
  return pulse;
}

PulseShape PulseShape::sampled(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw std::invalid_argument("PulseShape: sampled pulse needs >= 2 (time, value) pairs");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("PulseShape: sample times must increase strictly");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("PulseShape: sample values must be non-negative");
  }
  PulseShape pulse;
  pulse.kind_ = PulseKind::sampled;
  pulse.amplitude_ = *std::max_element(values.begin(), values.end());
  pulse.sample_times_ = std::move(times);
  pulse.sample_values_ = std::move(values);
  return pulse;
}

double PulseShape::rabi(double t) const {
  switch (kind_) {
    case PulseKind::constant:
      return amplitude_;
    case PulseKind::gaussian_pulse: {
      const double u = (t - center_) / width_;
      return amplitude_ * std::exp(-0.5 * u * u);
    }
    case PulseKind::sampled: {
      if (t < sample_times_.front() || t > sample_times_.back()) return 0.0;
      const auto it = std::upper_bound(sample_times_.begin(), sample_times_.end(), t);
      const std::size_t k = std::min<std::size_t>(it - sample_times_.begin(), sample_times_.size() - 1);
      const double t0 = sample_times_[k - 1];
      const double t1 = sample_times_[k];
      const double f = (t - t0) / (t1 - t0);
      return (1.0 - f) * sample_values_[k - 1] + f * sample_values_[k];
    }
  }
  return 0.0;
}

double PulseShape::pumping(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case PulseKind::constant:
      return amplitude_ * amplitude_ * t;
    case PulseKind::gaussian_pulse: {
      // Omega^2 is a Gaussian of standard deviation width/sqrt2.
      const double scale = 0.5 * amplitude_ * amplitude_ * width_ * std::sqrt(std::numbers::pi);
      return scale * (std::erf((t - center_) / width_) + std::erf(center_ / width_));
    }
    case PulseKind::sampled: {
      // Exact integral of the square of a linear segment.
      const auto segment = [](double h, double a, double b) { return h * (a * a + a * b + b * b) / 3.0; };
      double total = 0.0;
      for (std::size_t k = 1; k < sample_times_.size(); ++k) {
        const double lo = std::max(sample_times_[k - 1], 0.0);
        const double hi = std::min(sample_times_[k], t);
        if (hi <= lo) continue;
        total += segment(hi - lo, rabi(lo), rabi(hi));
      }
      return total;
    }
  }
  return 0.0;
}

double PulseShape::total_pumping() const {
  switch (kind_) {
    case PulseKind::constant:
      return amplitude_ > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    case PulseKind::gaussian_pulse:
      return 0.5 * amplitude_ * amplitude_ * width_ * std::sqrt(std::numbers::pi) *
             (1.0 + std::erf(center_ / width_));
    case PulseKind::sampled:
      return pumping(sample_times_.back());
  }
  return 0.0;
}

double PulseShape::peak() const { return amplitude_; }

bool weak_drive_warning(const PulseShape& pulse) { return pulse.peak() > 0.2; }

namespace {

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("adiabatic_beta: empty time grid");
  if (!(t_grid.front() >= 0.0)) throw std::invalid_argument("adiabatic_beta: times must be non-negative");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) throw std::invalid_argument("adiabatic_beta: time grid must increase strictly");
  }
}

double beta_at(const PulseShape& pulse, double t) { return 2.0 * pulse.rabi(t) * std::exp(-2.0 * pulse.pumping(t)); }

// Cumulative integral of beta^2 at the grid points with `panels` Simpson
// panel pairs per grid interval (the first interval starts at t = 0).
std::vector<double> cumulative_simpson(const PulseShape& pulse, std::span<const double> t_grid, std::size_t panels) {
  std::vector<double> cumulative(t_grid.size());
  double acc = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double right = t_grid[k];
    if (right > left) {
      const double h = (right - left) / (2.0 * panels);
      double sum = 0.0;
      for (std::size_t j = 0; j <= 2 * panels; ++j) {
        const double b = beta_at(pulse, left + h * j);
        const double weight = (j == 0 || j == 2 * panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        sum += weight * b * b;
      }
      acc += sum * h / 3.0;
    }
    cumulative[k] = acc;
    left = right;
  }
  return cumulative;
}

}  // namespace

EmissionCurve adiabatic_beta(const PulseShape& pulse, std::span<const double> t_grid, double rel_tol) {
  check_grid(t_grid);
  if (!(rel_tol > 0.0)) throw std::invalid_argument("adiabatic_beta: rel_tol must be positive");

  EmissionCurve curve;
  curve.times.assign(t_grid.begin(), t_grid.end());
  curve.beta.reserve(t_grid.size());
  for (double t : t_grid) curve.beta.push_back(beta_at(pulse, t));

  std::size_t panels = 1;
  std::vector<double> coarse = cumulative_simpson(pulse, t_grid, panels);
  for (;;) {
    panels *= 2;
    std::vector<double> fine = cumulative_simpson(pulse, t_grid, panels);
    double change = 0.0;
    for (std::size_t k = 0; k < fine.size(); ++k) change = std::max(change, std::abs(fine[k] - coarse[k]));
    const double scale = std::max(std::abs(fine.back()), std::numeric_limits<double>::min());
    if (change <= rel_tol * scale) {
      curve.big_b = std::move(fine);
      break;
    }
    if (panels * t_grid.size() > (std::size_t{1} << 26)) {
      throw NumericalError("adiabatic_beta: B(t) did not stabilise under refinement");
    }
    coarse = std::move(fine);
  }
  return curve;
}

double total_emission_closed_form(const PulseShape& pulse) { return -std::expm1(-4.0 * pulse.total_pumping()); }

EmissionCurve photon_number(const CloudGeometry& cloud, PhaseKind profile, double w0_bar, const PulseShape& pulse,
                            std::span<const double> t_grid) {
  EmissionCurve curve = adiabatic_beta(pulse, t_grid);
  const double g = xi_for_phase(cloud, w0_bar, profile).geometric_factor;
  const double scale = g * static_cast<double>(cloud.n_atoms());
  curve.n.reserve(curve.big_b.size());
  for (double b : curve.big_b) curve.n.push_back(scale * b);
  return curve;
}

AmplitudeTrajectory integrate_amplitudes(const PulseShape& pulse, double t_end, double step,
                                         const AmplitudeOptions& options) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrate_amplitudes: t_end must be positive");
  if (!(step > 0.0)) throw std::invalid_argument("integrate_amplitudes: step must be positive");
  if (step > t_end / 10.0) throw std::invalid_argument("integrate_amplitudes: step exceeds t_end/10");

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  const double half_decay = 0.5 * options.decay_rate;
  const double delta = options.detuning;

  using State = std::array<std::complex<double>, 2>;
  const auto rhs = [&](double t, const State& y) -> State {
    const double omega = pulse.rabi(t);
    const std::complex<double> rotor = std::polar(1.0, delta * t);
    return {1i * omega * y[1] * rotor, -half_decay * y[1] + 1i * omega * y[0] * std::conj(rotor)};
  };

  AmplitudeTrajectory trajectory;
  trajectory.times.reserve(steps + 1);
  trajectory.c_values.reserve(steps + 1);
  trajectory.b_values.reserve(steps + 1);
  State y{options.c0, options.b0};
  trajectory.times.push_back(0.0);
  trajectory.c_values.push_back(y[0]);
  trajectory.b_values.push_back(y[1]);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = h * static_cast<double>(k);
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const State k3 = rhs(t + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const State k4 = rhs(t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int i = 0; i < 2; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    trajectory.times.push_back(h * static_cast<double>(k + 1));
    trajectory.c_values.push_back(y[0]);
    trajectory.b_values.push_back(y[1]);
  }
  return trajectory;
}

double max_adiabatic_deviation(const PulseShape& pulse, const AmplitudeTrajectory& trajectory, double t_from,
                               double t_to) {
  double worst = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const double t = trajectory.times[k];
    if (t < t_from || t > t_to) continue;
    const double adiabatic = std::abs(beta_at(pulse, t));
    if (adiabatic == 0.0) continue;
    worst = std::max(worst, std::abs(std::abs(trajectory.b_values[k]) - adiabatic) / adiabatic);
    any = true;
  }
  if (!any) throw std::invalid_argument("max_adiabatic_deviation: no samples inside the window");
  return worst;
}

double integrate_samples(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("integrate_samples: size mismatch");
  if (x.size() < 2) return 0.0;
  double total = 0.0;
  std::size_t k = 0;
  for (; k + 2 < x.size(); k += 2) {
    const double h0 = x[k + 1] - x[k];
    const double h1 = x[k + 2] - x[k + 1];
    total += (h0 + h1) / 6.0 *
             ((2.0 - h1 / h0) * y[k] + (h0 + h1) * (h0 + h1) / (h0 * h1) * y[k + 1] + (2.0 - h0 / h1) * y[k + 2]);
  }
  if (k + 1 < x.size()) total += 0.5 * (x[k + 1] - x[k]) * (y[k] + y[k + 1]);
  return total;
}

double single_atom_collected(double w0_bar, const AmplitudeTrajectory& trajectory) {
  if (!(w0_bar > 0.0)) throw std::invalid_argument("single_atom_collected: waist must be positive");
  std::vector<double> population;
  population.reserve(trajectory.b_values.size());
  for (const auto& b : trajectory.b_values) population.push_back(std::norm(b));
  return 6.0 / (w0_bar * w0_bar) * integrate_samples(trajectory.times, population);
}

double single_atom_collected_excited(double w0_bar) {
  if (!(w0_bar > 0.0)) throw std::invalid_argument("single_atom_collected_excited: waist must be positive");
  return 6.0 / (w0_bar * w0_bar);
}

}  // namespace atomcollect
