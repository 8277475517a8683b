#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "atomcollect/ensemble_model.hpp"

namespace atomcollect {

// Time is measured in units of 1/Gamma and Rabi frequencies in units of Gamma.

enum class PulseKind { constant, gaussian_pulse, sampled };

/// Rabi frequency Omega(t) of the read-out laser (taken real).
class PulseShape {
 public:
  static PulseShape constant(double amplitude);
  /// amplitude * exp(-(t - center)^2 / (2 width^2)).
  static PulseShape gaussian(double amplitude, double center, double width);
  /// Piecewise-linear through (times[k], values[k]); zero outside the samples.
  static PulseShape sampled(std::vector<double> times, std::vector<double> values);

  PulseKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double center() const { return center_; }
  double width() const { return width_; }

  double rabi(double t) const;
  /// Integral of Omega^2 from 0 to t (exact for every variant).
  double pumping(double t) const;
  /// Integral of Omega^2 from 0 to infinity.
  double total_pumping() const;
  double peak() const;

 private:
  PulseKind kind_ = PulseKind::constant;
  double amplitude_ = 0.0;
  double center_ = 0.0;
  double width_ = 1.0;
  std::vector<double> sample_times_;
  std::vector<double> sample_values_;
};

/// The adiabatic description assumes Omega << Gamma; true above 0.2 Gamma.
bool weak_drive_warning(const PulseShape& pulse);

struct EmissionCurve {
  std::vector<double> times;
  std::vector<double> beta;
  std::vector<double> big_b;
  std::vector<double> n;
};

/// beta(t) = 2 Omega(t) exp(-2 int_0^t Omega^2) after adiabatic elimination of
/// the excited state, and B(t) = int_0^t beta^2 by composite Simpson, refined
/// until doubling the panel count moves B by less than rel_tol relative.
/// The grid must be non-negative and strictly increasing.
EmissionCurve adiabatic_beta(const PulseShape& pulse, std::span<const double> t_grid, double rel_tol = 1e-8);

/// Gamma * B(infinity) = 1 - exp(-4 int_0^inf Omega^2).
double total_emission_closed_form(const PulseShape& pulse);

/// n(t) = G N Gamma B(t), with G from the overlap of the chosen stored phase.
EmissionCurve photon_number(const CloudGeometry& cloud, PhaseKind profile, double w0_bar,
                            const PulseShape& pulse, std::span<const double> t_grid);

struct AmplitudeOptions {
  double detuning = 0.0;    // Delta_c in units of Gamma
  double decay_rate = 1.0;  // 0 switches off spontaneous decay
  std::complex<double> c0 = 1.0;
  std::complex<double> b0 = 0.0;
};

struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> c_values;
  std::vector<std::complex<double>> b_values;
};

/// Classical RK4 on dc/dt = i Omega b e^{i Delta t}, db/dt = -(gamma/2) b + i Omega c e^{-i Delta t}.
/// The step is shrunk so an integer number of steps reaches t_end. Rejects
/// step > t_end/10.
AmplitudeTrajectory integrate_amplitudes(const PulseShape& pulse, double t_end, double step,
                                         const AmplitudeOptions& options = {});

/// Largest |(|b(t)| - |beta(t)|) / |beta(t)|| over trajectory samples with
/// t_from <= t <= t_to, comparing the integrated amplitude to the adiabatic
/// solution for c(0) = 1. The window should skip the initial ~few/Gamma
/// transient during which b builds up from zero.
double max_adiabatic_deviation(const PulseShape& pulse, const AmplitudeTrajectory& trajectory, double t_from,
                               double t_to);

/// Fraction of a single atom's emission collected by a Gaussian mode of
/// waist w0_bar: (6/w0^2) * int |b|^2 dt over the trajectory.
double single_atom_collected(double w0_bar, const AmplitudeTrajectory& trajectory);

/// Same for an atom that starts fully excited and decays freely: 6/w0^2.
double single_atom_collected_excited(double w0_bar);

/// Simpson's rule on an arbitrary increasing grid (trapezoid for a leftover
/// odd interval).
double integrate_samples(std::span<const double> x, std::span<const double> y);

}  // namespace atomcollect
