#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace magicpol {

struct NoiseModel {
  double sigma_rel = 0.0;           // shot-to-shot relative intensity std
  double drift_Hz_per_min = 0.0;    // qubit shift drift per wall-clock minute
  std::uint64_t seed = 1;
};

/// Detuned Ramsey experiment. Frequencies in Hz, times in s.
/// The fringe runs at detuning + light_shift * g + drift, where detuning is the
/// qubit frequency minus the microwave frequency and light_shift is the
/// laser-induced change of the qubit frequency.
struct RamseyConfig {
  double detuning_Hz = 0.0;
  double light_shift_Hz = 0.0;
  double pulse_duration_s = 0.0;  // pi/2 pulse; 0 for instantaneous pulses
  std::vector<double> wait_grid_s;
  int shots_per_point = 300;
  NoiseModel noise;
  double wall_clock_per_shot_s = 0.0;
  bool shift_during_pulses = false;

  void validate() const;
};

struct FringePoint {
  double wait_s;
  double p0;
  double std_error;
};

/// Probability of finding the initial state after pi/2 - wait - pi/2 with
/// effective detuning delta_Hz, exact 2x2 propagators.
double ramsey_probability(double delta_Hz, double wait_s, double pulse_s, double pulse_delta_Hz);

/// Monte Carlo fringe, one row per wait. Deterministic given the seed and
/// independent of the thread count.
std::vector<FringePoint> simulate_ramsey(const RamseyConfig& config);

struct FringeFit {
  double amplitude = 0.0;
  double tau_s = 0.0;  // +inf when no decay is resolved
  double f_ramsey_Hz = 0.0;
  double sigma_amplitude = 0.0;
  double sigma_tau_s = 0.0;
  double sigma_f_Hz = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // of (amplitude, 1/tau, f)
  double chi2 = 0.0;
  bool converged = false;
};

struct FringeGuess {
  double amplitude = 1.0;
  double tau_s = 0.03;
  double f_Hz = 100.0;
};

/// Weighted fit of p(t) = A exp(-t/tau) sin^2(pi f t). Weights are binomial
/// stderr floored at 1/(2 shots_per_point). Starts from the dominant
/// periodogram peak and its two neighbours on each side unless a guess is given.
FringeFit fit_fringe(const std::vector<FringePoint>& data,
                     const std::optional<FringeGuess>& guess = std::nullopt,
                     int shots_per_point = 300);

/// exp(-2 pi^2 sigma_f^2 t^2).
double analytic_contrast(double sigma_f_Hz, double t_s);

struct CoherenceBudget {
  double sigma_f_Hz;
  double half_life_s;  // +inf for no decay
};

/// sigma_f = |sensitivity * intensity| * sigma_rel and the time at which the
/// Gaussian contrast falls to 1/2. Drift shifts the fringe but does not
/// dephase within a shot, so it does not enter.
CoherenceBudget coherence_budget(double sensitivity_Hz_per_kWcm2, double intensity_kWcm2,
                                 double sigma_rel);

/// sigma_rel giving the requested contrast half-life.
double sigma_rel_for_half_life(double sensitivity_Hz_per_kWcm2, double intensity_kWcm2,
                               double half_life_s);

}  // namespace magicpol
