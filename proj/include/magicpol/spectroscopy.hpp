#pragma once

#include <cstdint>
#include <vector>

#include "magicpol/atom.hpp"
#include "magicpol/polarizability.hpp"

namespace magicpol {

/// Square-pulse Rabi transfer Omega^2/(Omega^2+delta^2) sin^2(sqrt(Omega^2+delta^2) t/2)
/// with Omega = 2 pi rabi_Hz and delta = 2 pi detuning_Hz.
double rabi_lineshape(double detuning_Hz, double rabi_Hz, double pulse_time_s);

/// Rabi frequency (Hz) for which pulse_time is a pi pulse.
double pi_pulse_rabi_Hz(double pulse_time_s);

struct RabiScanConfig {
  double rabi_Hz = 0.0;
  double pulse_time_s = 0.0;
  double scan_center_Hz = 0.0;
  std::vector<double> detuning_grid_Hz;  // relative to scan_center_Hz
  double center_true_Hz = 0.0;           // absolute
  int shots_per_point = 300;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ScanPoint {
  double frequency_Hz;
  double p;
  double std_error;
};

std::vector<ScanPoint> simulate_raman_scan(const RabiScanConfig& config);

struct LineFit {
  double center_Hz = 0.0;
  double sigma_Hz = 0.0;
  double rabi_Hz = 0.0;
  double amplitude = 0.0;
  double chi2 = 0.0;
  bool converged = false;
};

/// Fits amplitude * rabi_lineshape(f - center) with free center, Rabi
/// frequency and amplitude at fixed pulse time. Weights as in fit_fringe.
LineFit fit_line_center(const std::vector<ScanPoint>& data, double pulse_time_s,
                        int shots_per_point = 300);

/// Splitting of the clock pair of `level` (upper minus lower mF = 0 state), MHz.
double clock_splitting(const AtomSpec& atom, std::string_view level, ClockPair pair, double B_G);

/// Zeeman-corrected zero-field splitting from a splitting measured at B.
/// The hyperfine constant is rescaled once so the model reproduces the
/// measurement before the correction is taken.
double zero_field_splitting(const AtomSpec& atom, std::string_view level, ClockPair pair,
                            double measured_MHz, double B_G);

/// Raman beat of a double-passed AOM against a single-passed one, MHz.
double raman_beat_MHz(double double_pass_MHz, double single_pass_MHz);

}  // namespace magicpol
