#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <string_view>

#include "magicpol/atom.hpp"
#include "magicpol/polarization.hpp"

namespace magicpol {

struct LightShiftOptions {
  /// Minimum allowed distance between the laser and any hyperfine-resolved
  /// transition from the level, MHz.
  double guard_band_MHz = 1000.0;
  /// Keep the far-detuned (|w_0| + w_L) denominators.
  bool counter_rotating = true;
  /// Intensity at which the zero-intensity slope is extrapolated, W/m^2.
  double probe_intensity_W_m2 = 1.0e7;
};

/// Scalar, vector and tensor dynamic polarizabilities of one hyperfine level,
/// atomic units.
struct PolarizabilitySet {
  std::string level;
  HalfInt F;
  double laser_MHz = 0.0;
  double scalar = 0.0;
  double vector = 0.0;
  double tensor = 0.0;

  static double to_SI(double au);  // Hz per W/m^2 of |shift|, i.e. alpha / (2 eps0 c h)
};

/// Sum over all stored dipoles with hyperfine-resolved transition
/// frequencies. laser_MHz = 0 is the static limit.
PolarizabilitySet eq1_polarizabilities(const AtomSpec& atom, std::string_view level, HalfInt F,
                                       double laser_MHz, const LightShiftOptions& opts = {});

/// Light shift of |F mF> predicted by the decomposition, Hz.
/// D = (3 |eps.z|^2 - 1)/2.
double eq1_shift_Hz(const PolarizabilitySet& pol, HalfInt mF, double helicity,
                    double axial_overlap, double intensity_W_m2);

/// Effective second-order Stark operator on the hyperfine manifold of `level`
/// (MHz), Hermitian.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> stark_operator(
    const AtomSpec& atom, std::string_view level, const LaserField& laser,
    const LightShiftOptions& opts = {});

/// Energy of the adiabatically tracked `clock_state` with H_hf + H_Z + H_st
/// minus its energy without light, Hz.
double dressed_light_shift(const AtomSpec& atom, std::string_view level, double B_G,
                           const LaserField& laser, const HyperfineState& clock_state,
                           const LightShiftOptions& opts = {});

/// The two F values whose mF = 0 states form a clock pair.
struct ClockPair {
  HalfInt F_a;
  HalfInt F_b;
};

/// F = J - I and F = J + I when both carry an mF = 0 state.
ClockPair default_clock_pair(const AtomSpec& atom, std::string_view level);

/// Shift of the upper clock state minus that of the lower one, Hz; positive
/// when the qubit splitting grows.
double differential_clock_shift(const AtomSpec& atom, std::string_view level, ClockPair pair,
                                 double B_G, const LaserField& laser,
                                 const LightShiftOptions& opts = {});

/// Zero-intensity slope of differential_clock_shift, Hz per kW/cm^2. The
/// laser intensity is ignored.
double sensitivity(const AtomSpec& atom, std::string_view level, ClockPair pair, double B_G,
                   const LaserField& laser, const LightShiftOptions& opts = {});

}  // namespace magicpol
