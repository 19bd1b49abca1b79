#pragma once

#include <numbers>

// Unit conventions: frequencies and energies in MHz (E/h), magnetic field in
// gauss, dipole matrix elements and polarizabilities in atomic units,
// intensities in W/m^2. CODATA 2018 values.
namespace magicpol::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double c = 299792458.0;                 // m/s
inline constexpr double h = 6.62607015e-34;              // J s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double hartree_MHz = 6.579683920502e9;  // E_h / h
inline constexpr double mu_B_MHz_per_G = 1.39962449361;  // mu_B / h

inline constexpr double ea0 = elementary_charge * bohr_radius;  // C m

/// kW/cm^2 in W/m^2.
inline constexpr double kW_per_cm2 = 1.0e7;

/// Polarizability unit conversion: 1 atomic unit = 4 pi eps0 a0^3 (C m^2/V).
inline constexpr double au_polarizability_SI = 4.0 * pi * epsilon0 * bohr_radius * bohr_radius * bohr_radius;

/// Light shift per unit polarizability and intensity, |dE|/h = alpha I / (2 eps0 c h).
/// Returns Hz per (atomic unit of polarizability x W/m^2).
inline constexpr double au_polarizability_to_Hz_per_W_m2 = au_polarizability_SI / (2.0 * epsilon0 * c * h);

/// Square of the peak field amplitude E0 for a running wave, I = eps0 c E0^2 / 2.
constexpr double field_amplitude_squared(double intensity_W_m2) {
  return 2.0 * intensity_W_m2 / (epsilon0 * c);
}

/// E0^2/4 * (e a0)^2 / h in MHz^2 units so that (prefactor * d_au^2 / Delta_MHz)
/// is an energy in MHz.
constexpr double stark_prefactor_MHz2(double intensity_W_m2) {
  return 0.25 * field_amplitude_squared(intensity_W_m2) * ea0 * ea0 / (h * h) * 1e-12;
}

/// Vacuum wavelength (nm) to laser frequency (MHz).
constexpr double wavelength_to_MHz(double wavelength_nm) { return c / (wavelength_nm * 1e-9) * 1e-6; }

}  // namespace magicpol::constants
