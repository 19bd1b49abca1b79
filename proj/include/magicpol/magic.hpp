#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "magicpol/polarizability.hpp"

namespace magicpol {

struct MagicCurvePoint {
  double B_G = 0.0;
  double A_magic = 0.0;
  double sigma_A = 0.0;
  double sigma_B = 0.0;
};

enum class CriticalFieldMethod { closed_form_eq2, dressed_numeric, fit_to_curve };
std::string to_string(CriticalFieldMethod m);

struct CriticalFieldResult {
  double B_c_G = 0.0;
  double sigma_G = 0.0;  // zero for the numeric solve
  double wavelength_nm = 0.0;
  CriticalFieldMethod method = CriticalFieldMethod::dressed_numeric;
};

/// Everything that fixes the light field apart from its helicity.
struct MagicProblem {
  std::string level = "6s_S1/2";
  ClockPair pair{HalfInt(0), HalfInt(1)};
  double wavelength_nm = 532.0;
  Geometry geometry;
  LightShiftOptions options;
};

/// Differential-shift sensitivity (Hz per kW/cm^2) at helicity A and field B.
double helicity_response(const AtomSpec& atom, const MagicProblem& p, double A, double B_G);

/// Root in A of the differential shift at field B. Throws NoRootError when
/// the shift has the same sign at both ends of the reachable helicity range.
double magic_helicity(const AtomSpec& atom, const MagicProblem& p, double B_G);

/// Smallest field at which the shift vanishes at full helicity, by bracketed
/// root search over [0.01, 100] G.
CriticalFieldResult critical_field(const AtomSpec& atom, const MagicProblem& p);

/// Closed-form estimate of the magic helicity from the rank-decomposed polarizabilities:
/// first-order Zeeman mixing of the clock states times the vector shift
/// balanced against the scalar difference. Returns A; A*B is B independent.
double eq2_estimate(const AtomSpec& atom, const MagicProblem& p, double B_G);

/// The nuclear factor sqrt((2I+1)/(2I(2I+2))) printed with the closed form.
double eq2_nuclear_factor(HalfInt I);

/// Fits A = B_c/B with effective-variance weights for errors on both axes.
CriticalFieldResult fit_critical_field(const std::vector<MagicCurvePoint>& points);

struct ScanRow {
  double B_G;
  double A;
  double sensitivity_Hz_per_kWcm2;
};

/// Grid of helicity_response over B x A, B-major. Parallel, order independent.
std::vector<ScanRow> helicity_scan(const AtomSpec& atom, const MagicProblem& p,
                                   const std::vector<double>& B_list,
                                   const std::vector<double>& A_grid);

}  // namespace magicpol
