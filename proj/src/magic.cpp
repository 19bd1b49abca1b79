#include "magicpol/magic.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"
#include "magicpol/parallel.hpp"

namespace magicpol {

std::string to_string(CriticalFieldMethod m) {
  switch (m) {
    case CriticalFieldMethod::closed_form_eq2: return "closed_form_eq2";
    case CriticalFieldMethod::dressed_numeric: return "dressed_numeric";
    case CriticalFieldMethod::fit_to_curve: return "fit_to_curve";
  }
  return "unknown";
}

double helicity_response(const AtomSpec& atom, const MagicProblem& p, double A, double B_G) {
  const auto laser = laser_with_helicity(A, p.wavelength_nm, p.options.probe_intensity_W_m2, p.geometry);
  return sensitivity(atom, p.level, p.pair, B_G, laser, p.options);
}

namespace {

double max_helicity(const Geometry& g) { return std::abs(g.k_direction().z()); }

template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double f_lo, double f_hi) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  boost::uintmax_t max_iter = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(44);
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

double magic_helicity(const AtomSpec& atom, const MagicProblem& p, double B_G) {
  if (!(B_G >= 0.0)) throw ValidationError("magic_helicity: B must be >= 0");
  const double a_max = max_helicity(p.geometry);
  auto f = [&](double A) { return helicity_response(atom, p, A, B_G); };
  const double f_lo = f(-a_max), f_hi = f(a_max);
  if ((f_lo > 0) == (f_hi > 0) && f_lo != 0.0 && f_hi != 0.0) {
    std::ostringstream os;
    os << "no magic helicity at B = " << B_G << " G: shift is " << f_lo << " Hz/(kW/cm^2) at A = "
       << -a_max << " and " << f_hi << " at A = " << a_max << " (B below the critical field?)";
    throw NoRootError(os.str());
  }
  return solve_bracketed(f, -a_max, a_max, f_lo, f_hi);
}

CriticalFieldResult critical_field(const AtomSpec& atom, const MagicProblem& p) {
  constexpr double B_lo = 0.01, B_hi = 100.0;
  const double a_max = max_helicity(p.geometry);
  // The magic helicity keeps its sign along the hyperbola; read it off where
  // the root surely exists.
  const double A_far = magic_helicity(atom, p, B_hi);
  const double A_edge = A_far >= 0.0 ? a_max : -a_max;
  auto g = [&](double B) { return helicity_response(atom, p, A_edge, B); };
  const double g_lo = g(B_lo), g_hi = g(B_hi);
  if ((g_lo > 0) == (g_hi > 0)) {
    std::ostringstream os;
    os << "no sign change of the full-helicity shift over [" << B_lo << ", " << B_hi
       << "] G at " << p.wavelength_nm << " nm";
    throw NoRootError(os.str());
  }
  CriticalFieldResult r;
  r.B_c_G = solve_bracketed(g, B_lo, B_hi, g_lo, g_hi);
  r.wavelength_nm = p.wavelength_nm;
  r.method = CriticalFieldMethod::dressed_numeric;
  return r;
}

double eq2_nuclear_factor(HalfInt I) {
  if (I.twice() <= 0) throw ValidationError("nuclear factor needs I > 0");
  const double i = I.value();
  return std::sqrt((2 * i + 1) / (2 * i * (2 * i + 2)));
}

double eq2_estimate(const AtomSpec& atom, const MagicProblem& p, double B_G) {
  if (!(B_G > 0.0)) throw ValidationError("eq2_estimate: B must be > 0");
  const auto& lv = atom.level(p.level);
  const HalfInt Fa = p.pair.F_a, Fb = p.pair.F_b;
  const double laser = constants::wavelength_to_MHz(p.wavelength_nm);
  const auto pa = eq1_polarizabilities(atom, p.level, Fa, laser, p.options);
  const auto pb = eq1_polarizabilities(atom, p.level, Fb, laser, p.options);
  const auto& pv = Fa > Fb ? pa : pb;  // the member carrying a vector part
  if (pv.vector == 0.0)
    throw DomainError("vector polarizability vanishes at " + std::to_string(p.wavelength_nm) + " nm");

  const auto basis = hyperfine_basis(atom, p.level);
  const Eigen::MatrixXd Jz = jz_operator(atom, p.level);
  const double j = Jz(basis_index(basis, Fa, HalfInt(0)), basis_index(basis, Fb, HalfInt(0)));
  if (j == 0.0) throw DomainError("clock states are not mixed by the magnetic field");

  // alpha^a_F m/(2F) = alpha^a_J <J_z>/(2J) within the manifold, <J_z> = m g_F.
  const double J = lv.J.value(), I = atom.nuclear_I.value(), F = pv.F.value();
  const double gF = (F * (F + 1) + J * (J + 1) - I * (I + 1)) / (2 * F * (F + 1));
  const double alpha_a_J = pv.vector * J / (F * gF);

  const double w_q = hyperfine_energy(atom, p.level, Fb) - hyperfine_energy(atom, p.level, Fa);
  const double mixing = (lv.gJ - atom.gI) * constants::mu_B_MHz_per_G;
  const double AB = -w_q * (pb.scalar - pa.scalar) * 2 * J / (4 * mixing * j * j * alpha_a_J);
  return AB / B_G;
}

CriticalFieldResult fit_critical_field(const std::vector<MagicCurvePoint>& pts) {
  if (pts.size() < 2) throw ValidationError("fit_critical_field: need at least 2 points");
  bool distinct = false;
  for (const auto& q : pts) {
    if (!(q.B_G > 0.0)) throw ValidationError("fit_critical_field: B must be > 0");
    if (!(q.sigma_A > 0.0) || !(q.sigma_B > 0.0))
      throw ValidationError("fit_critical_field: uncertainties must be > 0");
    if (q.B_G != pts.front().B_G) distinct = true;
  }
  if (!distinct) throw ValidationError("fit_critical_field: all B values identical");

  auto solve = [&](auto weight) {
    double num = 0.0, den = 0.0;
    for (const auto& q : pts) {
      const double w = weight(q);
      num += w * q.A_magic / q.B_G;
      den += w / (q.B_G * q.B_G);
    }
    return std::pair{num / den, den};
  };
  auto [Bc, curvature] = solve([](const MagicCurvePoint& q) { return 1.0 / (q.sigma_A * q.sigma_A); });
  for (int it = 0; it < 200; ++it) {
    const double prev = Bc;
    std::tie(Bc, curvature) = solve([&](const MagicCurvePoint& q) {
      const double slope = Bc / (q.B_G * q.B_G);
      return 1.0 / (q.sigma_A * q.sigma_A + slope * slope * q.sigma_B * q.sigma_B);
    });
    if (std::abs(Bc - prev) <= 1e-15 * std::abs(Bc)) break;
  }
  CriticalFieldResult r;
  r.B_c_G = Bc;
  r.sigma_G = 1.0 / std::sqrt(curvature);
  r.method = CriticalFieldMethod::fit_to_curve;
  return r;
}

std::vector<ScanRow> helicity_scan(const AtomSpec& atom, const MagicProblem& p,
                                   const std::vector<double>& B_list,
                                   const std::vector<double>& A_grid) {
  if (B_list.empty() || A_grid.empty()) throw ValidationError("helicity_scan: empty grid");
  std::vector<ScanRow> rows(B_list.size() * A_grid.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const double B = B_list[k / A_grid.size()], A = A_grid[k % A_grid.size()];
    rows[k] = {B, A, helicity_response(atom, p, A, B)};
  });
  return rows;
}

}  // namespace magicpol
