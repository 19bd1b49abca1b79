#include "magicpol/polarizability.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"

namespace magicpol {

namespace {

std::string transition_name(std::string_view from, HalfInt F, std::string_view to, HalfInt Fp) {
  std::ostringstream os;
  os << from << " F=" << F.str() << " <-> " << to << " F=" << Fp.str();
  return os.str();
}

void check_guard(double w0_MHz, double laser_MHz, const LightShiftOptions& opts,
                 const std::string& name) {
  const double miss = std::abs(std::abs(w0_MHz) - laser_MHz);
  if (miss < opts.guard_band_MHz) {
    std::ostringstream os;
    os.precision(12);
    os << "laser at " << laser_MHz << " MHz lies within " << miss << " MHz of the " << name
       << " resonance (guard band " << opts.guard_band_MHz << " MHz)";
    throw ResonanceError(os.str());
  }
}

// 1/(w0 - w) and 1/(w0 + w). The counter-rotating member is the one whose
// magnitude is |w0| + w.
struct Denominators {
  double rotating = 0.0;
  double counter = 0.0;
};

Denominators denominators(double w0, double w, bool keep_counter) {
  Denominators d{1.0 / (w0 - w), 1.0 / (w0 + w)};
  if (!keep_counter) {
    if (w0 > 0.0)
      d.counter = 0.0;
    else
      d.rotating = 0.0;
  }
  return d;
}

double shift_MHz_per_au(double intensity_W_m2) {
  return -constants::stark_prefactor_MHz2(intensity_W_m2) / constants::hartree_MHz;
}

}  // namespace

double PolarizabilitySet::to_SI(double au) { return au * constants::au_polarizability_to_Hz_per_W_m2; }

PolarizabilitySet eq1_polarizabilities(const AtomSpec& atom, std::string_view level, HalfInt F,
                                       double laser_MHz, const LightShiftOptions& opts) {
  const auto& lv = atom.level(level);
  const HalfInt I = atom.nuclear_I;
  if (!triangle(lv.J, I, F)) throw ValidationError("F=" + F.str() + " not allowed for " + lv.label);
  if (!(laser_MHz >= 0.0)) throw ValidationError("laser frequency must be >= 0");

  const double E = lv.energy_MHz + hyperfine_energy(atom, level, F);
  double alpha[3] = {0.0, 0.0, 0.0};
  for (const auto& partner : dipole_partners(atom, level)) {
    const auto& pv = atom.level(partner);
    const double red = *reduced_dipole(atom, level, partner);
    for (HalfInt Fp : allowed_F(atom, partner)) {
      const double six = wigner6j(pv.J, Fp, I, F, lv.J, HalfInt(1));
      const double d2 = F.dimension() * Fp.dimension() * six * six * red * red;
      if (d2 == 0.0) continue;
      const double w0 = pv.energy_MHz + hyperfine_energy(atom, partner, Fp) - E;
      check_guard(w0, laser_MHz, opts, transition_name(level, F, partner, Fp));
      const auto den = denominators(w0, laser_MHz, opts.counter_rotating);
      for (int K = 0; K <= 2; ++K) {
        const double sixK = wigner6j(HalfInt(1), HalfInt(K), HalfInt(1), F, Fp, F);
        if (sixK == 0.0) continue;
        const double sign_K = K % 2 == 0 ? 1.0 : -1.0;
        alpha[K] += parity_sign(F + Fp + HalfInt(K + 1)) * sixK * d2 *
                    (den.rotating + sign_K * den.counter) * constants::hartree_MHz;
      }
    }
  }
  for (int K = 0; K <= 2; ++K) alpha[K] *= std::sqrt(2.0 * K + 1.0);

  const double f = F.value();
  PolarizabilitySet out;
  out.level = std::string(level);
  out.F = F;
  out.laser_MHz = laser_MHz;
  out.scalar = alpha[0] / std::sqrt(3.0 * (2 * f + 1));
  if (F.twice() >= 1) out.vector = -std::sqrt(2 * f / ((f + 1) * (2 * f + 1))) * alpha[1];
  if (F.twice() >= 2)
    out.tensor = -std::sqrt(2 * f * (2 * f - 1) / (3 * (f + 1) * (2 * f + 1) * (2 * f + 3))) * alpha[2];
  return out;
}

double eq1_shift_Hz(const PolarizabilitySet& pol, HalfInt mF, double helicity,
                    double axial_overlap, double intensity_W_m2) {
  const double f = pol.F.value(), m = mF.value();
  double alpha = pol.scalar;
  if (pol.F.twice() >= 1) alpha += helicity * m / (2 * f) * pol.vector;
  if (pol.F.twice() >= 2) {
    const double D = 0.5 * (3.0 * axial_overlap - 1.0);
    alpha += D * pol.tensor * (3 * m * m - f * (f + 1)) / (f * (2 * f - 1));
  }
  return shift_MHz_per_au(intensity_W_m2) * alpha * 1e6;
}

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> stark_operator(
    const AtomSpec& atom, std::string_view level, const LaserField& laser,
    const LightShiftOptions& opts) {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  laser.validate();
  const auto& lv = atom.level(level);
  const auto basis = hyperfine_basis(atom, level);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Scalar w = laser.frequency_MHz();
  const Scalar prefactor = constants::stark_prefactor_MHz2(laser.intensity_W_m2);

  std::vector<Scalar> Ea(n);
  for (Eigen::Index a = 0; a < n; ++a)
    Ea[a] = Scalar(lv.energy_MHz) + Scalar(hyperfine_energy(atom, level, basis[a].F));

  Matrix H = Matrix::Zero(n, n);
  for (const auto& partner : dipole_partners(atom, level)) {
    const auto& pv = atom.level(partner);
    const bool partner_above = pv.energy_MHz > lv.energy_MHz;
    const auto pb = hyperfine_basis(atom, partner);
    const auto d = dipole_matrices(atom, partner, level);
    Eigen::MatrixXcd de = Eigen::MatrixXcd::Zero(pb.size(), n);
    Eigen::MatrixXcd dec = de;
    for (int i = 0; i < 3; ++i) {
      de += laser.pol.epsilon(i) * d[i];
      dec += std::conj(laser.pol.epsilon(i)) * d[i];
    }
    const Matrix De = de.cast<Complex>();
    const Matrix Dec = dec.cast<Complex>();
    for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(pb.size()); ++e) {
      const Scalar Ee = Scalar(pv.energy_MHz) + Scalar(hyperfine_energy(atom, partner, pb[e].F));
      for (Eigen::Index a = 0; a < n; ++a) {
        if (De(e, a) == Complex(0) && Dec(e, a) == Complex(0)) continue;
        check_guard(static_cast<double>(Ee - Ea[a]), laser.frequency_MHz(), opts,
                    transition_name(level, basis[a].F, partner, pb[e].F));
      }
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          const Complex abs_term = std::conj(De(e, a)) * De(e, b);
          const Complex emi_term = std::conj(Dec(e, a)) * Dec(e, b);
          if (abs_term == Complex(0) && emi_term == Complex(0)) continue;
          Scalar minus = Scalar(0.5) * (Scalar(1) / (Ee - Ea[a] - w) + Scalar(1) / (Ee - Ea[b] - w));
          Scalar plus = Scalar(0.5) * (Scalar(1) / (Ee - Ea[a] + w) + Scalar(1) / (Ee - Ea[b] + w));
          if (!opts.counter_rotating) (partner_above ? plus : minus) = Scalar(0);
          H(a, b) += abs_term * minus + emi_term * plus;
        }
      }
    }
  }
  H *= -prefactor;
  return H;
}

template Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic> stark_operator<double>(
    const AtomSpec&, std::string_view, const LaserField&, const LightShiftOptions&);
template Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>
stark_operator<long double>(const AtomSpec&, std::string_view, const LaserField&,
                            const LightShiftOptions&);

namespace {

using LDComplex = std::complex<long double>;
using LDMatrix = Eigen::Matrix<LDComplex, Eigen::Dynamic, Eigen::Dynamic>;

// Eigenvalue whose eigenvector overlaps `ref` most; throws when the best
// overlap is not dominant.
long double tracked_energy(const LDMatrix& H, const Eigen::VectorXcd& ref, bool strict,
                           const HyperfineState& label) {
  Eigen::SelfAdjointEigenSolver<LDMatrix> es(H);
  if (es.info() != Eigen::Success) throw TrackingError("eigensolver failed for " + label.str());
  const Eigen::Matrix<LDComplex, Eigen::Dynamic, 1> r = ref.cast<LDComplex>();
  Eigen::Index best = 0;
  long double best_ov = -1;
  for (Eigen::Index k = 0; k < H.cols(); ++k) {
    const long double ov = std::norm(r.dot(es.eigenvectors().col(k)));
    if (ov > best_ov) {
      best_ov = ov;
      best = k;
    }
  }
  if (strict && best_ov <= 0.5L)
    throw TrackingError("light-dressed state " + label.str() + " is not adiabatically identifiable");
  return es.eigenvalues()(best);
}

}  // namespace

double dressed_light_shift(const AtomSpec& atom, std::string_view level, double B_G,
                           const LaserField& laser, const HyperfineState& clock_state,
                           const LightShiftOptions& opts) {
  if (!(B_G >= 0.0)) throw ValidationError("dressed_light_shift: B must be >= 0");
  if (clock_state.level != level)
    throw ValidationError("state " + clock_state.str() + " does not belong to " + std::string(level));
  const auto ref = dressed_state(atom, clock_state, B_G);
  const Eigen::MatrixXd H0d = hyperfine_hamiltonian(atom, level) + B_G * zeeman_operator(atom, level);
  const LDMatrix H0 = H0d.cast<long double>().cast<LDComplex>();
  const LDMatrix Hst = stark_operator<long double>(atom, level, laser, opts);
  if (laser.intensity_W_m2 == 0.0) return 0.0;
  const long double with_light = tracked_energy(H0 + Hst, ref.amplitudes, true, clock_state);
  const long double without = tracked_energy(H0, ref.amplitudes, false, clock_state);
  return static_cast<double>((with_light - without) * 1.0e6L);
}

ClockPair default_clock_pair(const AtomSpec& atom, std::string_view level) {
  const auto Fs = allowed_F(atom, level);
  if (Fs.size() < 2 || !Fs.front().is_integer())
    throw ValidationError("level " + std::string(level) + " has no mF = 0 clock pair");
  return {Fs.front(), Fs.back()};
}

namespace {

// (upper, lower) clock states of a pair, ordered by zero-field energy.
std::pair<HyperfineState, HyperfineState> ordered_pair(const AtomSpec& atom, std::string_view level,
                                                       ClockPair pair) {
  for (HalfInt F : {pair.F_a, pair.F_b})
    if (!F.is_integer() || !triangle(atom.level(level).J, atom.nuclear_I, F))
      throw ValidationError("F=" + F.str() + " has no mF = 0 clock state in " + std::string(level));
  const double ea = hyperfine_energy(atom, level, pair.F_a);
  const double eb = hyperfine_energy(atom, level, pair.F_b);
  if (ea == eb) throw ValidationError("clock pair is degenerate at zero field");
  HyperfineState a{std::string(level), pair.F_a, HalfInt(0)};
  HyperfineState b{std::string(level), pair.F_b, HalfInt(0)};
  return ea > eb ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

double differential_clock_shift(const AtomSpec& atom, std::string_view level, ClockPair pair,
                                double B_G, const LaserField& laser, const LightShiftOptions& opts) {
  const auto [upper, lower] = ordered_pair(atom, level, pair);
  return dressed_light_shift(atom, level, B_G, laser, upper, opts) -
         dressed_light_shift(atom, level, B_G, laser, lower, opts);
}

double sensitivity(const AtomSpec& atom, std::string_view level, ClockPair pair, double B_G,
                   const LaserField& laser, const LightShiftOptions& opts) {
  if (!(opts.probe_intensity_W_m2 > 0.0)) throw ValidationError("probe intensity must be > 0");
  LaserField probe = laser;
  probe.intensity_W_m2 = opts.probe_intensity_W_m2;
  const double full = differential_clock_shift(atom, level, pair, B_G, probe, opts);
  probe.intensity_W_m2 = 0.5 * opts.probe_intensity_W_m2;
  const double half = differential_clock_shift(atom, level, pair, B_G, probe, opts);
  // Richardson step removes the O(I^2) term left by the dressed diagonalization.
  const double slope = (4.0 * half - full) / opts.probe_intensity_W_m2;
  return slope * constants::kW_per_cm2;
}

}  // namespace magicpol
