#include "magicpol/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"
#include "magicpol/fitting.hpp"
#include "magicpol/parallel.hpp"
#include "magicpol/random.hpp"

namespace magicpol {

using constants::pi;

double rabi_lineshape(double detuning_Hz, double rabi_Hz, double t) {
  const double O = 2 * pi * rabi_Hz, d = 2 * pi * detuning_Hz;
  const double W2 = O * O + d * d;
  if (W2 == 0.0) return 0.0;
  const double s = std::sin(0.5 * std::sqrt(W2) * t);
  return O * O / W2 * s * s;
}

double pi_pulse_rabi_Hz(double pulse_time_s) {
  if (!(pulse_time_s > 0.0)) throw ValidationError("pulse time must be > 0");
  return 0.5 / pulse_time_s;
}

void RabiScanConfig::validate() const {
  if (!(rabi_Hz > 0.0)) throw ValidationError("raman scan: Rabi frequency must be > 0");
  if (!(pulse_time_s > 0.0)) throw ValidationError("raman scan: pulse time must be > 0");
  if (detuning_grid_Hz.empty()) throw ValidationError("raman scan: empty detuning grid");
  if (shots_per_point < 1) throw ValidationError("raman scan: shots_per_point must be >= 1");
}

std::vector<ScanPoint> simulate_raman_scan(const RabiScanConfig& cfg) {
  cfg.validate();
  std::vector<ScanPoint> out(cfg.detuning_grid_Hz.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const double f = cfg.scan_center_Hz + cfg.detuning_grid_Hz[i];
    const double p = rabi_lineshape(f - cfg.center_true_Hz, cfg.rabi_Hz, cfg.pulse_time_s);
    long hits = 0;
    for (int s = 0; s < cfg.shots_per_point; ++s) {
      auto rng = stream(cfg.seed, i, static_cast<std::uint64_t>(s));
      if (uniform01(rng) < p) ++hits;
    }
    const double N = cfg.shots_per_point, ph = hits / N;
    out[i] = {f, ph, std::sqrt(ph * (1 - ph) / N)};
  });
  return out;
}

LineFit fit_line_center(const std::vector<ScanPoint>& data, double pulse_time_s, int shots) {
  if (data.size() < 4) throw ValidationError("fit_line_center: need at least 4 points");
  if (!(pulse_time_s > 0.0)) throw ValidationError("fit_line_center: pulse time must be > 0");
  if (shots < 1) throw ValidationError("fit_line_center: shots_per_point must be >= 1");
  const auto n = static_cast<Eigen::Index>(data.size());
  // Work relative to the mean frequency so the center parameter is O(linewidth).
  double ref = 0.0;
  for (const auto& d : data) ref += d.frequency_Hz;
  ref /= static_cast<double>(n);
  Eigen::VectorXd x(n), y(n), sigma(n);
  const double floor = 1.0 / (2.0 * shots);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = data[i].frequency_Hz - ref;
    y(i) = data[i].p;
    sigma(i) = std::max(data[i].std_error, floor);
  }
  CurveModel model;
  model.value = [t = pulse_time_s](double f, const Eigen::VectorXd& p) {
    return p(2) * rabi_lineshape(f - p(0), p(1), t);
  };

  Eigen::Index peak = 0;
  y.maxCoeff(&peak);
  const double rabi0 = pi_pulse_rabi_Hz(pulse_time_s);
  std::optional<CurveFit> best;
  for (double scale : {1.0, 0.7, 1.4}) {
    const Eigen::Vector3d p0(x(peak), scale * rabi0, std::max(0.05, y(peak)));
    const auto fit = fit_curve(x, y, sigma, model, p0);
    if (!fit.params.allFinite()) continue;
    if (!best || (fit.converged && !best->converged) ||
        (fit.converged == best->converged && fit.chi2 < best->chi2))
      best = fit;
  }
  if (!best) return {};
  // Sample variances p(1-p)/N vanish where few shots land, which overweights
  // the wings. Refit once with binomial variances of the fitted curve.
  {
    Eigen::VectorXd s2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pm = std::clamp(model.value(x(i), best->params), 0.0, 1.0);
      s2(i) = std::max(std::sqrt(pm * (1 - pm) / shots), floor);
    }
    const auto refit = fit_curve(x, y, s2, model, best->params);
    if (refit.params.allFinite() && (refit.converged || !best->converged)) best = refit;
  }
  LineFit out;
  out.center_Hz = best->params(0) + ref;
  out.sigma_Hz = std::sqrt(std::abs(best->covariance(0, 0)));
  out.rabi_Hz = std::abs(best->params(1));
  out.amplitude = best->params(2);
  out.chi2 = best->chi2;
  out.converged = best->converged;
  return out;
}

double clock_splitting(const AtomSpec& atom, std::string_view level, ClockPair pair, double B_G) {
  const auto ea = dressed_state(atom, {std::string(level), pair.F_a, HalfInt(0)}, B_G).energy_MHz;
  const auto eb = dressed_state(atom, {std::string(level), pair.F_b, HalfInt(0)}, B_G).energy_MHz;
  return std::abs(ea - eb);
}

double zero_field_splitting(const AtomSpec& atom, std::string_view level, ClockPair pair,
                            double measured_MHz, double B_G) {
  if (!(B_G >= 0.0)) throw ValidationError("zero_field_splitting: B must be >= 0");
  if (B_G == 0.0) return measured_MHz;
  auto correction = [&](const AtomSpec& a) {
    return clock_splitting(a, level, pair, B_G) - clock_splitting(a, level, pair, 0.0);
  };
  const double first = measured_MHz - correction(atom);
  // One fixed-point pass: scale the hyperfine constants to the first estimate.
  AtomSpec tuned = atom;
  for (auto& l : tuned.levels) {
    if (l.label != level) continue;
    const double zf = clock_splitting(atom, level, pair, 0.0);
    if (zf == 0.0) throw DomainError("zero_field_splitting: model splitting vanishes at B = 0");
    l.hyperfine_A_MHz *= first / zf;
    l.hyperfine_B_MHz *= first / zf;
  }
  return measured_MHz - correction(tuned);
}

double raman_beat_MHz(double double_pass_MHz, double single_pass_MHz) {
  return 2.0 * double_pass_MHz - single_pass_MHz;
}

}  // namespace magicpol
