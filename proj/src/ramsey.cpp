#include "magicpol/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"
#include "magicpol/fitting.hpp"
#include "magicpol/parallel.hpp"
#include "magicpol/random.hpp"

namespace magicpol {

using constants::pi;

void RamseyConfig::validate() const {
  if (shots_per_point < 1) throw ValidationError("ramsey: shots_per_point must be >= 1");
  if (wait_grid_s.empty()) throw ValidationError("ramsey: empty wait grid");
  for (std::size_t i = 0; i < wait_grid_s.size(); ++i) {
    if (!(wait_grid_s[i] >= 0.0)) throw ValidationError("ramsey: waits must be >= 0");
    if (i > 0 && !(wait_grid_s[i] > wait_grid_s[i - 1]))
      throw ValidationError("ramsey: wait grid must be strictly increasing");
  }
  if (!(pulse_duration_s >= 0.0)) throw ValidationError("ramsey: pulse duration must be >= 0");
  if (!(noise.sigma_rel >= 0.0)) throw ValidationError("ramsey: sigma_rel must be >= 0");
  if (!(wall_clock_per_shot_s >= 0.0)) throw ValidationError("ramsey: wall clock per shot must be >= 0");
}

namespace {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;

// exp(-i t (Omega sx + Delta sz)/2), angular frequencies.
M2 rotation(double omega, double delta, double t) {
  const double W = std::hypot(omega, delta);
  M2 U = M2::Identity();
  if (W == 0.0) return U;
  const double c = std::cos(0.5 * W * t), s = std::sin(0.5 * W * t);
  U(0, 0) = C(c, -s * delta / W);
  U(1, 1) = C(c, s * delta / W);
  U(0, 1) = U(1, 0) = C(0.0, -s * omega / W);
  return U;
}

M2 half_pi_pulse(double pulse_s, double delta_rad) {
  if (pulse_s == 0.0) return rotation(1.0, 0.0, 0.5 * pi);
  return rotation(0.5 * pi / pulse_s, delta_rad, pulse_s);
}

}  // namespace

double ramsey_probability(double delta_Hz, double wait_s, double pulse_s, double pulse_delta_Hz) {
  const M2 P = half_pi_pulse(pulse_s, 2 * pi * pulse_delta_Hz);
  const M2 U = P * rotation(0.0, 2 * pi * delta_Hz, wait_s) * P;
  return std::clamp(std::norm(U(0, 0)), 0.0, 1.0);
}

std::vector<FringePoint> simulate_ramsey(const RamseyConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.wait_grid_s.size();
  std::vector<FringePoint> out(n);
  parallel_for(n, [&](std::size_t i) {
    long stays = 0;
    for (int s = 0; s < cfg.shots_per_point; ++s) {
      auto rng = stream(cfg.noise.seed, i, static_cast<std::uint64_t>(s));
      std::normal_distribution<double> normal;
      const double g = 1.0 + cfg.noise.sigma_rel * normal(rng);
      // Grid points are interleaved: shot s of every point precedes shot s+1.
      const double wall_s = (static_cast<double>(s) * n + i) * cfg.wall_clock_per_shot_s;
      const double shift = cfg.light_shift_Hz * g + cfg.noise.drift_Hz_per_min * wall_s / 60.0;
      const double delta = cfg.detuning_Hz + shift;
      const double pulse_delta = cfg.shift_during_pulses ? delta : cfg.detuning_Hz;
      const double p = ramsey_probability(delta, cfg.wait_grid_s[i], cfg.pulse_duration_s, pulse_delta);
      if (uniform01(rng) < p) ++stays;
    }
    const double N = cfg.shots_per_point;
    const double p = stays / N;
    out[i] = {cfg.wait_grid_s[i], p, std::sqrt(p * (1 - p) / N)};
  });
  return out;
}

namespace {

CurveModel fringe_model() {
  CurveModel m;
  m.value = [](double t, const Eigen::VectorXd& p) {
    const double s = std::sin(pi * p(2) * t);
    return p(0) * std::exp(-p(1) * t) * s * s;
  };
  m.gradient = [](double t, const Eigen::VectorXd& p, Eigen::Ref<Eigen::VectorXd> g) {
    const double e = std::exp(-p(1) * t);
    const double s = std::sin(pi * p(2) * t);
    g(0) = e * s * s;
    g(1) = -t * p(0) * e * s * s;
    g(2) = p(0) * e * pi * t * std::sin(2 * pi * p(2) * t);
  };
  return m;
}

}  // namespace

FringeFit fit_fringe(const std::vector<FringePoint>& data, const std::optional<FringeGuess>& guess,
                     int shots_per_point) {
  if (data.size() < 8) throw ValidationError("fit_fringe: need at least 8 points");
  if (shots_per_point < 1) throw ValidationError("fit_fringe: shots_per_point must be >= 1");
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::VectorXd t(n), y(n), sigma(n);
  const double floor = 1.0 / (2.0 * shots_per_point);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i) = data[i].wait_s;
    y(i) = data[i].p0;
    sigma(i) = std::max(data[i].std_error, floor);
  }
  const double span = t.maxCoeff() - t.minCoeff();
  if (!(span > 0.0)) throw ValidationError("fit_fringe: waits span zero time");

  std::vector<Eigen::Vector3d> starts;
  if (guess) {
    starts.push_back({guess->amplitude, 1.0 / guess->tau_s, guess->f_Hz});
  } else {
    // Periodogram on the 1/span grid up to the Nyquist frequency of the
    // median spacing.
    std::vector<double> dt;
    for (Eigen::Index i = 1; i < n; ++i) dt.push_back(t(i) - t(i - 1));
    std::nth_element(dt.begin(), dt.begin() + dt.size() / 2, dt.end());
    const double df = 1.0 / span;
    const int kmax = std::max(2, static_cast<int>(0.5 / dt[dt.size() / 2] / df));
    const Eigen::VectorXd centered = y.array() - y.mean();
    int k_best = 1;
    double best = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += centered(i) * std::polar(1.0, -2 * pi * k * df * t(i));
      if (std::norm(acc) > best) {
        best = std::norm(acc);
        k_best = k;
      }
    }
    if (best > 0.0 && k_best * df * span < 1.5)
      throw ValidationError("fit_fringe: data span fewer than 1.5 fringe periods");
    const double A0 = std::max(0.05, y.maxCoeff());
    for (int j = -2; j <= 2; ++j)
      if (k_best + j >= 1) starts.push_back({A0, 1.0 / span, (k_best + j) * df});
  }

  const auto model = fringe_model();
  std::optional<CurveFit> best_fit;
  for (const auto& s : starts) {
    const auto fit = fit_curve(t, y, sigma, model, s);
    if (!fit.params.allFinite()) continue;
    const bool better = !best_fit || (fit.converged && !best_fit->converged) ||
                        (fit.converged == best_fit->converged && fit.chi2 < best_fit->chi2);
    if (better) best_fit = fit;
  }
  FringeFit out;
  if (!best_fit) return out;
  // Same reweighting as the line fit, but only when the model describes the
  // data; for a wrong decay law the model variances amplify the misfit.
  if (best_fit->chi2 < 2.0 * static_cast<double>(n - 3)) {
    Eigen::VectorXd s2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pm = std::clamp(model.value(t(i), best_fit->params), 0.0, 1.0);
      s2(i) = std::max(std::sqrt(pm * (1 - pm) / shots_per_point), floor);
    }
    const auto refit = fit_curve(t, y, s2, model, best_fit->params);
    if (refit.params.allFinite() && (refit.converged || !best_fit->converged)) best_fit = refit;
  }
  const auto& p = best_fit->params;
  out.amplitude = p(0);
  out.f_ramsey_Hz = std::abs(p(2));
  out.covariance = best_fit->covariance;
  out.chi2 = best_fit->chi2;
  out.converged = best_fit->converged;
  out.sigma_amplitude = std::sqrt(std::abs(out.covariance(0, 0)));
  out.sigma_f_Hz = std::sqrt(std::abs(out.covariance(2, 2)));
  const double gamma = p(1), sigma_gamma = std::sqrt(std::abs(out.covariance(1, 1)));
  if (gamma > 0.0) {
    out.tau_s = 1.0 / gamma;
    out.sigma_tau_s = sigma_gamma / (gamma * gamma);
  } else {
    out.tau_s = std::numeric_limits<double>::infinity();
    out.sigma_tau_s = std::numeric_limits<double>::infinity();
  }
  return out;
}

double analytic_contrast(double sigma_f_Hz, double t_s) {
  if (!(sigma_f_Hz >= 0.0)) throw ValidationError("analytic_contrast: sigma_f must be >= 0");
  return std::exp(-2.0 * pi * pi * sigma_f_Hz * sigma_f_Hz * t_s * t_s);
}

CoherenceBudget coherence_budget(double sensitivity, double intensity, double sigma_rel) {
  if (!(sigma_rel >= 0.0)) throw ValidationError("coherence_budget: sigma_rel must be >= 0");
  const double sigma_f = std::abs(sensitivity * intensity) * sigma_rel;
  if (sigma_f == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
  return {sigma_f, std::sqrt(std::log(2.0) / 2.0) / (pi * sigma_f)};
}

double sigma_rel_for_half_life(double sensitivity, double intensity, double half_life_s) {
  if (!(half_life_s > 0.0)) throw ValidationError("half life must be > 0");
  const double scale = std::abs(sensitivity * intensity);
  if (scale == 0.0) throw DomainError("zero sensitivity: no noise level produces decay");
  return std::sqrt(std::log(2.0) / 2.0) / (pi * half_life_s) / scale;
}

}  // namespace magicpol
