// Acceptance suite: one PASS/FAIL line per criterion. `acceptance --only N`
// runs a single criterion; the exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "magicpol/angular.hpp"
#include "magicpol/atom.hpp"
#include "magicpol/constants.hpp"
#include "magicpol/magic.hpp"
#include "magicpol/parallel.hpp"
#include "magicpol/ramsey.hpp"
#include "magicpol/sequence.hpp"
#include "magicpol/spectroscopy.hpp"

using namespace magicpol;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  double time_limit_s = 0.0;  // 0: none

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

const AtomSpec& atom() {
  static const AtomSpec a = load_atom(find_atom_file("ba133"));
  return a;
}

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

constexpr const char* kS = "6s_S1/2";
constexpr const char* kD = "5d_D5/2";

MagicProblem problem(double wavelength_nm, bool counter_rotating = true) {
  MagicProblem p;
  p.level = kS;
  p.pair = default_clock_pair(atom(), kS);
  p.wavelength_nm = wavelength_nm;
  p.options.counter_rotating = counter_rotating;
  return p;
}

std::vector<double> ramsey_grid() {
  std::vector<double> t;
  for (int i = 0; i <= 120; ++i) t.push_back(i * 0.00025);
  return t;
}

// sigma_f whose Gaussian contrast exp(-2 pi^2 sigma_f^2 t^2) falls to 1/e at
// the coherence time quoted for the sigma- fringe.
constexpr double kSigmaMinusTau = 0.03028;
constexpr double kSigmaMinusShift = -283.1;
double sigma_f_sigma_minus() { return 1.0 / (std::sqrt(2.0) * constants::pi * kSigmaMinusTau); }

Outcome criterion1() {
  Outcome o;
  const double A = atom().level(kD).hyperfine_A_MHz;
  o.require(A == 29.7565, fmt::format("A(D5/2) = {} MHz", A));
  const double split = hyperfine_energy(atom(), kD, HalfInt(3)) - hyperfine_energy(atom(), kD, HalfInt(2));
  const double err = std::abs(split - 89.2695);
  o.require(err < 1e-9, fmt::format("E(F=3) - E(F=2) = {:.10f} MHz, |error| = {:.2e}", split, err));
  return o;
}

Outcome criterion2() {
  Outcome o;
  o.time_limit_s = 1.0;
  const ClockPair pair{HalfInt(2), HalfInt(3)};
  const double zero = clock_splitting(atom(), kD, pair, 0.0);
  const double at = clock_splitting(atom(), kD, pair, 5.036);
  const double corr = at - zero, expect = 89.6697 - 89.2695;
  o.require(std::abs(corr - expect) <= 0.15 * expect,
            fmt::format("correction at 5.036 G = {:.5f} MHz vs {:.4f} MHz ({:+.1f}%)", corr, expect,
                        100 * (corr / expect - 1)));
  return o;
}

Outcome criterion3() {
  Outcome o;
  o.time_limit_s = 5.0;
  const double Bc = critical_field(atom(), problem(532.0)).B_c_G;
  o.require(Bc >= 1.00 && Bc <= 1.35, fmt::format("B_c(532 nm) = {:.5f} G in [1.00, 1.35]", Bc));
  return o;
}

Outcome criterion4() {
  Outcome o;
  o.time_limit_s = 5.0;
  const double A = magic_helicity(atom(), problem(532.0), 5.00);
  o.require(A >= 0.19 && A <= 0.27, fmt::format("A_magic(5.00 G) = {:.5f} in [0.19, 0.27]", A));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto p = problem(532.0);
  const std::vector<double> Bs = {3, 4, 5, 7, 9};
  std::vector<MagicCurvePoint> pts(Bs.size());
  parallel_for(Bs.size(), [&](std::size_t i) { pts[i] = {Bs[i], magic_helicity(atom(), p, Bs[i]), 1e-3, 1e-3}; });
  const double fit = fit_critical_field(pts).B_c_G, direct = critical_field(atom(), p).B_c_G;
  o.require(std::abs(fit / direct - 1) < 0.02,
            fmt::format("hyperbola fit {:.5f} G vs critical_field {:.5f} G ({:+.2f}%)", fit, direct,
                        100 * (fit / direct - 1)));
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(2.0 + 0.5 * i);
  std::vector<double> rel(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    rel[i] = eq2_estimate(atom(), p, grid[i]) / magic_helicity(atom(), p, grid[i]) - 1;
  });
  double worst = 0.0;
  for (double r : rel) worst = std::max(worst, std::abs(r));
  o.require(worst < 0.05, fmt::format("closed form vs dressed A_magic on [2, 10] G: max |dev| {:.2f}%", 100 * worst));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const std::vector<double> lam = {532, 700, 900, 1130};
  std::vector<double> Bc(lam.size());
  double Bc_no_cr = 0.0;
  parallel_for(lam.size() + 1, [&](std::size_t i) {
    if (i < lam.size())
      Bc[i] = critical_field(atom(), problem(lam[i])).B_c_G;
    else
      Bc_no_cr = critical_field(atom(), problem(1130, false)).B_c_G;
  });
  bool monotone = true;
  std::string trend;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (i > 0 && !(Bc[i] > Bc[i - 1])) monotone = false;
    trend += fmt::format("{}{:.0f}:{:.4f}", i ? " " : "", lam[i], Bc[i]);
  }
  o.require(monotone, "B_c(lambda) monotone increasing (" + trend + " G)");
  o.require(std::abs(Bc.back() - 2.0) <= 0.5, fmt::format("B_c(1130 nm) = {:.4f} G within 2 G +- 25%", Bc.back()));
  const double change = std::abs(Bc.back() / Bc_no_cr - 1);
  o.require(change > 0.01, fmt::format("counter-rotating terms change B_c(1130 nm) by {:.1f}% ({:.4f} G without)",
                                       100 * change, Bc_no_cr));
  return o;
}

Outcome criterion7() {
  Outcome o;
  o.time_limit_s = 30.0;
  const std::vector<std::pair<double, double>> cases = {{0.0, 440.4}, {-283.1, 157.3}, {15.3, 455.7}};
  for (const auto& [shift, expect] : cases) {
    RamseyConfig cfg;
    cfg.detuning_Hz = 440.4;
    cfg.light_shift_Hz = shift;
    cfg.wait_grid_s = ramsey_grid();
    cfg.shots_per_point = 300;
    const auto fit = fit_fringe(simulate_ramsey(cfg), std::nullopt, cfg.shots_per_point);
    const double pull = (fit.f_ramsey_Hz - expect) / fit.sigma_f_Hz;
    o.require(fit.converged && std::abs(pull) < 3.0,
              fmt::format("shift {:+} Hz: f = {:.3f} +- {:.3f} Hz vs {} ({:+.2f} sigma)", shift, fit.f_ramsey_Hz,
                          fit.sigma_f_Hz, expect, pull));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const double sigma_f = sigma_f_sigma_minus();
  const double sigma_rel = sigma_f / std::abs(kSigmaMinusShift);

  // Contrast: a mean fringe of 150 Hz sits at its maximum at t = (2m+1)/300 s.
  {
    RamseyConfig cfg;
    cfg.detuning_Hz = 150.0 - kSigmaMinusShift;
    cfg.light_shift_Hz = kSigmaMinusShift;
    cfg.noise.sigma_rel = sigma_rel;
    cfg.shots_per_point = 10000;
    for (int m = 0; m < 5; ++m) cfg.wait_grid_s.push_back((2 * m + 1) / 300.0);
    double worst = 0.0;
    for (const auto& r : simulate_ramsey(cfg)) {
      const double C = 2 * r.p0 - 1, se = 2 * std::sqrt(r.p0 * (1 - r.p0) / cfg.shots_per_point);
      worst = std::max(worst, std::abs(C - analytic_contrast(sigma_f, r.wait_s)) / se);
    }
    o.require(worst < 4.0, fmt::format("MC contrast vs exp(-2 pi^2 sigma_f^2 t^2) at 1e4 shots: max {:.2f} SE", worst));
  }

  auto fitted_tau = [&](double shift) {
    RamseyConfig cfg;
    cfg.detuning_Hz = 440.4;
    cfg.light_shift_Hz = shift;
    cfg.noise.sigma_rel = sigma_rel;
    cfg.wait_grid_s = ramsey_grid();
    cfg.shots_per_point = 300;
    return fit_fringe(simulate_ramsey(cfg), std::nullopt, cfg.shots_per_point).tau_s;
  };
  const double tau_light = fitted_tau(kSigmaMinusShift);
  o.require(tau_light >= 0.015 && tau_light <= 0.060,
            fmt::format("sigma_f = {:.2f} Hz (1/e at {:.2f} ms): fitted tau = {:.1f} ms in [15, 60] ms", sigma_f,
                        1e3 * kSigmaMinusTau, 1e3 * tau_light));
  // Near magic only the residual shift carries intensity noise.
  const double tau_magic = fitted_tau(15.3);
  o.require(tau_magic > 1.0, fmt::format("residual 15.3 Hz shift, same sigma_rel: fitted tau = {:.3g} s > 1 s "
                                         "({:.0f}x the unprotected fringe)",
                                         tau_magic, tau_magic / tau_light));
  return o;
}

Outcome criterion9() {
  Outcome o;
  double orth3 = 0.0, sym3 = 0.0;
  for (int t1 = 0; t1 <= 12; ++t1)
    for (int t2 = 0; t2 <= 12; ++t2)
      for (int t3 = std::abs(t1 - t2); t3 <= std::min(t1 + t2, 12); t3 += 2) {
        for (int t3p = std::abs(t1 - t2); t3p <= std::min(t1 + t2, 12); t3p += 2)
          for (int m3 = -std::min(t3, t3p); m3 <= std::min(t3, t3p); m3 += 2) {
            double s = 0.0;
            for (int m1 = -t1; m1 <= t1; m1 += 2) {
              const int m2 = -m1 - m3;
              if (std::abs(m2) > t2) continue;
              s += (t3 + 1) * wigner3j(h(t1), h(t2), h(t3), h(m1), h(m2), h(m3)) *
                   wigner3j(h(t1), h(t2), h(t3p), h(m1), h(m2), h(m3));
            }
            orth3 = std::max(orth3, std::abs(s - (t3 == t3p ? 1.0 : 0.0)));
          }
        const double phase = ((t1 + t2 + t3) / 2) % 2 ? -1.0 : 1.0;
        for (int m1 = -t1; m1 <= t1; m1 += 2)
          for (int m2 = -t2; m2 <= t2; m2 += 2) {
            const int m3 = -m1 - m2;
            if (std::abs(m3) > t3) continue;
            const double w = wigner3j(h(t1), h(t2), h(t3), h(m1), h(m2), h(m3));
            sym3 = std::max({sym3, std::abs(w - wigner3j(h(t2), h(t3), h(t1), h(m2), h(m3), h(m1))),
                             std::abs(w - phase * wigner3j(h(t2), h(t1), h(t3), h(m2), h(m1), h(m3))),
                             std::abs(w - phase * wigner3j(h(t1), h(t2), h(t3), h(-m1), h(-m2), h(-m3)))});
          }
      }
  double orth6 = 0.0, sym6 = 0.0;
  for (int a = 0; a <= 12; a += 1)
    for (int b = 0; b <= 12; ++b)
      for (int c = 0; c <= 12; ++c)
        for (int d = 0; d <= 12; ++d) {
          for (int f = 0; f <= 12; ++f) {
            if (!triangle(h(a), h(d), h(f)) || !triangle(h(c), h(b), h(f))) continue;
            for (int fp = f; fp <= 12; fp += 2) {
              if (!triangle(h(a), h(d), h(fp)) || !triangle(h(c), h(b), h(fp))) continue;
              double s = 0.0;
              for (int x = std::abs(a - b); x <= a + b; x += 2)  // full range of the summed j
                s += (x + 1) * (f + 1) * wigner6j(h(a), h(b), h(x), h(c), h(d), h(f)) *
                     wigner6j(h(a), h(b), h(x), h(c), h(d), h(fp));
              orth6 = std::max(orth6, std::abs(s - (f == fp ? 1.0 : 0.0)));
            }
            for (int e = 0; e <= 12; ++e) {
              const double w = wigner6j(h(a), h(b), h(e), h(c), h(d), h(f));
              sym6 = std::max({sym6, std::abs(w - wigner6j(h(b), h(a), h(e), h(d), h(c), h(f))),
                               std::abs(w - wigner6j(h(a), h(e), h(b), h(c), h(f), h(d))),
                               std::abs(w - wigner6j(h(c), h(d), h(e), h(a), h(b), h(f)))});
            }
          }
        }
  o.require(orth3 < 1e-12 && sym3 < 1e-12,
            fmt::format("3j orthogonality {:.1e}, symmetry {:.1e} (j <= 6)", orth3, sym3));
  o.require(orth6 < 1e-12 && sym6 < 1e-12,
            fmt::format("6j orthogonality {:.1e}, symmetry {:.1e} (j <= 6)", orth6, sym6));
  double sum_rule = 0.0;
  for (const auto& d : atom().dipoles) {
    const double Jl = atom().level(d.lower).J.value();
    const double expect = d.reduced_me_au * d.reduced_me_au / (2 * Jl + 1);
    for (const auto& lo : hyperfine_basis(atom(), d.lower)) {
      double s = 0.0;
      for (const auto& up : hyperfine_basis(atom(), d.upper))
        for (int q = -1; q <= 1; ++q) s += std::pow(dipole_element(atom(), up, lo, q), 2);
      sum_rule = std::max(sum_rule, std::abs(s / expect - 1));
    }
  }
  o.require(sum_rule < 1e-10, fmt::format("dipole sum rule {:.1e} relative", sum_rule));
  return o;
}

Outcome criterion10() {
  Outcome o;
  SequenceModel m;
  m.shots = 100000;
  for (int state : {1, 0}) {
    const auto st = run_sequence(m, state);
    const auto pred = predict_sequence(m, state);
    const double sp = std::sqrt(pred.herald_pass * (1 - pred.herald_pass) / m.shots);
    const double zp = (st.herald_pass.value - pred.herald_pass) / sp;
    const auto& e = state == 1 ? *st.readout_error_bright : *st.readout_error_dark;
    const double se = std::sqrt(pred.readout_error * (1 - pred.readout_error) / e.trials);
    const double ze = (e.value - pred.readout_error) / se;
    o.require(std::abs(zp) < 4 && std::abs(ze) < 4,
              fmt::format("F={} prepared: pass {:.5f} vs {:.5f} ({:+.2f} sigma), error {:.5f} vs {:.5f} ({:+.2f} sigma)",
                          state ? 3 : 2, st.herald_pass.value, pred.herald_pass, zp, e.value,
                          pred.readout_error, ze));
    if (state == 1) {
      const double s3 = std::sqrt(0.0011 * (1 - 0.0011) / e.trials);
      o.require(std::abs(e.value - 0.0011) < 3 * s3,
                fmt::format("shelving fidelity 0.9989: error {:.5f} vs 0.0011 ({:+.2f} sigma)", e.value,
                            (e.value - 0.0011) / s3));
    }
  }
  return o;
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "magicpol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) throw std::runtime_error("magicpol " + args[1] + " exited with " + std::to_string(code));
  std::istringstream in(out.str());
  std::string line, body;
  while (std::getline(in, line))
    if (line.rfind("# command:", 0) != 0) body += line + '\n';
  return body;
}

Outcome criterion11() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands = {
      {"ramsey", "--light-shift", "-283.1", "--sigma-rel", "0.026", "--drift", "0.33", "--shot-time", "0.05"},
      {"raman-scan", "--fit"},
      {"sequence", "--shots", "20000"},
      {"sequence", "--state", "0", "--shots", "20000"},
  };
  for (const auto& cmd : commands) {
    auto with = [&](const std::string& threads) {
      std::vector<std::string> a = {"--seed", "11", "--threads", threads};
      a.insert(a.end(), cmd.begin(), cmd.end());
      return run_cli(a);
    };
    const auto first = with("1"), again = with("1"), many = with("8"), all = with("0");
    o.require(first == again && first == many && first == all,
              fmt::format("{}: identical across reruns and 1/8/all threads ({} bytes)", cmd[0], first.size()));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 64;
    }
  }
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8,
                                                          criterion9, criterion10, criterion11};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "no criterion " << only << '\n';
    return 64;
  }
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only && static_cast<int>(k + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.time_limit_s > 0.0) o.require(dt < o.time_limit_s, fmt::format("runtime < {:g} s", o.time_limit_s));
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << o.detail
              << fmt::format(" ({:.2f} s)", dt) << std::endl;
    failures += !o.pass;
  }
  return failures;
}
