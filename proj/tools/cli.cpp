#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "magicpol/atom.hpp"
#include "magicpol/constants.hpp"
#include "magicpol/errors.hpp"
#include "magicpol/magic.hpp"
#include "magicpol/optics.hpp"
#include "magicpol/parallel.hpp"
#include "magicpol/polarizability.hpp"
#include "magicpol/ramsey.hpp"
#include "magicpol/sequence.hpp"
#include "magicpol/spectroscopy.hpp"
#include "magicpol/table.hpp"

#ifndef MAGICPOL_VERSION
#define MAGICPOL_VERSION "0.0.0"
#endif

namespace magicpol::cli {

namespace {

struct Globals {
  std::string atom = "ba133";
  std::uint64_t seed = 1;
  std::string out = "-";
  unsigned threads = 0;
  std::string command_line;
};

struct Context {
  Globals g;
  std::ostream* out = nullptr;
  std::filesystem::path atom_path;
  std::string atom_hash;

  void resolve_atom() {
    atom_path = find_atom_file(g.atom);
    std::ifstream in(atom_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    atom_hash = fnv1a_hex(ss.str());
  }

  AtomSpec atom() const { return load_atom(atom_path); }

  Table table(std::vector<std::string> columns) const {
    Table t;
    t.comments = {"magicpol " MAGICPOL_VERSION, "command: " + g.command_line,
                  "atom: " + atom_path.filename().string() + " fnv1a=" + atom_hash,
                  "seed: " + std::to_string(g.seed)};
    t.columns = std::move(columns);
    return t;
  }

  void emit(const Table& t) const {
    if (g.out == "-") {
      write_csv(*out, t);
      return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + g.out);
    write_csv(f, t);
  }
};

std::string join_args(int argc, const char* const* argv) {
  std::string s = "magicpol";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

Table read_table_arg(const std::string& path) {
  if (path == "-") return read_csv(std::cin, "<stdin>");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_csv(in, path);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ValidationError("grid needs at least one point");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

std::string num(double x) { return format_number(x); }

// ---------------------------------------------------------------- commands

struct PolarizabilityArgs {
  std::string level = "6s_S1/2";
  std::vector<std::string> F;
  double wavelength_nm = 532.0;
  double guard_MHz = 1000.0;
  bool no_cr = false;
};

void cmd_polarizability(Context& ctx, const PolarizabilityArgs& a) {
  const auto atom = ctx.atom();
  LightShiftOptions opts;
  opts.guard_band_MHz = a.guard_MHz;
  opts.counter_rotating = !a.no_cr;
  std::vector<HalfInt> Fs;
  if (a.F.empty()) {
    Fs = allowed_F(atom, a.level);
  } else {
    for (const auto& f : a.F) Fs.push_back(HalfInt::parse(f));
  }
  const double laser = std::isinf(a.wavelength_nm) ? 0.0 : constants::wavelength_to_MHz(a.wavelength_nm);
  auto t = ctx.table({"F", "wavelength_nm", "scalar_au", "vector_au", "tensor_au", "scalar_Hz_per_W_m2",
                      "vector_Hz_per_W_m2", "tensor_Hz_per_W_m2"});
  t.comments.push_back("level: " + a.level);
  for (HalfInt F : Fs) {
    const auto p = eq1_polarizabilities(atom, a.level, F, laser, opts);
    t.add_cells({F.str(), num(a.wavelength_nm), num(p.scalar), num(p.vector), num(p.tensor),
                 num(PolarizabilitySet::to_SI(p.scalar)), num(PolarizabilitySet::to_SI(p.vector)),
                 num(PolarizabilitySet::to_SI(p.tensor))});
  }
  ctx.emit(t);
}

struct MagicArgs {
  std::string level = "6s_S1/2";
  std::vector<double> B;
  std::vector<double> A;
  double A_min = -1.0, A_max = 1.0;
  int A_steps = 21;
  std::vector<double> wavelengths;
  double theta_deg = 180.0;
  bool no_cr = false;
  std::string points_in;
};

MagicProblem problem_from(const AtomSpec& atom, const MagicArgs& a, double wavelength) {
  MagicProblem p;
  p.level = a.level;
  p.pair = default_clock_pair(atom, a.level);
  p.wavelength_nm = wavelength;
  p.geometry.theta_kz_deg = a.theta_deg;
  p.options.counter_rotating = !a.no_cr;
  return p;
}

void cmd_magic_scan(Context& ctx, const MagicArgs& a) {
  if (a.B.empty()) throw ValidationError("magic-scan: empty B list");
  const auto A_grid = a.A.empty() ? linspace(a.A_min, a.A_max, a.A_steps) : a.A;
  if (A_grid.empty()) throw ValidationError("magic-scan: empty A grid");
  const auto atom = ctx.atom();
  const auto p = problem_from(atom, a, a.wavelengths.empty() ? 532.0 : a.wavelengths.front());
  const auto rows = helicity_scan(atom, p, a.B, A_grid);
  auto t = ctx.table({"B_G", "A", "diff_shift_Hz_per_kWcm2"});
  t.comments.push_back("wavelength_nm: " + num(p.wavelength_nm) + " theta_kz_deg: " + num(a.theta_deg));
  for (double B : a.B) {
    try {
      t.comments.push_back("zero_crossing B_G=" + num(B) + " A_magic=" + num(magic_helicity(atom, p, B)));
    } catch (const NoRootError&) {
      t.comments.push_back("zero_crossing B_G=" + num(B) + " A_magic=none");
    }
  }
  for (const auto& r : rows) t.add_row({r.B_G, r.A, r.sensitivity_Hz_per_kWcm2});
  ctx.emit(t);
}

void cmd_critical_field(Context& ctx, const MagicArgs& a) {
  if (a.wavelengths.empty()) throw ValidationError("critical-field: empty wavelength list");
  const auto atom = ctx.atom();
  std::vector<std::vector<std::string>> rows(a.wavelengths.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto p = problem_from(atom, a, a.wavelengths[i]);
    const auto r = critical_field(atom, p);
    rows[i] = {num(a.wavelengths[i]), num(r.B_c_G), to_string(r.method), num(eq2_estimate(atom, p, 1.0))};
  });
  auto t = ctx.table({"wavelength_nm", "Bc_G", "method", "eq2_Bc_G"});
  for (auto& r : rows) t.add_cells(std::move(r));
  ctx.emit(t);
}

void cmd_fit_bc(Context& ctx, const MagicArgs& a, double sigma_A, double sigma_B) {
  std::vector<MagicCurvePoint> pts;
  if (!a.points_in.empty()) {
    const auto in = read_table_arg(a.points_in);
    const auto B = in.column("B_G"), A = in.column("A_magic");
    const auto sA = in.column("sigma_A"), sB = in.column("sigma_B");
    for (Eigen::Index i = 0; i < B.size(); ++i) pts.push_back({B(i), A(i), sA(i), sB(i)});
  } else {
    const auto atom = ctx.atom();
    const auto p = problem_from(atom, a, a.wavelengths.empty() ? 532.0 : a.wavelengths.front());
    const auto Bs = a.B.empty() ? std::vector<double>{3, 4, 5, 7, 9} : a.B;
    pts.resize(Bs.size());
    parallel_for(Bs.size(), [&](std::size_t i) {
      pts[i] = {Bs[i], magic_helicity(atom, p, Bs[i]), sigma_A, sigma_B};
    });
  }
  const auto r = fit_critical_field(pts);
  auto t = ctx.table({"Bc_G", "sigma_G", "method", "points"});
  for (const auto& q : pts)
    t.comments.push_back("point B_G=" + num(q.B_G) + " A_magic=" + num(q.A_magic) +
                         " sigma_A=" + num(q.sigma_A) + " sigma_B=" + num(q.sigma_B));
  t.add_cells({num(r.B_c_G), num(r.sigma_G), to_string(r.method), std::to_string(pts.size())});
  ctx.emit(t);
}

struct RamseyArgs {
  RamseyConfig cfg;
  double wait_max = 0.030, wait_step = 0.00025;
};

void cmd_ramsey(Context& ctx, RamseyArgs a) {
  if (!(a.wait_step > 0.0)) throw ValidationError("ramsey: wait step must be > 0");
  a.cfg.noise.seed = ctx.g.seed;
  const int n = static_cast<int>(std::floor(a.wait_max / a.wait_step + 1e-9)) + 1;
  a.cfg.wait_grid_s.clear();
  for (int i = 0; i < n; ++i) a.cfg.wait_grid_s.push_back(i * a.wait_step);
  const auto rows = simulate_ramsey(a.cfg);
  auto t = ctx.table({"wait_s", "p0", "stderr"});
  t.comments.push_back("detuning_Hz: " + num(a.cfg.detuning_Hz) + " light_shift_Hz: " +
                       num(a.cfg.light_shift_Hz) + " sigma_rel: " + num(a.cfg.noise.sigma_rel) +
                       " drift_Hz_per_min: " + num(a.cfg.noise.drift_Hz_per_min));
  t.comments.push_back("shots_per_point: " + std::to_string(a.cfg.shots_per_point));
  for (const auto& r : rows) t.add_row({r.wait_s, r.p0, r.std_error});
  ctx.emit(t);
}

struct FitFringeArgs {
  std::string in = "-";
  int shots = 300;
  double guess_f = 0.0, guess_tau = 0.03, guess_A = 1.0;
};

void cmd_fit_fringe(Context& ctx, const FitFringeArgs& a) {
  const auto in = read_table_arg(a.in);
  const auto w = in.column("wait_s"), p = in.column("p0"), s = in.column("stderr");
  std::vector<FringePoint> data;
  for (Eigen::Index i = 0; i < w.size(); ++i) data.push_back({w(i), p(i), s(i)});
  std::optional<FringeGuess> guess;
  if (a.guess_f > 0.0) guess = FringeGuess{a.guess_A, a.guess_tau, a.guess_f};
  const auto f = fit_fringe(data, guess, a.shots);
  auto t = ctx.table({"amplitude", "sigma_amplitude", "tau_s", "sigma_tau_s", "f_ramsey_Hz",
                      "sigma_f_Hz", "chi2", "converged"});
  t.add_row({f.amplitude, f.sigma_amplitude, f.tau_s, f.sigma_tau_s, f.f_ramsey_Hz, f.sigma_f_Hz, f.chi2,
             f.converged ? 1.0 : 0.0});
  ctx.emit(t);
}

struct RamanArgs {
  double rabi_Hz = 0.0;
  double pulse_s = 234e-6;
  double center_Hz = 89.6697e6;
  double scan_center_Hz = NAN;
  double aom_dp_MHz = NAN, aom_sp_MHz = NAN;
  double span_Hz = 12000.0, step_Hz = 200.0;
  int shots = 300;
  bool fit = false;
};

void cmd_raman_scan(Context& ctx, const RamanArgs& a) {
  RabiScanConfig cfg;
  cfg.pulse_time_s = a.pulse_s;
  cfg.rabi_Hz = a.rabi_Hz > 0.0 ? a.rabi_Hz : pi_pulse_rabi_Hz(a.pulse_s);
  cfg.center_true_Hz = a.center_Hz;
  if (!std::isnan(a.aom_dp_MHz) || !std::isnan(a.aom_sp_MHz)) {
    if (std::isnan(a.aom_dp_MHz) || std::isnan(a.aom_sp_MHz))
      throw ValidationError("raman-scan: give both --aom-double-pass and --aom-single-pass");
    cfg.scan_center_Hz = raman_beat_MHz(a.aom_dp_MHz, a.aom_sp_MHz) * 1e6;
  } else {
    cfg.scan_center_Hz = std::isnan(a.scan_center_Hz) ? a.center_Hz : a.scan_center_Hz;
  }
  if (!(a.step_Hz > 0.0) || !(a.span_Hz > 0.0)) throw ValidationError("raman-scan: span and step must be > 0");
  const int half = static_cast<int>(std::floor(0.5 * a.span_Hz / a.step_Hz + 1e-9));
  for (int i = -half; i <= half; ++i) cfg.detuning_grid_Hz.push_back(i * a.step_Hz);
  cfg.shots_per_point = a.shots;
  cfg.seed = ctx.g.seed;
  const auto rows = simulate_raman_scan(cfg);
  auto t = ctx.table({"frequency_Hz", "p", "stderr"});
  t.comments.push_back("rabi_Hz: " + num(cfg.rabi_Hz) + " pulse_s: " + num(cfg.pulse_time_s) +
                       " scan_center_Hz: " + num(cfg.scan_center_Hz));
  if (a.fit) {
    const auto f = fit_line_center(rows, cfg.pulse_time_s, cfg.shots_per_point);
    t.comments.push_back("fit center_Hz=" + num(f.center_Hz) + " sigma_Hz=" + num(f.sigma_Hz) +
                         " rabi_Hz=" + num(f.rabi_Hz) + " converged=" + (f.converged ? "1" : "0"));
  }
  for (const auto& r : rows) t.add_row({r.frequency_Hz, r.p, r.std_error});
  ctx.emit(t);
}

struct SequenceArgs {
  SequenceModel model;
  int state = 1;
  std::string histograms;
};

void cmd_sequence(Context& ctx, SequenceArgs a) {
  a.model.seed = ctx.g.seed;
  const auto st = run_sequence(a.model, a.state);
  const auto pred = predict_sequence(a.model, a.state);
  const auto& err = a.state == 1 ? st.readout_error_bright : st.readout_error_dark;
  auto t = ctx.table({"state", "shots", "herald_pass_rate", "herald_pass_lo", "herald_pass_hi", "discarded",
                      "readout_error", "readout_error_lo", "readout_error_hi", "predicted_pass_rate",
                      "predicted_readout_error"});
  t.comments.push_back("threshold: " + std::to_string(a.model.threshold) +
                       " transfer_prob: " + num(a.model.transfer_prob) +
                       " shelving_fidelity: " + num(a.model.shelving_fidelity));
  t.add_cells({std::to_string(a.state), std::to_string(a.model.shots), num(st.herald_pass.value),
               num(st.herald_pass.lo), num(st.herald_pass.hi), std::to_string(st.discarded), num(err->value),
               num(err->lo), num(err->hi), num(pred.herald_pass), num(pred.readout_error)});
  ctx.emit(t);
  if (!a.histograms.empty()) {
    auto h = ctx.table({"counts", "occurrences", "window"});
    for (std::size_t i = 0; i < st.herald_histogram.size(); ++i)
      h.add_cells({std::to_string(i), std::to_string(st.herald_histogram[i]), "herald"});
    for (std::size_t i = 0; i < st.readout_histogram.size(); ++i)
      h.add_cells({std::to_string(i), std::to_string(st.readout_histogram[i]), "readout"});
    std::ofstream f(a.histograms, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + a.histograms);
    write_csv(f, h);
  }
}

struct DivergenceArgs {
  double w = 0.0, w0 = 0.0, f = 0.0;
};

void cmd_divergence(Context& ctx, const DivergenceArgs& a) {
  const double theta = beam_divergence(a.w, a.w0, a.f);
  auto t = ctx.table({"theta_rad", "theta_mrad", "theta_deg"});
  t.add_row({theta, 1e3 * theta, theta * 180.0 / constants::pi});
  ctx.emit(t);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polarizabilities, magic polarization and critical fields of hyperfine clock qubits,\n"
               "with Ramsey, Raman and readout-sequence simulators.",
               "magicpol"};
  app.set_version_flag("--version", MAGICPOL_VERSION);
  app.require_subcommand(1);
  Context ctx;
  ctx.out = &out;
  ctx.g.command_line = join_args(argc, argv);
  app.add_option("--atom", ctx.g.atom, "Atom data file, or a name looked up in $MAGICPOL_DATA_PATH and the bundled data")
      ->capture_default_str();
  app.add_option("--seed", ctx.g.seed, "Seed for Monte Carlo commands")->capture_default_str();
  app.add_option("--out", ctx.g.out, "Output CSV path, '-' for stdout")->capture_default_str();
  app.add_option("--threads", ctx.g.threads, "Worker threads, 0 for all cores")->capture_default_str();

  std::function<void()> action;

  PolarizabilityArgs pol;
  auto* c_pol = app.add_subcommand("polarizability", "Scalar, vector and tensor polarizabilities of hyperfine levels");
  c_pol->add_option("--level", pol.level, "Fine-structure level label")->capture_default_str();
  c_pol->add_option("--F", pol.F, "Hyperfine F values (default: all)")->delimiter(',');
  c_pol->add_option("--wavelength", pol.wavelength_nm, "Laser wavelength in nm ('inf' for the static limit)")->required();
  c_pol->add_option("--guard-band", pol.guard_MHz, "Resonance guard band, MHz")->capture_default_str();
  c_pol->add_flag("--no-counter-rotating", pol.no_cr, "Drop the counter-rotating denominators");
  c_pol->callback([&] { action = [&] { cmd_polarizability(ctx, pol); }; });

  MagicArgs mag;
  auto* c_scan = app.add_subcommand("magic-scan", "Differential light-shift sensitivity on a (B, A) grid");
  c_scan->add_option("--B", mag.B, "Magnetic fields, G")->delimiter(',')->required();
  c_scan->add_option("--A", mag.A, "Explicit helicity grid")->delimiter(',');
  c_scan->add_option("--A-min", mag.A_min)->capture_default_str();
  c_scan->add_option("--A-max", mag.A_max)->capture_default_str();
  c_scan->add_option("--A-steps", mag.A_steps)->capture_default_str();
  c_scan->add_option("--wavelength", mag.wavelengths, "Laser wavelength, nm (default 532)");
  c_scan->add_option("--level", mag.level)->capture_default_str();
  c_scan->add_option("--theta-kz", mag.theta_deg, "Angle between k and B, degrees")->capture_default_str();
  c_scan->add_flag("--no-counter-rotating", mag.no_cr);
  c_scan->callback([&] { action = [&] { cmd_magic_scan(ctx, mag); }; });

  auto* c_bc = app.add_subcommand("critical-field", "Critical field B_c per wavelength, with the closed-form estimate");
  c_bc->add_option("--wavelength", mag.wavelengths, "Wavelengths, nm")->delimiter(',')->required();
  c_bc->add_option("--level", mag.level)->capture_default_str();
  c_bc->add_option("--theta-kz", mag.theta_deg)->capture_default_str();
  c_bc->add_flag("--no-counter-rotating", mag.no_cr);
  c_bc->callback([&] { action = [&] { cmd_critical_field(ctx, mag); }; });

  double sigma_A = 1e-3, sigma_B = 1e-3;
  auto* c_fit = app.add_subcommand("fit-bc", "Fit A = B_c/B to magic points (from --in or computed at --B)");
  c_fit->add_option("--in", mag.points_in, "CSV with columns B_G,A_magic,sigma_A,sigma_B ('-' for stdin)");
  c_fit->add_option("--B", mag.B, "Fields at which to compute magic points")->delimiter(',');
  c_fit->add_option("--wavelength", mag.wavelengths, "Wavelength, nm (default 532)");
  c_fit->add_option("--sigma-A", sigma_A, "Uncertainty assigned to computed A")->capture_default_str();
  c_fit->add_option("--sigma-B", sigma_B, "Uncertainty assigned to B, G")->capture_default_str();
  c_fit->add_option("--level", mag.level)->capture_default_str();
  c_fit->add_option("--theta-kz", mag.theta_deg)->capture_default_str();
  c_fit->callback([&] { action = [&] { cmd_fit_bc(ctx, mag, sigma_A, sigma_B); }; });

  RamseyArgs ram;
  ram.cfg.detuning_Hz = 440.4;
  auto* c_ram = app.add_subcommand("ramsey", "Monte Carlo detuned Ramsey fringe");
  c_ram->add_option("--detuning", ram.cfg.detuning_Hz, "Qubit minus microwave frequency, Hz")->capture_default_str();
  c_ram->add_option("--light-shift", ram.cfg.light_shift_Hz, "Mean light shift of the qubit, Hz")->capture_default_str();
  c_ram->add_option("--pulse", ram.cfg.pulse_duration_s, "pi/2 pulse duration, s (0: instantaneous)")->capture_default_str();
  c_ram->add_option("--wait-max", ram.wait_max, "Longest wait, s")->capture_default_str();
  c_ram->add_option("--wait-step", ram.wait_step, "Wait step, s")->capture_default_str();
  c_ram->add_option("--shots", ram.cfg.shots_per_point, "Shots per point")->capture_default_str();
  c_ram->add_option("--sigma-rel", ram.cfg.noise.sigma_rel, "Relative shot-to-shot intensity noise")->capture_default_str();
  c_ram->add_option("--drift", ram.cfg.noise.drift_Hz_per_min, "Qubit shift drift, Hz per minute")->capture_default_str();
  c_ram->add_option("--shot-time", ram.cfg.wall_clock_per_shot_s, "Wall-clock time per shot, s")->capture_default_str();
  c_ram->add_flag("--shift-during-pulses", ram.cfg.shift_during_pulses, "Apply the light shift during the pulses");
  c_ram->callback([&] { action = [&] { cmd_ramsey(ctx, ram); }; });

  FitFringeArgs ff;
  auto* c_ff = app.add_subcommand("fit-fringe", "Fit A exp(-t/tau) sin^2(pi f t) to a fringe CSV");
  c_ff->add_option("--in", ff.in, "Fringe CSV (wait_s,p0,stderr), '-' for stdin")->capture_default_str();
  c_ff->add_option("--shots", ff.shots, "Shots per point, sets the weight floor")->capture_default_str();
  c_ff->add_option("--guess-f", ff.guess_f, "Start frequency, Hz (default: periodogram)");
  c_ff->add_option("--guess-tau", ff.guess_tau)->capture_default_str();
  c_ff->add_option("--guess-A", ff.guess_A)->capture_default_str();
  c_ff->callback([&] { action = [&] { cmd_fit_fringe(ctx, ff); }; });

  RamanArgs rs;
  auto* c_rs = app.add_subcommand(
      "raman-scan",
      "Simulated Raman scan of a Rabi line. With --aom-double-pass/--aom-single-pass the scan\n"
      "center is the beat 2 f_dp - f_sp (e.g. 2 x 125 - 160 = 90 MHz).");
  c_rs->add_option("--rabi", rs.rabi_Hz, "Two-photon Rabi frequency, Hz (default: pi pulse)");
  c_rs->add_option("--pulse-time", rs.pulse_s, "Pulse time, s")->capture_default_str();
  c_rs->add_option("--center", rs.center_Hz, "True line center, Hz")->capture_default_str();
  c_rs->add_option("--scan-center", rs.scan_center_Hz, "Scan center, Hz (default: --center)");
  c_rs->add_option("--aom-double-pass", rs.aom_dp_MHz, "Double-passed AOM frequency, MHz");
  c_rs->add_option("--aom-single-pass", rs.aom_sp_MHz, "Single-passed AOM frequency, MHz");
  c_rs->add_option("--span", rs.span_Hz, "Full scan width, Hz")->capture_default_str();
  c_rs->add_option("--step", rs.step_Hz, "Scan step, Hz")->capture_default_str();
  c_rs->add_option("--shots", rs.shots)->capture_default_str();
  c_rs->add_flag("--fit", rs.fit, "Fit the line center and report it in the header");
  c_rs->callback([&] { action = [&] { cmd_raman_scan(ctx, rs); }; });

  SequenceArgs sq;
  auto* c_sq = app.add_subcommand("sequence", "Herald, shelve and read: Monte Carlo statistics");
  c_sq->add_option("--state", sq.state, "Prepared metastable state: 1 for F=3, 0 for F=2")->capture_default_str();
  c_sq->add_option("--transfer", sq.model.transfer_prob, "1762 nm transfer probability")->capture_default_str();
  c_sq->add_option("--herald-bright", sq.model.herald_bright_mean, "Herald-window Poisson mean, untransferred ion (placeholder default)")->capture_default_str();
  c_sq->add_option("--herald-dark", sq.model.herald_dark_mean, "Herald-window Poisson mean, transferred ion (placeholder default)")->capture_default_str();
  c_sq->add_option("--readout-bright", sq.model.readout_bright_mean, "Readout Poisson mean, bright (placeholder default)")->capture_default_str();
  c_sq->add_option("--readout-dark", sq.model.readout_dark_mean, "Readout Poisson mean, dark (placeholder default)")->capture_default_str();
  c_sq->add_option("--shelving-fidelity", sq.model.shelving_fidelity, "Probability that F=3 is shelved to the bright outcome")->capture_default_str();
  c_sq->add_option("--threshold", sq.model.threshold, "Counts at or above read bright")->capture_default_str();
  c_sq->add_option("--shots", sq.model.shots)->capture_default_str();
  c_sq->add_option("--histograms", sq.histograms, "Write count histograms (counts,occurrences,window) here");
  c_sq->callback([&] { action = [&] { cmd_sequence(ctx, sq); }; });

  DivergenceArgs dv;
  auto* c_dv = app.add_subcommand("divergence", "Beam divergence atan((w - w0)/(2 f))");
  c_dv->add_option("--w", dv.w, "Beam radius at the lens, m")->required();
  c_dv->add_option("--w0", dv.w0, "Input beam radius, m")->required();
  c_dv->add_option("--f", dv.f, "Focal length, m")->required();
  c_dv->callback([&] { action = [&] { cmd_divergence(ctx, dv); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    set_default_threads(ctx.g.threads);
    ctx.resolve_atom();
    if (action) action();
    return kOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace magicpol::cli
