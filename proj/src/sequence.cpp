#include "magicpol/sequence.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <random>

#include "magicpol/errors.hpp"
#include "magicpol/parallel.hpp"
#include "magicpol/random.hpp"

namespace magicpol {

void SequenceModel::validate() const {
  for (double p : {transfer_prob, shelving_fidelity})
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sequence: probabilities must lie in [0, 1]");
  for (double m : {herald_bright_mean, herald_dark_mean, readout_bright_mean, readout_dark_mean})
    if (!(m >= 0.0)) throw ValidationError("sequence: Poisson means must be >= 0");
  if (!(herald_bright_mean > herald_dark_mean) || !(readout_bright_mean > readout_dark_mean))
    throw ValidationError("sequence: bright mean must exceed dark mean");
  if (threshold < 0) throw ValidationError("sequence: threshold must be >= 0");
  if (shots < 1) throw ValidationError("sequence: shots must be >= 1");
}

double poisson_below(int t, double mean) {
  if (t <= 0) return 0.0;
  if (mean == 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(t), mean);
}

Rate wilson_rate(long k, long n) {
  Rate r;
  r.successes = k;
  r.trials = n;
  if (n == 0) return r;
  const double z = 1.96, p = static_cast<double>(k) / n, z2n = z * z / n;
  const double center = (p + 0.5 * z2n) / (1 + z2n);
  const double half = z * std::sqrt(p * (1 - p) / n + 0.25 * z2n / n) / (1 + z2n);
  r.value = p;
  r.lo = std::max(0.0, center - half);
  r.hi = std::min(1.0, center + half);
  return r;
}

namespace {

struct Shot {
  int herald_counts;
  int readout_counts;
  bool kept;
  bool bright;
};

}  // namespace

SequenceStats run_sequence(const SequenceModel& m, int true_m_state) {
  m.validate();
  if (true_m_state != 0 && true_m_state != 1) throw ValidationError("sequence: state must be 0 or 1");
  std::vector<Shot> shots(static_cast<std::size_t>(m.shots));
  parallel_for(shots.size(), [&](std::size_t i) {
    auto rng = stream(m.seed, 0, i);
    const bool transferred = uniform01(rng) < m.transfer_prob;
    // Population left in S1/2 fluoresces during the herald window.
    std::poisson_distribution<int> herald(transferred ? m.herald_dark_mean : m.herald_bright_mean);
    Shot s{herald(rng), -1, false, false};
    s.kept = s.herald_counts < m.threshold;
    if (s.kept) {
      bool fluoresces = !transferred;
      if (transferred && true_m_state == 1) fluoresces = uniform01(rng) < m.shelving_fidelity;
      std::poisson_distribution<int> readout(fluoresces ? m.readout_bright_mean : m.readout_dark_mean);
      s.readout_counts = readout(rng);
      s.bright = s.readout_counts >= m.threshold;
    }
    shots[i] = s;
  });

  SequenceStats st;
  long kept = 0, errors = 0;
  for (const auto& s : shots) {
    if (static_cast<std::size_t>(s.herald_counts) >= st.herald_histogram.size())
      st.herald_histogram.resize(s.herald_counts + 1, 0);
    ++st.herald_histogram[s.herald_counts];
    if (!s.kept) continue;
    ++kept;
    if (static_cast<std::size_t>(s.readout_counts) >= st.readout_histogram.size())
      st.readout_histogram.resize(s.readout_counts + 1, 0);
    ++st.readout_histogram[s.readout_counts];
    if (s.bright != (true_m_state == 1)) ++errors;
  }
  st.herald_pass = wilson_rate(kept, m.shots);
  st.discarded = m.shots - kept;
  (true_m_state == 1 ? st.readout_error_bright : st.readout_error_dark) = wilson_rate(errors, kept);
  return st;
}

SequencePrediction predict_sequence(const SequenceModel& m, int true_m_state) {
  m.validate();
  const double keep_t = m.transfer_prob * poisson_below(m.threshold, m.herald_dark_mean);
  const double keep_u = (1 - m.transfer_prob) * poisson_below(m.threshold, m.herald_bright_mean);
  const double read_bright = 1 - poisson_below(m.threshold, m.readout_bright_mean);
  const double read_dark_as_bright = 1 - poisson_below(m.threshold, m.readout_dark_mean);
  SequencePrediction out;
  out.herald_pass = keep_t + keep_u;
  if (out.herald_pass == 0.0) return out;
  double err_t, err_u;
  if (true_m_state == 1) {
    const double p_bright =
        m.shelving_fidelity * read_bright + (1 - m.shelving_fidelity) * read_dark_as_bright;
    err_t = 1 - p_bright;
    err_u = 1 - read_bright;
  } else {
    err_t = read_dark_as_bright;
    err_u = read_bright;
  }
  out.readout_error = (keep_t * err_t + keep_u * err_u) / out.herald_pass;
  return out;
}

double threshold_error(int t, double bright, double dark) {
  return 0.5 * ((1 - poisson_below(t, dark)) + poisson_below(t, bright));
}

ThresholdChoice optimal_threshold(double bright, double dark) {
  if (!(dark >= 0.0) || !(bright > dark))
    throw ValidationError("optimal_threshold: need bright mean > dark mean >= 0");
  const int tmax = static_cast<int>(std::ceil(bright + 10 * std::sqrt(bright)));
  ThresholdChoice best{0, threshold_error(0, bright, dark)};
  for (int t = 1; t <= tmax; ++t) {
    const double e = threshold_error(t, bright, dark);
    if (e < best.error) best = {t, e};
  }
  return best;
}

}  // namespace magicpol
