#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace magicpol {

/// Stochastic channel model of the herald / shelve / read cycle.
/// Counts below `threshold` read dark, at or above it read bright.
struct SequenceModel {
  double transfer_prob = 0.925;     // 1762 nm transfer to the metastable manifold
  double herald_bright_mean = 30.0; // placeholder window statistics
  double herald_dark_mean = 1.0;
  double readout_bright_mean = 30.0;
  double readout_dark_mean = 1.0;
  double shelving_fidelity = 0.9989;  // F=3 shelved to the bright outcome
  int threshold = 9;
  long shots = 10000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Rate {
  double value = 0.0;
  double lo = 0.0;  // Wilson 95% interval
  double hi = 0.0;
  long successes = 0;
  long trials = 0;
};

struct SequenceStats {
  Rate herald_pass;
  long discarded = 0;
  /// Kept shots misread when F=3 (expected bright) was prepared.
  std::optional<Rate> readout_error_bright;
  /// Kept shots misread when F=2 (expected dark) was prepared.
  std::optional<Rate> readout_error_dark;
  std::vector<long> herald_histogram;   // index = counts, all shots
  std::vector<long> readout_histogram;  // index = counts, kept shots
};

/// true_m_state: 1 prepares F=3, 0 prepares F=2. Deterministic in the seed
/// and independent of the thread count.
SequenceStats run_sequence(const SequenceModel& model, int true_m_state);

struct SequencePrediction {
  double herald_pass = 0.0;
  double readout_error = 0.0;
};

/// Exact pass rate and misclassification rate of the same channel model.
SequencePrediction predict_sequence(const SequenceModel& model, int true_m_state);

/// P(N < t) for N ~ Poisson(mean).
double poisson_below(int t, double mean);

struct ThresholdChoice {
  int threshold = 0;
  double error = 0.0;  // (P(dark >= t) + P(bright < t)) / 2
};

/// Balanced misclassification error at threshold t.
double threshold_error(int t, double bright_mean, double dark_mean);

/// Exhaustive scan over [0, ceil(bright + 10 sqrt(bright))].
ThresholdChoice optimal_threshold(double bright_mean, double dark_mean);

Rate wilson_rate(long successes, long trials);

}  // namespace magicpol
