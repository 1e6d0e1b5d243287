#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mqw {

enum class DetectionMode { FirstReturn, FirstTransition };

// Basis indices live in the evolution space of the source they are used with:
// the matrix basis for exact sources, {0,1} for single-qubit circuits (equal
// to the canonical two-site basis), {1,2} (=|01>,|10>) for two-qubit circuits.
struct DetectionProtocol {
  int initial_state = 1;
  int detect_state = 1;
  DetectionMode mode = DetectionMode::FirstReturn;
  int n_measurements = 40;

  void validate(int dim) const;  // throws std::invalid_argument
  static DetectionProtocol first_return(int j, int n_measurements);
  static DetectionProtocol first_transition(int j, int d, int n_measurements);
};

// First-detection PMF over rounds 1..N. probabilities[n-1] = p_n. Sums plus
// undetected_mass give 1 within kDerivedTol (deterministic) or exactly as a
// ratio of counts (sampled). n_shots is empty for deterministic results and
// holds the accepted shot count for sampled ones; rejected_shots counts
// sector-post-selection discards (never accepted nor undetected).
struct FirstDetectionDistribution {
  std::vector<double> probabilities;
  double undetected_mass = 0.0;
  std::optional<std::int64_t> n_shots;
  std::int64_t rejected_shots = 0;

  int n_max() const { return static_cast<int>(probabilities.size()); }
  double total_detected() const;
};

// Unnormalized truncated sums: mean = sum n p_n, second_moment = sum n^2 p_n,
// variance = second_moment - mean^2 (>= 0 by Cauchy-Schwarz even truncated),
// detection_probability = sum p_n.
struct DetectionMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double detection_probability = 0.0;
};

DetectionMoments detection_moments(const FirstDetectionDistribution& dist);

// Standard error of the truncated sampled mean (undetected shots contribute 0);
// empty for deterministic distributions.
std::optional<double> mean_standard_error(const FirstDetectionDistribution& dist);

}  // namespace mqw
