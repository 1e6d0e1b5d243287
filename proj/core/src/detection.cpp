#include "mqw/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace mqw {

void DetectionProtocol::validate(int dim) const {
  if (n_measurements < 1)
    throw std::invalid_argument("DetectionProtocol.n_measurements must be >= 1");
  if (initial_state < 0 || initial_state >= dim)
    throw std::invalid_argument("DetectionProtocol.initial_state out of range");
  if (detect_state < 0 || detect_state >= dim)
    throw std::invalid_argument("DetectionProtocol.detect_state out of range");
  const bool is_return = detect_state == initial_state;
  if (mode == DetectionMode::FirstReturn && !is_return)
    throw std::invalid_argument("DetectionProtocol: FirstReturn requires detect_state == initial_state");
  if (mode == DetectionMode::FirstTransition && is_return)
    throw std::invalid_argument("DetectionProtocol: FirstTransition requires detect_state != initial_state");
}

DetectionProtocol DetectionProtocol::first_return(int j, int n_measurements) {
  return DetectionProtocol{j, j, DetectionMode::FirstReturn, n_measurements};
}

DetectionProtocol DetectionProtocol::first_transition(int j, int d, int n_measurements) {
  return DetectionProtocol{j, d, DetectionMode::FirstTransition, n_measurements};
}

double FirstDetectionDistribution::total_detected() const {
  double total = 0.0;
  for (double p : probabilities) total += p;
  return total;
}

DetectionMoments detection_moments(const FirstDetectionDistribution& dist) {
  DetectionMoments m;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double p = dist.probabilities[i];
    m.detection_probability += p;
    m.mean += n * p;
    m.second_moment += n * n * p;
  }
  m.variance = m.second_moment - m.mean * m.mean;
  return m;
}

std::optional<double> mean_standard_error(const FirstDetectionDistribution& dist) {
  if (!dist.n_shots.has_value()) return std::nullopt;
  const auto shots = static_cast<double>(*dist.n_shots);
  if (shots <= 0.0) return std::nullopt;
  const DetectionMoments m = detection_moments(dist);
  return std::sqrt(std::max(m.variance, 0.0) / shots);
}

}  // namespace mqw
