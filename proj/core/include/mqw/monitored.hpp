#pragma once

#include <cstdint>
#include <variant>

#include "mqw/detection.hpp"
#include "mqw/gates.hpp"
#include "mqw/linalg.hpp"
#include "mqw/noise.hpp"

namespace mqw {

// Evolution fed to the trajectory sampler: either a fixed round unitary on an
// arbitrary finite dimension, or a gate-level detection circuit.
class EvolutionSource {
 public:
  static EvolutionSource exact(UnitaryMatrix round_unitary);
  static EvolutionSource circuit(Circuit c);

  bool is_exact() const { return std::holds_alternative<UnitaryMatrix>(source_); }
  const UnitaryMatrix& unitary() const { return std::get<UnitaryMatrix>(source_); }
  const Circuit& circuit() const { return std::get<Circuit>(source_); }

 private:
  explicit EvolutionSource(std::variant<UnitaryMatrix, Circuit> s) : source_(std::move(s)) {}
  std::variant<UnitaryMatrix, Circuit> source_;
};

// Deterministic first-detection PMF: iterates the unnormalized survival
// amplitude chi_1 = U|j>, p_n = |<d|chi_n>|^2, chi_{n+1} = U (1 - |d><d|) chi_n.
// Works for any finite dimension.
FirstDetectionDistribution amplitude_distribution(const UnitaryMatrix& round_unitary,
                                                  const DetectionProtocol& protocol);

// Probability that no detection happened in rounds 1..n (squared norm of the
// projected amplitude), equal to 1 - cumulative detection probability.
double survival_probability(const UnitaryMatrix& round_unitary,
                            const DetectionProtocol& protocol, int n);

// Monte-Carlo trajectories with projective collapse each round. Shot s uses
// the (seed, s) substream, so results are independent of `threads` and
// reproduce bit-exactly for a fixed seed. Detection ends the shot; shots a
// sector post-selection rejects are discarded entirely. Gate depolarizing
// applies to circuit sources only; readout noise needs a single detection bit
// (dim 2 exact sources or any circuit).
FirstDetectionDistribution sample_trajectories(const EvolutionSource& source,
                                               const DetectionProtocol& protocol,
                                               const NoiseModel& noise,
                                               const MitigationScheme& mitigation,
                                               std::int64_t shots, std::uint64_t seed,
                                               int threads = 0);

}  // namespace mqw
