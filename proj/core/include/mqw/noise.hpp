#pragma once

#include <array>
#include <optional>
#include <span>

#include "mqw/linalg.hpp"
#include "mqw/rng.hpp"

namespace mqw {

// Stochastic noise parameters, all probabilities in [0, 1]. Depolarizing
// rates apply per gate of the matching arity (pure-state unraveling: with the
// given probability a uniformly random non-identity Pauli on the gate's
// targets is inserted after the gate). Readout flips act on recorded bits
// only; the post-measurement state always follows the true outcome.
struct NoiseModel {
  double readout_flip_0to1 = 0.0;
  double readout_flip_1to0 = 0.0;
  double depolarizing_1q = 0.0;
  double depolarizing_2q = 0.0;

  bool is_zero() const;
  bool has_gate_noise() const { return depolarizing_1q > 0.0 || depolarizing_2q > 0.0; }
  void validate() const;  // throws std::invalid_argument
};

enum class MitigationKind { None, RepetitionMajority, SectorPostselect };

struct MitigationScheme {
  MitigationKind kind = MitigationKind::None;
};

// Flips the recorded bit with the asymmetric probability for its value.
// Consumes one draw iff the relevant flip probability is > 0.
int apply_readout_noise(int bit, const NoiseModel& model, ShotRng& rng);

// Majority of three recorded bits; residual error rate 3p^2 - 2p^3 for
// independent symmetric flips p.
int majority_vote(const std::array<int, 3>& bits);

// Two-qubit sector decode of recorded bits (q1, q0): |01> -> canonical index 0
// (site 2), |10> -> canonical index 1 (site 1), |00>/|11> -> reject (empty).
std::optional<int> sector_postselect(int bit_q1, int bit_q0);

// Depolarizing channel unraveling on 1 or 2 target qubits of an n-qubit state:
// with probability p applies a uniformly random non-identity Pauli (3 or 15
// choices). Consumes draws iff p > 0. Norm is preserved.
StateVector apply_depolarizing(const StateVector& state, std::span<const int> targets,
                               double p, ShotRng& rng);

// In-place variant for propagation loops that keep raw amplitudes.
void apply_depolarizing_in_place(CVector& state, std::span<const int> targets, double p,
                                 ShotRng& rng);

}  // namespace mqw
