#include "mqw/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "mqw/gates.hpp"

namespace mqw {

namespace {

void check_probability(double p, const char* name) {
  if (!(std::isfinite(p) && p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string("NoiseModel.") + name + " must lie in [0, 1]");
}

// Pauli application in place on bit `q` of the basis index.
void apply_pauli(CVector& v, int pauli, int q) {
  const Eigen::Index dim = v.size();
  const Eigen::Index mask = Eigen::Index(1) << q;
  if (pauli == 2) {  // Z
    for (Eigen::Index i = 0; i < dim; ++i)
      if (i & mask) v[i] = -v[i];
    return;
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Eigen::Index j = i | mask;
    if (pauli == 0) {  // X
      std::swap(v[i], v[j]);
    } else {  // Y: |0> -> i|1>, |1> -> -i|0>
      const Complex a = v[i];
      v[i] = Complex(0.0, -1.0) * v[j];
      v[j] = Complex(0.0, 1.0) * a;
    }
  }
}

}  // namespace

bool NoiseModel::is_zero() const {
  return readout_flip_0to1 == 0.0 && readout_flip_1to0 == 0.0 && !has_gate_noise();
}

void NoiseModel::validate() const {
  check_probability(readout_flip_0to1, "readout_flip_0to1");
  check_probability(readout_flip_1to0, "readout_flip_1to0");
  check_probability(depolarizing_1q, "depolarizing_1q");
  check_probability(depolarizing_2q, "depolarizing_2q");
}

int apply_readout_noise(int bit, const NoiseModel& model, ShotRng& rng) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("apply_readout_noise: bit must be 0 or 1");
  const double p = (bit == 0) ? model.readout_flip_0to1 : model.readout_flip_1to0;
  if (p == 0.0) return bit;  // no draw: keeps zero-noise streams identical
  return rng.bernoulli(p) ? 1 - bit : bit;
}

int majority_vote(const std::array<int, 3>& bits) {
  for (int b : bits)
    if (b != 0 && b != 1) throw std::invalid_argument("majority_vote: bits must be 0 or 1");
  return (bits[0] + bits[1] + bits[2]) >= 2 ? 1 : 0;
}

std::optional<int> sector_postselect(int bit_q1, int bit_q0) {
  if ((bit_q1 != 0 && bit_q1 != 1) || (bit_q0 != 0 && bit_q0 != 1))
    throw std::invalid_argument("sector_postselect: bits must be 0 or 1");
  if (bit_q1 == bit_q0) return std::nullopt;  // |00> or |11>: discard shot
  return bit_q0 == 1 ? 0 : 1;                 // |01> -> site 2, |10> -> site 1
}

void apply_depolarizing_in_place(CVector& state, std::span<const int> targets, double p,
                                 ShotRng& rng) {
  check_probability(p, "depolarizing");
  if (targets.empty() || targets.size() > 2)
    throw std::invalid_argument("apply_depolarizing: need 1 or 2 target qubits");
  const Eigen::Index dim = state.size();
  for (int q : targets)
    if (q < 0 || (Eigen::Index(1) << q) >= dim)
      throw std::invalid_argument("apply_depolarizing: target qubit out of range");
  if (p == 0.0) return;
  if (!rng.bernoulli(p)) return;

  CVector& v = state;
  if (targets.size() == 1) {
    const int pauli = static_cast<int>(rng.next_u64() % 3);
    apply_pauli(v, pauli, targets[0]);
  } else {
    // Uniform over the 15 non-identity two-qubit Paulis; index = 4a+b-1 with
    // a, b in {I, X, Y, Z} and 0 = identity excluded.
    const int code = static_cast<int>(rng.next_u64() % 15) + 1;
    const int a = code / 4, b = code % 4;
    if (a != 0) apply_pauli(v, a - 1, targets[0]);
    if (b != 0) apply_pauli(v, b - 1, targets[1]);
  }
}

StateVector apply_depolarizing(const StateVector& state, std::span<const int> targets,
                               double p, ShotRng& rng) {
  CVector v = state.vector();
  apply_depolarizing_in_place(v, targets, p, rng);
  return StateVector(std::move(v));
}

}  // namespace mqw
