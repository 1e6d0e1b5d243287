#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "mqw/detection.hpp"
#include "mqw/linalg.hpp"
#include "mqw/model.hpp"
#include "mqw/noise.hpp"

namespace mqw {

// Standard rotation conventions: R_P(theta) = exp(-i theta P/2) for
// P in {X, Z, XX, YY}; CNOT flips `targets[1]` when `targets[0]` is |1>.
enum class GateKind { RX, RZ, RXX, RYY, CNOT };

struct Gate {
  GateKind kind;
  double angle = 0.0;              // unused for CNOT
  std::array<int, 2> targets{0, 0};
  int num_targets = 1;

  static Gate rx(double angle, int q);
  static Gate rz(double angle, int q);
  static Gate rxx(double angle, int q0, int q1);
  static Gate ryy(double angle, int q0, int q1);
  static Gate cnot(int control, int target);
};

// Dense matrix on the gate's own arity (2x2 or 4x4, basis |q1 q0>).
UnitaryMatrix gate_matrix(const Gate& g);

// Applies g to an n-qubit state (dim = 2^n); qubit q addresses bit q of the
// basis index. Bit-local application, no kron allocation.
StateVector apply_gate(const StateVector& state, const Gate& g);

// In-place variant for propagation loops that keep raw amplitudes.
void apply_gate_in_place(CVector& state, const Gate& g);

enum class CircuitLayout { SingleQubit, TwoQubit };

// k first-order slices of width delta_t = tau / steps.
struct TrotterPlan {
  int steps = 1;
  double delta_t = 0.0;

  static TrotterPlan for_tau(double tau, int steps);  // validates steps >= 1
};

// Product of the k slice matrices:
//   SingleQubit: slice = RZ(2 u dt) RX(-2 gamma dt)            (2x2)
//   TwoQubit:    slice = RZ_q1(2 u dt) RYY(-gamma dt) RXX(-gamma dt)  (4x4)
// Angle signs follow the gate conventions above so that the k -> infinity
// limit converges to exact_unitary(build_two_site_hamiltonian(params), tau);
// the two-qubit slice restricted to {|01>,|10>} equals the single-qubit slice
// exactly, and never couples {|00>,|11>} to the sector.
UnitaryMatrix trotterized_unitary(const ModelParams& params, const TrotterPlan& plan,
                                  CircuitLayout layout);

// Measurement of `targets` in the z basis, decoded per `decode`:
//   None            -> single recorded bit (or both bits for two qubits)
//   MajorityVote    -> three recorded bits voted into one logical bit
//   SectorPostselect-> two recorded bits decoded to a site or rejected
struct MeasureOp {
  std::vector<int> targets;
  MitigationKind decode = MitigationKind::None;
};

struct ResetOp {
  std::vector<int> targets;  // project to |0> (used for measured ancillas)
};

using CircuitOp = std::variant<Gate, MeasureOp, ResetOp>;

struct Circuit {
  int num_qubits = 1;
  std::vector<CircuitOp> ops;
};

// Full N-round detection program: per round, k Trotter slices then the
// measurement layer for the layout/mitigation combination (repetition-code
// encode CNOTs + 3-qubit readout + ancilla resets for RepetitionMajority;
// both-qubit readout for SectorPostselect; single-qubit readout otherwise).
Circuit build_protocol_circuit(const ModelParams& params, const TrotterPlan& plan,
                               const DetectionProtocol& protocol, CircuitLayout layout,
                               const MitigationScheme& mitigation);

// Plain-text wire diagram, one line per qubit.
std::string circuit_diagram(const Circuit& circuit);

}  // namespace mqw
