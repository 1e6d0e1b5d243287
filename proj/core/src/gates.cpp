#include "mqw/gates.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mqw {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

CMatrix rx_matrix(double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  CMatrix m(2, 2);
  m << Complex(c, 0.0), Complex(0.0, -s),
       Complex(0.0, -s), Complex(c, 0.0);
  return m;
}

CMatrix rz_matrix(double theta) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::exp(Complex(0.0, -0.5 * theta));
  m(1, 1) = std::exp(Complex(0.0, 0.5 * theta));
  return m;
}

// 4x4 in the |q1 q0> basis (index = 2 q1 + q0) on the gate's own two qubits,
// ordered (targets[0] = q0 slot, targets[1] = q1 slot).
CMatrix rxx_matrix(double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = Complex(c, 0.0);
  m(0, 3) = m(3, 0) = m(1, 2) = m(2, 1) = Complex(0.0, -s);
  return m;
}

CMatrix ryy_matrix(double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = Complex(c, 0.0);
  m(0, 3) = m(3, 0) = Complex(0.0, s);   // YY couples |00>,|11> with +i sin
  m(1, 2) = m(2, 1) = Complex(0.0, -s);  // and |01>,|10> with -i sin
  return m;
}

CMatrix cnot_matrix() {
  // targets[0] = control, targets[1] = target; basis |q1 q0> = |target control>.
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(2, 2) = 1.0;  // control 0: identity
  m(1, 3) = m(3, 1) = 1.0;  // control 1: flip target
  return m;
}

}  // namespace

Gate Gate::rx(double angle, int q) { return Gate{GateKind::RX, angle, {q, 0}, 1}; }
Gate Gate::rz(double angle, int q) { return Gate{GateKind::RZ, angle, {q, 0}, 1}; }
Gate Gate::rxx(double angle, int q0, int q1) { return Gate{GateKind::RXX, angle, {q0, q1}, 2}; }
Gate Gate::ryy(double angle, int q0, int q1) { return Gate{GateKind::RYY, angle, {q0, q1}, 2}; }
Gate Gate::cnot(int control, int target) { return Gate{GateKind::CNOT, 0.0, {control, target}, 2}; }

UnitaryMatrix gate_matrix(const Gate& g) {
  require(std::isfinite(g.angle), "gate_matrix: angle must be finite");
  switch (g.kind) {
    case GateKind::RX: return UnitaryMatrix(rx_matrix(g.angle));
    case GateKind::RZ: return UnitaryMatrix(rz_matrix(g.angle));
    case GateKind::RXX: return UnitaryMatrix(rxx_matrix(g.angle));
    case GateKind::RYY: return UnitaryMatrix(ryy_matrix(g.angle));
    case GateKind::CNOT: return UnitaryMatrix(cnot_matrix());
  }
  throw std::invalid_argument("gate_matrix: unknown gate kind");
}

namespace {

void apply_1q(CVector& v, const CMatrix& m, int q) {
  const Eigen::Index dim = v.size();
  const Eigen::Index mask = Eigen::Index(1) << q;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Eigen::Index j = i | mask;
    const Complex a = v[i], b = v[j];
    v[i] = m(0, 0) * a + m(0, 1) * b;
    v[j] = m(1, 0) * a + m(1, 1) * b;
  }
}

void apply_2q(CVector& v, const CMatrix& m, int q0, int q1) {
  const Eigen::Index dim = v.size();
  const Eigen::Index m0 = Eigen::Index(1) << q0;
  const Eigen::Index m1 = Eigen::Index(1) << q1;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & (m0 | m1)) continue;
    const Eigen::Index i01 = i | m0, i10 = i | m1, i11 = i | m0 | m1;
    const Complex a00 = v[i], a01 = v[i01], a10 = v[i10], a11 = v[i11];
    v[i] = m(0, 0) * a00 + m(0, 1) * a01 + m(0, 2) * a10 + m(0, 3) * a11;
    v[i01] = m(1, 0) * a00 + m(1, 1) * a01 + m(1, 2) * a10 + m(1, 3) * a11;
    v[i10] = m(2, 0) * a00 + m(2, 1) * a01 + m(2, 2) * a10 + m(2, 3) * a11;
    v[i11] = m(3, 0) * a00 + m(3, 1) * a01 + m(3, 2) * a10 + m(3, 3) * a11;
  }
}

void apply_gate_raw(CVector& v, const Gate& g) {
  const CMatrix m = gate_matrix(g).matrix();
  if (g.num_targets == 1) {
    apply_1q(v, m, g.targets[0]);
  } else {
    apply_2q(v, m, g.targets[0], g.targets[1]);
  }
}

void check_targets(const Gate& g, Eigen::Index dim) {
  for (int t = 0; t < g.num_targets; ++t)
    require(g.targets[t] >= 0 && (Eigen::Index(1) << g.targets[t]) < dim,
            "apply_gate: target qubit out of range");
  if (g.num_targets == 2)
    require(g.targets[0] != g.targets[1], "apply_gate: two-qubit gate needs distinct targets");
}

}  // namespace

StateVector apply_gate(const StateVector& state, const Gate& g) {
  check_targets(g, state.dim());
  CVector v = state.vector();
  apply_gate_raw(v, g);
  return StateVector(std::move(v));
}

void apply_gate_in_place(CVector& state, const Gate& g) {
  check_targets(g, state.size());
  apply_gate_raw(state, g);
}

TrotterPlan TrotterPlan::for_tau(double tau, int steps) {
  require(std::isfinite(tau) && tau > 0.0, "TrotterPlan: tau must be positive");
  require(steps >= 1, "TrotterPlan: steps must be >= 1");
  return TrotterPlan{steps, tau / steps};
}

namespace {

std::vector<Gate> slice_gates(const ModelParams& params, double dt, CircuitLayout layout) {
  if (layout == CircuitLayout::SingleQubit)
    return {Gate::rx(-2.0 * params.gamma * dt, 0), Gate::rz(2.0 * params.u * dt, 0)};
  return {Gate::rxx(-params.gamma * dt, 0, 1), Gate::ryy(-params.gamma * dt, 0, 1),
          Gate::rz(2.0 * params.u * dt, 1)};
}

}  // namespace

UnitaryMatrix trotterized_unitary(const ModelParams& params, const TrotterPlan& plan,
                                  CircuitLayout layout) {
  params.validate();
  require(plan.steps >= 1, "trotterized_unitary: plan.steps must be >= 1");
  require(std::abs(plan.steps * plan.delta_t - params.tau) <= kConstructionTol,
          "trotterized_unitary: plan does not cover tau (steps * delta_t != tau)");
  const Eigen::Index dim = (layout == CircuitLayout::SingleQubit) ? 2 : 4;
  CMatrix slice = CMatrix::Identity(dim, dim);
  for (const Gate& g : slice_gates(params, plan.delta_t, layout)) {
    CMatrix full = CMatrix::Identity(dim, dim);
    if (g.num_targets == 1 && dim == 2) {
      full = gate_matrix(g).matrix();
    } else {
      // Column-wise bit-local application builds the dim x dim gate matrix.
      for (Eigen::Index col = 0; col < dim; ++col) {
        CVector v = CVector::Zero(dim);
        v[col] = 1.0;
        apply_gate_raw(v, g);
        full.col(col) = v;
      }
    }
    slice = full * slice;
  }
  CMatrix round = CMatrix::Identity(dim, dim);
  for (int s = 0; s < plan.steps; ++s) round = slice * round;
  return UnitaryMatrix(std::move(round));
}

Circuit build_protocol_circuit(const ModelParams& params, const TrotterPlan& plan,
                               const DetectionProtocol& protocol, CircuitLayout layout,
                               const MitigationScheme& mitigation) {
  params.validate();
  require(plan.steps >= 1, "build_protocol_circuit: plan.steps must be >= 1");
  require(protocol.n_measurements >= 1, "build_protocol_circuit: need >= 1 measurement");
  const bool two_qubit = layout == CircuitLayout::TwoQubit;
  require(!(two_qubit && mitigation.kind == MitigationKind::RepetitionMajority),
          "build_protocol_circuit: repetition code applies to the single-qubit layout");
  require(!(!two_qubit && mitigation.kind == MitigationKind::SectorPostselect),
          "build_protocol_circuit: sector post-selection applies to the two-qubit layout");

  Circuit circuit;
  const bool repetition = mitigation.kind == MitigationKind::RepetitionMajority;
  circuit.num_qubits = two_qubit ? 2 : (repetition ? 3 : 1);
  const std::vector<Gate> slice = slice_gates(params, plan.delta_t, layout);
  for (int n = 0; n < protocol.n_measurements; ++n) {
    for (int s = 0; s < plan.steps; ++s)
      for (const Gate& g : slice) circuit.ops.emplace_back(g);
    if (repetition) {
      // Encode |b> onto three qubits, read all, vote, return ancillas to |0>.
      circuit.ops.emplace_back(Gate::cnot(0, 1));
      circuit.ops.emplace_back(Gate::cnot(0, 2));
      circuit.ops.emplace_back(MeasureOp{{0, 1, 2}, MitigationKind::RepetitionMajority});
      circuit.ops.emplace_back(ResetOp{{1, 2}});
    } else if (two_qubit && mitigation.kind == MitigationKind::SectorPostselect) {
      circuit.ops.emplace_back(MeasureOp{{0, 1}, MitigationKind::SectorPostselect});
    } else {
      circuit.ops.emplace_back(MeasureOp{{0}, MitigationKind::None});
    }
  }
  return circuit;
}

std::string circuit_diagram(const Circuit& circuit) {
  std::vector<std::string> lanes(circuit.num_qubits);
  for (int q = 0; q < circuit.num_qubits; ++q) lanes[q] = "q" + std::to_string(q) + ": ";
  auto pad_to = [&](std::size_t width) {
    for (auto& lane : lanes) lane.append(width - lane.size(), '-');
  };
  auto widest = [&] {
    std::size_t w = 0;
    for (const auto& lane : lanes) w = std::max(w, lane.size());
    return w;
  };
  const char* names[] = {"RX", "RZ", "RXX", "RYY", "CNOT"};
  for (const CircuitOp& op : circuit.ops) {
    pad_to(widest() + 1);
    if (const Gate* g = std::get_if<Gate>(&op)) {
      std::ostringstream label;
      label << names[static_cast<int>(g->kind)];
      if (g->kind != GateKind::CNOT) {
        label.precision(4);
        label << '(' << g->angle << ')';
      }
      for (int t = 0; t < g->num_targets; ++t) lanes[g->targets[t]] += label.str();
    } else if (const MeasureOp* m = std::get_if<MeasureOp>(&op)) {
      for (int t : m->targets) lanes[t] += "M";
    } else if (const ResetOp* r = std::get_if<ResetOp>(&op)) {
      for (int t : r->targets) lanes[t] += "|0>";
    }
    pad_to(widest());
  }
  std::string out;
  for (auto& lane : lanes) {
    out += lane;
    out += '\n';
  }
  return out;
}

}  // namespace mqw
