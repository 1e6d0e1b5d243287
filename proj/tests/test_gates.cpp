#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <unsupported/Eigen/KroneckerProduct>
#include <variant>

#include "doctest.h"
#include "mqw/gates.hpp"
#include "mqw/linalg.hpp"

using namespace mqw;

namespace {

CMatrix taylor_expm_i(const CMatrix& generator) {
  // exp(-i G) by plain Taylor series; generator entries stay O(1) here.
  const Eigen::Index dim = generator.rows();
  const CMatrix a = Complex(0.0, -1.0) * generator;
  CMatrix sum = CMatrix::Identity(dim, dim);
  CMatrix term = CMatrix::Identity(dim, dim);
  for (int k = 1; k <= 60; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double operator_norm(const CMatrix& m) {
  return m.jacobiSvd().singularValues()(0);
}

CMatrix pauli(char which) {
  CMatrix m(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0); break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

TEST_CASE("single-qubit rotation matrices") {
  const double half_cos = 0.955336489125606;   // cos(0.3)
  const double half_sin = 0.29552020666133955; // sin(0.3)
  const CMatrix rx = gate_matrix(Gate::rx(0.6, 0)).matrix();
  CHECK(std::abs(rx(0, 0) - Complex(half_cos, 0.0)) < 1e-15);
  CHECK(std::abs(rx(0, 1) - Complex(0.0, -half_sin)) < 1e-15);
  CHECK(std::abs(rx(1, 0) - Complex(0.0, -half_sin)) < 1e-15);
  CHECK(std::abs(rx(1, 1) - Complex(half_cos, 0.0)) < 1e-15);

  const CMatrix rz = gate_matrix(Gate::rz(0.6, 0)).matrix();
  CHECK(std::abs(rz(0, 0) - Complex(half_cos, -half_sin)) < 1e-15);
  CHECK(std::abs(rz(1, 1) - Complex(half_cos, half_sin)) < 1e-15);
  CHECK(std::abs(rz(0, 1)) == 0.0);
}

TEST_CASE("rotation matrices match the taylor oracle") {
  const double theta = 0.8;
  CHECK(max_abs_diff(gate_matrix(Gate::rx(theta, 0)).matrix(),
                     taylor_expm_i(0.5 * theta * pauli('x'))) < 1e-14);
  CHECK(max_abs_diff(gate_matrix(Gate::rz(theta, 0)).matrix(),
                     taylor_expm_i(0.5 * theta * pauli('z'))) < 1e-14);
  const CMatrix xx = Eigen::kroneckerProduct(pauli('x'), pauli('x')).eval();
  const CMatrix yy = Eigen::kroneckerProduct(pauli('y'), pauli('y')).eval();
  CHECK(max_abs_diff(gate_matrix(Gate::rxx(theta, 0, 1)).matrix(),
                     taylor_expm_i(0.5 * theta * xx)) < 1e-14);
  CHECK(max_abs_diff(gate_matrix(Gate::ryy(theta, 0, 1)).matrix(),
                     taylor_expm_i(0.5 * theta * yy)) < 1e-14);
  // XX and YY commute, so the product equals the joint exponential.
  const CMatrix product =
      gate_matrix(Gate::rxx(theta, 0, 1)).matrix() * gate_matrix(Gate::ryy(theta, 0, 1)).matrix();
  CHECK(max_abs_diff(product, taylor_expm_i(0.5 * theta * (xx + yy))) < 1e-14);
}

TEST_CASE("cnot permutes the basis with the control on targets[0]") {
  const CMatrix m = gate_matrix(Gate::cnot(0, 1)).matrix();
  // |q1 q0>: control q0 = bit 0. |01> (index 1) <-> |11> (index 3).
  CHECK(m(0, 0) == Complex(1.0, 0.0));
  CHECK(m(2, 2) == Complex(1.0, 0.0));
  CHECK(m(3, 1) == Complex(1.0, 0.0));
  CHECK(m(1, 3) == Complex(1.0, 0.0));
  CHECK(std::abs(m(1, 1)) == 0.0);
  CHECK(std::abs(m(3, 3)) == 0.0);
}

TEST_CASE("apply_gate matches the dense kron oracle on three qubits") {
  CVector v(8);
  for (int i = 0; i < 8; ++i) v(i) = Complex(0.1 * (i + 1), 0.05 * (7 - i));
  v /= v.norm();
  const StateVector state{CVector(v)};

  const Gate g = Gate::rx(0.7, 1);
  const CMatrix id = CMatrix::Identity(2, 2);
  const CMatrix dense =
      Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(gate_matrix(g).matrix(), id)).eval();
  const CVector expected = dense * v;
  const CVector actual = apply_gate(state, g).vector();
  CHECK((actual - expected).cwiseAbs().maxCoeff() < 1e-14);

  // Non-adjacent two-qubit gate: control bit 0, target bit 2.
  const Gate far = Gate::cnot(0, 2);
  CVector expected_far = CVector::Zero(8);
  for (int i = 0; i < 8; ++i) {
    const int control = i & 1;
    const int flipped = control ? (i ^ 4) : i;
    expected_far(flipped) += v(i);
  }
  const CVector actual_far = apply_gate(state, far).vector();
  CHECK((actual_far - expected_far).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("trotter plan validation") {
  CHECK_THROWS_AS(TrotterPlan::for_tau(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(TrotterPlan::for_tau(1.0, 0), std::invalid_argument);
  const TrotterPlan plan = TrotterPlan::for_tau(0.8, 4);
  CHECK(plan.delta_t == doctest::Approx(0.2).epsilon(1e-15));
  ModelParams params;
  CHECK_THROWS_AS(trotterized_unitary(params, TrotterPlan{3, 0.1}, CircuitLayout::SingleQubit),
                  std::invalid_argument);
}

TEST_CASE("first-order trotter error halves when steps double") {
  ModelParams params;
  params.gamma = -1.0;
  params.u = 1.0;
  params.tau = 3.0;
  const CMatrix exact = exact_unitary(build_two_site_hamiltonian(params), params.tau).matrix();
  double errors[3];
  const int steps[3] = {30, 60, 120};
  for (int i = 0; i < 3; ++i) {
    const CMatrix trot =
        trotterized_unitary(params, TrotterPlan::for_tau(params.tau, steps[i]),
                            CircuitLayout::SingleQubit)
            .matrix();
    errors[i] = operator_norm(trot - exact);
  }
  CHECK(errors[0] == doctest::Approx(6.3e-2).epsilon(0.05));
  CHECK(errors[0] / errors[1] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(errors[1] / errors[2] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("trotterization is exact without a potential") {
  ModelParams params;
  params.gamma = 3.0;
  params.u = 0.0;
  params.tau = 0.4;
  const CMatrix exact = exact_unitary(build_two_site_hamiltonian(params), params.tau).matrix();
  for (int steps : {1, 7, 30}) {
    const CMatrix trot =
        trotterized_unitary(params, TrotterPlan::for_tau(params.tau, steps),
                            CircuitLayout::SingleQubit)
            .matrix();
    CHECK(max_abs_diff(trot, exact) < 1e-12);
  }
}

TEST_CASE("two-qubit slice restricts exactly to the single-excitation sector") {
  ModelParams params;
  params.gamma = 1.1;
  params.u = 0.7;
  params.tau = 0.9;
  const TrotterPlan plan = TrotterPlan::for_tau(params.tau, 4);
  const CMatrix single = trotterized_unitary(params, plan, CircuitLayout::SingleQubit).matrix();
  const CMatrix full = trotterized_unitary(params, plan, CircuitLayout::TwoQubit).matrix();
  CHECK(std::abs(full(1, 1) - single(0, 0)) < 1e-14);
  CHECK(std::abs(full(1, 2) - single(0, 1)) < 1e-14);
  CHECK(std::abs(full(2, 1) - single(1, 0)) < 1e-14);
  CHECK(std::abs(full(2, 2) - single(1, 1)) < 1e-14);
  // Leakage into and out of span{|00>, |11>} must vanish identically.
  for (int sector : {1, 2}) {
    for (int dead : {0, 3}) {
      CHECK(std::abs(full(dead, sector)) == 0.0);
      CHECK(std::abs(full(sector, dead)) == 0.0);
    }
  }
}

TEST_CASE("two-qubit trotterization converges to the exact sector evolution") {
  ModelParams params;
  params.gamma = 1.1;
  params.u = 0.7;
  params.tau = 0.9;
  const CMatrix exact = exact_unitary(build_two_site_hamiltonian(params), params.tau).matrix();
  const CMatrix full =
      trotterized_unitary(params, TrotterPlan::for_tau(params.tau, 10000), CircuitLayout::TwoQubit)
          .matrix();
  CMatrix block(2, 2);
  block << full(1, 1), full(1, 2), full(2, 1), full(2, 2);
  CHECK(max_abs_diff(block, exact) < 2e-4);
}

TEST_CASE("protocol circuit layout per mitigation scheme") {
  ModelParams params;
  params.gamma = 3.0;
  params.u = 0.5;
  params.tau = 0.4;
  const TrotterPlan plan = TrotterPlan::for_tau(params.tau, 2);
  const DetectionProtocol protocol = DetectionProtocol::first_return(1, 3);

  SUBCASE("bare single-qubit readout") {
    const Circuit c = build_protocol_circuit(params, plan, protocol, CircuitLayout::SingleQubit,
                                             MitigationScheme{MitigationKind::None});
    CHECK(c.num_qubits == 1);
    REQUIRE(c.ops.size() == 3 * (2 * 2 + 1));
    const Gate& rx = std::get<Gate>(c.ops[0]);
    CHECK(rx.kind == GateKind::RX);
    CHECK(rx.angle == doctest::Approx(-2.0 * params.gamma * plan.delta_t).epsilon(1e-15));
    const Gate& rz = std::get<Gate>(c.ops[1]);
    CHECK(rz.kind == GateKind::RZ);
    CHECK(rz.angle == doctest::Approx(2.0 * params.u * plan.delta_t).epsilon(1e-15));
    const MeasureOp& m = std::get<MeasureOp>(c.ops[4]);
    CHECK(m.targets == std::vector<int>{0});
    CHECK(m.decode == MitigationKind::None);
  }

  SUBCASE("repetition-encoded readout") {
    const Circuit c = build_protocol_circuit(params, plan, protocol, CircuitLayout::SingleQubit,
                                             MitigationScheme{MitigationKind::RepetitionMajority});
    CHECK(c.num_qubits == 3);
    REQUIRE(c.ops.size() == 3 * (2 * 2 + 4));
    CHECK(std::get<Gate>(c.ops[4]).kind == GateKind::CNOT);
    CHECK(std::get<Gate>(c.ops[5]).kind == GateKind::CNOT);
    const MeasureOp& m = std::get<MeasureOp>(c.ops[6]);
    CHECK(m.targets == std::vector<int>{0, 1, 2});
    CHECK(m.decode == MitigationKind::RepetitionMajority);
    CHECK(std::get<ResetOp>(c.ops[7]).targets == std::vector<int>{1, 2});
  }

  SUBCASE("two-qubit sector readout") {
    const DetectionProtocol sector_protocol = DetectionProtocol::first_return(1, 3);
    const Circuit c = build_protocol_circuit(params, plan, sector_protocol,
                                             CircuitLayout::TwoQubit,
                                             MitigationScheme{MitigationKind::SectorPostselect});
    CHECK(c.num_qubits == 2);
    REQUIRE(c.ops.size() == 3 * (3 * 2 + 1));
    CHECK(std::get<Gate>(c.ops[0]).kind == GateKind::RXX);
    CHECK(std::get<Gate>(c.ops[1]).kind == GateKind::RYY);
    const Gate& rz = std::get<Gate>(c.ops[2]);
    CHECK(rz.kind == GateKind::RZ);
    CHECK(rz.targets[0] == 1);
    const MeasureOp& m = std::get<MeasureOp>(c.ops[6]);
    CHECK(m.targets == std::vector<int>{0, 1});
    CHECK(m.decode == MitigationKind::SectorPostselect);
  }

  SUBCASE("mitigation and layout must match") {
    CHECK_THROWS_AS(build_protocol_circuit(params, plan, protocol, CircuitLayout::TwoQubit,
                                           MitigationScheme{MitigationKind::RepetitionMajority}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_protocol_circuit(params, plan, protocol, CircuitLayout::SingleQubit,
                                           MitigationScheme{MitigationKind::SectorPostselect}),
                    std::invalid_argument);
  }
}

TEST_CASE("circuit diagram renders one lane per qubit") {
  ModelParams params;
  params.gamma = 3.0;
  params.u = 0.0;
  params.tau = 0.4;
  const Circuit c =
      build_protocol_circuit(params, TrotterPlan::for_tau(params.tau, 1),
                             DetectionProtocol::first_return(1, 1), CircuitLayout::SingleQubit,
                             MitigationScheme{MitigationKind::RepetitionMajority});
  const std::string diagram = circuit_diagram(c);
  CHECK(diagram.find("q0:") != std::string::npos);
  CHECK(diagram.find("q2:") != std::string::npos);
  CHECK(diagram.find("M") != std::string::npos);
  CHECK(diagram.find("CNOT") != std::string::npos);
}
