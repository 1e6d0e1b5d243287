#include "mqw/monitored.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mqw/noise.hpp"

namespace mqw {

namespace {

constexpr int kUndetected = 0;
constexpr int kRejected = -1;

int state_dimension(const EvolutionSource& source) {
  if (source.is_exact()) return static_cast<int>(source.unitary().matrix().rows());
  return 1 << source.circuit().num_qubits;
}

// Logical basis the detection protocol indexes into; the two-qubit layout
// evolves inside span{|01>, |10>} of a four-dimensional register.
int logical_dimension(const EvolutionSource& source) {
  if (source.is_exact()) return static_cast<int>(source.unitary().matrix().rows());
  return source.circuit().num_qubits == 2 ? 4 : 2;
}

// Shared sampling rule for every measurement in the library: cumulative scan
// over outcomes in ascending basis order, so the exact, precompiled, and
// gate-level engines consume identical uniforms and stay bit-compatible.
int draw_outcome(std::span<const double> probabilities, ShotRng& rng) {
  return rng.categorical(probabilities);
}

int measure_qubit(CVector& state, int qubit, ShotRng& rng) {
  const auto dim = state.size();
  const std::int64_t mask = std::int64_t{1} << qubit;
  double p0 = 0.0;
  for (std::int64_t i = 0; i < dim; ++i)
    if (!(i & mask)) p0 += std::norm(state(i));
  const double probs[2] = {p0, 1.0 - p0};
  const int outcome = draw_outcome(probs, rng);
  double kept = 0.0;
  for (std::int64_t i = 0; i < dim; ++i) {
    const bool match = ((i & mask) != 0) == (outcome == 1);
    if (!match) state(i) = 0.0;
    else kept += std::norm(state(i));
  }
  state /= std::sqrt(std::max(kept, 1e-300));
  return outcome;
}

int measure_register(CVector& state, ShotRng& rng) {
  const auto dim = state.size();
  std::vector<double> probs(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < dim; ++i) probs[static_cast<std::size_t>(i)] = std::norm(state(i));
  const int outcome = draw_outcome(probs, rng);
  state.setZero();
  state(outcome) = 1.0;
  return outcome;
}

void reset_qubit(CVector& state, int qubit) {
  const auto dim = state.size();
  const std::int64_t mask = std::int64_t{1} << qubit;
  double p1 = 0.0;
  for (std::int64_t i = 0; i < dim; ++i)
    if (i & mask) p1 += std::norm(state(i));
  if (p1 < 0.5) {
    for (std::int64_t i = 0; i < dim; ++i)
      if (i & mask) state(i) = 0.0;
    return;
  }
  for (std::int64_t i = 0; i < dim; ++i) {
    if (i & mask) {
      state(i & ~mask) = state(i);
      state(i) = 0.0;
    }
  }
}

int flip_record(int bit, const NoiseModel& noise, ShotRng& rng) {
  return apply_readout_noise(bit, noise, rng);
}

// Measurement record of the data bit after optional repetition decoding.
int decode_single_bit(int true_bit, const NoiseModel& noise, const MitigationScheme& mitigation,
                      ShotRng& rng) {
  if (mitigation.kind == MitigationKind::RepetitionMajority) {
    std::array<int, 3> record{};
    for (int& r : record) r = flip_record(true_bit, noise, rng);
    return majority_vote(record);
  }
  return flip_record(true_bit, noise, rng);
}

struct ShotContext {
  const DetectionProtocol& protocol;
  const NoiseModel& noise;
  const MitigationScheme& mitigation;
};

// Exact-unitary source. Dimension two supports readout noise and repetition
// decoding; larger registers are sampled through the noiseless detection
// observable.
int run_shot_exact(const CMatrix& round_unitary, const ShotContext& ctx, ShotRng& rng) {
  const auto dim = round_unitary.rows();
  CVector state = CVector::Zero(dim);
  state(ctx.protocol.initial_state) = 1.0;
  const int detect = ctx.protocol.detect_state;
  for (int n = 1; n <= ctx.protocol.n_measurements; ++n) {
    state = round_unitary * state;
    if (dim == 2) {
      const double probs[2] = {std::norm(state(0)), std::norm(state(1))};
      const int outcome = draw_outcome(probs, rng);
      state.setZero();
      state(outcome) = 1.0;
      if (decode_single_bit(outcome, ctx.noise, ctx.mitigation, rng) == detect) return n;
      continue;
    }
    const double p_detect = std::norm(state(detect));
    const double probs[2] = {1.0 - p_detect, p_detect};
    if (draw_outcome(probs, rng) == 1) return n;
    state(detect) = 0.0;
    state /= std::sqrt(std::max(1.0 - p_detect, 0.0));
  }
  return kUndetected;
}

int sector_logical_index(int canonical_site) { return canonical_site == 0 ? 1 : 2; }

int run_shot_circuit_fast(const CMatrix& round_unitary, int logical_dim, const ShotContext& ctx,
                          ShotRng& rng) {
  CVector state = CVector::Zero(logical_dim);
  state(ctx.protocol.initial_state) = 1.0;
  const int detect = ctx.protocol.detect_state;
  for (int n = 1; n <= ctx.protocol.n_measurements; ++n) {
    state = round_unitary * state;
    if (logical_dim == 2) {
      const double probs[2] = {std::norm(state(0)), std::norm(state(1))};
      const int outcome = draw_outcome(probs, rng);
      state.setZero();
      state(outcome) = 1.0;
      if (decode_single_bit(outcome, ctx.noise, ctx.mitigation, rng) == detect) return n;
      continue;
    }
    if (ctx.mitigation.kind == MitigationKind::SectorPostselect) {
      const int outcome = measure_register(state, rng);
      const int r0 = flip_record(outcome & 1, ctx.noise, rng);
      const int r1 = flip_record((outcome >> 1) & 1, ctx.noise, rng);
      const auto site = sector_postselect(r1, r0);
      if (!site.has_value()) return kRejected;
      if (sector_logical_index(*site) == detect) return n;
      continue;
    }
    const int m0 = measure_qubit(state, 0, rng);
    const int r0 = flip_record(m0, ctx.noise, rng);
    if (sector_logical_index(r0 == 1 ? 0 : 1) == detect) return n;
  }
  return kUndetected;
}

void apply_gate_noise(CVector& state, const Gate& gate, const NoiseModel& noise, ShotRng& rng) {
  const double p = gate.num_targets == 1 ? noise.depolarizing_1q : noise.depolarizing_2q;
  apply_depolarizing_in_place(
      state, std::span<const int>(gate.targets.data(), static_cast<std::size_t>(gate.num_targets)),
      p, rng);
}

int run_shot_circuit_full(const Circuit& circuit, const ShotContext& ctx, ShotRng& rng) {
  const int dim = 1 << circuit.num_qubits;
  const bool two_qubit_layout = circuit.num_qubits == 2;
  CVector state = CVector::Zero(dim);
  state(ctx.protocol.initial_state) = 1.0;
  const int detect = ctx.protocol.detect_state;
  int round = 0;
  for (const CircuitOp& op : circuit.ops) {
    if (std::holds_alternative<Gate>(op)) {
      const Gate& gate = std::get<Gate>(op);
      apply_gate_in_place(state, gate);
      apply_gate_noise(state, gate, ctx.noise, rng);
      continue;
    }
    if (std::holds_alternative<ResetOp>(op)) {
      for (int q : std::get<ResetOp>(op).targets) reset_qubit(state, q);
      continue;
    }
    const MeasureOp& measure = std::get<MeasureOp>(op);
    ++round;
    if (measure.decode == MitigationKind::RepetitionMajority) {
      const int outcome = measure_register(state, rng);
      std::array<int, 3> record{};
      for (std::size_t i = 0; i < record.size(); ++i)
        record[i] = flip_record((outcome >> measure.targets[i]) & 1, ctx.noise, rng);
      if (majority_vote(record) == detect) return round;
      continue;
    }
    if (measure.decode == MitigationKind::SectorPostselect) {
      const int outcome = measure_register(state, rng);
      const int r0 = flip_record(outcome & 1, ctx.noise, rng);
      const int r1 = flip_record((outcome >> 1) & 1, ctx.noise, rng);
      const auto site = sector_postselect(r1, r0);
      if (!site.has_value()) return kRejected;
      if (sector_logical_index(*site) == detect) return round;
      continue;
    }
    const int m = measure_qubit(state, measure.targets.front(), rng);
    const int record = flip_record(m, ctx.noise, rng);
    const int logical = two_qubit_layout ? sector_logical_index(record == 1 ? 0 : 1) : record;
    if (logical == detect) return round;
  }
  return kUndetected;
}

struct ShotCounts {
  std::vector<std::int64_t> detected;
  std::int64_t undetected = 0;
  std::int64_t rejected = 0;

  explicit ShotCounts(int n_measurements) : detected(static_cast<std::size_t>(n_measurements), 0) {}

  void record(int outcome) {
    if (outcome == kRejected) ++rejected;
    else if (outcome == kUndetected) ++undetected;
    else ++detected[static_cast<std::size_t>(outcome - 1)];
  }

  void merge(const ShotCounts& other) {
    for (std::size_t i = 0; i < detected.size(); ++i) detected[i] += other.detected[i];
    undetected += other.undetected;
    rejected += other.rejected;
  }
};

int count_measurements(const Circuit& circuit) {
  int count = 0;
  for (const CircuitOp& op : circuit.ops)
    if (std::holds_alternative<MeasureOp>(op)) ++count;
  return count;
}

// Product of the gate segment between measurements, restricted to the logical
// register, valid only when gate noise is off and the segment acts there.
CMatrix precompile_round(const Circuit& circuit, int logical_dim) {
  const int dim = 1 << circuit.num_qubits;
  CMatrix full = CMatrix::Identity(dim, dim);
  for (const CircuitOp& op : circuit.ops) {
    if (std::holds_alternative<MeasureOp>(op)) break;
    if (!std::holds_alternative<Gate>(op)) continue;
    const Gate& gate = std::get<Gate>(op);
    CMatrix step = CMatrix::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
      CVector basis = CVector::Zero(dim);
      basis(col) = 1.0;
      apply_gate_in_place(basis, gate);
      step.col(col) = basis;
    }
    full = step * full;
  }
  if (dim == logical_dim) return full;
  // Repetition layout: ancillas idle between measurements, so the data-qubit
  // block at cleared ancilla bits carries the full round.
  CMatrix reduced(logical_dim, logical_dim);
  for (int row = 0; row < logical_dim; ++row)
    for (int col = 0; col < logical_dim; ++col) reduced(row, col) = full(row, col);
  return reduced;
}

bool uses_encode_gates(const Circuit& circuit) {
  for (const CircuitOp& op : circuit.ops)
    if (std::holds_alternative<Gate>(op) && std::get<Gate>(op).kind == GateKind::CNOT) return true;
  return false;
}

}  // namespace

EvolutionSource EvolutionSource::exact(UnitaryMatrix round_unitary) {
  return EvolutionSource(std::variant<UnitaryMatrix, Circuit>(std::move(round_unitary)));
}

EvolutionSource EvolutionSource::circuit(Circuit c) {
  return EvolutionSource(std::variant<UnitaryMatrix, Circuit>(std::move(c)));
}

FirstDetectionDistribution amplitude_distribution(const UnitaryMatrix& round_unitary,
                                                  const DetectionProtocol& protocol) {
  const CMatrix& u = round_unitary.matrix();
  const int dim = static_cast<int>(u.rows());
  protocol.validate(dim);
  FirstDetectionDistribution dist;
  dist.probabilities.resize(static_cast<std::size_t>(protocol.n_measurements));
  CVector chi = CVector::Zero(dim);
  chi(protocol.initial_state) = 1.0;
  for (int n = 1; n <= protocol.n_measurements; ++n) {
    chi = u * chi;
    dist.probabilities[static_cast<std::size_t>(n - 1)] = std::norm(chi(protocol.detect_state));
    chi(protocol.detect_state) = 0.0;
  }
  dist.undetected_mass = chi.squaredNorm();
  return dist;
}

double survival_probability(const UnitaryMatrix& round_unitary, const DetectionProtocol& protocol,
                            int n_rounds) {
  if (n_rounds < 0) throw std::invalid_argument("survival_probability: n_rounds must be >= 0");
  const CMatrix& u = round_unitary.matrix();
  protocol.validate(static_cast<int>(u.rows()));
  CVector chi = CVector::Zero(u.rows());
  chi(protocol.initial_state) = 1.0;
  for (int n = 0; n < n_rounds; ++n) {
    chi = u * chi;
    chi(protocol.detect_state) = 0.0;
  }
  return chi.squaredNorm();
}

FirstDetectionDistribution sample_trajectories(const EvolutionSource& source,
                                               const DetectionProtocol& protocol,
                                               const NoiseModel& noise,
                                               const MitigationScheme& mitigation,
                                               std::int64_t shots, std::uint64_t seed,
                                               int threads) {
  if (shots < 1) throw std::invalid_argument("sample_trajectories: shots must be >= 1");
  noise.validate();
  protocol.validate(logical_dimension(source));

  const bool exact = source.is_exact();
  const int dim = state_dimension(source);
  if (exact) {
    if (noise.has_gate_noise())
      throw std::invalid_argument("sample_trajectories: gate depolarizing requires a circuit source");
    if (mitigation.kind == MitigationKind::SectorPostselect)
      throw std::invalid_argument("sample_trajectories: sector post-selection requires a two-qubit circuit");
    if (dim != 2) {
      if (mitigation.kind != MitigationKind::None)
        throw std::invalid_argument("sample_trajectories: mitigation on an exact source needs dimension two");
      if (noise.readout_flip_0to1 != 0.0 || noise.readout_flip_1to0 != 0.0)
        throw std::invalid_argument("sample_trajectories: readout noise on an exact source needs dimension two");
    }
  } else {
    const Circuit& circ = source.circuit();
    if (count_measurements(circ) != protocol.n_measurements)
      throw std::invalid_argument("sample_trajectories: circuit round count does not match protocol");
    if (mitigation.kind == MitigationKind::RepetitionMajority && circ.num_qubits != 3)
      throw std::invalid_argument("sample_trajectories: repetition decoding requires the encoded circuit");
    if (mitigation.kind == MitigationKind::SectorPostselect && circ.num_qubits != 2)
      throw std::invalid_argument("sample_trajectories: sector post-selection requires a two-qubit circuit");
  }

  const ShotContext ctx{protocol, noise, mitigation};

  CMatrix fast_round;
  int fast_dim = 0;
  bool fast_path = false;
  if (exact) {
    fast_round = source.unitary().matrix();
    fast_dim = dim;
  } else if (!noise.has_gate_noise()) {
    // Without gate noise the encode gates act on reset ancillas and copy the
    // data bit exactly, so readout-level decoding reproduces the full circuit
    // draw for draw.
    fast_dim = logical_dimension(source);
    fast_round = precompile_round(source.circuit(), fast_dim);
    fast_path = true;
  } else if (mitigation.kind == MitigationKind::RepetitionMajority &&
             !uses_encode_gates(source.circuit())) {
    throw std::invalid_argument("sample_trajectories: repetition decoding requires the encoded circuit");
  }

  auto run_shot = [&](ShotRng& rng) {
    if (exact) return run_shot_exact(fast_round, ctx, rng);
    if (fast_path) return run_shot_circuit_fast(fast_round, fast_dim, ctx, rng);
    return run_shot_circuit_full(source.circuit(), ctx, rng);
  };

  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = static_cast<int>(std::min<std::int64_t>(n_threads, shots));

  std::vector<ShotCounts> partials(static_cast<std::size_t>(n_threads),
                                   ShotCounts(protocol.n_measurements));
  auto worker = [&](int index) {
    const std::int64_t chunk = (shots + n_threads - 1) / n_threads;
    const std::int64_t begin = index * chunk;
    const std::int64_t end = std::min(shots, begin + chunk);
    ShotCounts& counts = partials[static_cast<std::size_t>(index)];
    for (std::int64_t shot = begin; shot < end; ++shot) {
      ShotRng rng(seed, static_cast<std::uint64_t>(shot));
      counts.record(run_shot(rng));
    }
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (std::thread& t : pool) t.join();
  }

  ShotCounts counts(protocol.n_measurements);
  for (const ShotCounts& partial : partials) counts.merge(partial);

  FirstDetectionDistribution dist;
  const std::int64_t accepted = shots - counts.rejected;
  dist.n_shots = accepted;
  dist.rejected_shots = counts.rejected;
  dist.probabilities.assign(static_cast<std::size_t>(protocol.n_measurements), 0.0);
  if (accepted > 0) {
    const double norm = static_cast<double>(accepted);
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i)
      dist.probabilities[i] = static_cast<double>(counts.detected[i]) / norm;
    dist.undetected_mass = static_cast<double>(counts.undetected) / norm;
  }
  return dist;
}

}  // namespace mqw
