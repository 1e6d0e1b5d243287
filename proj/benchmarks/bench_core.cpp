#include <benchmark/benchmark.h>

#include "mqw/analytic.hpp"
#include "mqw/gates.hpp"
#include "mqw/linalg.hpp"
#include "mqw/monitored.hpp"

using namespace mqw;

namespace {

ModelParams make(double gamma, double u, double tau) {
  ModelParams params;
  params.gamma = gamma;
  params.u = u;
  params.tau = tau;
  return params;
}

void bm_exact_unitary(benchmark::State& state) {
  const ModelParams params = make(3.0, 1.0, 0.4);
  const HermitianMatrix h = build_two_site_hamiltonian(params);
  for (auto _ : state) benchmark::DoNotOptimize(exact_unitary(h, params.tau));
}
BENCHMARK(bm_exact_unitary);

void bm_trotterized_two_qubit(benchmark::State& state) {
  const ModelParams params = make(-1.0, 1.0, 3.0);
  const TrotterPlan plan = TrotterPlan::for_tau(params.tau, 30);
  for (auto _ : state)
    benchmark::DoNotOptimize(trotterized_unitary(params, plan, CircuitLayout::TwoQubit));
}
BENCHMARK(bm_trotterized_two_qubit);

void bm_truncated_moments(benchmark::State& state) {
  const double c = return_amplitude(make(3.0, 1.0, 0.4));
  for (auto _ : state)
    benchmark::DoNotOptimize(truncated_moments(c, 40, DetectionMode::FirstReturn));
}
BENCHMARK(bm_truncated_moments);

void bm_amplitude_distribution(benchmark::State& state) {
  const ModelParams params = make(3.0, 0.0, 0.4);
  const UnitaryMatrix round = exact_unitary(build_two_site_hamiltonian(params), params.tau);
  const DetectionProtocol protocol = DetectionProtocol::first_return(1, 40);
  for (auto _ : state) benchmark::DoNotOptimize(amplitude_distribution(round, protocol));
}
BENCHMARK(bm_amplitude_distribution);

void bm_sample_exact(benchmark::State& state) {
  const ModelParams params = make(3.0, 0.0, 0.4);
  const UnitaryMatrix round = exact_unitary(build_two_site_hamiltonian(params), params.tau);
  const DetectionProtocol protocol = DetectionProtocol::first_return(1, 40);
  const std::int64_t shots = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_trajectories(EvolutionSource::exact(round), protocol,
                                                 NoiseModel{}, MitigationScheme{}, shots, seed++));
  state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(bm_sample_exact)->Arg(10000);

void bm_sample_circuit_fast(benchmark::State& state) {
  const ModelParams params = make(3.0, 0.0, 0.4);
  const DetectionProtocol protocol = DetectionProtocol::first_return(1, 40);
  NoiseModel noise;
  noise.readout_flip_0to1 = 0.02;
  noise.readout_flip_1to0 = 0.02;
  const MitigationScheme mitigation{MitigationKind::RepetitionMajority};
  const Circuit circuit = build_protocol_circuit(
      params, TrotterPlan::for_tau(params.tau, 1), protocol, CircuitLayout::SingleQubit,
      mitigation);
  const std::int64_t shots = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_trajectories(EvolutionSource::circuit(circuit), protocol,
                                                 noise, mitigation, shots, seed++));
  state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(bm_sample_circuit_fast)->Arg(10000);

void bm_sample_circuit_interpreter(benchmark::State& state) {
  const ModelParams params = make(3.0, 0.0, 0.4);
  const DetectionProtocol protocol = DetectionProtocol::first_return(1, 40);
  NoiseModel noise;
  noise.depolarizing_1q = 0.001;
  const MitigationScheme mitigation{MitigationKind::RepetitionMajority};
  const Circuit circuit = build_protocol_circuit(
      params, TrotterPlan::for_tau(params.tau, 1), protocol, CircuitLayout::SingleQubit,
      mitigation);
  const std::int64_t shots = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_trajectories(EvolutionSource::circuit(circuit), protocol,
                                                 noise, mitigation, shots, seed++));
  state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(bm_sample_circuit_interpreter)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
