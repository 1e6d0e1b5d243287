#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mqw/analytic.hpp"
#include "mqw/detection.hpp"
#include "mqw/gates.hpp"
#include "mqw/noise.hpp"

namespace mqw {

enum class SweepVariable { Gamma, U };
enum class SweepMode { FirstReturn, FirstTransition, Both };

// Resolved two-site sweep description. Parsed from a flat key=value config
// file (schema_version 1) with CLI overrides; validation errors name the
// offending key. trotter_steps = 0 selects the exact round unitary, > 0 the
// Trotterized circuit. A seed is mandatory whenever shots > 0.
struct SweepConfig {
  int schema_version = 1;
  SweepVariable variable = SweepVariable::Gamma;
  std::vector<double> values;   // resolved sweep grid
  ModelParams base;             // gamma/u hold the fixed value, tau always set
  int trotter_steps = 0;
  int n_measurements = 40;
  std::int64_t shots = 0;
  std::optional<std::uint64_t> seed;
  CircuitLayout layout = CircuitLayout::SingleQubit;
  SweepMode mode = SweepMode::FirstReturn;
  int initial_state = 1;        // canonical two-site index
  NoiseModel noise;
  MitigationScheme mitigation;
  std::string output_csv;       // empty = skip
  std::string output_json;      // empty = skip
  int threads = 0;              // runtime-only (0 = auto); never echoed

  void validate() const;
};

// One sweep point in one detection mode. Sampled fields are empty when
// shots = 0. PMFs index p_n at [n-1].
struct SweepResultRow {
  double sweep_value = 0.0;
  DetectionMode mode = DetectionMode::FirstReturn;
  double c_parameter = 0.0;
  double return_amplitude = 0.0;
  bool near_degenerate = false;  // |c^2 - 1| < 1e-6
  DetectionMoments analytic;     // truncated closed forms at return_amplitude
  DetectionMoments deterministic;
  std::vector<double> pmf_deterministic;
  double undetected_deterministic = 0.0;
  std::optional<DetectionMoments> sampled;
  std::optional<double> standard_error;
  std::vector<double> pmf_sampled;
  double undetected_sampled = 0.0;
  double rejected_fraction = 0.0;
};

// Runs every sweep point in both requested modes. The deterministic column
// propagates the same round unitary the sampler uses (exact for
// trotter_steps = 0, the Trotter product otherwise); the analytic column is
// always the closed form at the exact return amplitude. Shot substreams are
// keyed (seed, point, mode, shot), so the grid may be evaluated in any order.
std::vector<SweepResultRow> run_sweep(const SweepConfig& config);

// Flat key = value config file; '#' starts a comment. Unknown keys are errors.
SweepConfig parse_config_file(const std::string& path);
SweepConfig parse_config_text(const std::string& text, const std::string& origin);

// Serialized resolved config (sorted keys) echoed into every output.
std::vector<std::pair<std::string, std::string>> config_echo(const SweepConfig& config);

// RFC-4180-style CSV: '#'-prefixed echo lines, fixed documented header, one
// row per (sweep value, mode), deterministic PMF columns p_1..p_N appended.
// Numbers are shortest round-trip decimals; byte-identical per config+seed.
void emit_csv(const std::vector<SweepResultRow>& rows, const SweepConfig& config,
              std::ostream& out);

// JSON document with the config echo and full per-row PMF tensors (sampled
// PMF included when shots > 0). Parses back losslessly.
void emit_json(const std::vector<SweepResultRow>& rows, const SweepConfig& config,
               std::ostream& out);

// Writes whichever of output_csv/output_json are set, honoring the
// MQWALK_OUTPUT_DIR environment variable for relative paths.
void emit_results(const std::vector<SweepResultRow>& rows, const SweepConfig& config);

// Human-readable cross-path summary: per-row sampled-vs-deterministic
// z-scores, max |analytic - deterministic| mean gap, near-degenerate flags,
// and a PASS/FAIL verdict (z < 5, exact-source gap < 1e-9).
std::string compare_report(const std::vector<SweepResultRow>& rows, const SweepConfig& config);

}  // namespace mqw
