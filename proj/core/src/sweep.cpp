#include "mqw/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "mqw/linalg.hpp"
#include "mqw/monitored.hpp"
#include "mqw/rng.hpp"

namespace mqw {

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  double parsed = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto result = std::from_chars(first, last, parsed);
  if (result.ec != std::errc{} || result.ptr != last)
    config_error(key + ": expected a number, got '" + value + "'");
  return parsed;
}

template <typename Int>
Int parse_integer(const std::string& value, const std::string& key) {
  Int parsed = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto result = std::from_chars(first, last, parsed);
  if (result.ec != std::errc{} || result.ptr != last)
    config_error(key + ": expected an integer, got '" + value + "'");
  return parsed;
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key) {
  std::vector<double> parsed;
  std::string item;
  std::istringstream stream(value);
  while (std::getline(stream, item, ',')) {
    const std::string entry = trim(item);
    if (entry.empty()) config_error(key + ": empty list entry");
    parsed.push_back(parse_double(entry, key));
  }
  if (parsed.empty()) config_error(key + ": expected a comma-separated list of numbers");
  return parsed;
}

const std::map<std::string, SweepVariable> kVariableNames = {
    {"gamma", SweepVariable::Gamma}, {"u", SweepVariable::U}};
const std::map<std::string, CircuitLayout> kLayoutNames = {
    {"single_qubit", CircuitLayout::SingleQubit}, {"two_qubit", CircuitLayout::TwoQubit}};
const std::map<std::string, SweepMode> kModeNames = {{"first_return", SweepMode::FirstReturn},
                                                     {"first_transition", SweepMode::FirstTransition},
                                                     {"both", SweepMode::Both}};
const std::map<std::string, MitigationKind> kMitigationNames = {
    {"none", MitigationKind::None},
    {"repetition_majority", MitigationKind::RepetitionMajority},
    {"sector_postselect", MitigationKind::SectorPostselect}};

template <typename Enum>
Enum parse_enum(const std::map<std::string, Enum>& names, const std::string& value,
                const std::string& key) {
  const auto it = names.find(value);
  if (it != names.end()) return it->second;
  std::string expected;
  for (const auto& [name, unused] : names) {
    if (!expected.empty()) expected += ", ";
    expected += name;
  }
  config_error(key + ": expected one of {" + expected + "}, got '" + value + "'");
}

template <typename Enum>
std::string enum_name(const std::map<std::string, Enum>& names, Enum value) {
  for (const auto& [name, candidate] : names)
    if (candidate == value) return name;
  return "?";
}

std::string mode_name(DetectionMode mode) {
  return mode == DetectionMode::FirstReturn ? "first_return" : "first_transition";
}

int canonical_to_layout_index(int canonical, CircuitLayout layout) {
  if (layout == CircuitLayout::TwoQubit) return canonical == 0 ? 1 : 2;
  return canonical;
}

DetectionProtocol sweep_protocol(const SweepConfig& config, DetectionMode mode) {
  const int initial = canonical_to_layout_index(config.initial_state, config.layout);
  int detect = initial;
  if (mode == DetectionMode::FirstTransition)
    detect = canonical_to_layout_index(1 - config.initial_state, config.layout);
  return DetectionProtocol{initial, detect, mode, config.n_measurements};
}

UnitaryMatrix round_unitary_for(const SweepConfig& config, const ModelParams& params) {
  if (config.trotter_steps > 0)
    return trotterized_unitary(params, TrotterPlan::for_tau(params.tau, config.trotter_steps),
                               config.layout);
  UnitaryMatrix two_site = exact_unitary(build_two_site_hamiltonian(params), params.tau);
  if (config.layout == CircuitLayout::SingleQubit) return two_site;
  // Embed the canonical block into the {|01>, |10>} sector of the register.
  const CMatrix& block = two_site.matrix();
  CMatrix full = CMatrix::Identity(4, 4);
  full(1, 1) = block(0, 0);
  full(1, 2) = block(0, 1);
  full(2, 1) = block(1, 0);
  full(2, 2) = block(1, 1);
  return UnitaryMatrix(std::move(full));
}

}  // namespace

void SweepConfig::validate() const {
  if (schema_version != 1) config_error("schema_version: only version 1 is supported");
  if (values.empty()) config_error("sweep_values: the sweep grid is empty");
  for (double v : values)
    if (!std::isfinite(v)) config_error("sweep_values: grid values must be finite");
  base.validate();
  if (base.sites != 2) config_error("sites: sweeps run on the two-site model");
  if (trotter_steps < 0) config_error("trotter_steps: must be >= 0 (0 = exact round unitary)");
  if (n_measurements < 1) config_error("n_measurements: must be >= 1");
  if (shots < 0) config_error("shots: must be >= 0");
  if (shots > 0 && !seed.has_value()) config_error("seed: required when shots > 0");
  if (initial_state != 0 && initial_state != 1)
    config_error("initial_state: canonical two-site index, 0 or 1");
  noise.validate();
  if (mitigation.kind == MitigationKind::RepetitionMajority && layout != CircuitLayout::SingleQubit)
    config_error("mitigation: repetition_majority applies to the single_qubit layout");
  if (mitigation.kind == MitigationKind::SectorPostselect && layout != CircuitLayout::TwoQubit)
    config_error("mitigation: sector_postselect applies to the two_qubit layout");
  if (layout == CircuitLayout::TwoQubit && shots > 0 && trotter_steps == 0)
    config_error("trotter_steps: two_qubit sampling runs on the gate circuit, set trotter_steps >= 1");
  if (noise.has_gate_noise() && shots > 0 && trotter_steps == 0)
    config_error("depolarizing: gate noise needs the gate circuit, set trotter_steps >= 1");
  if (threads < 0) config_error("threads: must be >= 0 (0 = auto)");
}

std::vector<SweepResultRow> run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<DetectionMode> modes;
  if (config.mode != SweepMode::FirstTransition) modes.push_back(DetectionMode::FirstReturn);
  if (config.mode != SweepMode::FirstReturn) modes.push_back(DetectionMode::FirstTransition);

  std::vector<SweepResultRow> rows;
  rows.reserve(config.values.size() * modes.size());
  for (std::size_t index = 0; index < config.values.size(); ++index) {
    ModelParams params = config.base;
    (config.variable == SweepVariable::Gamma ? params.gamma : params.u) = config.values[index];
    params.validate();
    const double amplitude = return_amplitude(params);
    const UnitaryMatrix round = round_unitary_for(config, params);

    for (DetectionMode mode : modes) {
      SweepResultRow row;
      row.sweep_value = config.values[index];
      row.mode = mode;
      row.c_parameter = c_parameter(params);
      row.return_amplitude = amplitude;
      row.near_degenerate = std::abs(amplitude * amplitude - 1.0) < 1e-6;
      row.analytic = truncated_moments(amplitude, config.n_measurements, mode);

      const DetectionProtocol protocol = sweep_protocol(config, mode);
      const FirstDetectionDistribution deterministic = amplitude_distribution(round, protocol);
      row.deterministic = detection_moments(deterministic);
      row.pmf_deterministic = deterministic.probabilities;
      row.undetected_deterministic = deterministic.undetected_mass;

      if (config.shots > 0) {
        const EvolutionSource source =
            config.trotter_steps == 0
                ? EvolutionSource::exact(round)
                : EvolutionSource::circuit(build_protocol_circuit(
                      params, TrotterPlan::for_tau(params.tau, config.trotter_steps), protocol,
                      config.layout, config.mitigation));
        const std::uint64_t mode_key = mode == DetectionMode::FirstReturn ? 0 : 1;
        const std::uint64_t point_seed =
            ShotRng::mix(ShotRng::mix(*config.seed, static_cast<std::uint64_t>(index)), mode_key);
        const FirstDetectionDistribution sampled =
            sample_trajectories(source, protocol, config.noise, config.mitigation, config.shots,
                                point_seed, config.threads);
        row.sampled = detection_moments(sampled);
        row.standard_error = mean_standard_error(sampled);
        row.pmf_sampled = sampled.probabilities;
        row.undetected_sampled = sampled.undetected_mass;
        row.rejected_fraction =
            static_cast<double>(sampled.rejected_shots) / static_cast<double>(config.shots);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SweepConfig parse_config_text(const std::string& text, const std::string& origin) {
  SweepConfig config;
  std::map<std::string, std::string> entries;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto equals = content.find('=');
    if (equals == std::string::npos)
      config_error(origin + ":" + std::to_string(line_number) + ": expected 'key = value'");
    const std::string key = trim(content.substr(0, equals));
    const std::string value = trim(content.substr(equals + 1));
    if (key.empty())
      config_error(origin + ":" + std::to_string(line_number) + ": empty key");
    if (!entries.emplace(key, value).second)
      config_error(origin + ":" + std::to_string(line_number) + ": duplicate key '" + key + "'");
  }

  std::optional<double> sweep_min, sweep_max;
  std::optional<int> sweep_points;
  bool have_values = false;
  bool have_flip_shorthand = false;
  bool have_flip_explicit = false;

  for (const auto& [key, value] : entries) {
    if (key == "schema_version") config.schema_version = parse_integer<int>(value, key);
    else if (key == "sweep_variable") config.variable = parse_enum(kVariableNames, value, key);
    else if (key == "sweep_values") { config.values = parse_double_list(value, key); have_values = true; }
    else if (key == "sweep_min") sweep_min = parse_double(value, key);
    else if (key == "sweep_max") sweep_max = parse_double(value, key);
    else if (key == "sweep_points") sweep_points = parse_integer<int>(value, key);
    else if (key == "gamma") config.base.gamma = parse_double(value, key);
    else if (key == "u") config.base.u = parse_double(value, key);
    else if (key == "tau") config.base.tau = parse_double(value, key);
    else if (key == "trotter_steps") config.trotter_steps = parse_integer<int>(value, key);
    else if (key == "n_measurements") config.n_measurements = parse_integer<int>(value, key);
    else if (key == "shots") config.shots = parse_integer<std::int64_t>(value, key);
    else if (key == "seed") config.seed = parse_integer<std::uint64_t>(value, key);
    else if (key == "layout") config.layout = parse_enum(kLayoutNames, value, key);
    else if (key == "mode") config.mode = parse_enum(kModeNames, value, key);
    else if (key == "initial_state") config.initial_state = parse_integer<int>(value, key);
    else if (key == "readout_flip") {
      config.noise.readout_flip_0to1 = config.noise.readout_flip_1to0 = parse_double(value, key);
      have_flip_shorthand = true;
    } else if (key == "readout_flip_0to1") {
      config.noise.readout_flip_0to1 = parse_double(value, key);
      have_flip_explicit = true;
    } else if (key == "readout_flip_1to0") {
      config.noise.readout_flip_1to0 = parse_double(value, key);
      have_flip_explicit = true;
    }
    else if (key == "depolarizing_1q") config.noise.depolarizing_1q = parse_double(value, key);
    else if (key == "depolarizing_2q") config.noise.depolarizing_2q = parse_double(value, key);
    else if (key == "mitigation") config.mitigation.kind = parse_enum(kMitigationNames, value, key);
    else if (key == "output_csv") config.output_csv = value;
    else if (key == "output_json") config.output_json = value;
    else config_error(origin + ": unknown key '" + key + "'");
  }

  if (have_flip_shorthand && have_flip_explicit)
    config_error("readout_flip: conflicts with readout_flip_0to1/readout_flip_1to0");

  const bool have_range = sweep_min || sweep_max || sweep_points;
  if (have_values && have_range)
    config_error("sweep_values: conflicts with sweep_min/sweep_max/sweep_points");
  if (!have_values) {
    if (!(sweep_min && sweep_max && sweep_points))
      config_error("sweep grid: set sweep_values or all of sweep_min/sweep_max/sweep_points");
    if (*sweep_points < 1) config_error("sweep_points: must be >= 1");
    if (*sweep_points == 1) {
      config.values = {*sweep_min};
    } else {
      const double step = (*sweep_max - *sweep_min) / (*sweep_points - 1);
      config.values.resize(static_cast<std::size_t>(*sweep_points));
      for (int i = 0; i < *sweep_points; ++i) config.values[static_cast<std::size_t>(i)] = *sweep_min + i * step;
      config.values.back() = *sweep_max;
    }
  }

  config.validate();
  return config;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) config_error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::vector<std::pair<std::string, std::string>> config_echo(const SweepConfig& config) {
  std::vector<std::pair<std::string, std::string>> echo;
  echo.emplace_back("schema_version", std::to_string(config.schema_version));
  echo.emplace_back("sweep_variable", enum_name(kVariableNames, config.variable));
  std::string grid;
  for (double v : config.values) {
    if (!grid.empty()) grid += ',';
    grid += format_double(v);
  }
  echo.emplace_back("sweep_values", grid);
  echo.emplace_back("gamma", format_double(config.base.gamma));
  echo.emplace_back("u", format_double(config.base.u));
  echo.emplace_back("tau", format_double(config.base.tau));
  echo.emplace_back("trotter_steps", std::to_string(config.trotter_steps));
  echo.emplace_back("n_measurements", std::to_string(config.n_measurements));
  echo.emplace_back("shots", std::to_string(config.shots));
  if (config.seed) echo.emplace_back("seed", std::to_string(*config.seed));
  echo.emplace_back("layout", enum_name(kLayoutNames, config.layout));
  echo.emplace_back("mode", enum_name(kModeNames, config.mode));
  echo.emplace_back("initial_state", std::to_string(config.initial_state));
  echo.emplace_back("readout_flip_0to1", format_double(config.noise.readout_flip_0to1));
  echo.emplace_back("readout_flip_1to0", format_double(config.noise.readout_flip_1to0));
  echo.emplace_back("depolarizing_1q", format_double(config.noise.depolarizing_1q));
  echo.emplace_back("depolarizing_2q", format_double(config.noise.depolarizing_2q));
  echo.emplace_back("mitigation", enum_name(kMitigationNames, config.mitigation.kind));
  if (!config.output_csv.empty()) echo.emplace_back("output_csv", config.output_csv);
  if (!config.output_json.empty()) echo.emplace_back("output_json", config.output_json);
  std::sort(echo.begin(), echo.end());
  return echo;
}

void emit_csv(const std::vector<SweepResultRow>& rows, const SweepConfig& config,
              std::ostream& out) {
  for (const auto& [key, value] : config_echo(config)) out << "# " << key << " = " << value << "\n";
  out << "sweep_value,mode,c_parameter,return_amplitude,near_degenerate"
      << ",analytic_mean,analytic_second_moment,analytic_variance,analytic_detected"
      << ",deterministic_mean,deterministic_second_moment,deterministic_variance"
      << ",deterministic_detected,deterministic_undetected"
      << ",sampled_mean,sampled_second_moment,sampled_variance,sampled_detected"
      << ",sampled_undetected,sampled_standard_error,sampled_rejected_fraction";
  for (int n = 1; n <= config.n_measurements; ++n) out << ",p_" << n;
  out << "\n";
  for (const SweepResultRow& row : rows) {
    out << format_double(row.sweep_value) << ',' << mode_name(row.mode) << ','
        << format_double(row.c_parameter) << ',' << format_double(row.return_amplitude) << ','
        << (row.near_degenerate ? 1 : 0) << ',' << format_double(row.analytic.mean) << ','
        << format_double(row.analytic.second_moment) << ',' << format_double(row.analytic.variance)
        << ',' << format_double(row.analytic.detection_probability) << ','
        << format_double(row.deterministic.mean) << ','
        << format_double(row.deterministic.second_moment) << ','
        << format_double(row.deterministic.variance) << ','
        << format_double(row.deterministic.detection_probability) << ','
        << format_double(row.undetected_deterministic) << ',';
    if (row.sampled) {
      out << format_double(row.sampled->mean) << ',' << format_double(row.sampled->second_moment)
          << ',' << format_double(row.sampled->variance) << ','
          << format_double(row.sampled->detection_probability) << ','
          << format_double(row.undetected_sampled) << ','
          << format_double(row.standard_error.value_or(0.0)) << ','
          << format_double(row.rejected_fraction);
    } else {
      out << ",,,,,,";
    }
    for (double p : row.pmf_deterministic) out << ',' << format_double(p);
    out << "\n";
  }
}

void emit_json(const std::vector<SweepResultRow>& rows, const SweepConfig& config,
               std::ostream& out) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema_version"] = config.schema_version;
  json echo = json::object();
  for (const auto& [key, value] : config_echo(config)) echo[key] = value;
  doc["config"] = std::move(echo);
  doc["rows"] = json::array();
  for (const SweepResultRow& row : rows) {
    json entry;
    entry["sweep_value"] = row.sweep_value;
    entry["mode"] = mode_name(row.mode);
    entry["c_parameter"] = row.c_parameter;
    entry["return_amplitude"] = row.return_amplitude;
    entry["near_degenerate"] = row.near_degenerate;
    entry["analytic"] = {{"mean", row.analytic.mean},
                         {"second_moment", row.analytic.second_moment},
                         {"variance", row.analytic.variance},
                         {"detection_probability", row.analytic.detection_probability}};
    entry["deterministic"] = {{"mean", row.deterministic.mean},
                              {"second_moment", row.deterministic.second_moment},
                              {"variance", row.deterministic.variance},
                              {"detection_probability", row.deterministic.detection_probability},
                              {"undetected_mass", row.undetected_deterministic},
                              {"pmf", row.pmf_deterministic}};
    if (row.sampled) {
      entry["sampled"] = {{"mean", row.sampled->mean},
                          {"second_moment", row.sampled->second_moment},
                          {"variance", row.sampled->variance},
                          {"detection_probability", row.sampled->detection_probability},
                          {"standard_error", row.standard_error.value_or(0.0)},
                          {"undetected_mass", row.undetected_sampled},
                          {"rejected_fraction", row.rejected_fraction},
                          {"pmf", row.pmf_sampled}};
    } else {
      entry["sampled"] = nullptr;
    }
    doc["rows"].push_back(std::move(entry));
  }
  out << doc.dump(2) << "\n";
}

void emit_results(const std::vector<SweepResultRow>& rows, const SweepConfig& config) {
  namespace fs = std::filesystem;
  const auto resolve = [](const std::string& raw) {
    fs::path path(raw);
    if (path.is_relative())
      if (const char* dir = std::getenv("MQWALK_OUTPUT_DIR")) path = fs::path(dir) / path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path;
  };
  const auto write = [&](const std::string& raw, auto emitter) {
    if (raw.empty()) return;
    const fs::path path = resolve(raw);
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    emitter(file);
    if (!file) throw std::runtime_error("failed writing output file '" + path.string() + "'");
  };
  write(config.output_csv, [&](std::ostream& out) { emit_csv(rows, config, out); });
  write(config.output_json, [&](std::ostream& out) { emit_json(rows, config, out); });
}

std::string compare_report(const std::vector<SweepResultRow>& rows, const SweepConfig& config) {
  std::ostringstream out;
  const bool exact_source = config.trotter_steps == 0;
  const bool gate_z = config.noise.is_zero();
  out << "compare: " << rows.size() << " rows, trotter_steps=" << config.trotter_steps
      << ", shots=" << config.shots << "\n";
  double max_gap = 0.0;
  double max_z = 0.0;
  int sampled_rows = 0;
  for (const SweepResultRow& row : rows) {
    const double gap = std::abs(row.analytic.mean - row.deterministic.mean);
    max_gap = std::max(max_gap, gap);
    out << "  value=" << format_double(row.sweep_value) << " mode=" << mode_name(row.mode)
        << " gap=" << format_double(gap);
    if (row.sampled) {
      ++sampled_rows;
      const double se = std::max(row.standard_error.value_or(0.0), 1e-15);
      const double z = std::abs(row.sampled->mean - row.deterministic.mean) / se;
      max_z = std::max(max_z, z);
      out << " z=" << format_double(z);
    }
    if (row.near_degenerate) out << " near_degenerate";
    out << "\n";
  }
  out << "max |analytic - deterministic| mean gap: " << format_double(max_gap);
  out << (exact_source ? " (threshold 1e-9, exact source)\n"
                       : " (informational, trotterized source)\n");
  bool pass = !exact_source || max_gap < 1e-9;
  if (sampled_rows > 0) {
    out << "max sampled z-score: " << format_double(max_z);
    if (gate_z) {
      out << " (threshold 5)\n";
      pass = pass && max_z < 5.0;
    } else {
      out << " (informational, noise present)\n";
    }
  }
  out << (pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace mqw
