#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mqw/analytic.hpp"
#include "mqw/sweep.hpp"

namespace {

struct SweepOverrides {
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> trotter_steps;
  std::optional<int> n_measurements;
  std::optional<std::string> output_csv;
  std::optional<std::string> output_json;
  int threads = 0;
};

mqw::SweepConfig load_config(const std::string& path, const SweepOverrides& overrides) {
  mqw::SweepConfig config = mqw::parse_config_file(path);
  if (overrides.shots) config.shots = *overrides.shots;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.trotter_steps) config.trotter_steps = *overrides.trotter_steps;
  if (overrides.n_measurements) config.n_measurements = *overrides.n_measurements;
  if (overrides.output_csv) config.output_csv = *overrides.output_csv;
  if (overrides.output_json) config.output_json = *overrides.output_json;
  config.threads = overrides.threads;
  config.validate();
  return config;
}

void add_override_flags(CLI::App* cmd, std::string& config_path, SweepOverrides& overrides) {
  cmd->add_option("-c,--config", config_path, "sweep config file (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--shots", overrides.shots, "override shots (0 disables sampling)");
  cmd->add_option("--seed", overrides.seed, "override the sampling seed");
  cmd->add_option("--trotter-steps", overrides.trotter_steps,
                  "override trotter_steps (0 = exact round unitary)");
  cmd->add_option("--n-measurements", overrides.n_measurements, "override n_measurements");
  cmd->add_option("--output-csv", overrides.output_csv, "override the CSV output path");
  cmd->add_option("--output-json", overrides.output_json, "override the JSON output path");
  cmd->add_option("--threads", overrides.threads,
                  "sampling worker threads (0 = auto); results do not depend on it");
}

int run_sweep_command(const std::string& config_path, const SweepOverrides& overrides,
                      bool print_summary) {
  const mqw::SweepConfig config = load_config(config_path, overrides);
  const auto rows = mqw::run_sweep(config);
  mqw::emit_results(rows, config);
  if (config.output_csv.empty() && config.output_json.empty())
    mqw::emit_csv(rows, config, std::cout);
  else if (print_summary)
    std::cout << "sweep: " << rows.size() << " rows written\n";
  return 0;
}

int run_compare_command(const std::string& config_path, const SweepOverrides& overrides) {
  const mqw::SweepConfig config = load_config(config_path, overrides);
  const auto rows = mqw::run_sweep(config);
  const std::string report = mqw::compare_report(rows, config);
  std::cout << report;
  return report.find("PASS") != std::string::npos ? 0 : 1;
}

int run_analytic_command(double gamma, double u, double tau, int n_measurements) {
  mqw::ModelParams params;
  params.gamma = gamma;
  params.u = u;
  params.tau = tau;
  params.validate();
  const double c = mqw::c_parameter(params);
  const double a = mqw::return_amplitude(params);
  const auto fdr = mqw::truncated_moments(a, n_measurements, mqw::DetectionMode::FirstReturn);
  const auto fdt = mqw::truncated_moments(a, n_measurements, mqw::DetectionMode::FirstTransition);
  std::cout << "c_parameter = " << c << "\n"
            << "return_amplitude = " << a << "\n"
            << "mean_fdr_infinite = " << mqw::mean_fdr(a) << "\n"
            << "mean_fdt_infinite = " << mqw::mean_fdt(a) << "\n"
            << "fdt_total_infinite = " << mqw::fdt_total(a) << "\n"
            << "n_measurements = " << n_measurements << "\n"
            << "fdr_mean = " << fdr.mean << "\n"
            << "fdr_detected = " << fdr.detection_probability << "\n"
            << "fdt_mean = " << fdt.mean << "\n"
            << "fdt_detected = " << fdt.detection_probability << "\n";
  return 0;
}

int run_degeneracies_command(double gamma, double tau, int k_max) {
  const mqw::DegeneracySet set = mqw::degenerate_potentials(gamma, tau, k_max);
  std::cout << "gamma = " << set.gamma << "\n"
            << "tau = " << set.tau << "\n";
  std::cout << "potentials =";
  for (double u : set.potentials) std::cout << ' ' << u;
  std::cout << "\n";
  std::cout << "gamma_degeneracies =";
  for (double g : set.gamma_degeneracies) std::cout << ' ' << g;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stroboscopically monitored two-site quantum walk toolkit"};
  app.require_subcommand(1);
  std::cout.precision(17);

  std::string sweep_config;
  SweepOverrides sweep_overrides;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a parameter sweep (analytic / deterministic / sampled columns)");
  add_override_flags(sweep, sweep_config, sweep_overrides);

  std::string compare_config;
  SweepOverrides compare_overrides;
  CLI::App* compare = app.add_subcommand(
      "compare", "run a sweep and report cross-path agreement (exit 1 on FAIL)");
  add_override_flags(compare, compare_config, compare_overrides);

  double gamma = -1.0, u = 0.0, tau = 0.4;
  int n_measurements = 40;
  CLI::App* analytic = app.add_subcommand("analytic", "print the closed-form detection statistics");
  analytic->add_option("--gamma", gamma, "hopping strength")->capture_default_str();
  analytic->add_option("--u", u, "potential half-difference")->capture_default_str();
  analytic->add_option("--tau", tau, "measurement period")->capture_default_str();
  analytic->add_option("-N,--n-measurements", n_measurements, "truncation length")
      ->capture_default_str();

  double deg_gamma = -1.0, deg_tau = 3.0;
  int k_max = 3;
  CLI::App* degeneracies =
      app.add_subcommand("degeneracies", "print degenerate potentials / hoppings for fixed tau");
  degeneracies->add_option("--gamma", deg_gamma, "hopping strength")->capture_default_str();
  degeneracies->add_option("--tau", deg_tau, "measurement period")->capture_default_str();
  degeneracies->add_option("--k-max", k_max, "largest branch index")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return run_sweep_command(sweep_config, sweep_overrides, true);
    if (compare->parsed()) return run_compare_command(compare_config, compare_overrides);
    if (analytic->parsed()) return run_analytic_command(gamma, u, tau, n_measurements);
    if (degeneracies->parsed()) return run_degeneracies_command(deg_gamma, deg_tau, k_max);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
