// netstab: simulate and analyse the delayed single-link congestion control
// model from a scenario file.
//
//   netstab run   <scenario> [--out DIR] [--step S] [--t-end T]
//   netstab sweep <scenario> --param NAME --values LIST [--out DIR] [--threads N]
//   netstab check <scenario>
//
// Exit status of `run`: 0 Converged, 10 Oscillating, 11 Saturated,
// 12 Undetermined. `check`: 0 CertifiedStable, 1 NotCertified.
// Errors: 64 usage/config, 65 invalid input, 66 no equilibrium,
// 67 diverged integration, 70 I/O and everything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "netstab/error.hpp"
#include "netstab/scenario.hpp"

namespace {

struct Overrides {
  std::optional<double> step;
  std::optional<double> t_end;
  std::optional<std::string> out;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--step", o.step, "Integration step override [s]");
  cmd->add_option("--t-end", o.t_end, "Simulated horizon override [s]");
}

netstab::ScenarioConfig load(const std::string& path, const Overrides& o) {
  netstab::ScenarioConfig cfg = netstab::load_scenario(path);
  if (o.step) cfg.step = *o.step;
  if (o.t_end) cfg.t_end = *o.t_end;
  if (o.out) cfg.output_dir = *o.out;
  if (o.step || o.t_end) netstab::finalize_scenario(cfg, path);
  return cfg;
}

int cmd_run(const std::string& path, const Overrides& o) {
  const auto cfg = load(path, o);
  const auto result = netstab::run_scenario(cfg);
  netstab::write_report(result, std::cout);
  for (const auto& f : result.files) std::cout << "wrote = " << f.string() << '\n';
  return netstab::exit_code(result.classification.kind);
}

int cmd_check(const std::string& path, const Overrides& o) {
  const auto cfg = load(path, o);
  const auto report = netstab::check_scenario(cfg);
  netstab::write_stability_report(report, std::cout);
  return report.verdict == netstab::Verdict::certified_stable ? 0 : 1;
}

int cmd_sweep(const std::string& path, const Overrides& o, const std::string& param_name,
              const std::string& values_text, unsigned threads) {
  const auto cfg = load(path, o);
  const auto param = netstab::parse_sweep_param(param_name);
  const auto values = netstab::parse_value_list(values_text);
  const auto report = netstab::sweep(cfg, param, values, {.threads = threads});

  std::filesystem::create_directories(cfg.output_dir);
  const auto csv = cfg.output_dir / ("sweep_" + netstab::to_string(param) + ".csv");
  std::ofstream out(csv, std::ios::binary | std::ios::trunc);
  if (!out) throw netstab::Error("cannot write " + csv.string());
  netstab::write_sweep_csv(report, out);
  out.close();

  netstab::write_sweep_summary(report, std::cout);
  std::cout << "wrote = " << csv.string() << '\n';
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed congestion control model: simulation and stability checks"};
  app.require_subcommand(1);

  std::string scenario;
  Overrides overrides;
  std::string param;
  std::string values;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Simulate, analyse, classify and write output files");
  run->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", overrides.out, "Output directory");
  add_overrides(run, overrides);

  auto* sweep = app.add_subcommand("sweep", "Run the pipeline for a list of parameter values");
  sweep->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "a, b, kappa, tau, T_delay, intercept or slope")->required();
  sweep->add_option("--values", values, "Comma list or start:step:stop")->required();
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware)");
  sweep->add_option("--out", overrides.out, "Output directory");
  add_overrides(sweep, overrides);

  auto* check = app.add_subcommand("check", "Stability condition only, no simulation");
  check->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  add_overrides(check, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (*run) return cmd_run(scenario, overrides);
    if (*check) return cmd_check(scenario, overrides);
    if (*sweep) return cmd_sweep(scenario, overrides, param, values, threads);
  } catch (const netstab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 70;
  }
  return 64;
}
