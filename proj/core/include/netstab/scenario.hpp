#pragma once

// Scenario files, end-to-end runs and parameter sweeps.
//
// A scenario file is flat `key = value` text grouped under section headers:
//
//   [scenario]  name
//   [model]     kappa a b h_gain tau T_delay x_min x_max
//   [capacity]  law = affine | constant, intercept, slope, level
//   [initial]   x = <rate> | equilibrium
//   [run]       t_end step horizon_tau_multiple
//   [analysis]  margin_range = auto | <lo>, <hi>; grid_n tol_conv tol_osc tail_fraction
//   [output]    dir
//
// `#` starts a comment. Unknown sections or keys are rejected.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netstab/analysis.hpp"
#include "netstab/dde.hpp"
#include "netstab/model.hpp"

namespace netstab {

struct InitialHistory {
  enum class Kind { constant, equilibrium };
  Kind kind = Kind::constant;
  double value = 1.0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelParams params;
  CapacityLaw law = CapacityLaw::affine(5.0, 1.0);
  InitialHistory init;
  double t_end = 200.0;
  double step = 0.01;
  double requested_step = 0.01;
  bool step_snapped = false;
  // Effective horizon is max(t_end, horizon_tau_multiple * tau); 0 disables.
  double horizon_tau_multiple = 0.0;
  std::optional<RateRange> margin_range;  // empty: derived from the run
  int grid_n = 256;
  ClassifierOptions classifier;
  std::filesystem::path output_dir = "out";

  double effective_t_end() const noexcept;
};

// Without [scenario] name the config is called default_name and writes to
// out/<name> unless [output] dir says otherwise.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source = "<memory>",
                              const std::string& default_name = "scenario");
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Validates every field and snaps the step so both delays are integer
// multiples of it. Throws ConfigError naming the offending field.
void finalize_scenario(ScenarioConfig& cfg, const std::string& source = "<config>");

// Largest step <= requested with tau/step and T/step integral (1e-9 relative).
// A step that already qualifies is returned unchanged.
double snap_step(double requested, double tau, double T_delay);

// Re-loadable text form of a config (all numbers with 17 significant digits).
std::string format_scenario(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------

struct RunOptions {
  bool write_files = true;
  bool sample_lyapunov = true;
};

struct ScenarioResult {
  ScenarioConfig config;
  Trajectory trajectory;
  StabilityReport report;
  Classification classification;
  std::string classification_note;
  std::vector<LyapunovSample> lyapunov;
  std::vector<std::filesystem::path> files;
};

// validate -> equilibrium -> integrate -> stability check -> classify ->
// Lyapunov samples -> files. On failure no output files are left behind.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Analysis only; an automatic margin range spans {initial value, x*}.
StabilityReport check_scenario(const ScenarioConfig& cfg);

// Envelope of the values padded by 20 % of its width on each side, clipped
// to the rate bounds and to where g stays positive.
RateRange padded_envelope(std::span<const double> values, const ModelParams& p, const CapacityLaw& law);

// Process exit status for a classification: 0, 10, 11, 12.
int exit_code(TrajectoryKind kind) noexcept;

// ---------------------------------------------------------------------------

enum class SweepParam { a, b, kappa, tau, T_delay, intercept, slope };

SweepParam parse_sweep_param(std::string_view name);
std::string to_string(SweepParam p);

// Applies one swept value. Sweeping tau keeps the T/tau ratio of cfg.
void apply_sweep_value(ScenarioConfig& cfg, SweepParam param, double value);

// "0.1,0.2,0.5" or "start:step:stop" (inclusive, tolerant to rounding).
std::vector<double> parse_value_list(std::string_view text);

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string message;
  double x_star = 0.0;
  double min_margin = 0.0;
  Verdict verdict = Verdict::not_certified;
  TrajectoryKind kind = TrajectoryKind::undetermined;
  double final_error = 0.0;
  double tail_peak_to_peak = 0.0;
};

struct SweepReport {
  SweepParam param = SweepParam::b;
  std::vector<SweepRow> rows;
  std::optional<double> largest_certified;
  std::optional<double> smallest_oscillating;
  // Largest certified value and the next swept value that is not certified.
  std::optional<std::pair<double, double>> certification_bracket;
  std::vector<std::string> flags;
};

struct SweepOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

SweepReport sweep(const ScenarioConfig& base, SweepParam param, std::span<const double> values,
                  const SweepOptions& opts = {});

// ---------------------------------------------------------------------------
// File emission

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_lyapunov_csv(std::span<const LyapunovSample> samples, std::ostream& out);
void write_report(const ScenarioResult& result, std::ostream& out);
void write_stability_report(const StabilityReport& report, std::ostream& out);
void write_plot_svg(const Trajectory& traj, const std::string& title, std::ostream& out);
void write_sweep_csv(const SweepReport& report, std::ostream& out);
void write_sweep_summary(const SweepReport& report, std::ostream& out);

}  // namespace netstab
