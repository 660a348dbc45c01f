#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <fmt/format.h>

#include "netstab/error.hpp"
#include "netstab/scenario.hpp"

namespace netstab {

namespace {

constexpr double kEnvelopePad = 0.2;

double initial_value(const ScenarioConfig& cfg, const Equilibrium& eq) {
  return cfg.init.kind == InitialHistory::Kind::equilibrium ? eq.x_star : cfg.init.value;
}

// Removes every file it created unless release() is called.
class OutputGuard {
 public:
  explicit OutputGuard(std::vector<std::filesystem::path>& files) : files_(files) {}
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard() {
    if (released_) return;
    std::error_code ec;
    for (const auto& f : files_) std::filesystem::remove(f, ec);
    files_.clear();
  }
  void release() { released_ = true; }

 private:
  std::vector<std::filesystem::path>& files_;
  bool released_ = false;
};

template <typename Writer>
void emit(const std::filesystem::path& path, std::vector<std::filesystem::path>& files, Writer&& write) {
  files.push_back(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open {} for writing", path.string()));
  write(out);
  out.flush();
  if (!out) throw Error(fmt::format("failed writing {}", path.string()));
}

void write_files(ScenarioResult& result) {
  const auto& dir = result.config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));

  OutputGuard guard(result.files);
  emit(dir / "trajectory.csv", result.files, [&](std::ostream& o) { write_trajectory_csv(result.trajectory, o); });
  emit(dir / "lyapunov.csv", result.files, [&](std::ostream& o) { write_lyapunov_csv(result.lyapunov, o); });
  emit(dir / "report.txt", result.files, [&](std::ostream& o) { write_report(result, o); });
  emit(dir / "plot.svg", result.files,
       [&](std::ostream& o) { write_plot_svg(result.trajectory, result.config.name, o); });
  emit(dir / "scenario.echo", result.files, [&](std::ostream& o) { o << format_scenario(result.config); });
  guard.release();
}

}  // namespace

RateRange padded_envelope(std::span<const double> values, const ModelParams& p, const CapacityLaw& law) {
  if (values.empty()) throw PreconditionError("envelope of an empty set");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  double width = hi - lo;
  // A flat envelope (e.g. a run sitting at equilibrium) is padded relative
  // to its level instead.
  if (width <= 1e-12 * std::abs(hi)) width = std::abs(hi);
  lo = std::max(p.x_min, lo - kEnvelopePad * width);
  hi = std::min(p.x_max, hi + kEnvelopePad * width);
  if (law.kind() == CapacityLaw::Kind::affine) {
    // Keep g(x) > 0 on the whole range.
    const double exhausted = law.intercept() / law.slope();
    hi = std::min(hi, std::nextafter(exhausted, 0.0));
  }
  if (!(lo < hi)) {
    throw PreconditionError(fmt::format("empty margin range [{:.17g}, {:.17g}]", lo, hi));
  }
  return {lo, hi};
}

int exit_code(TrajectoryKind kind) noexcept {
  switch (kind) {
    case TrajectoryKind::converged: return 0;
    case TrajectoryKind::oscillating: return 10;
    case TrajectoryKind::saturated: return 11;
    case TrajectoryKind::undetermined: return 12;
  }
  return 12;
}

StabilityReport check_scenario(const ScenarioConfig& cfg) {
  RateRange range;
  if (cfg.margin_range) {
    range = *cfg.margin_range;
  } else {
    const Equilibrium eq = solve_equilibrium(cfg.params, cfg.law);
    const double pts[] = {initial_value(cfg, eq), eq.x_star};
    range = padded_envelope(pts, cfg.params, cfg.law);
  }
  return check_theorem2(cfg.params, cfg.law, range, cfg.grid_n);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  validate_params(cfg.params);

  ScenarioResult result;
  result.config = cfg;

  const Equilibrium eq = solve_equilibrium(cfg.params, cfg.law);
  HistoryBuffer history = make_history(cfg.step, cfg.params.max_delay(), initial_value(cfg, eq));
  result.trajectory = integrate(cfg.params, cfg.law, std::move(history), cfg.effective_t_end(), cfg.step);

  RateRange range;
  if (cfg.margin_range) {
    range = *cfg.margin_range;
  } else {
    std::vector<double> xs;
    xs.reserve(result.trajectory.samples.size() + 1);
    for (const auto& s : result.trajectory.samples) xs.push_back(s.x);
    xs.push_back(eq.x_star);
    range = padded_envelope(xs, cfg.params, cfg.law);
  }
  result.report = check_theorem2(cfg.params, cfg.law, range, cfg.grid_n);

  const auto& traj = result.trajectory;
  const double horizon = traj.t_end - traj.t_start;
  if (horizon < 10.0 * cfg.params.tau * (1.0 - 1e-12)) {
    result.classification.kind = TrajectoryKind::undetermined;
    result.classification.final_error = std::abs(traj.samples.back().x - eq.x_star);
    result.classification_note =
        fmt::format("horizon {:.6g} s is shorter than 10 tau = {:.6g} s", horizon, 10.0 * cfg.params.tau);
  } else {
    result.classification = classify(traj, eq, cfg.classifier);
  }

  if (opts.sample_lyapunov) result.lyapunov = sample_lyapunov(traj, cfg.params, eq, 1.0);
  if (opts.write_files) write_files(result);
  return result;
}

}  // namespace netstab
