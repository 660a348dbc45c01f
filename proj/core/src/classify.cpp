#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "netstab/analysis.hpp"
#include "netstab/error.hpp"

namespace netstab {

namespace {

double peak_to_peak(const Trajectory& traj, double from, double to) {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& s : traj.samples) {
    if (s.t < from || s.t > to) continue;
    lo = std::min(lo, s.x);
    hi = std::max(hi, s.x);
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace

Classification classify(const Trajectory& traj, const Equilibrium& eq, const ClassifierOptions& opts) {
  if (!(opts.tol_conv > 0.0) || !(opts.tol_osc > 0.0)) {
    throw PreconditionError("classifier tolerances must be positive");
  }
  if (!(opts.tail_fraction > 0.0 && opts.tail_fraction <= 1.0)) {
    throw PreconditionError(fmt::format("tail_fraction must be in (0, 1], got {}", opts.tail_fraction));
  }
  if (traj.samples.empty()) throw PreconditionError("empty trajectory");
  const double horizon = traj.t_end - traj.t_start;
  const double tau = traj.params_echo.tau;
  if (horizon < 10.0 * tau * (1.0 - 1e-12)) {
    throw PreconditionError(fmt::format(
        "horizon {:.17g} s is shorter than 10 tau = {:.17g} s", horizon, 10.0 * tau));
  }

  const double window = opts.tail_fraction * horizon;
  const double tail_from = traj.t_end - window;
  const double mid = traj.t_start + 0.5 * horizon;

  Classification out;
  out.final_error = std::abs(traj.samples.back().x - eq.x_star);
  out.tail_peak_to_peak = peak_to_peak(traj, tail_from, traj.t_end);
  out.mid_peak_to_peak = peak_to_peak(traj, mid - 0.5 * window, mid + 0.5 * window);

  for (std::size_t k = traj.samples.size(); k-- > 0;) {
    if (std::abs(traj.samples[k].x - eq.x_star) >= opts.tol_conv) {
      if (k + 1 < traj.samples.size()) out.settling_time = traj.samples[k + 1].t;
      break;
    }
    if (k == 0) out.settling_time = traj.samples[0].t;
  }

  const auto& p = traj.params_echo;
  bool saturated = true;
  for (const auto& s : traj.samples) {
    if (s.t < tail_from) continue;
    if (s.x > p.x_min && s.x < p.x_max) {
      saturated = false;
      break;
    }
  }

  if (saturated) {
    out.kind = TrajectoryKind::saturated;
  } else if (out.final_error < opts.tol_conv && out.tail_peak_to_peak < opts.tol_conv) {
    out.kind = TrajectoryKind::converged;
  } else if (out.tail_peak_to_peak > opts.tol_osc &&
             out.tail_peak_to_peak >= 0.9 * out.mid_peak_to_peak) {
    out.kind = TrajectoryKind::oscillating;
  } else {
    out.kind = TrajectoryKind::undetermined;
  }
  return out;
}

}  // namespace netstab
