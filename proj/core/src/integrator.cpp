#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "netstab/dde.hpp"
#include "netstab/error.hpp"

namespace netstab {

Trajectory integrate(const ModelParams& params, const CapacityLaw& law, HistoryBuffer history,
                     double t_end, double step) {
  validate_params(params);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw PreconditionError(fmt::format("step must be positive, got {:.17g}", step));
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw PreconditionError(fmt::format("t_end must be positive, got {:.17g}", t_end));
  }
  if (std::abs(history.step() - step) > 1e-12 * step) {
    throw PreconditionError(fmt::format("history step {:.17g} differs from integration step {:.17g}",
                                        history.step(), step));
  }
  for (double delay : {params.tau, params.T_delay}) {
    if (!is_step_multiple(delay, step)) {
      throw PreconditionError(
          fmt::format("delay {:.17g} is not an integer multiple of step {:.17g}", delay, step));
    }
  }

  const auto n_tau = static_cast<std::size_t>(std::llround(params.tau / step));
  const auto n_T = static_cast<std::size_t>(std::llround(params.T_delay / step));
  const std::size_t join = history.join_index();
  if (join < std::max(n_tau, n_T)) {
    throw PreconditionError(fmt::format("history spans {:.17g} s, needs at least {:.17g} s",
                                        -history.origin(), params.max_delay()));
  }
  for (const Sample& s : history.samples()) {
    if (s.x < params.x_min || s.x > params.x_max) {
      throw PreconditionError(fmt::format("initial history value {:.17g} outside [{:.17g}, {:.17g}]",
                                          s.x, params.x_min, params.x_max));
    }
  }

  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
  history.reserve(join + n_steps + 1);

  auto field = [&](double x, double x_delayed, double x_cap_delayed) {
    const double xs = std::clamp(x, params.x_min, params.x_max);
    const double d = rhs(xs, x_delayed, capacity(law, x_cap_delayed), params);
    return clamp_derivative(xs, d, params);
  };

  const double h = step;
  std::size_t i = 0;
  try {
    {
      const std::size_t j = join;
      history.set_derivative(j, field(history[j].x, history[j - n_tau].x, history[j - n_T].x));
    }
    for (; i < n_steps; ++i) {
      const std::size_t j = join + i;
      const double x = history[j].x;
      const double k1 = history[j].dxdt;
      const double xd_half = history.interpolate(j - n_tau, 0.5).x;
      const double xT_half = history.interpolate(j - n_T, 0.5).x;
      const double xd_next = history[j + 1 - n_tau].x;
      const double xT_next = history[j + 1 - n_T].x;

      const double k2 = field(x + 0.5 * h * k1, xd_half, xT_half);
      const double k3 = field(x + 0.5 * h * k2, xd_half, xT_half);
      const double k4 = field(x + h * k3, xd_next, xT_next);
      double x_new = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(x_new)) throw IntegrationDiverged(static_cast<double>(i + 1) * h, "non-finite rate");
      x_new = std::clamp(x_new, params.x_min, params.x_max);
      capacity(law, x_new);

      const double d_new = field(x_new, xd_next, xT_next);
      if (!std::isfinite(d_new)) throw IntegrationDiverged(static_cast<double>(i + 1) * h, "non-finite derivative");
      history.append({x_new, d_new});
    }
  } catch (const IntegrationDiverged&) {
    throw;
  } catch (const Error& e) {
    throw IntegrationDiverged(static_cast<double>(i) * h, e.what());
  }

  Trajectory traj;
  traj.step = step;
  traj.t_start = 0.0;
  traj.t_end = static_cast<double>(n_steps) * step;
  traj.params_echo = params;
  traj.law_echo = law;
  traj.samples.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const Sample& s = history[join + k];
    traj.samples.push_back({static_cast<double>(k) * step, s.x, capacity(law, s.x), s.dxdt});
  }
  return traj;
}

}  // namespace netstab
