#include <cmath>

#include <fmt/format.h>

#include "netstab/analysis.hpp"
#include "netstab/error.hpp"

namespace netstab {

double lyapunov_value(const Trajectory& traj, double t, const ModelParams& p, const Equilibrium& eq,
                      int nodes) {
  if (nodes < 2) throw PreconditionError("quadrature needs at least 2 nodes");
  const double reach = p.max_delay();
  const double slack = 1e-12 * traj.step;
  if (t - reach < traj.t_start - slack || t > traj.t_end + slack) {
    throw PreconditionError(fmt::format(
        "V({:.17g}) needs trajectory history on [{:.17g}, {:.17g}], have [{:.17g}, {:.17g}]", t,
        t - reach, t, traj.t_start, traj.t_end));
  }

  const double deviation = traj.x_at(t) - eq.x_star;
  if (deviation == 0.0) return 0.0;
  const double sign = deviation > 0.0 ? 1.0 : -1.0;

  const CapacityLaw& law = traj.law_echo;
  const double at_eq = std::pow(eq.x_star, p.b + 1.0) * std::pow(eq.c_star, -p.b);
  auto integrand = [&](double theta) {
    const double xr = traj.x_at(t + theta * p.tau);
    const double xc = traj.x_at(t + theta * p.T_delay);
    return p.h_gain * (std::pow(xr, p.b + 1.0) * std::pow(capacity(law, xc), -p.b) - at_eq);
  };

  const double width = 1.0 / (nodes - 1);
  double sum = 0.5 * (integrand(-1.0) + integrand(0.0));
  for (int k = 1; k < nodes - 1; ++k) sum += integrand(-1.0 + k * width);
  return std::abs(deviation) + p.kappa * sign * sum * width;
}

std::vector<LyapunovSample> sample_lyapunov(const Trajectory& traj, const ModelParams& p,
                                            const Equilibrium& eq, double interval) {
  if (!(interval > 0.0)) throw PreconditionError("Lyapunov sampling interval must be positive");
  std::vector<LyapunovSample> out;
  const auto first = static_cast<long long>(std::ceil((traj.t_start + p.max_delay()) / interval - 1e-9));
  const auto last = static_cast<long long>(std::floor(traj.t_end / interval + 1e-9));
  for (long long k = first; k <= last; ++k) {
    const double t = static_cast<double>(k) * interval;
    out.push_back({t, lyapunov_value(traj, t, p, eq)});
  }
  return out;
}

}  // namespace netstab
