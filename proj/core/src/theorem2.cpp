#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "netstab/analysis.hpp"
#include "netstab/error.hpp"

namespace netstab {

double theorem2_margin(double x, const ModelParams& p, const CapacityLaw& law, const Equilibrium& eq) {
  if (!(x > 0.0)) throw DomainError(fmt::format("margin needs x > 0, got {:.17g}", x));
  const double c = capacity(law, x);
  const double xs = eq.x_star;
  if (std::abs(x - xs) < kMarginBand * xs) return theorem2_margin_limit(p, law, eq);

  const double dx = x - xs;
  const double lhs = (std::pow(xs, -p.a) - std::pow(x, -p.a)) / dx;
  const double rhs = p.h_gain *
                     (std::pow(x, p.b + 1.0) * std::pow(c, -p.b) -
                      std::pow(xs, p.b + 1.0) * std::pow(eq.c_star, -p.b)) /
                     dx;
  return lhs - rhs;
}

double theorem2_margin_limit(const ModelParams& p, const CapacityLaw& law, const Equilibrium& eq) {
  const double xs = eq.x_star;
  const double cs = eq.c_star;
  const double lhs = p.a * std::pow(xs, -(p.a + 1.0));
  const double rhs = p.h_gain * ((p.b + 1.0) * std::pow(xs, p.b) * std::pow(cs, -p.b) -
                                 p.b * std::pow(xs, p.b + 1.0) * std::pow(cs, -p.b - 1.0) *
                                     law.derivative(xs));
  return lhs - rhs;
}

StabilityReport check_theorem2(const ModelParams& p, const CapacityLaw& law, RateRange range,
                               int grid_n) {
  if (grid_n < 16) throw PreconditionError(fmt::format("grid_n must be >= 16, got {}", grid_n));

  StabilityReport report;
  report.equilibrium = solve_equilibrium(p, law);
  report.assumption_violations = validate_assumptions(p, law, range, grid_n);
  report.range = range;

  const double xs = report.equilibrium.x_star;
  auto& profile = report.margin_profile;
  profile.reserve(static_cast<std::size_t>(grid_n) + 1);
  for (int k = 0; k < grid_n; ++k) {
    const double x = range.lo + (range.hi - range.lo) * k / (grid_n - 1);
    const bool in_band = std::abs(x - xs) < kMarginBand * xs;
    profile.push_back({x, theorem2_margin(x, p, law, report.equilibrium), in_band});
  }
  if (xs >= range.lo && xs <= range.hi) {
    const MarginPoint at_eq{xs, theorem2_margin_limit(p, law, report.equilibrium), true};
    auto pos = std::lower_bound(profile.begin(), profile.end(), xs,
                                [](const MarginPoint& m, double v) { return m.x < v; });
    profile.insert(pos, at_eq);
  }

  auto worst = std::min_element(profile.begin(), profile.end(),
                                [](const MarginPoint& l, const MarginPoint& r) { return l.margin < r.margin; });
  report.min_margin = worst->margin;
  report.argmin_x = worst->x;
  report.verdict = report.min_margin > 0.0 && !has_hard_violation(report.assumption_violations)
                       ? Verdict::certified_stable
                       : Verdict::not_certified;
  return report;
}

}  // namespace netstab
