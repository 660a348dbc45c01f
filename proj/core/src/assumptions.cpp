#include <cmath>

#include <fmt/format.h>

#include "netstab/analysis.hpp"
#include "netstab/error.hpp"

namespace netstab {

std::vector<Violation> validate_assumptions(const ModelParams& p, const CapacityLaw& law,
                                            RateRange range, int grid_n) {
  if (!(range.lo < range.hi) || !std::isfinite(range.lo) || !std::isfinite(range.hi)) {
    throw PreconditionError(
        fmt::format("rate range needs lo < hi, got [{:.17g}, {:.17g}]", range.lo, range.hi));
  }
  if (range.lo < p.x_min || range.hi > p.x_max) {
    throw PreconditionError(fmt::format("rate range [{:.17g}, {:.17g}] leaves [x_min, x_max]",
                                        range.lo, range.hi));
  }
  if (grid_n < 2) throw PreconditionError(fmt::format("grid_n must be >= 2, got {}", grid_n));

  std::vector<Violation> out;
  auto hard = [&](const char* id, std::string what) {
    out.push_back({id, std::move(what), Severity::hard});
  };
  auto warn = [&](const char* id, std::string what) {
    out.push_back({id, std::move(what), Severity::warning});
  };

  const std::pair<const char*, double> positives[] = {
      {"kappa", p.kappa}, {"a", p.a}, {"b", p.b}, {"tau", p.tau}, {"T", p.T_delay}};
  for (const auto& [name, value] : positives) {
    if (!(value > 0.0)) hard("A1", fmt::format("{} = {:.17g} is not a positive constant", name, value));
  }
  if (p.tau < p.T_delay) {
    hard("A1", fmt::format("tau >= T fails: tau = {:.17g}, T = {:.17g}", p.tau, p.T_delay));
  }

  int below_one = 0;
  double first_bad = 0.0;
  for (int k = 0; k < grid_n; ++k) {
    const double x = range.lo + (range.hi - range.lo) * k / (grid_n - 1);
    if (!(law.value(x) > 1.0)) {
      if (below_one++ == 0) first_bad = x;
    }
  }
  if (below_one > 0) {
    hard("A3", fmt::format("g(x) > 1 fails at {} of {} grid points, first at x = {:.17g} (g = {:.17g})",
                           below_one, grid_n, first_bad, law.value(first_bad)));
  }

  if (law.kind() == CapacityLaw::Kind::constant) {
    warn("A3", "constant capacity law is not decreasing: g'(x) = 0 is not < -1");
  } else if (!(law.derivative(range.lo) < -1.0)) {
    warn("A3", fmt::format("g'(x) = {:.17g} is not < -1", law.derivative(range.lo)));
  }
  return out;
}

bool has_hard_violation(const std::vector<Violation>& violations) noexcept {
  for (const auto& v : violations) {
    if (v.severity == Severity::hard) return true;
  }
  return false;
}

std::string to_string(Severity s) { return s == Severity::hard ? "hard" : "warning"; }

std::string to_string(Verdict v) {
  return v == Verdict::certified_stable ? "CertifiedStable" : "NotCertified";
}

std::string to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::converged: return "Converged";
    case TrajectoryKind::oscillating: return "Oscillating";
    case TrajectoryKind::saturated: return "Saturated";
    case TrajectoryKind::undetermined: return "Undetermined";
  }
  return "Undetermined";
}

}  // namespace netstab
