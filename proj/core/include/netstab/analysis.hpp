#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netstab/dde.hpp"
#include "netstab/model.hpp"

namespace netstab {

struct RateRange {
  double lo = 0.0;
  double hi = 0.0;
};

// ---------------------------------------------------------------------------
// Equilibrium

// Bisection on F(x) = g(x) - h^(1/b) x^((a+b+1)/b) over [x_min, x_max],
// carried to adjacent doubles. Throws NoEquilibriumError without a sign change.
Equilibrium solve_equilibrium(const ModelParams& p, const CapacityLaw& law);

// F(x) above; strictly decreasing for a non-increasing g.
double equilibrium_residual_function(double x, const ModelParams& p, const CapacityLaw& law);

// ---------------------------------------------------------------------------
// Assumption checks

enum class Severity { warning, hard };

struct Violation {
  std::string assumption;  // "A1", "A3"
  std::string description;
  Severity severity = Severity::warning;
};

// (A1) positivity and tau >= T are hard findings. (A3) g(x) > 1 failures on
// the grid are hard; g'(x) < -1 failures are warnings. Throws
// PreconditionError on an empty range or grid_n < 2.
std::vector<Violation> validate_assumptions(const ModelParams& p, const CapacityLaw& law,
                                            RateRange range, int grid_n);

bool has_hard_violation(const std::vector<Violation>& violations) noexcept;

// ---------------------------------------------------------------------------
// Delay-independent stability condition

enum class Verdict { certified_stable, not_certified };

struct MarginPoint {
  double x = 0.0;
  double margin = 0.0;
  bool limit = false;  // evaluated with the x -> x* limit formula
};

struct StabilityReport {
  Equilibrium equilibrium;
  std::vector<Violation> assumption_violations;
  RateRange range;
  std::vector<MarginPoint> margin_profile;
  double min_margin = 0.0;
  double argmin_x = 0.0;
  Verdict verdict = Verdict::not_certified;
};

// Half-width of the band around x* (relative to x*) inside which the margin
// is replaced by its analytic limit.
inline constexpr double kMarginBand = 1e-6;

// LHS - RHS of
//   (x*^-a - x^-a) / (x - x*)  >  h (x^(b+1) g(x)^-b - x*^(b+1) c*^-b) / (x - x*)
double theorem2_margin(double x, const ModelParams& p, const CapacityLaw& law, const Equilibrium& eq);

// Value of the margin as x -> x*.
double theorem2_margin_limit(const ModelParams& p, const CapacityLaw& law, const Equilibrium& eq);

// Uniform grid of grid_n points over range plus x* itself when it lies inside.
// Throws PreconditionError when grid_n < 16.
StabilityReport check_theorem2(const ModelParams& p, const CapacityLaw& law, RateRange range,
                               int grid_n);

// ---------------------------------------------------------------------------
// Lyapunov-Krasovskii functional
//
//   V(t) = |x(t) - x*| + kappa sgn(x(t) - x*) * integral_{-1}^{0}
//          h (x(t + s tau)^(b+1) c(t + s T)^-b - x*^(b+1) c*^-b) ds
//
// with c = g(x) along the trajectory and composite trapezoid quadrature.
inline constexpr int kLyapunovNodes = 201;

double lyapunov_value(const Trajectory& traj, double t, const ModelParams& p, const Equilibrium& eq,
                      int nodes = kLyapunovNodes);

struct LyapunovSample {
  double t = 0.0;
  double value = 0.0;
};

// V at every whole multiple of interval inside [max(tau, T), t_end].
std::vector<LyapunovSample> sample_lyapunov(const Trajectory& traj, const ModelParams& p,
                                            const Equilibrium& eq, double interval = 1.0);

// ---------------------------------------------------------------------------
// Trajectory classification

enum class TrajectoryKind { converged, oscillating, saturated, undetermined };

struct ClassifierOptions {
  double tol_conv = 1e-2;
  double tol_osc = 0.1;
  double tail_fraction = 0.2;
};

struct Classification {
  TrajectoryKind kind = TrajectoryKind::undetermined;
  double final_error = 0.0;
  double tail_peak_to_peak = 0.0;
  double mid_peak_to_peak = 0.0;
  std::optional<double> settling_time;
};

// Throws PreconditionError when the horizon is shorter than 10 tau.
Classification classify(const Trajectory& traj, const Equilibrium& eq,
                        const ClassifierOptions& opts = {});

// ---------------------------------------------------------------------------

std::string to_string(Severity s);
std::string to_string(Verdict v);
std::string to_string(TrajectoryKind k);

}  // namespace netstab
