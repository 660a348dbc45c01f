#include <cmath>

#include <fmt/format.h>

#include "netstab/analysis.hpp"
#include "netstab/error.hpp"

namespace netstab {

double equilibrium_residual_function(double x, const ModelParams& p, const CapacityLaw& law) {
  const double exponent = (p.a + p.b + 1.0) / p.b;
  return law.value(x) - std::pow(p.h_gain, 1.0 / p.b) * std::pow(x, exponent);
}

Equilibrium solve_equilibrium(const ModelParams& p, const CapacityLaw& law) {
  if (!(p.a > 0.0) || !(p.b > 0.0) || !(p.h_gain > 0.0)) {
    throw PreconditionError("equilibrium needs a > 0, b > 0 and h_gain > 0");
  }
  if (!(p.x_min > 0.0) || !(p.x_min < p.x_max)) {
    throw PreconditionError("equilibrium needs 0 < x_min < x_max");
  }
  auto F = [&](double x) { return equilibrium_residual_function(x, p, law); };

  double lo = p.x_min;
  double hi = p.x_max;
  double f_lo = F(lo);
  double f_hi = F(hi);
  if (!(f_lo * f_hi < 0.0)) {
    throw NoEquilibriumError(fmt::format(
        "no equilibrium in [{:.17g}, {:.17g}]: g(x) - x^((a+b+1)/b) does not change sign "
        "(F(x_min) = {:.6g}, F(x_max) = {:.6g})",
        lo, hi, f_lo, f_hi));
  }

  // Bisect until the bracket collapses onto adjacent doubles.
  for (int iter = 0; iter < 4096; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = F(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      f_lo = f_hi = 0.0;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  Equilibrium eq;
  eq.x_star = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
  eq.c_star = capacity(law, eq.x_star);
  eq.residual = std::abs(F(eq.x_star)) / eq.c_star;
  return eq;
}

}  // namespace netstab
