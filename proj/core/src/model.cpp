#include "netstab/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "netstab/error.hpp"

namespace netstab {

namespace {

// base^exponent for strictly positive bases only.
double positive_pow(double base, double exponent, const char* what) {
  if (!(base > 0.0) || !std::isfinite(base)) {
    throw DomainError(fmt::format("{} must be positive and finite, got {:.17g}", what, base));
  }
  return std::exp(exponent * std::log(base));
}

}  // namespace

void validate_params(const ModelParams& p) {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw PreconditionError(fmt::format("(A1) {} must be a positive constant, got {:.17g}", name, v));
    }
  };
  require_positive(p.kappa, "kappa");
  require_positive(p.a, "a");
  require_positive(p.b, "b");
  require_positive(p.h_gain, "h_gain");
  require_positive(p.tau, "tau");
  require_positive(p.T_delay, "T_delay");
  if (p.tau < p.T_delay) {
    throw PreconditionError(
        fmt::format("(A1) requires tau >= T, got tau = {:.17g}, T = {:.17g}", p.tau, p.T_delay));
  }
  if (!(p.x_min > 0.0) || !(p.x_min < p.x_max) || !std::isfinite(p.x_max)) {
    throw PreconditionError(
        fmt::format("rate bounds need 0 < x_min < x_max, got [{:.17g}, {:.17g}]", p.x_min, p.x_max));
  }
}

CapacityLaw CapacityLaw::affine(double intercept, double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw PreconditionError(
        fmt::format("affine capacity law must be strictly decreasing (slope > 0), got {:.17g}", slope));
  }
  if (!std::isfinite(intercept)) throw PreconditionError("capacity intercept must be finite");
  return CapacityLaw(Kind::affine, intercept, slope);
}

CapacityLaw CapacityLaw::constant(double level) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw PreconditionError(fmt::format("constant capacity must be positive, got {:.17g}", level));
  }
  return CapacityLaw(Kind::constant, level, 0.0);
}

std::string CapacityLaw::describe() const {
  if (kind_ == Kind::constant) return fmt::format("g(x) = {:.17g}", intercept_);
  return fmt::format("g(x) = {:.17g} - {:.17g} x", intercept_, slope_);
}

double utility_derivative(double x, double a) {
  return positive_pow(x, -(a + 1.0), "rate x");
}

double price(double x, double c, double b, double h_gain) {
  if (!(x > 0.0)) throw DomainError(fmt::format("rate x must be positive, got {:.17g}", x));
  if (!(c > 0.0)) throw DomainError(fmt::format("capacity must be positive, got {:.17g}", c));
  return h_gain * positive_pow(x / c, b, "rate/capacity ratio");
}

double capacity(const CapacityLaw& law, double x) {
  const double c = law.value(x);
  if (!(c > 0.0)) throw CapacityExhausted(x, c);
  return c;
}

double rhs(double x_now, double x_delayed, double c_delayed, const ModelParams& p) {
  const double own = positive_pow(x_now, -p.a, "current rate");
  const double fed_back = positive_pow(x_delayed, p.b + 1.0, "delayed rate") *
                          positive_pow(c_delayed, -p.b, "delayed capacity");
  return p.kappa * (own - p.h_gain * fed_back);
}

double clamp_derivative(double x, double dxdt, const ModelParams& p) noexcept {
  if (x >= p.x_max) return dxdt < 0.0 ? dxdt : 0.0;
  if (x <= p.x_min) return dxdt > 0.0 ? dxdt : 0.0;
  return dxdt;
}

}  // namespace netstab
