#pragma once

// Single-source/single-link primal congestion control model:
//
//   dx/dt = kappa * ( x(t)^-a - h * x(t-tau)^(b+1) * c(t-T)^-b )
//   c(t)  = g(x(t))
//
// with utility U(x) = -1/(a x^a), price p(x, c) = h (x/c)^b and the rate
// kept inside [x_min, x_max] by projecting the derivative at the bounds.

#include <string>

namespace netstab {

struct ModelParams {
  double kappa = 1.0;
  double a = 1.5;        // utility exponent
  double b = 0.8;        // price exponent
  double h_gain = 1.0;   // price multiplier
  double tau = 3.0;      // round-trip delay [s]
  double T_delay = 2.0;  // capacity feedback delay [s], T <= tau
  double x_min = 1e-3;
  double x_max = 1e3;

  double max_delay() const noexcept { return tau > T_delay ? tau : T_delay; }
};

// Throws PreconditionError naming the first violated invariant.
void validate_params(const ModelParams& p);

// The rate-to-capacity map g. Only affine (c0 - m x, m > 0) and constant laws
// are supported.
class CapacityLaw {
 public:
  enum class Kind { affine, constant };

  static CapacityLaw affine(double intercept, double slope);
  static CapacityLaw constant(double level);

  Kind kind() const noexcept { return kind_; }
  double intercept() const noexcept { return intercept_; }
  // Magnitude m of the (negative) slope; 0 for the constant law.
  double slope() const noexcept { return slope_; }

  // Raw g(x); may be <= 0 outside the operating range.
  double value(double x) const noexcept { return intercept_ - slope_ * x; }
  // g'(x)
  double derivative(double) const noexcept { return -slope_; }

  std::string describe() const;

  friend bool operator==(const CapacityLaw&, const CapacityLaw&) = default;

 private:
  CapacityLaw(Kind kind, double intercept, double slope)
      : kind_(kind), intercept_(intercept), slope_(slope) {}

  Kind kind_;
  double intercept_;
  double slope_;
};

struct Equilibrium {
  double x_star = 0.0;
  double c_star = 0.0;
  double residual = 0.0;  // |g(x*) - h^(1/b) x*^((a+b+1)/b)| / c*
};

// U'(x) = x^-(a+1).
double utility_derivative(double x, double a);

// h (x/c)^b.
double price(double x, double c, double b, double h_gain = 1.0);

// g(x); throws CapacityExhausted when g(x) <= 0.
double capacity(const CapacityLaw& law, double x);

// Unprojected vector field. Arguments are the current rate, the rate one
// round trip ago and the capacity T seconds ago.
double rhs(double x_now, double x_delayed, double c_delayed, const ModelParams& p);

// Derivative projection at the rate bounds.
double clamp_derivative(double x, double dxdt, const ModelParams& p) noexcept;

}  // namespace netstab
