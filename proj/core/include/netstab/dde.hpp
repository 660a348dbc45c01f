#pragma once

// Fixed-step integration of scalar delay differential equations with
// constant delays. Past state lives in a uniformly sampled HistoryBuffer
// holding (x, dx/dt) pairs so that off-grid delayed values can be recovered
// with cubic Hermite interpolation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "netstab/model.hpp"

namespace netstab {

struct Sample {
  double x = 0.0;
  double dxdt = 0.0;
};

// Cubic Hermite interpolant on [t0, t0 + step] evaluated at fraction s.
double hermite(const Sample& left, const Sample& right, double step, double s) noexcept;

class HistoryBuffer {
 public:
  // Samples at origin + k*step. The last sample is the join point: its
  // stored derivative may be replaced by the first accepted derivative of a
  // run, while the derivative seen from the left stays the one it was built
  // with.
  HistoryBuffer(double step, double origin, std::vector<Sample> samples);

  double step() const noexcept { return step_; }
  double origin() const noexcept { return origin_; }
  double end_time() const noexcept { return time_at(samples_.size() - 1); }
  double time_at(std::size_t k) const noexcept;
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t join_index() const noexcept { return join_; }

  std::span<const Sample> samples() const noexcept { return samples_; }
  const Sample& operator[](std::size_t k) const noexcept { return samples_[k]; }

  // Stored sample on an exact grid hit (within 1e-12 step), Hermite
  // interpolation between the bracketing samples otherwise.
  Sample lookup(double t) const;

  // Interpolant on [time_at(k), time_at(k + 1)] at fraction s in [0, 1];
  // the returned dxdt is the interpolant's slope. Requires k + 1 < size().
  Sample interpolate(std::size_t k, double s) const noexcept;

  void append(const Sample& s) { samples_.push_back(s); }
  void set_derivative(std::size_t k, double dxdt) { samples_[k].dxdt = dxdt; }
  void reserve(std::size_t n) { samples_.reserve(n); }

 private:
  double step_;
  double origin_;
  std::vector<Sample> samples_;
  std::size_t join_;
  double join_left_dxdt_;
};

// Pre-history on [-span, 0] sampled every step; derivative slots are zero.
// A span that is not a multiple of step is rounded up to the next grid point.
HistoryBuffer make_history(double step, double span, const std::function<double(double)>& init);
HistoryBuffer make_history(double step, double span, double constant);

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double c = 0.0;
  double dxdt = 0.0;
};

struct Trajectory {
  double step = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<TrajectorySample> samples;
  ModelParams params_echo;
  CapacityLaw law_echo = CapacityLaw::constant(1.0);

  // Hermite interpolation of x between grid samples; throws OutOfRangeError
  // outside [t_start, t_end].
  double x_at(double t) const;
};

// True when span/step is an integer within rel_tol.
bool is_step_multiple(double span, double step, double rel_tol = 1e-9) noexcept;

// Classical RK4 with the derivative projection applied to every stage.
// Delayed arguments come from the history buffer; capacity is g(x) pointwise.
Trajectory integrate(const ModelParams& params, const CapacityLaw& law, HistoryBuffer history,
                     double t_end, double step);

}  // namespace netstab
