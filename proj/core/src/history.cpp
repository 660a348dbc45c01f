#include <cmath>

#include <fmt/format.h>

#include "netstab/dde.hpp"
#include "netstab/error.hpp"

namespace netstab {

namespace {

constexpr double kGridHitTolerance = 1e-12;

}  // namespace

double hermite(const Sample& left, const Sample& right, double step, double s) noexcept {
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * left.x + h10 * step * left.dxdt + h01 * right.x + h11 * step * right.dxdt;
}

HistoryBuffer::HistoryBuffer(double step, double origin, std::vector<Sample> samples)
    : step_(step), origin_(origin), samples_(std::move(samples)) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) {
    throw PreconditionError(fmt::format("history step must be positive, got {:.17g}", step_));
  }
  if (samples_.empty()) throw PreconditionError("history buffer needs at least one sample");
  join_ = samples_.size() - 1;
  join_left_dxdt_ = samples_.back().dxdt;
}

double HistoryBuffer::time_at(std::size_t k) const noexcept {
  return origin_ + static_cast<double>(k) * step_;
}

Sample HistoryBuffer::interpolate(std::size_t k, double s) const noexcept {
  const Sample& left = samples_[k];
  Sample right = samples_[k + 1];
  if (k + 1 == join_) right.dxdt = join_left_dxdt_;
  const double x = hermite(left, right, step_, s);
  // Derivative of the interpolant, used only for diagnostics.
  const double s2 = s * s;
  const double dxdt = (6.0 * s2 - 6.0 * s) * (left.x - right.x) / step_ +
                      (3.0 * s2 - 4.0 * s + 1.0) * left.dxdt + (3.0 * s2 - 2.0 * s) * right.dxdt;
  return {x, dxdt};
}

Sample HistoryBuffer::lookup(double t) const {
  const double u = (t - origin_) / step_;
  const double last = static_cast<double>(samples_.size() - 1);
  if (!(u >= -kGridHitTolerance) || !(u <= last + kGridHitTolerance)) {
    throw OutOfRangeError(t, origin_, end_time());
  }
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= kGridHitTolerance) {
    return samples_[static_cast<std::size_t>(nearest)];
  }
  const double k = std::floor(u);
  return interpolate(static_cast<std::size_t>(k), u - k);
}

HistoryBuffer make_history(double step, double span, const std::function<double(double)>& init) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw PreconditionError(fmt::format("history step must be positive, got {:.17g}", step));
  }
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw PreconditionError(fmt::format("history span must be positive, got {:.17g}", span));
  }
  const auto intervals = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
  std::vector<Sample> samples;
  samples.reserve(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double t = -static_cast<double>(intervals - k) * step;
    const double x = init(t);
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError(fmt::format(
          "(A2) initial history must be positive, got x0({:.17g}) = {:.17g}", t, x));
    }
    samples.push_back({x, 0.0});
  }
  return HistoryBuffer(step, -static_cast<double>(intervals) * step, std::move(samples));
}

HistoryBuffer make_history(double step, double span, double constant) {
  return make_history(step, span, [constant](double) { return constant; });
}

double Trajectory::x_at(double t) const {
  if (samples.empty()) throw PreconditionError("empty trajectory");
  const double u = (t - t_start) / step;
  const double last = static_cast<double>(samples.size() - 1);
  if (!(u >= -kGridHitTolerance) || !(u <= last + kGridHitTolerance)) {
    throw OutOfRangeError(t, t_start, t_end);
  }
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= kGridHitTolerance) {
    return samples[static_cast<std::size_t>(nearest)].x;
  }
  const double k = std::floor(u);
  const auto& l = samples[static_cast<std::size_t>(k)];
  const auto& r = samples[static_cast<std::size_t>(k) + 1];
  return hermite({l.x, l.dxdt}, {r.x, r.dxdt}, step, u - k);
}

bool is_step_multiple(double span, double step, double rel_tol) noexcept {
  if (!(step > 0.0) || !(span > 0.0)) return false;
  const double ratio = span / step;
  const double n = std::round(ratio);
  return n >= 1.0 && std::abs(ratio - n) <= rel_tol * ratio;
}

}  // namespace netstab
