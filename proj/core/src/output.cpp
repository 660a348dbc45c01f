#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "netstab/scenario.hpp"

namespace netstab {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string("none"); }

// Round axis extent outwards onto a 1-2-5 tick spacing.
struct Axis {
  double lo;
  double hi;
  double tick;
};

Axis nice_axis(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double tick = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    tick = f * mag;
    if (tick >= raw) break;
  }
  return {std::floor(lo / tick) * tick, std::ceil(hi / tick) * tick, tick};
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,x,c,dxdt\n";
  for (const auto& s : traj.samples) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.x, s.c, s.dxdt);
  }
}

void write_lyapunov_csv(std::span<const LyapunovSample> samples, std::ostream& out) {
  out << "t,V\n";
  for (const auto& s : samples) out << fmt::format("{:.17g},{:.17g}\n", s.t, s.value);
}

void write_stability_report(const StabilityReport& report, std::ostream& out) {
  out << "equilibrium.x_star = " << num(report.equilibrium.x_star) << '\n';
  out << "equilibrium.c_star = " << num(report.equilibrium.c_star) << '\n';
  out << "equilibrium.residual = " << num(report.equilibrium.residual) << '\n';
  out << "assumptions.violations = " << report.assumption_violations.size() << '\n';
  for (const auto& v : report.assumption_violations) {
    out << "violation = " << v.assumption << ", " << to_string(v.severity) << ", " << v.description << '\n';
  }
  out << "margin.range = " << num(report.range.lo) << ", " << num(report.range.hi) << '\n';
  out << "margin.points = " << report.margin_profile.size() << '\n';
  out << "margin.min = " << num(report.min_margin) << '\n';
  out << "margin.argmin_x = " << num(report.argmin_x) << '\n';
  out << "verdict = " << to_string(report.verdict) << '\n';
}

void write_report(const ScenarioResult& result, std::ostream& out) {
  const auto& cfg = result.config;
  const auto& c = result.classification;
  out << "[scenario]\n";
  out << "name = " << cfg.name << '\n';
  out << "law = " << cfg.law.describe() << '\n';
  out << "step = " << num(cfg.step) << '\n';
  if (cfg.step_snapped) out << "step.requested = " << num(cfg.requested_step) << '\n';
  out << "t_end = " << num(result.trajectory.t_end) << '\n';
  out << "\n[stability]\n";
  write_stability_report(result.report, out);
  out << "\n[classification]\n";
  out << "kind = " << to_string(c.kind) << '\n';
  out << "final_error = " << num(c.final_error) << '\n';
  out << "tail_peak_to_peak = " << num(c.tail_peak_to_peak) << '\n';
  out << "mid_peak_to_peak = " << num(c.mid_peak_to_peak) << '\n';
  out << "settling_time = " << opt_num(c.settling_time) << '\n';
  if (!result.classification_note.empty()) out << "note = " << result.classification_note << '\n';
  out << "exit_code = " << exit_code(c.kind) << '\n';
}

void write_plot_svg(const Trajectory& traj, const std::string& title, std::ostream& out) {
  constexpr double width = 900.0;
  constexpr double height = 480.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;

  double y_lo = INFINITY;
  double y_hi = -INFINITY;
  for (const auto& s : traj.samples) {
    y_lo = std::min({y_lo, s.x, s.c});
    y_hi = std::max({y_hi, s.x, s.c});
  }
  const Axis ty = nice_axis(traj.t_start, traj.t_end);
  const Axis yy = nice_axis(std::min(0.0, y_lo), y_hi);
  auto px = [&](double t) { return left + (t - ty.lo) / (ty.hi - ty.lo) * (width - left - right); };
  auto py = [&](double y) { return height - bottom - (y - yy.lo) / (yy.hi - yy.lo) * (height - top - bottom); };

  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      width, height);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n", left,
                     title);
  out << "<g font-family=\"sans-serif\" font-size=\"11\" stroke-width=\"1\">\n";
  for (double t = ty.lo; t <= ty.hi + 0.5 * ty.tick; t += ty.tick) {
    out << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n",
                       px(t), top, height - bottom);
    out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", px(t),
                       height - bottom + 16, t);
  }
  for (double y = yy.lo; y <= yy.hi + 0.5 * yy.tick; y += yy.tick) {
    out << fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n",
                       left, py(y), width - right);
    out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n", left - 6,
                       py(y) + 4, y);
  }
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">time [s]</text>\n",
                     0.5 * (left + width - right), height - 12);
  out << "</g>\n";

  const std::size_t stride = std::max<std::size_t>(1, traj.samples.size() / 2000);
  auto polyline = [&](auto value, const char* colour) {
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < traj.samples.size(); k += stride) {
      const auto& s = traj.samples[k];
      out << fmt::format("{:.2f},{:.2f} ", px(s.t), py(value(s)));
    }
    const auto& last = traj.samples.back();
    out << fmt::format("{:.2f},{:.2f}", px(last.t), py(value(last)));
    out << "\"/>\n";
  };
  if (!traj.samples.empty()) {
    polyline([](const TrajectorySample& s) { return s.x; }, "#1f77b4");
    polyline([](const TrajectorySample& s) { return s.c; }, "#d62728");
  }
  out << fmt::format(
      "<g font-family=\"sans-serif\" font-size=\"12\"><text x=\"{0}\" y=\"{1}\" fill=\"#1f77b4\">x(t) source "
      "rate</text><text x=\"{0}\" y=\"{2}\" fill=\"#d62728\">c(t) link capacity</text></g>\n",
      width - right - 150, top + 14, top + 30);
  out << "</svg>\n";
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "param,value,status,x_star,min_margin,verdict,classification,final_error,tail_peak_to_peak,message\n";
  for (const auto& r : report.rows) {
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), '"', '\'');
    if (r.ok) {
      out << fmt::format("{},{:.17g},ok,{:.17g},{:.17g},{},{},{:.17g},{:.17g},\"{}\"\n", to_string(report.param),
                         r.value, r.x_star, r.min_margin, to_string(r.verdict), to_string(r.kind), r.final_error,
                         r.tail_peak_to_peak, msg);
    } else {
      out << fmt::format("{},{:.17g},error,,,,,,,\"{}\"\n", to_string(report.param), r.value, msg);
    }
  }
}

void write_sweep_summary(const SweepReport& report, std::ostream& out) {
  out << "param = " << to_string(report.param) << '\n';
  out << "values = " << report.rows.size() << '\n';
  out << "largest_certified = " << opt_num(report.largest_certified) << '\n';
  out << "smallest_oscillating = " << opt_num(report.smallest_oscillating) << '\n';
  if (report.certification_bracket) {
    out << "certification_bracket = " << num(report.certification_bracket->first) << ", "
        << num(report.certification_bracket->second) << '\n';
  } else {
    out << "certification_bracket = none\n";
  }
  for (const auto& f : report.flags) out << "flag = " << f << '\n';
}

}  // namespace netstab
