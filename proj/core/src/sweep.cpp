#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "netstab/error.hpp"
#include "netstab/scenario.hpp"

namespace netstab {

namespace {

double parse_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw PreconditionError(fmt::format("invalid number '{}' in value list", s));
  }
  return v;
}

SweepRow run_one(const ScenarioConfig& base, SweepParam param, double value) {
  SweepRow row;
  row.value = value;
  try {
    ScenarioConfig cfg = base;
    apply_sweep_value(cfg, param, value);
    finalize_scenario(cfg, fmt::format("{}={:.17g}", to_string(param), value));
    const ScenarioResult r = run_scenario(cfg, {.write_files = false, .sample_lyapunov = false});
    row.ok = true;
    row.x_star = r.report.equilibrium.x_star;
    row.min_margin = r.report.min_margin;
    row.verdict = r.report.verdict;
    row.kind = r.classification.kind;
    row.final_error = r.classification.final_error;
    row.tail_peak_to_peak = r.classification.tail_peak_to_peak;
    row.message = r.classification_note;
  } catch (const std::exception& e) {
    row.ok = false;
    row.message = e.what();
  }
  return row;
}

}  // namespace

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "a") return SweepParam::a;
  if (name == "b") return SweepParam::b;
  if (name == "kappa") return SweepParam::kappa;
  if (name == "tau") return SweepParam::tau;
  if (name == "T_delay" || name == "T") return SweepParam::T_delay;
  if (name == "intercept") return SweepParam::intercept;
  if (name == "slope") return SweepParam::slope;
  throw PreconditionError(fmt::format(
      "unknown sweep parameter '{}' (expected a, b, kappa, tau, T_delay, intercept, slope)", name));
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::a: return "a";
    case SweepParam::b: return "b";
    case SweepParam::kappa: return "kappa";
    case SweepParam::tau: return "tau";
    case SweepParam::T_delay: return "T_delay";
    case SweepParam::intercept: return "intercept";
    case SweepParam::slope: return "slope";
  }
  return "?";
}

void apply_sweep_value(ScenarioConfig& cfg, SweepParam param, double value) {
  auto& p = cfg.params;
  switch (param) {
    case SweepParam::a: p.a = value; break;
    case SweepParam::b: p.b = value; break;
    case SweepParam::kappa: p.kappa = value; break;
    case SweepParam::tau: {
      const double ratio = p.T_delay / p.tau;
      p.tau = value;
      p.T_delay = value * ratio;
      break;
    }
    case SweepParam::T_delay: p.T_delay = value; break;
    case SweepParam::intercept:
      cfg.law = cfg.law.kind() == CapacityLaw::Kind::affine ? CapacityLaw::affine(value, cfg.law.slope())
                                                            : CapacityLaw::constant(value);
      break;
    case SweepParam::slope:
      if (cfg.law.kind() != CapacityLaw::Kind::affine) {
        throw PreconditionError("slope can only be swept for an affine capacity law");
      }
      cfg.law = CapacityLaw::affine(cfg.law.intercept(), value);
      break;
  }
  // Undo an earlier snap so every value starts from the configured step.
  cfg.step = cfg.requested_step;
}

std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos) throw PreconditionError("range must be start:step:stop");
    const double start = parse_number(text.substr(0, first));
    const double inc = parse_number(text.substr(first + 1, second - first - 1));
    const double stop = parse_number(text.substr(second + 1));
    if (!(inc > 0.0) || stop < start) throw PreconditionError("range needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / inc + 1e-9));
    if (count > 1'000'000) throw PreconditionError("range has too many values");
    for (long long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * inc);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
    out.push_back(parse_number(piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

SweepReport sweep(const ScenarioConfig& base, SweepParam param, std::span<const double> values,
                  const SweepOptions& opts) {
  SweepReport report;
  report.param = param;
  report.rows.resize(values.size());

  unsigned workers = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, values.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      report.rows[k] = run_one(base, param, values[k]);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Summaries walk the values in ascending order.
  std::vector<std::size_t> order(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });

  std::optional<double> first_uncertified;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const SweepRow& row = report.rows[order[pos]];
    if (!row.ok) continue;
    const bool certified = row.verdict == Verdict::certified_stable;
    if (certified) {
      report.largest_certified = row.value;
      if (row.kind == TrajectoryKind::oscillating) {
        report.flags.push_back(fmt::format(
            "{} = {:.6g}: certified stable but the simulation oscillates", to_string(param), row.value));
      }
    }
    if (row.kind == TrajectoryKind::oscillating && !report.smallest_oscillating) {
      report.smallest_oscillating = row.value;
    }
    if (param == SweepParam::b) {
      if (!certified && !first_uncertified) first_uncertified = row.value;
      if (certified && first_uncertified) {
        report.flags.push_back(fmt::format("b = {:.6g} is certified although b = {:.6g} is not",
                                           row.value, *first_uncertified));
      }
    }
  }
  if (report.largest_certified) {
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const SweepRow& row = report.rows[order[pos]];
      if (row.ok && row.value > *report.largest_certified && row.verdict == Verdict::not_certified) {
        report.certification_bracket = std::make_pair(*report.largest_certified, row.value);
        break;
      }
    }
  }
  return report;
}

}  // namespace netstab
