#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "netstab/error.hpp"
#include "netstab/scenario.hpp"

namespace netstab {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name"}},
      {"model", {"kappa", "a", "b", "h_gain", "tau", "T_delay", "x_min", "x_max"}},
      {"capacity", {"law", "intercept", "slope", "level"}},
      {"initial", {"x"}},
      {"run", {"t_end", "step", "horizon_tau_multiple"}},
      {"analysis", {"margin_range", "grid_n", "tol_conv", "tol_osc", "tail_fraction"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Entries {
 public:
  explicit Entries(std::string source) : source_(std::move(source)) {}

  void add(const std::string& key, std::string value, int line) {
    if (auto it = map_.find(key); it != map_.end()) {
      throw ConfigError(source_, line,
                        fmt::format("duplicate key '{}' (first set on line {})", key, it->second.line));
    }
    map_.emplace(key, Entry{std::move(value), line});
  }

  const Entry* find(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }

  const Entry& require(const std::string& key) const {
    if (const Entry* e = find(key)) return *e;
    throw ConfigError(source_, 0, fmt::format("missing required key '{}'", key));
  }

  double number(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? parse_number(key, *e) : fallback;
  }

  double number(const std::string& key) const { return parse_number(key, require(key)); }

  double parse_number(const std::string& key, const Entry& e) const {
    if (auto v = to_double(e.value)) return *v;
    throw ConfigError(source_, e.line, fmt::format("'{}' expects a number, got '{}'", key, e.value));
  }

  int line_of(const std::string& key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Entry> map_;
};

Entries tokenize(std::string_view text, const std::string& source) {
  Entries entries(source);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(section)) {
        throw ConfigError(source, line_no, fmt::format("unknown section [{}]", section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source, line_no, fmt::format("expected 'key = value', got '{}'", line));
    }
    if (section.empty()) throw ConfigError(source, line_no, "key outside of any [section]");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known_keys().at(section).contains(key)) {
      throw ConfigError(source, line_no, fmt::format("unknown key '{}' in [{}]", key, section));
    }
    if (value.empty()) throw ConfigError(source, line_no, fmt::format("empty value for '{}'", key));
    entries.add(section + "." + key, value, line_no);
  }
  return entries;
}

}  // namespace

double ScenarioConfig::effective_t_end() const noexcept {
  const double by_delay = horizon_tau_multiple * params.tau;
  return by_delay > t_end ? by_delay : t_end;
}

double snap_step(double requested, double tau, double T_delay) {
  if (!(requested > 0.0)) throw PreconditionError("step must be positive");
  if (is_step_multiple(tau, requested) && is_step_multiple(T_delay, requested)) return requested;
  const double shorter = std::min(tau, T_delay);
  const double longer = std::max(tau, T_delay);
  const auto first = static_cast<long long>(std::ceil(shorter / requested - 1e-9));
  for (long long n = std::max(1LL, first); n <= 10'000'000LL; ++n) {
    const double candidate = shorter / static_cast<double>(n);
    if (candidate <= requested && is_step_multiple(longer, candidate)) return candidate;
  }
  throw PreconditionError(fmt::format(
      "no step <= {:.17g} divides both delays tau = {:.17g} and T = {:.17g}", requested, tau, T_delay));
}

ScenarioConfig parse_scenario(std::string_view text, const std::string& source,
                              const std::string& default_name) {
  const Entries e = tokenize(text, source);
  ScenarioConfig cfg;

  const Entry* name = e.find("scenario.name");
  cfg.name = name ? name->value : default_name;

  auto& p = cfg.params;
  p.kappa = e.number("model.kappa", 1.0);
  p.a = e.number("model.a");
  p.b = e.number("model.b");
  p.h_gain = e.number("model.h_gain", 1.0);
  p.tau = e.number("model.tau");
  p.T_delay = e.number("model.T_delay");
  p.x_min = e.number("model.x_min", 1e-3);
  p.x_max = e.number("model.x_max", 1e3);

  const Entry& law = e.require("capacity.law");
  try {
    if (law.value == "affine") {
      if (e.find("capacity.level")) {
        throw ConfigError(source, e.line_of("capacity.level"), "'level' applies to constant laws only");
      }
      cfg.law = CapacityLaw::affine(e.number("capacity.intercept"), e.number("capacity.slope"));
    } else if (law.value == "constant") {
      for (const char* k : {"capacity.intercept", "capacity.slope"}) {
        if (e.find(k)) throw ConfigError(source, e.line_of(k), "constant law takes only 'level'");
      }
      cfg.law = CapacityLaw::constant(e.number("capacity.level"));
    } else {
      throw ConfigError(source, law.line,
                        fmt::format("capacity law must be 'affine' or 'constant', got '{}'", law.value));
    }
  } catch (const PreconditionError& err) {
    throw ConfigError(source, law.line, err.what());
  }

  const Entry& init = e.require("initial.x");
  if (init.value == "equilibrium") {
    cfg.init = {InitialHistory::Kind::equilibrium, 0.0};
  } else {
    cfg.init = {InitialHistory::Kind::constant, e.parse_number("initial.x", init)};
  }

  cfg.t_end = e.number("run.t_end", 200.0);
  cfg.step = e.number("run.step", 0.01);
  cfg.horizon_tau_multiple = e.number("run.horizon_tau_multiple", 0.0);

  if (const Entry* range = e.find("analysis.margin_range"); range && range->value != "auto") {
    const auto comma = range->value.find(',');
    const auto lo = comma == std::string::npos ? std::nullopt : to_double(range->value.substr(0, comma));
    const auto hi = comma == std::string::npos ? std::nullopt : to_double(range->value.substr(comma + 1));
    if (!lo || !hi) {
      throw ConfigError(source, range->line,
                        fmt::format("margin_range expects 'auto' or '<lo>, <hi>', got '{}'", range->value));
    }
    cfg.margin_range = RateRange{*lo, *hi};
  }
  const double grid_n = e.number("analysis.grid_n", 256.0);
  if (grid_n != std::floor(grid_n) || grid_n > 1e7) {
    throw ConfigError(source, e.line_of("analysis.grid_n"), "grid_n must be an integer");
  }
  cfg.grid_n = static_cast<int>(grid_n);
  cfg.classifier.tol_conv = e.number("analysis.tol_conv", 1e-2);
  cfg.classifier.tol_osc = e.number("analysis.tol_osc", 0.1);
  cfg.classifier.tail_fraction = e.number("analysis.tail_fraction", 0.2);

  if (const Entry* dir = e.find("output.dir")) {
    cfg.output_dir = dir->value;
  } else {
    cfg.output_dir = std::filesystem::path("out") / cfg.name;
  }

  finalize_scenario(cfg, source);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string(), path.stem().string());
}

void finalize_scenario(ScenarioConfig& cfg, const std::string& source) {
  try {
    validate_params(cfg.params);
  } catch (const PreconditionError& err) {
    throw ConfigError(source, 0, fmt::format("[model] {}", err.what()));
  }
  auto fail = [&](const std::string& what) { throw ConfigError(source, 0, what); };

  if (cfg.init.kind == InitialHistory::Kind::constant) {
    const double x0 = cfg.init.value;
    if (!(x0 > 0.0)) fail(fmt::format("[initial] x: (A2) initial rate must be positive, got {:.17g}", x0));
    if (x0 < cfg.params.x_min || x0 > cfg.params.x_max) {
      fail(fmt::format("[initial] x = {:.17g} outside [x_min, x_max]", x0));
    }
  }
  if (!(cfg.t_end > 0.0)) fail(fmt::format("[run] t_end must be positive, got {:.17g}", cfg.t_end));
  if (!(cfg.step > 0.0)) fail(fmt::format("[run] step must be positive, got {:.17g}", cfg.step));
  if (!(cfg.horizon_tau_multiple >= 0.0)) fail("[run] horizon_tau_multiple must be >= 0");
  if (cfg.margin_range) {
    const auto [lo, hi] = *cfg.margin_range;
    if (!(lo < hi)) fail("[analysis] margin_range needs lo < hi");
    if (lo < cfg.params.x_min || hi > cfg.params.x_max) {
      fail("[analysis] margin_range must lie inside [x_min, x_max]");
    }
  }
  if (cfg.grid_n < 16) fail(fmt::format("[analysis] grid_n must be >= 16, got {}", cfg.grid_n));
  if (!(cfg.classifier.tol_conv > 0.0)) fail("[analysis] tol_conv must be positive");
  if (!(cfg.classifier.tol_osc > 0.0)) fail("[analysis] tol_osc must be positive");
  if (!(cfg.classifier.tail_fraction > 0.0 && cfg.classifier.tail_fraction <= 1.0)) {
    fail("[analysis] tail_fraction must be in (0, 1]");
  }

  cfg.requested_step = cfg.step;
  try {
    cfg.step = snap_step(cfg.step, cfg.params.tau, cfg.params.T_delay);
  } catch (const PreconditionError& err) {
    fail(fmt::format("[run] step: {}", err.what()));
  }
  cfg.step_snapped = cfg.step != cfg.requested_step;
}

std::string format_scenario(const ScenarioConfig& cfg) {
  const auto& p = cfg.params;
  std::string out;
  auto line = [&out](std::string s) {
    out += s;
    out += '\n';
  };
  line("[scenario]");
  line(fmt::format("name = {}", cfg.name));
  line("");
  line("[model]");
  line(fmt::format("kappa = {:.17g}", p.kappa));
  line(fmt::format("a = {:.17g}", p.a));
  line(fmt::format("b = {:.17g}", p.b));
  line(fmt::format("h_gain = {:.17g}", p.h_gain));
  line(fmt::format("tau = {:.17g}", p.tau));
  line(fmt::format("T_delay = {:.17g}", p.T_delay));
  line(fmt::format("x_min = {:.17g}", p.x_min));
  line(fmt::format("x_max = {:.17g}", p.x_max));
  line("");
  line("[capacity]");
  if (cfg.law.kind() == CapacityLaw::Kind::affine) {
    line("law = affine");
    line(fmt::format("intercept = {:.17g}", cfg.law.intercept()));
    line(fmt::format("slope = {:.17g}", cfg.law.slope()));
  } else {
    line("law = constant");
    line(fmt::format("level = {:.17g}", cfg.law.intercept()));
  }
  line("");
  line("[initial]");
  line(cfg.init.kind == InitialHistory::Kind::equilibrium ? std::string("x = equilibrium")
                                                          : fmt::format("x = {:.17g}", cfg.init.value));
  line("");
  line("[run]");
  line(fmt::format("t_end = {:.17g}", cfg.t_end));
  if (cfg.step_snapped) line(fmt::format("# snapped from requested step {:.17g}", cfg.requested_step));
  line(fmt::format("step = {:.17g}", cfg.step));
  line(fmt::format("horizon_tau_multiple = {:.17g}", cfg.horizon_tau_multiple));
  line("");
  line("[analysis]");
  line(cfg.margin_range
           ? fmt::format("margin_range = {:.17g}, {:.17g}", cfg.margin_range->lo, cfg.margin_range->hi)
           : std::string("margin_range = auto"));
  line(fmt::format("grid_n = {}", cfg.grid_n));
  line(fmt::format("tol_conv = {:.17g}", cfg.classifier.tol_conv));
  line(fmt::format("tol_osc = {:.17g}", cfg.classifier.tol_osc));
  line(fmt::format("tail_fraction = {:.17g}", cfg.classifier.tail_fraction));
  line("");
  line("[output]");
  line(fmt::format("dir = {}", cfg.output_dir.string()));
  return out;
}

}  // namespace netstab
