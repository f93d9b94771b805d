#include "etoa/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "etoa/errors.hpp"

namespace etoa {
namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "source.tau_s",    "source.tau_g",    "source.pair_probability", "source.hierarchy_factor",
    "filter.model",    "filter.kappa",    "filter.tau_fp",           "filter.R",
    "filter.fsr",      "filter.center",   "grid.dt",                 "grid.arm2_half_span",
    "grid.arm1_tail",  "run.backend",     "run.n_triggers",          "run.seed",
    "output.dir",      "output.format",   "units.tau_s_seconds",     "cavity.finesse",
    "cavity.length_m",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

[[noreturn]] void fail(const std::string& key, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << "config";
  if (line > 0) msg << " line " << line;
  msg << ": " << key << ": " << what;
  throw ConfigError(msg.str());
}

double to_real(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(key, e.line, "expected a finite number, got '" + e.value + "'");
  }
  return v;
}

std::uint64_t to_count(const std::string& key, const Entry& e) {
  std::uint64_t v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  if (auto [ptr, ec] = std::from_chars(begin, end, v); ec == std::errc() && ptr == end) return v;
  // Also accept integral reals such as 1e5.
  const double d = to_real(key, e);
  if (d < 0.0 || d > 9007199254740992.0 || std::floor(d) != d) {
    fail(key, e.line, "expected a nonnegative integer, got '" + e.value + "'");
  }
  return static_cast<std::uint64_t>(d);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate(ExperimentConfig& c) {
  auto& s = c.source;
  if (!(s.tau_s > 0.0)) fail("source.tau_s", 0, "must be positive");
  if (!(s.tau_g > 0.0)) fail("source.tau_g", 0, "must be positive");
  if (!(s.pair_probability > 0.0 && s.pair_probability <= 1.0)) {
    fail("source.pair_probability", 0, "must lie in (0, 1]");
  }
  if (!(s.hierarchy_factor > 1.0)) fail("source.hierarchy_factor", 0, "must exceed 1");
  if (!(c.grid.dt > 0.0)) fail("grid.dt", 0, "must be positive");
  if (!(c.grid.arm2_half_span >= 5.0)) {
    fail("grid.arm2_half_span", 0, "must be at least 5 (gate RMS widths)");
  }
  if (!(c.grid.arm1_tail >= 8.0)) fail("grid.arm1_tail", 0, "must be at least 8 (lifetimes)");
  if (c.run.n_triggers < 1) fail("run.n_triggers", 0, "must be at least 1");
  if (c.output.dir.empty()) fail("output.dir", 0, "must not be empty");
  if (c.tau_s_seconds && !(*c.tau_s_seconds > 0.0)) {
    fail("units.tau_s_seconds", 0, "must be positive");
  }
  if (c.cavity.finesse.has_value() != c.cavity.length_m.has_value()) {
    fail("cavity", 0, "cavity.finesse and cavity.length_m must be given together");
  }
  if (c.cavity.finesse && !(*c.cavity.finesse > 1.0)) fail("cavity.finesse", 0, "must exceed 1");
  if (c.cavity.length_m && !(*c.cavity.length_m > 0.0)) {
    fail("cavity.length_m", 0, "must be positive");
  }

  const double tau_fp = c.tau_fp();
  const double factor = s.hierarchy_factor;
  if (!c.run.allow_weak_hierarchy) {
    if (s.tau_g < factor * s.tau_s || tau_fp < factor * s.tau_g) {
      std::ostringstream msg;
      msg << "config: timescale hierarchy tau_s << tau_g << tau_fp violated (tau_s = " << s.tau_s
          << ", tau_g = " << s.tau_g << ", tau_fp = " << tau_fp << "; each must be at least "
          << factor << "x the previous). Use --allow-weak-hierarchy to override.";
      throw ConfigError(msg.str());
    }
  } else {
    s.hierarchy_factor = 0.0;
  }
  // The arm-1 grid must hold the filter tail at the chosen resolution.
  if (c.grid.dt > 0.5 * s.tau_s) {
    c.warnings.push_back("grid.dt exceeds tau_s / 2; the pair-correlation envelope is coarsely sampled");
  }
  if (c.filter.model == FilterModel::airy && 1.0 / s.tau_s > 0.5 * c.filter.fsr) {
    c.warnings.push_back(
        "airy filter: source bandwidth 1/tau_s exceeds fsr/2; neighbouring resonances transmit");
  }
}

}  // namespace

SpectralFilter ExperimentConfig::make_filter() const {
  if (filter.model == FilterModel::lorentzian) {
    return lorentzian_response(filter.kappa, filter.center);
  }
  return airy_response(filter.reflectivity, filter.fsr, filter.center);
}

double ExperimentConfig::tau_fp() const { return 1.0 / make_filter().linewidth(); }

std::vector<Backend> ExperimentConfig::backends() const {
  switch (run.backend) {
    case BackendSelection::standard: return {Backend::standard};
    case BackendSelection::collapse: return {Backend::collapse};
    case BackendSelection::both: break;
  }
  return {Backend::standard, Backend::collapse};
}

std::optional<BackendSelection> parse_backend_selection(std::string_view text) {
  if (text == "standard") return BackendSelection::standard;
  if (text == "collapse") return BackendSelection::collapse;
  if (text == "both") return BackendSelection::both;
  return std::nullopt;
}

std::optional<EventFormat> parse_event_format(std::string_view text) {
  if (text == "binary") return EventFormat::binary;
  if (text == "text") return EventFormat::text;
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  std::map<std::string, Entry, std::less<>> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(std::string(line), line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.contains(key)) fail(key, line_no, "unknown key");
    if (value.empty()) fail(key, line_no, "missing value");
    if (entries.contains(key)) fail(key, line_no, "duplicate key");
    entries.emplace(key, Entry{value, line_no});
  }

  ExperimentConfig c;
  const auto get = [&](std::string_view key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  const auto real = [&](const char* key, double& target) {
    if (const Entry* e = get(key)) target = to_real(key, *e);
  };

  real("source.tau_s", c.source.tau_s);
  real("source.tau_g", c.source.tau_g);
  real("source.pair_probability", c.source.pair_probability);
  real("source.hierarchy_factor", c.source.hierarchy_factor);

  if (const Entry* e = get("filter.model")) {
    if (e->value == "lorentzian") {
      c.filter.model = FilterModel::lorentzian;
    } else if (e->value == "airy") {
      c.filter.model = FilterModel::airy;
    } else {
      fail("filter.model", e->line, "expected 'lorentzian' or 'airy', got '" + e->value + "'");
    }
  }
  real("filter.center", c.filter.center);
  if (c.filter.model == FilterModel::lorentzian) {
    for (const char* key : {"filter.R", "filter.fsr"}) {
      if (const Entry* e = get(key)) fail(key, e->line, "only valid with filter.model = airy");
    }
    const Entry* kappa = get("filter.kappa");
    const Entry* tau_fp = get("filter.tau_fp");
    if (kappa && tau_fp) fail("filter.kappa", kappa->line, "conflicts with filter.tau_fp");
    if (kappa) c.filter.kappa = to_real("filter.kappa", *kappa);
    if (tau_fp) {
      const double t = to_real("filter.tau_fp", *tau_fp);
      if (!(t > 0.0)) fail("filter.tau_fp", tau_fp->line, "must be positive");
      c.filter.kappa = 1.0 / t;
    }
    if (!(c.filter.kappa > 0.0)) fail("filter.kappa", kappa ? kappa->line : 0, "must be positive");
  } else {
    for (const char* key : {"filter.kappa", "filter.tau_fp"}) {
      if (const Entry* e = get(key)) fail(key, e->line, "only valid with filter.model = lorentzian");
    }
    const Entry* r = get("filter.R");
    const Entry* fsr = get("filter.fsr");
    if (!r) fail("filter.R", 0, "missing field (required for filter.model = airy)");
    if (!fsr) fail("filter.fsr", 0, "missing field (required for filter.model = airy)");
    c.filter.reflectivity = to_real("filter.R", *r);
    c.filter.fsr = to_real("filter.fsr", *fsr);
    if (!(c.filter.reflectivity > 0.0 && c.filter.reflectivity < 1.0)) {
      fail("filter.R", r->line, "must lie in (0, 1)");
    }
    if (!(c.filter.fsr > 0.0)) fail("filter.fsr", fsr->line, "must be positive");
  }

  real("grid.dt", c.grid.dt);
  real("grid.arm2_half_span", c.grid.arm2_half_span);
  real("grid.arm1_tail", c.grid.arm1_tail);

  if (const Entry* e = get("run.backend")) {
    const auto b = parse_backend_selection(e->value);
    if (!b) fail("run.backend", e->line, "expected standard, collapse or both");
    c.run.backend = *b;
  }
  if (const Entry* e = get("run.n_triggers")) c.run.n_triggers = to_count("run.n_triggers", *e);
  if (const Entry* e = get("run.seed")) c.run.seed = to_count("run.seed", *e);

  if (const Entry* e = get("output.dir")) c.output.dir = e->value;
  if (const Entry* e = get("output.format")) {
    const auto f = parse_event_format(e->value);
    if (!f) fail("output.format", e->line, "expected binary or text");
    c.output.format = *f;
  }
  if (const Entry* e = get("units.tau_s_seconds")) c.tau_s_seconds = to_real("units.tau_s_seconds", *e);
  if (const Entry* e = get("cavity.finesse")) c.cavity.finesse = to_real("cavity.finesse", *e);
  if (const Entry* e = get("cavity.length_m")) c.cavity.length_m = to_real("cavity.length_m", *e);

  if (overrides.backend) c.run.backend = *overrides.backend;
  if (overrides.seed) c.run.seed = *overrides.seed;
  if (overrides.n_triggers) c.run.n_triggers = *overrides.n_triggers;
  if (overrides.out_dir) c.output.dir = *overrides.out_dir;
  if (overrides.format) c.output.format = *overrides.format;
  c.run.allow_weak_hierarchy = overrides.allow_weak_hierarchy;

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto line = [&](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  line("source.tau_s", format_real(c.source.tau_s));
  line("source.tau_g", format_real(c.source.tau_g));
  line("source.pair_probability", format_real(c.source.pair_probability));
  line("source.hierarchy_factor", format_real(c.source.hierarchy_factor));
  if (c.filter.model == FilterModel::lorentzian) {
    line("filter.model", "lorentzian");
    line("filter.kappa", format_real(c.filter.kappa));
  } else {
    line("filter.model", "airy");
    line("filter.R", format_real(c.filter.reflectivity));
    line("filter.fsr", format_real(c.filter.fsr));
  }
  line("filter.center", format_real(c.filter.center));
  line("grid.dt", format_real(c.grid.dt));
  line("grid.arm2_half_span", format_real(c.grid.arm2_half_span));
  line("grid.arm1_tail", format_real(c.grid.arm1_tail));
  line("run.backend", c.run.backend == BackendSelection::both
                          ? "both"
                          : (c.run.backend == BackendSelection::standard ? "standard" : "collapse"));
  line("run.n_triggers", std::to_string(c.run.n_triggers));
  line("run.seed", std::to_string(c.run.seed));
  line("output.format", c.output.format == EventFormat::binary ? "binary" : "text");
  if (c.tau_s_seconds) line("units.tau_s_seconds", format_real(*c.tau_s_seconds));
  if (c.cavity.finesse) {
    line("cavity.finesse", format_real(*c.cavity.finesse));
    line("cavity.length_m", format_real(*c.cavity.length_m));
  }
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace etoa
