#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "etoa/backends.hpp"
#include "etoa/cavity.hpp"
#include "etoa/source.hpp"

namespace etoa {

enum class BackendSelection { standard, collapse, both };
enum class EventFormat { binary, text };

struct FilterConfig {
  FilterModel model = FilterModel::lorentzian;
  /// Lorentzian linewidth; 1/600 unless filter.kappa or filter.tau_fp is given.
  double kappa = 1.0 / 600.0;
  double reflectivity = 0.0;
  double fsr = 0.0;
  double center = 0.0;
};

struct GridConfig {
  double dt = 0.5;
  /// Arm-2 grid covers +-arm2_half_span * tau_g.
  double arm2_half_span = 6.0;
  /// Arm-1 grid extends arm1_tail filter lifetimes past the arm-2 range.
  double arm1_tail = 8.0;
};

struct RunConfig {
  BackendSelection backend = BackendSelection::both;
  std::uint64_t n_triggers = 100000;
  std::uint64_t seed = 42;
  bool allow_weak_hierarchy = false;
};

struct OutputConfig {
  std::string dir = "etoa-out";
  EventFormat format = EventFormat::binary;
};

/// Physical cavity used only for SI reporting of its timescales.
struct CavityConfig {
  std::optional<double> finesse;
  std::optional<double> length_m;
};

struct ExperimentConfig {
  SourceParams source;
  FilterConfig filter;
  GridConfig grid;
  RunConfig run;
  OutputConfig output;
  CavityConfig cavity;
  /// Display-only scale from tau_s to seconds.
  std::optional<double> tau_s_seconds;
  /// Non-fatal findings of validation (e.g. Airy FSR narrower than the source).
  std::vector<std::string> warnings;

  SpectralFilter make_filter() const;
  /// 1 / linewidth of the configured filter.
  double tau_fp() const;
  std::vector<Backend> backends() const;
};

/// Values given on the command line; they take precedence over the document.
struct ConfigOverrides {
  std::optional<BackendSelection> backend;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_triggers;
  std::optional<std::string> out_dir;
  std::optional<EventFormat> format;
  bool allow_weak_hierarchy = false;
};

/// Parses a flat `section.key = value` document (`#` starts a comment) and
/// validates the result. Unknown keys, malformed values, missing required
/// fields and a violated tau_s << tau_g << tau_fp hierarchy raise ConfigError.
ExperimentConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Reads and parses a config file; unreadable file: IoError.
ExperimentConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

/// Every resolved key in a fixed order, one `key = value` per line.
std::string canonical_config(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_config().
std::uint64_t config_hash(const ExperimentConfig& config);

std::optional<BackendSelection> parse_backend_selection(std::string_view text);
std::optional<EventFormat> parse_event_format(std::string_view text);

}  // namespace etoa
