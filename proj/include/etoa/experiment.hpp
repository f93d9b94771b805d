#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etoa/backends.hpp"
#include "etoa/config.hpp"
#include "etoa/events.hpp"
#include "etoa/stats.hpp"

namespace etoa {

struct ExperimentGrids {
  TimeGrid arm1;
  TimeGrid arm2;
};

/// Arm 2 is centered on the gate and covers +-grid.arm2_half_span * tau_g.
/// Arm 1 starts with arm 2 and extends grid.arm1_tail filter lifetimes past
/// its end.
ExperimentGrids experiment_grids(const ExperimentConfig& config);

/// Everything computed before sampling.
struct ExperimentDensities {
  ExperimentGrids grids;
  Density1D source_t1;
  Density1D source_t2;
  Density1D source_difference;
  double survival;
  /// L1 between photon 2's unconditional density with and without the filter.
  double no_signaling_l1;
  /// FWHM of photon 1's spectral density given transmission.
  double spectral_fwhm;
  /// Backends in the order of config.backends().
  std::vector<BackendResult> results;
};

/// Builds source -> filter -> backends. Numeric failures propagate with the
/// failing stage prefixed to the message.
ExperimentDensities compute_densities(const ExperimentConfig& config);

/// Widths of one variable estimated from matched coincidences.
struct SampleSummary {
  std::uint64_t triggers = 0;
  std::size_t coincidences = 0;
  std::optional<SampleWidths> t1;
  std::optional<SampleWidths> t2;
  std::optional<SampleWidths> difference;
};

SampleSummary summarize_samples(const Coincidences& coincidences);

struct BackendSummary {
  Backend backend;
  WidthReport t1;
  WidthReport t2;
  WidthReport difference;
  /// Present after sampling.
  std::optional<SampleSummary> samples;
  std::string events_file;
};

struct RunReport {
  std::string version;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string resolved_config;
  std::vector<std::string> warnings;

  WidthReport source_t1;
  WidthReport source_t2;
  WidthReport source_difference;
  double survival = 0.0;
  double no_signaling_l1 = 0.0;
  double spectral_fwhm = 0.0;
  /// spectral_fwhm * RMS(t1 | transmission).
  double uncertainty_product = 0.0;
  /// Filter linewidth * RMS(t1 | transmission).
  double linewidth_rms_t1 = 0.0;
  std::vector<BackendSummary> backends;
  /// Two-sample KS between the backends' sampled t2, when both were sampled.
  std::optional<KsResult> backend_ks_t2;
  std::optional<double> tau_s_seconds;
  std::optional<CavityTimescales> cavity;
};

RunReport make_report(const ExperimentConfig& config, const ExperimentDensities& densities);

/// The sampled event stream of one backend. Backend k in config.backends()
/// order uses the RNG stream Rng::stream_seed(seed, k) with k = 0 for
/// standard and 1 for collapse.
EventBatch simulate_backend(const ExperimentConfig& config, const BackendResult& result);

enum class RunMode { densities_only, simulate };

/// Computes densities, optionally samples events, and writes the artifacts
/// into config.output.dir:
///   densities/<source|backend>_<variable>.csv, events_<backend>.etoa|.csv,
///   report.txt, report.csv.
RunReport run_experiment(const ExperimentConfig& config, RunMode mode);

/// Reference densities of t2 for analyze_events.
struct ReferenceDensities {
  std::optional<Density1D> standard_t2;
  std::optional<Density1D> collapse_t2;
};

/// Looks for <dir>/densities/<backend>_t2.csv, then <dir>/<backend>_t2.csv.
/// Neither present for either backend: IoError.
ReferenceDensities load_reference_densities(const std::string& dir);

struct ModelTest {
  Backend backend;
  KsResult ks;
};

struct AnalysisReport {
  SampleSummary samples;
  Histogram t1;
  Histogram t2;
  Histogram difference;
  std::vector<ModelTest> model_tests;
  /// "standard", "collapse" or "undecided"; empty without references.
  std::string favored;
};

/// Data accept a model at KS p > kAcceptP and reject it at p < kRejectP.
inline constexpr double kAcceptP = 0.01;
inline constexpr double kRejectP = 1e-6;
inline constexpr std::size_t kMinCoincidences = 100;

/// Fewer than kMinCoincidences coincidences: InsufficientData.
AnalysisReport analyze_events(const EventBatch& batch, const ReferenceDensities& references = {});

struct Comparison {
  std::size_t coincidences_a = 0;
  std::size_t coincidences_b = 0;
  KsResult t1;
  KsResult t2;
  KsResult difference;
  /// t2 differs at p < kRejectP.
  bool distinguishable = false;
};

/// Two-sample KS between two event streams. Either with fewer than
/// kMinCoincidences coincidences: InsufficientData.
Comparison compare_events(const EventBatch& a, const EventBatch& b);

/// Writes `density` as `# backend=<backend>, arm=<arm>`, `t,value`, then rows
/// with 17 significant digits.
void write_density_csv(const std::string& path, const Density1D& density,
                       const std::string& backend, const std::string& arm);

/// Inverse of write_density_csv. Malformed file: FormatError.
Density1D read_density_csv(const std::string& path);

}  // namespace etoa
