#include "etoa/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "etoa/errors.hpp"
#include "etoa/event_io.hpp"
#include "etoa/report.hpp"

#ifndef ETOA_VERSION
#define ETOA_VERSION "0.0.0"
#endif

namespace etoa {
namespace {

// Rethrows library errors with the failing stage prefixed, keeping the type.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  const auto prefixed = [name](const std::exception& e) {
    return std::string(name) + ": " + e.what();
  };
  try {
    return f();
  } catch (const CoverageError& e) {
    throw CoverageError(prefixed(e));
  } catch (const DegenerateDensity& e) {
    throw DegenerateDensity(prefixed(e));
  } catch (const GridMismatch& e) {
    throw GridMismatch(prefixed(e));
  } catch (const VanishingCoincidence& e) {
    throw VanishingCoincidence(prefixed(e));
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(prefixed(e));
  }
}

std::uint64_t stream_index(Backend backend) { return backend == Backend::standard ? 0 : 1; }

std::string events_file_name(Backend backend, EventFormat format) {
  return "events_" + std::string(backend_name(backend)) +
         (format == EventFormat::binary ? ".etoa" : ".csv");
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void make_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

std::optional<SampleWidths> widths_if_enough(std::span<const double> samples) {
  if (samples.size() < 2) return std::nullopt;
  return sample_widths(samples);
}

Histogram auto_histogram(std::span<const double> samples, std::size_t bins) {
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  // Widen the last edge so the maximum falls inside the half-open range.
  hi += (hi - lo) * 1e-9;
  return histogram_of(samples, linear_edges(lo, hi, bins));
}

void require_coincidences(const char* what, std::size_t n) {
  if (n < kMinCoincidences) {
    throw InsufficientData(std::string(what) + ": found " + std::to_string(n) +
                           " coincidences; at least " + std::to_string(kMinCoincidences) +
                           " are required");
  }
}

}  // namespace

ExperimentGrids experiment_grids(const ExperimentConfig& config) {
  const double dt = config.grid.dt;
  const double half = config.grid.arm2_half_span * config.source.tau_g;
  const auto n2 = std::max<std::size_t>(8, next_power_of_two(static_cast<std::size_t>(
                                               std::ceil(2.0 * half / dt * (1.0 - 1e-12)))));
  const TimeGrid arm2(-0.5 * static_cast<double>(n2) * dt, dt, n2);
  const double tail = config.grid.arm1_tail * config.tau_fp();
  const TimeGrid arm1 = make_time_grid(arm2.t_min(), arm2.last() + tail, dt);
  return {arm1, arm2};
}

ExperimentDensities compute_densities(const ExperimentConfig& config) {
  const ExperimentGrids grids = experiment_grids(config);
  const SpectralFilter filter = config.make_filter();

  JointAmplitude psi = stage("source", [&] {
    return joint_temporal_amplitude(config.source, grids.arm1, grids.arm2);
  });
  Density1D source_t1 = stage("source", [&] { return marginal_density(psi, Arm::one); });
  Density1D source_t2 = stage("source", [&] { return marginal_density(psi, Arm::two); });
  Density1D source_difference = stage("source", [&] { return difference_time_density(psi); });

  FilteredJoint filtered =
      stage("filter", [&] { return apply_filter_arm1(std::move(psi), filter); });
  BackendResult standard = stage("standard backend", [&] { return standard_backend(filtered); });
  const double l1 = l1_distance(standard.p2_unconditional, source_t2);
  const double fwhm =
      stage("photon-1 spectrum", [&] { return width_report(photon1_spectrum(filtered)).fwhm; });

  std::vector<BackendResult> results;
  for (const Backend b : config.backends()) {
    if (b == Backend::standard) {
      results.push_back(standard);
    } else {
      results.push_back(
          stage("collapse backend", [&] { return collapse_backend(filtered, config.source); }));
    }
  }
  return ExperimentDensities{grids,
                             std::move(source_t1),
                             std::move(source_t2),
                             std::move(source_difference),
                             filtered.survival,
                             l1,
                             fwhm,
                             std::move(results)};
}

SampleSummary summarize_samples(const Coincidences& c) {
  SampleSummary s;
  s.triggers = c.triggers;
  s.coincidences = c.t1.size();
  s.t1 = widths_if_enough(c.t1);
  s.t2 = widths_if_enough(c.t2);
  s.difference = widths_if_enough(c.difference);
  return s;
}

RunReport make_report(const ExperimentConfig& config, const ExperimentDensities& d) {
  RunReport r;
  r.version = ETOA_VERSION;
  r.config_hash = config_hash(config);
  r.seed = config.run.seed;
  r.resolved_config = canonical_config(config);
  r.warnings = config.warnings;
  r.source_t1 = width_report(d.source_t1);
  r.source_t2 = width_report(d.source_t2);
  r.source_difference = width_report(d.source_difference);
  r.survival = d.survival;
  r.no_signaling_l1 = d.no_signaling_l1;
  r.spectral_fwhm = d.spectral_fwhm;
  for (const auto& result : d.results) {
    r.backends.push_back(BackendSummary{result.backend, width_report(result.p1),
                                        width_report(result.p2), width_report(result.difference),
                                        std::nullopt, std::string()});
  }
  if (!r.backends.empty()) {
    const double rms_t1 = r.backends.front().t1.rms;
    r.uncertainty_product = r.spectral_fwhm * rms_t1;
    r.linewidth_rms_t1 = config.make_filter().linewidth() * rms_t1;
  }
  r.tau_s_seconds = config.tau_s_seconds;
  if (config.cavity.finesse) {
    r.cavity = cavity_timescales(*config.cavity.finesse, *config.cavity.length_m);
  }
  return r;
}

EventBatch simulate_backend(const ExperimentConfig& config, const BackendResult& result) {
  return sample_events(result, config.run.n_triggers, config.source.pair_probability,
                       Rng::stream_seed(config.run.seed, stream_index(result.backend)));
}

RunReport run_experiment(const ExperimentConfig& config, RunMode mode) {
  const std::filesystem::path out(config.output.dir);
  const std::filesystem::path density_dir = out / "densities";
  make_directory(density_dir);

  const ExperimentDensities d = compute_densities(config);
  const auto csv = [&](const Density1D& density, const std::string& origin,
                       const std::string& variable) {
    write_density_csv((density_dir / (origin + "_" + variable + ".csv")).string(), density, origin,
                      variable);
  };
  csv(d.source_t1, "source", "t1");
  csv(d.source_t2, "source", "t2");
  csv(d.source_difference, "source", "difference");
  for (const auto& result : d.results) {
    const std::string name(backend_name(result.backend));
    csv(result.p1, name, "t1");
    csv(result.p2, name, "t2");
    csv(result.p2_unconditional, name, "t2_unconditional");
    csv(result.difference, name, "difference");
  }

  RunReport report = make_report(config, d);
  if (mode == RunMode::simulate) {
    std::vector<std::vector<double>> t2_samples;
    for (std::size_t k = 0; k < d.results.size(); ++k) {
      const BackendResult& result = d.results[k];
      const EventBatch batch = simulate_backend(config, result);
      const std::string file = events_file_name(result.backend, config.output.format);
      write_events_file(batch, (out / file).string(), config.output.format);
      Coincidences c = match_coincidences(batch);
      report.backends[k].samples = summarize_samples(c);
      report.backends[k].events_file = file;
      t2_samples.push_back(std::move(c.t2));
    }
    if (t2_samples.size() == 2 && !t2_samples[0].empty() && !t2_samples[1].empty()) {
      report.backend_ks_t2 = ks_two_sample(t2_samples[0], t2_samples[1]);
    }
  }

  write_text_file(out / "report.txt", format_report_text(report));
  write_text_file(out / "report.csv", format_report_csv(report));
  return report;
}

ReferenceDensities load_reference_densities(const std::string& dir) {
  ReferenceDensities refs;
  const std::filesystem::path base(dir);
  const auto find = [&](Backend b) -> std::optional<Density1D> {
    const std::string name = std::string(backend_name(b)) + "_t2.csv";
    for (const auto& candidate : {base / "densities" / name, base / name}) {
      if (std::filesystem::is_regular_file(candidate)) return read_density_csv(candidate.string());
    }
    return std::nullopt;
  };
  refs.standard_t2 = find(Backend::standard);
  refs.collapse_t2 = find(Backend::collapse);
  if (!refs.standard_t2 && !refs.collapse_t2) {
    throw IoError("no reference densities (standard_t2.csv, collapse_t2.csv) under '" + dir + "'");
  }
  return refs;
}

AnalysisReport analyze_events(const EventBatch& batch, const ReferenceDensities& references) {
  const Coincidences c = match_coincidences(batch);
  require_coincidences("analyze", c.t1.size());
  AnalysisReport a;
  a.samples = summarize_samples(c);
  a.t1 = auto_histogram(c.t1, 100);
  a.t2 = auto_histogram(c.t2, 100);
  a.difference = auto_histogram(c.difference, 100);
  if (references.standard_t2) {
    a.model_tests.push_back({Backend::standard, ks_one_sample(c.t2, *references.standard_t2)});
  }
  if (references.collapse_t2) {
    a.model_tests.push_back({Backend::collapse, ks_one_sample(c.t2, *references.collapse_t2)});
  }
  if (a.model_tests.size() == 2) {
    const double p_standard = a.model_tests[0].ks.p_value;
    const double p_collapse = a.model_tests[1].ks.p_value;
    if (p_standard > kAcceptP && p_collapse < kRejectP) {
      a.favored = "standard";
    } else if (p_collapse > kAcceptP && p_standard < kRejectP) {
      a.favored = "collapse";
    } else {
      a.favored = "undecided";
    }
  } else if (!a.model_tests.empty()) {
    a.favored = "undecided";
  }
  return a;
}

Comparison compare_events(const EventBatch& a, const EventBatch& b) {
  const Coincidences ca = match_coincidences(a);
  const Coincidences cb = match_coincidences(b);
  require_coincidences("compare (first file)", ca.t1.size());
  require_coincidences("compare (second file)", cb.t1.size());
  Comparison c;
  c.coincidences_a = ca.t1.size();
  c.coincidences_b = cb.t1.size();
  c.t1 = ks_two_sample(ca.t1, cb.t1);
  c.t2 = ks_two_sample(ca.t2, cb.t2);
  c.difference = ks_two_sample(ca.difference, cb.difference);
  c.distinguishable = c.t2.p_value < kRejectP;
  return c;
}

void write_density_csv(const std::string& path, const Density1D& density,
                       const std::string& backend, const std::string& arm) {
  std::ostringstream out;
  out << "# backend=" << backend << ", arm=" << arm << "\n" << "t,value\n";
  char line[96];
  for (std::size_t k = 0; k < density.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", density.grid()[k], density[k]);
    out << line;
  }
  write_text_file(path, out.str());
}

Density1D read_density_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  const auto bad = [&](std::uint64_t line_no, const std::string& what) {
    return FormatError(FormatError::Kind::bad_text,
                       path + " line " + std::to_string(line_no) + ": " + what, std::nullopt,
                       line_no);
  };
  std::string line;
  std::uint64_t line_no = 0;
  std::vector<double> t;
  std::vector<double> v;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "t,value") throw bad(line_no, "expected header 't,value'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw bad(line_no, "expected 't,value'");
    double tk = 0.0;
    double vk = 0.0;
    const char* begin = line.data();
    const char* mid = begin + comma;
    const char* end = begin + line.size();
    const auto r1 = std::from_chars(begin, mid, tk);
    const auto r2 = std::from_chars(mid + 1, end, vk);
    if (r1.ec != std::errc() || r1.ptr != mid || r2.ec != std::errc() || r2.ptr != end) {
      throw bad(line_no, "non-numeric field");
    }
    t.push_back(tk);
    v.push_back(vk);
  }
  if (!header_seen) throw bad(line_no, "missing header 't,value'");
  if (t.size() < 8 || !is_power_of_two(t.size())) {
    throw bad(line_no, "expected a power-of-two number of rows (at least 8), got " +
                           std::to_string(t.size()));
  }
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs(t[k] - t[k - 1] - dt) > 1e-6 * dt) throw bad(k + 3, "t is not uniformly spaced");
  }
  return Density1D::normalized(TimeGrid(t.front(), dt, t.size()), std::move(v));
}

}  // namespace etoa
