#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "etoa/config.hpp"
#include "etoa/errors.hpp"
#include "etoa/event_io.hpp"
#include "etoa/experiment.hpp"
#include "etoa/report.hpp"
#include "etoa/selftest.hpp"

namespace {

struct RunFlags {
  std::string config_path;
  std::string backend;
  std::string format;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  bool allow_weak_hierarchy = false;
};

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--config", f.config_path, "Config file (flat key = value)");
  cmd.add_option("--backend", f.backend, "standard, collapse or both")
      ->check(CLI::IsMember({"standard", "collapse", "both"}));
  cmd.add_option("--seed", f.seed, "RNG seed");
  cmd.add_option("--events", f.events, "Number of triggers to simulate");
  cmd.add_option("--out", f.out, "Output directory");
  cmd.add_option("--format", f.format, "Event file format")
      ->check(CLI::IsMember({"binary", "text"}));
  cmd.add_flag("--allow-weak-hierarchy", f.allow_weak_hierarchy,
               "Skip the tau_s << tau_g << tau_fp check");
}

etoa::ExperimentConfig resolve(const CLI::App& cmd, const RunFlags& f) {
  etoa::ConfigOverrides o;
  if (cmd.count("--backend")) o.backend = etoa::parse_backend_selection(f.backend);
  if (cmd.count("--seed")) o.seed = f.seed;
  if (cmd.count("--events")) o.n_triggers = f.events;
  if (cmd.count("--out")) o.out_dir = f.out;
  if (cmd.count("--format")) o.format = etoa::parse_event_format(f.format);
  o.allow_weak_hierarchy = f.allow_weak_hierarchy;
  return f.config_path.empty() ? etoa::parse_config("", o) : etoa::load_config(f.config_path, o);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw etoa::IoError("cannot write '" + path.string() + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Simulated arrival-time statistics of filtered entangled photon pairs"};
  app.require_subcommand(1);

  RunFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Compute densities and sample event streams");
  add_run_flags(*simulate, sim_flags);

  RunFlags dens_flags;
  auto* densities = app.add_subcommand("densities", "Compute densities and the report only");
  add_run_flags(*densities, dens_flags);

  std::string events_path;
  std::string reference_dir;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Widths and model tests of an event file");
  analyze->add_option("events", events_path, "Event file")->required();
  analyze->add_option("--reference", reference_dir,
                      "Directory with standard_t2.csv / collapse_t2.csv (or a run directory)");
  analyze->add_option("--out", analyze_out, "Directory for analysis.txt and histograms");

  std::string path_a;
  std::string path_b;
  auto* compare = app.add_subcommand("compare", "Two-sample KS between two event files");
  compare->add_option("a", path_a, "First event file")->required();
  compare->add_option("b", path_b, "Second event file")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle and invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(etoa::ExitCode::config);
  }

  for (auto* cmd : {simulate, densities}) {
    if (!cmd->parsed()) continue;
    const auto& flags = cmd == simulate ? sim_flags : dens_flags;
    const etoa::ExperimentConfig config = resolve(*cmd, flags);
    for (const auto& w : config.warnings) std::cerr << "warning: " << w << '\n';
    const auto mode = cmd == simulate ? etoa::RunMode::simulate : etoa::RunMode::densities_only;
    const etoa::RunReport report = etoa::run_experiment(config, mode);
    std::cout << etoa::format_report_text(report);
    return 0;
  }

  if (analyze->parsed()) {
    const etoa::EventBatch batch = etoa::read_events_file(events_path);
    etoa::ReferenceDensities refs;
    if (!reference_dir.empty()) refs = etoa::load_reference_densities(reference_dir);
    const etoa::AnalysisReport a = etoa::analyze_events(batch, refs);
    const std::string text = etoa::format_analysis_text(a);
    if (!analyze_out.empty()) {
      const std::filesystem::path dir(analyze_out);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw etoa::IoError("cannot create '" + dir.string() + "': " + ec.message());
      write_file(dir / "analysis.txt", text);
      write_file(dir / "histogram_t1.csv", etoa::format_histogram_csv(a.t1));
      write_file(dir / "histogram_t2.csv", etoa::format_histogram_csv(a.t2));
      write_file(dir / "histogram_difference.csv", etoa::format_histogram_csv(a.difference));
    }
    std::cout << text;
    return 0;
  }

  if (compare->parsed()) {
    const etoa::Comparison c =
        etoa::compare_events(etoa::read_events_file(path_a), etoa::read_events_file(path_b));
    std::cout << etoa::format_comparison_text(c);
    return 0;
  }

  if (selftest->parsed()) {
    bool all = true;
    for (const auto& c : etoa::run_selftest()) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      all = all && c.passed;
    }
    return all ? 0 : static_cast<int>(etoa::ExitCode::numeric);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(etoa::exit_code_for(e));
  }
}
