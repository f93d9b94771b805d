#include "etoa/report.hpp"

#include <cstdio>
#include <sstream>

namespace etoa {
namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

class Lines {
 public:
  void add(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << '\n';
  }
  void add(const std::string& key, double value) { add(key, num(value)); }
  void add_count(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add_bool(const std::string& key, bool value) { add(key, value ? "true" : "false"); }

  void widths(const std::string& prefix, const WidthReport& w) {
    add(prefix + ".mean", w.mean);
    add(prefix + ".rms", w.rms);
    add(prefix + ".fwhm", w.fwhm);
    add(prefix + ".iqr", w.iqr);
    add(prefix + ".n_effective", w.n_effective);
    if (w.multimodal) add_bool(prefix + ".multimodal", true);
    if (w.unresolved) add_bool(prefix + ".unresolved", true);
  }

  void samples(const std::string& prefix, const SampleSummary& s) {
    add_count(prefix + ".triggers", s.triggers);
    add_count(prefix + ".coincidences", s.coincidences);
    const auto one = [&](const std::string& name, const std::optional<SampleWidths>& w) {
      if (!w) return;
      add(prefix + "." + name + ".mean", w->mean);
      add(prefix + "." + name + ".se_mean", w->se_mean);
      add(prefix + "." + name + ".rms", w->rms);
      add(prefix + "." + name + ".se_rms", w->se_rms);
      add(prefix + "." + name + ".median", w->median);
      add(prefix + "." + name + ".iqr", w->iqr);
    };
    one("t1", s.t1);
    one("t2", s.t2);
    one("difference", s.difference);
  }

  void ks(const std::string& prefix, const KsResult& k) {
    add(prefix + ".statistic", k.statistic);
    add(prefix + ".p_value", k.p_value);
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string csv_row(const std::string& origin, const std::string& variable, const char* kind,
                    double mean, double rms, double fwhm, double iqr, double se_rms, double n) {
  std::ostringstream row;
  row << origin << ',' << variable << ',' << kind << ',' << num(mean) << ',' << num(rms) << ','
      << num(fwhm) << ',' << num(iqr) << ',' << num(se_rms) << ',' << num(n) << '\n';
  return row.str();
}

}  // namespace

std::string format_report_text(const RunReport& r) {
  Lines l;
  l.add("etoa.version", r.version);
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
  l.add("provenance.config_hash", hash);
  l.add_count("provenance.seed", r.seed);
  std::istringstream config(r.resolved_config);
  for (std::string line; std::getline(config, line);) {
    const auto eq = line.find(" = ");
    l.add("config." + line.substr(0, eq), line.substr(eq + 3));
  }
  for (std::size_t k = 0; k < r.warnings.size(); ++k) {
    l.add("warning." + std::to_string(k + 1), r.warnings[k]);
  }

  l.widths("source.t1", r.source_t1);
  l.widths("source.t2", r.source_t2);
  l.widths("source.difference", r.source_difference);
  l.add("filter.survival", r.survival);
  l.add("no_signaling.l1", r.no_signaling_l1);
  l.add("uncertainty.spectral_fwhm", r.spectral_fwhm);
  l.add("uncertainty.product", r.uncertainty_product);
  l.add("uncertainty.linewidth_rms_t1", r.linewidth_rms_t1);

  for (const auto& b : r.backends) {
    const std::string name(backend_name(b.backend));
    l.widths(name + ".t1", b.t1);
    l.widths(name + ".t2", b.t2);
    l.widths(name + ".difference", b.difference);
    if (b.samples) {
      l.add(name + ".events_file", b.events_file);
      l.samples(name + ".sampled", *b.samples);
    }
  }
  if (r.backends.size() == 2) {
    l.add("backends.rms_t2_ratio", r.backends[1].t2.rms / r.backends[0].t2.rms);
  }
  if (r.backend_ks_t2) {
    l.ks("backends.ks_t2", *r.backend_ks_t2);
    l.add_bool("backends.distinguishable", r.backend_ks_t2->p_value < kRejectP);
  }

  if (r.tau_s_seconds) {
    const double s = *r.tau_s_seconds;
    l.add("si.tau_s_s", s);
    l.add("si.source.t2.rms_s", r.source_t2.rms * s);
    l.add("si.source.difference.rms_s", r.source_difference.rms * s);
    for (const auto& b : r.backends) {
      const std::string name(backend_name(b.backend));
      l.add("si." + name + ".t1.rms_s", b.t1.rms * s);
      l.add("si." + name + ".t2.rms_s", b.t2.rms * s);
      l.add("si." + name + ".difference.rms_s", b.difference.rms * s);
    }
  }
  if (r.cavity) {
    l.add("cavity.finesse", r.cavity->finesse);
    l.add("cavity.length_m", r.cavity->length_m);
    l.add("cavity.tau_fp_s", r.cavity->tau_fp_sqrt_s);
    l.add("cavity.tau_lifetime_s", r.cavity->tau_lifetime_s);
    l.add("cavity.lifetime_ratio", r.cavity->ratio);
  }
  return l.str();
}

std::string format_report_csv(const RunReport& r) {
  std::string out = "origin,variable,kind,mean,rms,fwhm,iqr,se_rms,n\n";
  const auto density = [&](const std::string& origin, const char* variable, const WidthReport& w) {
    out += csv_row(origin, variable, "density", w.mean, w.rms, w.fwhm, w.iqr, 0.0, w.n_effective);
  };
  const auto sampled = [&](const std::string& origin, const char* variable,
                           const std::optional<SampleWidths>& w) {
    if (!w) return;
    out += csv_row(origin, variable, "sample", w->mean, w->rms, 0.0, w->iqr, w->se_rms,
                   static_cast<double>(w->n));
  };
  density("source", "t1", r.source_t1);
  density("source", "t2", r.source_t2);
  density("source", "difference", r.source_difference);
  for (const auto& b : r.backends) {
    const std::string name(backend_name(b.backend));
    density(name, "t1", b.t1);
    density(name, "t2", b.t2);
    density(name, "difference", b.difference);
    if (b.samples) {
      sampled(name, "t1", b.samples->t1);
      sampled(name, "t2", b.samples->t2);
      sampled(name, "difference", b.samples->difference);
    }
  }
  return out;
}

std::string format_analysis_text(const AnalysisReport& a) {
  Lines l;
  l.samples("sampled", a.samples);
  for (const auto& test : a.model_tests) {
    l.ks("model." + std::string(backend_name(test.backend)) + ".ks_t2", test.ks);
  }
  if (!a.favored.empty()) l.add("model.favored", a.favored);
  return l.str();
}

std::string format_histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "lo,hi,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << num(h.edges[k]) << ',' << num(h.edges[k + 1]) << ',' << h.counts[k] << '\n';
  }
  return out.str();
}

std::string format_comparison_text(const Comparison& c) {
  Lines l;
  l.add_count("compare.coincidences_a", c.coincidences_a);
  l.add_count("compare.coincidences_b", c.coincidences_b);
  l.ks("compare.ks_t1", c.t1);
  l.ks("compare.ks_t2", c.t2);
  l.ks("compare.ks_difference", c.difference);
  l.add_bool("compare.distinguishable", c.distinguishable);
  return l.str();
}

}  // namespace etoa
