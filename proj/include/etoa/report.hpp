#pragma once

#include <string>

#include "etoa/experiment.hpp"

namespace etoa {

/// `key = value` lines. Numbers use 10 significant digits; the resolved
/// config is embedded under `config.`. No timestamps, so equal inputs give
/// equal bytes.
std::string format_report_text(const RunReport& report);

/// One row per (origin, variable) with columns
/// origin,variable,kind,mean,rms,fwhm,iqr,se_rms,n.
std::string format_report_csv(const RunReport& report);

std::string format_analysis_text(const AnalysisReport& analysis);

/// Histogram as `lo,hi,count` rows.
std::string format_histogram_csv(const Histogram& histogram);

std::string format_comparison_text(const Comparison& comparison);

}  // namespace etoa
