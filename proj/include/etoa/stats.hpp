#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "etoa/density.hpp"

namespace etoa {

struct WidthReport {
  double mean = 0.0;
  double rms = 0.0;
  double fwhm = 0.0;
  double iqr = 0.0;
  /// Participation ratio 1 / sum(w_k^2) of the per-sample masses w_k.
  double n_effective = 0.0;
  /// The half-maximum level is crossed more than twice; fwhm spans the
  /// outermost crossings.
  bool multimodal = false;
  /// fwhm < 3 dt.
  bool unresolved = false;
};

/// Trapezoidal mean and RMS (standard deviation about the mean), FWHM by
/// linear interpolation at half the global maximum, IQR from the numeric CDF.
template <class Grid>
WidthReport width_report(const Density<Grid>& density);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
/// truncated at 100 terms.
double kolmogorov_survival(double lambda) noexcept;

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at
/// effective size n_a n_b / (n_a + n_b). Empty input: InvalidArgument.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample test of `samples` against the CDF of `reference`.
KsResult ks_one_sample(std::span<const double> samples, const Density1D& reference);

/// Integral of |a - b| over a shared grid; in [0, 2]. Different grids: GridMismatch.
template <class Grid>
double l1_distance(const Density<Grid>& a, const Density<Grid>& b);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  std::uint64_t total() const noexcept;
};

/// Counts per half-open bin [e_k, e_{k+1}). Edges must be strictly
/// increasing (at least two), otherwise InvalidArgument.
Histogram histogram_of(std::span<const double> samples, std::vector<double> edges);

/// Evenly spaced edges.
std::vector<double> linear_edges(double lo, double hi, std::size_t bins);

/// Moments of a finite sample with standard errors (normal-theory for the
/// mean, fourth-moment based for the RMS).
struct SampleWidths {
  std::size_t n = 0;
  double mean = 0.0;
  double rms = 0.0;
  double se_mean = 0.0;
  double se_rms = 0.0;
  double median = 0.0;
  double iqr = 0.0;
};

SampleWidths sample_widths(std::span<const double> samples);

}  // namespace etoa
