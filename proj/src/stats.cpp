#include "etoa/stats.hpp"

#include <algorithm>
#include <cmath>

#include "etoa/errors.hpp"

namespace etoa {

template <class Grid>
WidthReport width_report(const Density<Grid>& density) {
  const auto& grid = density.grid();
  const auto v = density.values();
  const std::size_t n = v.size();
  const double step = grid.step();

  std::vector<double> weighted(n);
  for (std::size_t k = 0; k < n; ++k) weighted[k] = grid[k] * v[k];
  const double mass = trapezoid(v, step);
  const double mean = trapezoid(weighted, step) / mass;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = grid[k] - mean;
    weighted[k] = d * d * v[k];
  }
  const double variance = trapezoid(weighted, step) / mass;

  WidthReport report;
  report.mean = mean;
  report.rms = std::sqrt(std::max(variance, 0.0));

  const auto peak = std::max_element(v.begin(), v.end());
  const double half = 0.5 * *peak;
  std::size_t first = 0;
  while (v[first] < half) ++first;
  std::size_t last = n - 1;
  while (v[last] < half) --last;
  const double left = first == 0 ? grid[0]
                                 : grid[first - 1] + (half - v[first - 1]) /
                                                         (v[first] - v[first - 1]) * step;
  const double right = last == n - 1
                           ? grid[n - 1]
                           : grid[last] + (v[last] - half) / (v[last] - v[last + 1]) * step;
  report.fwhm = right - left;
  for (std::size_t k = first; k <= last; ++k) {
    if (v[k] < half) {
      report.multimodal = true;
      break;
    }
  }
  report.unresolved = report.fwhm < 3.0 * step;
  report.iqr = density.quantile(0.75) - density.quantile(0.25);

  double sum_sq = 0.0;
  for (double x : v) sum_sq += (x * step) * (x * step);
  report.n_effective = sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
  return report;
}

template WidthReport width_report(const Density<TimeGrid>&);
template WidthReport width_report(const Density<FreqGrid>&);

double kolmogorov_survival(double lambda) noexcept {
  // Below this the truncated series has not converged; Q is 1 to machine
  // precision there anyway.
  if (lambda < 0.05) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    sum += sign * std::exp(-2.0 * k * k * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_survival(std::sqrt(ne) * d)};
}

KsResult ks_one_sample(std::span<const double> samples, const Density1D& reference) {
  if (samples.empty()) throw InvalidArgument("ks_one_sample: empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = reference.cdf(s[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

template <class Grid>
double l1_distance(const Density<Grid>& a, const Density<Grid>& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("l1_distance: densities live on different grids");
  std::vector<double> diff(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diff[k] = std::abs(a[k] - b[k]);
  return trapezoid(diff, a.grid().step());
}

template double l1_distance(const Density<TimeGrid>&, const Density<TimeGrid>&);
template double l1_distance(const Density<FreqGrid>&, const Density<FreqGrid>&);

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t sum = underflow + overflow;
  for (auto c : counts) sum += c;
  return sum;
}

Histogram histogram_of(std::span<const double> samples, std::vector<double> edges) {
  if (edges.size() < 2) throw InvalidArgument("histogram_of: need at least two edges");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k] > edges[k - 1])) {
      throw InvalidArgument("histogram_of: edges must be strictly increasing");
    }
  }
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double x : samples) {
    if (x < edges.front()) {
      ++h.underflow;
      continue;
    }
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    const auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (bin >= h.counts.size()) {
      ++h.overflow;  // x >= last edge, or NaN
    } else {
      ++h.counts[bin];
    }
  }
  h.edges = std::move(edges);
  return h;
}

std::vector<double> linear_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw InvalidArgument("linear_edges: empty range");
  std::vector<double> edges(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  }
  return edges;
}

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(k);
  return sorted[k] + frac * (sorted[k + 1] - sorted[k]);
}

}  // namespace

SampleWidths sample_widths(std::span<const double> samples) {
  if (samples.size() < 2) throw InsufficientData("sample_widths: need at least two samples");
  SampleWidths w;
  w.n = samples.size();
  const double n = static_cast<double>(w.n);
  double sum = 0.0;
  for (double x : samples) sum += x;
  w.mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : samples) {
    const double d2 = (x - w.mean) * (x - w.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  w.rms = std::sqrt(m2 * n / (n - 1.0));
  w.se_mean = w.rms / std::sqrt(n);
  w.se_rms = m2 > 0.0 ? std::sqrt(std::max(m4 - m2 * m2, 0.0) / (4.0 * m2 * n)) : 0.0;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  w.median = sorted_quantile(sorted, 0.5);
  w.iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  return w;
}

}  // namespace etoa
