#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "etoa/errors.hpp"
#include "etoa/grid.hpp"

namespace etoa {

/// Complex samples on a TimeGrid or FreqGrid. Entries are always finite.
template <class Grid>
class ComplexSignal {
 public:
  ComplexSignal(Grid grid, std::vector<std::complex<double>> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw GridMismatch("ComplexSignal: value count does not match grid size");
    }
    for (const auto& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InvalidArgument("ComplexSignal: non-finite entry");
      }
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::complex<double>& operator[](std::size_t k) const noexcept { return values_[k]; }

 private:
  Grid grid_;
  std::vector<std::complex<double>> values_;
};

using TimeSignal = ComplexSignal<TimeGrid>;
using SpectrumSignal = ComplexSignal<FreqGrid>;

/// Trapezoidal integral of uniformly spaced samples.
inline double trapezoid(std::span<const double> values, double step) noexcept {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) sum += values[k];
  return sum * step;
}

/// Nonnegative density on a uniform grid with unit trapezoidal integral.
template <class Grid>
class Density {
 public:
  /// Normalizes raw nonnegative weights. Entries down to -1e-12 (relative to
  /// the largest magnitude) are roundoff and get clipped to zero.
  static Density normalized(Grid grid, std::vector<double> values) {
    if (values.size() != grid.size()) {
      throw GridMismatch("Density: value count does not match grid size");
    }
    double scale = 0.0;
    for (double v : values) {
      if (!std::isfinite(v)) throw DegenerateDensity("Density: non-finite value");
      scale = std::max(scale, std::abs(v));
    }
    const double floor = -1e-12 * std::max(1.0, scale);
    for (double& v : values) {
      if (v < floor) throw DegenerateDensity("Density: negative mass in input");
      if (v < 0.0) v = 0.0;
    }
    const double mass = trapezoid(values, grid.step());
    if (!(mass > 0.0)) throw DegenerateDensity("Density: input has zero total mass");
    for (double& v : values) v /= mass;
    return Density(std::move(grid), std::move(values));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double integral() const noexcept { return trapezoid(values_, grid_.step()); }

  /// Cumulative trapezoid at each node, normalized to end at 1.
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  /// CDF by linear interpolation of the cumulative trapezoid.
  double cdf(double x) const {
    const auto& c = cumulative();
    const double pos = (x - grid_.start()) / grid_.step();
    if (pos <= 0.0) return 0.0;
    if (pos >= static_cast<double>(c.size() - 1)) return 1.0;
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    return c[k] + frac * (c[k + 1] - c[k]);
  }

  /// Inverse of cdf() for p in [0, 1].
  double quantile(double p) const {
    const auto& c = cumulative();
    p = std::clamp(p, 0.0, 1.0);
    const auto it = std::lower_bound(c.begin(), c.end(), p);
    if (it == c.begin()) return grid_.start();
    if (it == c.end()) return grid_[c.size() - 1];
    const auto k = static_cast<std::size_t>(it - c.begin());
    const double lo = c[k - 1];
    const double hi = c[k];
    const double frac = hi > lo ? (p - lo) / (hi - lo) : 0.0;
    return grid_[k - 1] + frac * grid_.step();
  }

 private:
  Density(Grid grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)), cumulative_(values_.size(), 0.0) {
    double acc = 0.0;
    for (std::size_t k = 1; k < values_.size(); ++k) {
      acc += 0.5 * (values_[k - 1] + values_[k]) * grid_.step();
      cumulative_[k] = acc;
    }
    for (double& c : cumulative_) c /= acc;
  }

  Grid grid_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

using Density1D = Density<TimeGrid>;
using SpectralDensity = Density<FreqGrid>;

inline Density1D normalize_density(std::vector<double> values, const TimeGrid& grid) {
  return Density1D::normalized(grid, std::move(values));
}

}  // namespace etoa
