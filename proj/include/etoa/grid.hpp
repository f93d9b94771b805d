#pragma once

#include <cstddef>
#include <numbers>

namespace etoa {

// All times are in units of the pair-correlation time tau_s and all angular
// frequencies in units of 1/tau_s (hbar = 1).

/// Uniform time lattice t_k = t_min + k*dt, k in [0, n). n is a power of two
/// and at least 8.
class TimeGrid {
 public:
  TimeGrid(double t_min, double dt, std::size_t n);

  double t_min() const noexcept { return t_min_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return n_; }

  double operator[](std::size_t k) const noexcept { return t_min_ + static_cast<double>(k) * dt_; }
  double last() const noexcept { return (*this)[n_ - 1]; }
  /// End of the periodic span, t_min + n*dt.
  double end() const noexcept { return t_min_ + static_cast<double>(n_) * dt_; }
  double span() const noexcept { return static_cast<double>(n_) * dt_; }

  // Uniform-axis interface shared with FreqGrid.
  double start() const noexcept { return t_min_; }
  double step() const noexcept { return dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_min_;
  double dt_;
  std::size_t n_;
};

/// Angular-frequency lattice conjugate to a TimeGrid: d_omega = 2*pi/(n*dt),
/// omega_min = -pi/dt.
class FreqGrid {
 public:
  FreqGrid(double omega_min, double d_omega, std::size_t n);

  double omega_min() const noexcept { return omega_min_; }
  double d_omega() const noexcept { return d_omega_; }
  std::size_t size() const noexcept { return n_; }

  double operator[](std::size_t j) const noexcept {
    return omega_min_ + static_cast<double>(j) * d_omega_;
  }

  double start() const noexcept { return omega_min_; }
  double step() const noexcept { return d_omega_; }

  friend bool operator==(const FreqGrid&, const FreqGrid&) = default;

 private:
  double omega_min_;
  double d_omega_;
  std::size_t n_;
};

FreqGrid conjugate_grid(const TimeGrid& grid);

/// Grid covering [t_min, t_max] at spacing dt_target. When the interval does
/// not hold a power-of-two number of steps the span is extended to the right
/// (dt stays at dt_target), so make_time_grid(0, 10, 1) ends at 16.
TimeGrid make_time_grid(double t_min, double t_max, double dt_target);

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Angular frequency of raw DFT bin j for an n-point transform at spacing dt
/// (bins n/2..n-1 are the negative frequencies).
inline double dft_bin_frequency(std::size_t j, std::size_t n, double dt) noexcept {
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  const auto signed_j = j < n / 2 ? static_cast<double>(j)
                                  : static_cast<double>(j) - static_cast<double>(n);
  return signed_j * d_omega;
}

}  // namespace etoa
