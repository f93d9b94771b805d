#include "etoa/grid.hpp"

#include <cmath>
#include <string>

#include "etoa/errors.hpp"

namespace etoa {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

TimeGrid::TimeGrid(double t_min, double dt, std::size_t n) : t_min_(t_min), dt_(dt), n_(n) {
  if (!std::isfinite(t_min) || !std::isfinite(dt) || dt <= 0.0) {
    throw InvalidArgument("TimeGrid: t_min must be finite and dt positive");
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw InvalidArgument("TimeGrid: sample count must be a power of two >= 8, got " +
                          std::to_string(n));
  }
}

FreqGrid::FreqGrid(double omega_min, double d_omega, std::size_t n)
    : omega_min_(omega_min), d_omega_(d_omega), n_(n) {
  if (!std::isfinite(omega_min) || !std::isfinite(d_omega) || d_omega <= 0.0) {
    throw InvalidArgument("FreqGrid: omega_min must be finite and d_omega positive");
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw InvalidArgument("FreqGrid: sample count must be a power of two >= 8, got " +
                          std::to_string(n));
  }
}

FreqGrid conjugate_grid(const TimeGrid& grid) {
  const double n = static_cast<double>(grid.size());
  return FreqGrid(-std::numbers::pi / grid.dt(), 2.0 * std::numbers::pi / (n * grid.dt()),
                  grid.size());
}

TimeGrid make_time_grid(double t_min, double t_max, double dt_target) {
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || !std::isfinite(dt_target)) {
    throw InvalidArgument("make_time_grid: non-finite input");
  }
  if (dt_target <= 0.0) throw InvalidArgument("make_time_grid: dt_target must be positive");
  if (t_max <= t_min) throw InvalidArgument("make_time_grid: empty interval (t_max <= t_min)");

  const double steps = (t_max - t_min) / dt_target;
  // Absorb roundoff so that e.g. 360/0.5 does not become 721 steps.
  const auto needed = static_cast<std::size_t>(std::ceil(steps * (1.0 - 1e-12)));
  std::size_t n = next_power_of_two(needed);
  if (n < 8) n = 8;
  return TimeGrid(t_min, dt_target, n);
}

}  // namespace etoa
