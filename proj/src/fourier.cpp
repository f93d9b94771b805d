#include "etoa/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace etoa {
namespace {

// FFTW's planner is not reentrant; execution of an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, FftDirection direction) {
    const std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, direction);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    auto* scratch = fftw_alloc_complex(n);
    const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, FftDirection>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void dft_in_place(std::span<std::complex<double>> data, FftDirection direction) {
  if (data.empty()) return;
  fftw_plan plan = plan_cache().get(data.size(), direction);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

SpectrumSignal fourier_forward(const TimeSignal& signal) {
  const TimeGrid& tg = signal.grid();
  const FreqGrid fg = conjugate_grid(tg);
  const std::size_t n = tg.size();

  // exp(-i w_j t_k) = exp(-i w_j t_min) (-1)^k exp(-2 pi i j k / n)
  // because w_min * dt = -pi.
  std::vector<std::complex<double>> buffer(signal.values().begin(), signal.values().end());
  for (std::size_t k = 1; k < n; k += 2) buffer[k] = -buffer[k];
  dft_in_place(buffer, FftDirection::forward);
  for (std::size_t j = 0; j < n; ++j) {
    buffer[j] *= tg.dt() * std::polar(1.0, -fg[j] * tg.t_min());
  }
  return SpectrumSignal(fg, std::move(buffer));
}

TimeSignal fourier_inverse(const SpectrumSignal& spectrum, const TimeGrid& time_grid) {
  const FreqGrid& fg = spectrum.grid();
  if (!(conjugate_grid(time_grid) == fg)) {
    throw GridMismatch("fourier_inverse: spectrum grid is not conjugate to the time grid");
  }
  const std::size_t n = fg.size();
  std::vector<std::complex<double>> buffer(spectrum.values().begin(), spectrum.values().end());
  for (std::size_t j = 0; j < n; ++j) buffer[j] *= std::polar(1.0, fg[j] * time_grid.t_min());
  dft_in_place(buffer, FftDirection::backward);
  const double scale = 1.0 / (static_cast<double>(n) * time_grid.dt());
  for (std::size_t k = 0; k < n; ++k) {
    buffer[k] *= (k % 2 == 0 ? scale : -scale);
  }
  return TimeSignal(time_grid, std::move(buffer));
}

}  // namespace etoa
