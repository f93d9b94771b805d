#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "etoa/density.hpp"
#include "etoa/grid.hpp"

namespace etoa {

enum class FftDirection { forward, backward };

/// Unnormalized in-place DFT,
///   forward:  X_j = sum_k x_k exp(-2 pi i j k / n)
///   backward: x_k = sum_j X_j exp(+2 pi i j k / n).
/// Plans are cached per (n, direction); calls are safe from several threads.
void dft_in_place(std::span<std::complex<double>> data, FftDirection direction);

/// Continuous-transform convention used throughout:
///   F(w) = integral f(t) exp(-i w t) dt,
///   f(t) = (1/2 pi) integral F(w) exp(+i w t) dw,
/// discretized on the grid pair (grid, conjugate_grid(grid)). The discrete
/// pair is exactly unitary up to the dt and d_omega/2pi weights, so Parseval
/// and the round trip hold to rounding error.
SpectrumSignal fourier_forward(const TimeSignal& signal);

/// Inverse of fourier_forward. `time_grid` must be the grid whose conjugate
/// carries `spectrum`.
TimeSignal fourier_inverse(const SpectrumSignal& spectrum, const TimeGrid& time_grid);

}  // namespace etoa
