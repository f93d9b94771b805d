#pragma once

#include <complex>

#include "etoa/density.hpp"
#include "etoa/grid.hpp"

namespace etoa {

enum class FilterModel { lorentzian, airy };

/// Lossless symmetric Fabry-Perot filter: transmission t and reflection r
/// with |t|^2 + |r|^2 = 1 at every detuning. Both models are causal under the
/// library's Fourier convention (a delay d multiplies by exp(-i w d)).
class SpectralFilter {
 public:
  static SpectralFilter lorentzian(double kappa, double center);
  static SpectralFilter airy(double reflectivity, double fsr, double center);

  FilterModel model() const noexcept { return model_; }
  double center() const noexcept { return center_; }
  double kappa() const noexcept { return kappa_; }
  double reflectivity() const noexcept { return reflectivity_; }
  double fsr() const noexcept { return fsr_; }

  /// pi sqrt(R) / (1 - R) for the Airy model; fsr/kappa is not defined for
  /// the single-mode model, which reports +inf.
  double finesse() const noexcept;
  /// Intensity FWHM: kappa (lorentzian) or fsr / F (airy).
  double linewidth() const noexcept;

  std::complex<double> transmission(double omega) const noexcept;
  std::complex<double> reflection(double omega) const noexcept;

  /// Transmission of the sampled causal realization at spacing dt. For the
  /// Lorentzian this is the bilinear (pre-warped) map, whose impulse response
  /// is exactly causal on the lattice and matches (kappa/2) exp(-kappa t/2)
  /// to O((kappa dt)^2). The Airy response is already a function of
  /// exp(-i w tau_rt) and is returned unchanged; it is exactly causal on the
  /// lattice when half the round-trip time is a multiple of dt.
  std::complex<double> discrete_transmission(double omega, double dt) const noexcept;

 private:
  SpectralFilter(FilterModel model, double center, double kappa, double reflectivity,
                 double fsr)
      : model_(model), center_(center), kappa_(kappa), reflectivity_(reflectivity), fsr_(fsr) {}

  FilterModel model_;
  double center_;
  double kappa_;
  double reflectivity_;
  double fsr_;
};

/// t = (k/2) / (k/2 + i(w - wc)), r = i(w - wc) / (k/2 + i(w - wc)).
SpectralFilter lorentzian_response(double kappa, double center = 0.0);

/// Round-trip phase d = 2 pi (w - wc) / fsr,
///   t = (1-R) e^{-i d/2} / (1 - R e^{-i d}),
///   r = sqrt(R) (e^{-i d} - 1) / (1 - R e^{-i d}),
///   |t|^2 = (1-R)^2 / (1 + R^2 - 2 R cos d).
SpectralFilter airy_response(double reflectivity, double fsr, double center = 0.0);

/// h(tau), the inverse transform of the filter transmission, sampled on
/// `grid`. Computed from discrete_transmission() on an internally extended
/// lattice so that periodic wrap-around is below 1e-15 of max|h|.
/// The grid must span at least 8 lifetimes (8 / linewidth) and have
/// dt <= 1 / linewidth, otherwise CoverageError.
TimeSignal impulse_response(const SpectralFilter& filter, const TimeGrid& grid);

/// |t|^2 sampled on a frequency grid, normalized as a density. Used for
/// linewidth measurements.
SpectralDensity transmission_density(const SpectralFilter& filter, const FreqGrid& grid);

/// SI timescales of a physical cavity of finesse F and length L (meters).
struct CavityTimescales {
  double finesse;
  double length_m;
  /// sqrt(F) L / c, the filter timescale used in the thought experiment.
  double tau_fp_sqrt_s;
  /// F L / (pi c), the textbook photon storage time.
  double tau_lifetime_s;
  /// tau_lifetime_s / tau_fp_sqrt_s = sqrt(F) / pi.
  double ratio;
};

inline constexpr double kSpeedOfLight = 299792458.0;

CavityTimescales cavity_timescales(double finesse, double length_m);

}  // namespace etoa
