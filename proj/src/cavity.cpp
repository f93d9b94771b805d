#include "etoa/cavity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "etoa/errors.hpp"
#include "etoa/fourier.hpp"

namespace etoa {

using namespace std::complex_literals;

SpectralFilter SpectralFilter::lorentzian(double kappa, double center) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("lorentzian_response: kappa must be positive and finite");
  }
  if (!std::isfinite(center)) throw InvalidArgument("lorentzian_response: non-finite center");
  return SpectralFilter(FilterModel::lorentzian, center, kappa, 0.0, 0.0);
}

SpectralFilter SpectralFilter::airy(double reflectivity, double fsr, double center) {
  if (!(reflectivity > 0.0 && reflectivity < 1.0)) {
    throw InvalidArgument("airy_response: reflectivity R must lie in (0, 1)");
  }
  if (!(fsr > 0.0) || !std::isfinite(fsr)) {
    throw InvalidArgument("airy_response: fsr must be positive and finite");
  }
  if (!std::isfinite(center)) throw InvalidArgument("airy_response: non-finite center");
  return SpectralFilter(FilterModel::airy, center, 0.0, reflectivity, fsr);
}

SpectralFilter lorentzian_response(double kappa, double center) {
  return SpectralFilter::lorentzian(kappa, center);
}

SpectralFilter airy_response(double reflectivity, double fsr, double center) {
  return SpectralFilter::airy(reflectivity, fsr, center);
}

double SpectralFilter::finesse() const noexcept {
  if (model_ == FilterModel::lorentzian) return std::numeric_limits<double>::infinity();
  return std::numbers::pi * std::sqrt(reflectivity_) / (1.0 - reflectivity_);
}

double SpectralFilter::linewidth() const noexcept {
  return model_ == FilterModel::lorentzian ? kappa_ : fsr_ / finesse();
}

std::complex<double> SpectralFilter::transmission(double omega) const noexcept {
  const double detuning = omega - center_;
  if (model_ == FilterModel::lorentzian) {
    const double half = 0.5 * kappa_;
    return half / (half + 1i * detuning);
  }
  const double delta = 2.0 * std::numbers::pi * detuning / fsr_;
  const double R = reflectivity_;
  return (1.0 - R) * std::polar(1.0, -0.5 * delta) / (1.0 - R * std::polar(1.0, -delta));
}

std::complex<double> SpectralFilter::reflection(double omega) const noexcept {
  const double detuning = omega - center_;
  if (model_ == FilterModel::lorentzian) {
    const double half = 0.5 * kappa_;
    return 1i * detuning / (half + 1i * detuning);
  }
  const double delta = 2.0 * std::numbers::pi * detuning / fsr_;
  const double R = reflectivity_;
  const auto phase = std::polar(1.0, -delta);
  return std::sqrt(R) * (phase - 1.0) / (1.0 - R * phase);
}

std::complex<double> SpectralFilter::discrete_transmission(double omega, double dt) const noexcept {
  if (model_ == FilterModel::airy) return transmission(omega);
  // Detuning pre-warped to (2/dt) tan(x), written with sin/cos so the Nyquist
  // edge maps to t = 0 instead of dividing by zero.
  const double x = 0.5 * (omega - center_) * dt;
  const double half = 0.5 * kappa_;
  const double c = std::cos(x);
  return half * c / (half * c + 1i * (2.0 / dt) * std::sin(x));
}

TimeSignal impulse_response(const SpectralFilter& filter, const TimeGrid& grid) {
  const double lifetime = 1.0 / filter.linewidth();
  if (grid.span() < 8.0 * lifetime || grid.dt() > lifetime) {
    std::ostringstream msg;
    msg << "impulse_response: grid (span " << grid.span() << ", dt " << grid.dt()
        << ") must span 8 lifetimes and resolve one lifetime (" << lifetime << ")";
    throw CoverageError(msg.str());
  }
  // Amplitude decays as exp(-t / (2 lifetime)); 80 lifetimes of extra period
  // push the wrapped copy below exp(-40).
  const auto n_internal = next_power_of_two(
      static_cast<std::size_t>(std::ceil((grid.span() + 80.0 * lifetime) / grid.dt())));
  const TimeGrid extended(grid.t_min(), grid.dt(), std::max(n_internal, grid.size()));
  const FreqGrid fg = conjugate_grid(extended);

  std::vector<std::complex<double>> spectrum(fg.size());
  for (std::size_t j = 0; j < fg.size(); ++j) {
    spectrum[j] = filter.discrete_transmission(fg[j], grid.dt());
  }
  const TimeSignal full = fourier_inverse(SpectrumSignal(fg, std::move(spectrum)), extended);
  std::vector<std::complex<double>> h(full.values().begin(),
                                      full.values().begin() + static_cast<long>(grid.size()));
  return TimeSignal(grid, std::move(h));
}

SpectralDensity transmission_density(const SpectralFilter& filter, const FreqGrid& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = std::norm(filter.transmission(grid[j]));
  return SpectralDensity::normalized(grid, std::move(values));
}

CavityTimescales cavity_timescales(double finesse, double length_m) {
  if (!(finesse > 1.0) || !std::isfinite(finesse)) {
    throw InvalidArgument("cavity_timescales: finesse must exceed 1");
  }
  if (!(length_m > 0.0) || !std::isfinite(length_m)) {
    throw InvalidArgument("cavity_timescales: length must be positive");
  }
  const double sqrt_estimate = std::sqrt(finesse) * length_m / kSpeedOfLight;
  const double lifetime = finesse * length_m / (std::numbers::pi * kSpeedOfLight);
  return {finesse, length_m, sqrt_estimate, lifetime, lifetime / sqrt_estimate};
}

}  // namespace etoa
