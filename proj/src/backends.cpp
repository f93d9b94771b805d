#include "etoa/backends.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "etoa/errors.hpp"
#include "etoa/fourier.hpp"
#include "etoa/stats.hpp"

namespace etoa {

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::standard ? "standard" : "collapse";
}

FilteredJoint apply_filter_arm1(JointAmplitude amplitude, const SpectralFilter& filter) {
  const TimeGrid arm1 = amplitude.arm1();
  const TimeGrid arm2 = amplitude.arm2();
  const double tail = 8.0 / filter.linewidth();
  if (arm1.end() < arm2.last() + tail) {
    std::ostringstream msg;
    msg << "apply_filter_arm1: arm-1 grid ends at " << arm1.end() << " but needs "
        << arm2.last() + tail << " (source end + 8 filter lifetimes)";
    throw CoverageError(msg.str());
  }

  const std::size_t n1 = arm1.size();
  std::vector<std::complex<double>> t(n1);
  std::vector<std::complex<double>> r(n1);
  const double inv_n = 1.0 / static_cast<double>(n1);
  for (std::size_t j = 0; j < n1; ++j) {
    const double omega = dft_bin_frequency(j, n1, arm1.dt());
    t[j] = filter.transmission(omega) * inv_n;
    r[j] = filter.reflection(omega) * inv_n;
  }

  std::vector<std::complex<double>> reflected(amplitude.values().size());
  for (std::size_t row = 0; row < arm2.size(); ++row) {
    auto transmitted_row = amplitude.mutable_row(row);
    std::span<std::complex<double>> reflected_row(reflected.data() + row * n1, n1);
    dft_in_place(transmitted_row, FftDirection::forward);
    for (std::size_t j = 0; j < n1; ++j) {
      reflected_row[j] = transmitted_row[j] * r[j];
      transmitted_row[j] *= t[j];
    }
    dft_in_place(transmitted_row, FftDirection::backward);
    dft_in_place(reflected_row, FftDirection::backward);
  }

  FilteredJoint out{std::move(amplitude), JointAmplitude(arm1, arm2, std::move(reflected)), 0.0};
  out.survival = out.transmitted.norm();
  return out;
}

namespace {

void require_survival(const FilteredJoint& filtered) {
  if (!(filtered.survival >= 1e-12)) {
    std::ostringstream msg;
    msg << "transmission probability " << filtered.survival
        << " is below 1e-12; no coincidences to condition on";
    throw VanishingCoincidence(msg.str());
  }
}

// Density of t1 - t2 for independent t1 ~ a, t2 ~ b on grids of equal dt.
Density1D independent_difference(const Density1D& a, const Density1D& b) {
  const TimeGrid& ga = a.grid();
  const TimeGrid& gb = b.grid();
  const std::size_t n = next_power_of_two(ga.size() + gb.size());
  std::vector<std::complex<double>> fa(n);
  std::vector<std::complex<double>> fb(n);
  for (std::size_t k = 0; k < ga.size(); ++k) fa[k] = a[k];
  // b reversed so that the linear convolution runs over i - j.
  for (std::size_t k = 0; k < gb.size(); ++k) fb[k] = b[gb.size() - 1 - k];
  dft_in_place(fa, FftDirection::forward);
  dft_in_place(fb, FftDirection::forward);
  for (std::size_t k = 0; k < n; ++k) fa[k] *= fb[k];
  dft_in_place(fa, FftDirection::backward);
  std::vector<double> mass(n);
  for (std::size_t k = 0; k < n; ++k) mass[k] = fa[k].real() / static_cast<double>(n);
  // FFT roundoff leaves tiny negative values far from the support.
  double peak = 0.0;
  for (double m : mass) peak = std::max(peak, m);
  for (double& m : mass) {
    if (std::abs(m) < 1e-13 * peak) m = 0.0;
  }
  const TimeGrid grid(ga.t_min() - gb.last(), ga.dt(), n);
  return normalize_density(std::move(mass), grid);
}

}  // namespace

BackendResult standard_backend(const FilteredJoint& filtered) {
  require_survival(filtered);
  const auto& t = filtered.transmitted;
  auto unconditional = t.marginal_mass(Arm::two);
  const auto reflected = filtered.reflected.marginal_mass(Arm::two);
  for (std::size_t j = 0; j < unconditional.size(); ++j) unconditional[j] += reflected[j];

  return BackendResult{Backend::standard,
                       marginal_density(t, Arm::one),
                       marginal_density(t, Arm::two),
                       normalize_density(std::move(unconditional), t.arm2()),
                       difference_time_density(t),
                       JointSampler::correlated(t),
                       filtered.survival};
}

BackendResult collapse_backend(const FilteredJoint& filtered, const SourceParams& source) {
  source.validate();
  require_survival(filtered);
  Density1D p1 = marginal_density(filtered.transmitted, Arm::one);
  Density1D difference = independent_difference(p1, p1);
  JointSampler sampler = JointSampler::independent(p1, p1);
  return BackendResult{Backend::collapse, p1, p1, p1, std::move(difference), std::move(sampler),
                       filtered.survival};
}

SpectralDensity photon1_spectrum(const FilteredJoint& filtered) {
  const auto& t = filtered.transmitted;
  const TimeGrid& arm1 = t.arm1();
  const std::size_t n1 = arm1.size();
  const std::size_t padded = 2 * n1;

  // Summed power spectrum of the zero-padded rows, then its inverse: the
  // summed linear autocorrelation, supported on |lag| < n1.
  std::vector<std::complex<double>> power(padded, 0.0);
  std::vector<std::complex<double>> buffer(padded);
  for (std::size_t row = 0; row < t.arm2().size(); ++row) {
    const auto values = t.row(row);
    std::copy(values.begin(), values.end(), buffer.begin());
    std::fill(buffer.begin() + static_cast<long>(n1), buffer.end(), 0.0);
    dft_in_place(buffer, FftDirection::forward);
    for (std::size_t j = 0; j < padded; ++j) power[j] += std::norm(buffer[j]);
  }
  dft_in_place(power, FftDirection::backward);

  // Embed the autocorrelation in a longer lattice and transform again: the
  // spectrum on a grid 16x finer than the padded one.
  constexpr std::size_t refine = 16;
  const std::size_t m = refine * padded;
  std::vector<std::complex<double>> fine(m, 0.0);
  for (std::size_t lag = 0; lag < n1; ++lag) fine[lag] = power[lag];
  for (std::size_t lag = 1; lag < n1; ++lag) fine[m - lag] = power[padded - lag];
  dft_in_place(fine, FftDirection::forward);

  const FreqGrid grid = conjugate_grid(TimeGrid(arm1.t_min(), arm1.dt(), m));
  std::vector<double> spectrum(m);
  double peak = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    // Centered grid index j is raw bin (j + m/2) mod m.
    spectrum[j] = fine[(j + m / 2) % m].real();
    peak = std::max(peak, spectrum[j]);
  }
  for (double& s : spectrum) {
    if (s < 0.0 && s > -1e-12 * peak) s = 0.0;
  }
  return SpectralDensity::normalized(grid, std::move(spectrum));
}

double uncertainty_product(const FilteredJoint& filtered) {
  require_survival(filtered);
  const WidthReport spectral = width_report(photon1_spectrum(filtered));
  const WidthReport temporal = width_report(marginal_density(filtered.transmitted, Arm::one));
  return spectral.fwhm * temporal.rms;
}

EventBatch sample_events(const BackendResult& result, std::uint64_t n_triggers,
                         double pair_probability, std::uint64_t seed) {
  if (n_triggers < 1) throw InvalidArgument("sample_events: n_triggers must be at least 1");
  if (!(pair_probability >= 0.0 && pair_probability <= 1.0)) {
    throw InvalidArgument("sample_events: pair_probability must lie in [0, 1]");
  }
  Rng rng(seed);
  EventBatch batch;
  batch.reserve(static_cast<std::size_t>(n_triggers) +
                static_cast<std::size_t>(2.2 * pair_probability * result.survival *
                                         static_cast<double>(n_triggers)));
  for (std::uint64_t id = 0; id < n_triggers; ++id) {
    batch.push_back({id, Channel::trigger, 0.0});
    if (rng.uniform() >= pair_probability) continue;
    if (rng.uniform() >= result.survival) continue;
    const auto [t1, t2] = result.joint_sampler.draw(rng);
    batch.push_back({id, Channel::detector1, t1});
    batch.push_back({id, Channel::detector2, t2});
  }
  return batch;
}

}  // namespace etoa
