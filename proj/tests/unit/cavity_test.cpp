#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "etoa/cavity.hpp"
#include "etoa/errors.hpp"
#include "etoa/stats.hpp"

namespace etoa {
namespace {

using namespace std::complex_literals;

TEST(Lorentzian, OnResonance) {
  const SpectralFilter f = lorentzian_response(0.1, 0.3);
  EXPECT_NEAR(std::abs(f.transmission(0.3) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.reflection(0.3)), 0.0, 1e-15);
}

TEST(Lorentzian, HalfWidthPoint) {
  const double kappa = 0.02;
  const SpectralFilter f = lorentzian_response(kappa, -1.0);
  EXPECT_NEAR(std::norm(f.transmission(-1.0 + kappa / 2)), 0.5, 1e-14);
  EXPECT_NEAR(std::norm(f.transmission(-1.0 - kappa / 2)), 0.5, 1e-14);
  EXPECT_DOUBLE_EQ(f.linewidth(), kappa);
  EXPECT_TRUE(std::isinf(f.finesse()));
}

TEST(Lorentzian, RejectsNonPositiveKappa) {
  EXPECT_THROW(lorentzian_response(0.0), InvalidArgument);
  EXPECT_THROW(lorentzian_response(-1.0), InvalidArgument);
  EXPECT_THROW(lorentzian_response(NAN), InvalidArgument);
}

TEST(Airy, OnResonance) {
  const SpectralFilter f = airy_response(0.9, 2.0, 0.5);
  EXPECT_NEAR(std::norm(f.transmission(0.5)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(f.reflection(0.5)), 0.0, 1e-15);
  // Neighbouring resonance one free spectral range away.
  EXPECT_NEAR(std::norm(f.transmission(2.5)), 1.0, 1e-12);
}

TEST(Airy, IntensityFormula) {
  const double R = 0.7;
  const SpectralFilter f = airy_response(R, 3.0);
  for (double w = -5.0; w <= 5.0; w += 0.137) {
    const double delta = 2 * std::numbers::pi * w / 3.0;
    const double expected = (1 - R) * (1 - R) / (1 + R * R - 2 * R * std::cos(delta));
    EXPECT_NEAR(std::norm(f.transmission(w)), expected, 1e-14);
  }
}

TEST(Airy, VanishingReflectivityTransmitsEverything) {
  const SpectralFilter f = airy_response(1e-9, 1.0);
  for (double w = -3.0; w <= 3.0; w += 0.1) EXPECT_NEAR(std::norm(f.transmission(w)), 1.0, 1e-8);
}

TEST(Airy, FwhmOverFsrIsInverseFinesse) {
  const double fsr = 1.0;
  const SpectralFilter f = airy_response(0.99, fsr);
  EXPECT_NEAR(f.finesse(), std::numbers::pi * std::sqrt(0.99) / 0.01, 1e-9);
  EXPECT_NEAR(f.finesse(), 312.6, 0.05);
  // Fine scan of one resonance.
  const FreqGrid grid(-0.5 * fsr, fsr / 65536.0, 65536);
  const WidthReport w = width_report(transmission_density(f, grid));
  EXPECT_NEAR(w.fwhm / fsr * f.finesse(), 1.0, 0.01);
}

TEST(Airy, RejectsBadParameters) {
  EXPECT_THROW(airy_response(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(airy_response(1.0, 1.0), InvalidArgument);
  EXPECT_THROW(airy_response(-0.1, 1.0), InvalidArgument);
  EXPECT_THROW(airy_response(0.5, 0.0), InvalidArgument);
}

TEST(Filters, UnitarityOnGrids) {
  for (const SpectralFilter& f :
       {lorentzian_response(1.0 / 600.0), lorentzian_response(3.0, 1.0), airy_response(0.99, 0.5),
        airy_response(0.3, 7.0, -2.0)}) {
    for (const TimeGrid& g : {TimeGrid(-10.0, 0.25, 1024), TimeGrid(0.0, 0.5, 16384)}) {
      const FreqGrid fg = conjugate_grid(g);
      for (std::size_t j = 0; j < fg.size(); ++j) {
        const double sum = std::norm(f.transmission(fg[j])) + std::norm(f.reflection(fg[j]));
        ASSERT_NEAR(sum, 1.0, 1e-12) << fg[j];
      }
    }
  }
}

TEST(Filters, SingleModeApproximationNearResonance) {
  for (double R : {0.99, 0.995, 0.999}) {
    const double fsr = 2.0;
    const SpectralFilter airy = airy_response(R, fsr);
    const SpectralFilter lor = lorentzian_response(fsr / airy.finesse());
    const double max_delta = 0.1 * 2 * std::numbers::pi / airy.finesse();
    for (int k = -50; k <= 50; ++k) {
      const double delta = max_delta * k / 50.0;
      const double w = delta * fsr / (2 * std::numbers::pi);
      EXPECT_LT(std::abs(airy.transmission(w) - lor.transmission(w)), 0.02) << R << " " << w;
    }
  }
}

TEST(ImpulseResponse, LorentzianMatchesExponential) {
  const double kappa = 1.0 / 600.0;
  const TimeGrid grid(0.0, 0.5, 16384);
  const TimeSignal h = impulse_response(lorentzian_response(kappa), grid);
  for (std::size_t k = 1; grid[k] <= 5.0 / kappa; ++k) {
    const double exact = 0.5 * kappa * std::exp(-0.5 * kappa * grid[k]);
    ASSERT_LT(std::abs(h[k] - exact) / exact, 1e-6) << grid[k];
  }
  EXPECT_NEAR(h[1].real() / (0.5 * kappa), 1.0, 1e-3);
}

TEST(ImpulseResponse, DetunedLorentzianCarriesPhase) {
  const double kappa = 0.01;
  const double center = 0.3;
  const TimeGrid grid(0.0, 0.25, 8192);
  const TimeSignal h = impulse_response(lorentzian_response(kappa, center), grid);
  for (std::size_t k = 4; grid[k] <= 5.0 / kappa; k += 5) {
    const std::complex<double> exact =
        0.5 * kappa * std::exp(-0.5 * kappa * grid[k]) * std::polar(1.0, center * grid[k]);
    ASSERT_LT(std::abs(h[k] - exact) / std::abs(exact), 1e-5) << grid[k];
  }
}

TEST(ImpulseResponse, CausalForBothModels) {
  const auto check = [](const SpectralFilter& f, const TimeGrid& grid) {
    const TimeSignal h = impulse_response(f, grid);
    double peak = 0.0;
    for (const auto& v : h.values()) peak = std::max(peak, std::abs(v));
    for (std::size_t k = 0; grid[k] < 0.0; ++k) {
      ASSERT_LT(std::abs(h[k]), 1e-8 * peak) << grid[k];
    }
  };
  check(lorentzian_response(0.05), TimeGrid(-200.0, 0.5, 1024));
  check(lorentzian_response(1.0 / 600.0, 0.2), TimeGrid(-1000.0, 0.5, 16384));
  // Half the round trip is a whole number of samples.
  check(airy_response(0.5, std::numbers::pi / 2.0), TimeGrid(-16.0, 0.5, 128));
}

TEST(ImpulseResponse, AiryIsTrainOfRoundTrips) {
  const double R = 0.5;
  const double dt = 0.5;
  // Round trip 4, first exit after 2.
  const SpectralFilter f = airy_response(R, std::numbers::pi / 2.0);
  const TimeGrid grid(0.0, dt, 64);
  const TimeSignal h = impulse_response(f, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double tau = grid[k];
    double expected = 0.0;
    if (tau >= 2.0 && std::fmod(tau - 2.0, 4.0) == 0.0) {
      expected = (1 - R) * std::pow(R, (tau - 2.0) / 4.0) / dt;
    }
    ASSERT_NEAR(std::abs(h[k] - expected), 0.0, 1e-12) << tau;
  }
}

TEST(ImpulseResponse, ExponentialMomentsAndDuality) {
  const double kappa = 0.01;
  const SpectralFilter f = lorentzian_response(kappa);
  const TimeGrid grid(0.0, 0.25, 32768);
  const TimeSignal h = impulse_response(f, grid);
  std::vector<double> power(grid.size());
  double energy = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    power[k] = std::norm(h[k]);
    energy += power[k] * grid.dt();
  }
  const WidthReport w = width_report(normalize_density(power, grid));
  EXPECT_NEAR(w.mean * kappa, 1.0, 1e-3);
  EXPECT_NEAR(w.rms * kappa, 1.0, 1e-3);

  // Parseval: integral |h|^2 = (1/2 pi) integral |t|^2 = kappa / 4.
  EXPECT_NEAR(energy / (kappa / 4.0), 1.0, 1e-3);

  const FreqGrid fine(-40.0 * kappa, kappa / 200.0, 16384);
  const double fwhm = width_report(transmission_density(f, fine)).fwhm;
  EXPECT_NEAR(fwhm / kappa, 1.0, 1e-4);
  EXPECT_NEAR(w.rms * fwhm, 1.0, 0.05);
}

TEST(ImpulseResponse, ParsevalAgainstDiscreteSpectrum) {
  const SpectralFilter f = airy_response(0.8, std::numbers::pi / 2.0);
  const TimeGrid grid(0.0, 0.5, 512);
  const TimeSignal h = impulse_response(f, grid);
  double time_energy = 0.0;
  for (const auto& v : h.values()) time_energy += std::norm(v) * grid.dt();
  // |t|^2 has Fourier weights R^m, so the frequency sum needs far more than
  // 64 samples per free spectral range to reach 1e-9.
  const FreqGrid fg = conjugate_grid(TimeGrid(0.0, 0.5, 16384));
  double freq_energy = 0.0;
  for (std::size_t j = 0; j < fg.size(); ++j) freq_energy += std::norm(f.transmission(fg[j]));
  freq_energy *= fg.d_omega() / (2 * std::numbers::pi);
  EXPECT_NEAR(time_energy / freq_energy, 1.0, 1e-9);
}

TEST(ImpulseResponse, CoverageErrors) {
  const SpectralFilter f = lorentzian_response(0.01);
  EXPECT_THROW(impulse_response(f, TimeGrid(0.0, 0.5, 1024)), CoverageError);   // 5 lifetimes
  EXPECT_THROW(impulse_response(f, TimeGrid(0.0, 200.0, 8)), CoverageError);    // dt > lifetime
  EXPECT_NO_THROW(impulse_response(f, TimeGrid(0.0, 0.5, 2048)));
}

TEST(CavityTimescales, ReferenceCavity) {
  const CavityTimescales c = cavity_timescales(1e6, 0.3);
  EXPECT_NEAR(c.tau_fp_sqrt_s, 1e3 * 0.3 / kSpeedOfLight, 1e-18);
  EXPECT_NEAR(c.tau_fp_sqrt_s, 1.0e-6, 1e-9);
  EXPECT_NEAR(c.tau_lifetime_s, 1e6 * 0.3 / (std::numbers::pi * kSpeedOfLight), 1e-15);
  EXPECT_NEAR(c.tau_lifetime_s, 0.318e-3, 0.001e-3);
  EXPECT_NEAR(c.ratio, std::sqrt(1e6) / std::numbers::pi, 1e-9);
}

TEST(CavityTimescales, LowFinesseLimit) {
  const double light_time = 0.3 / kSpeedOfLight;
  const CavityTimescales c = cavity_timescales(1.0 + 1e-9, 0.3);
  EXPECT_NEAR(c.tau_fp_sqrt_s / light_time, 1.0, 1e-6);
  EXPECT_NEAR(c.tau_lifetime_s / light_time, 1.0 / std::numbers::pi, 1e-6);
}

TEST(CavityTimescales, RejectsBadInput) {
  EXPECT_THROW(cavity_timescales(1.0, 0.3), InvalidArgument);
  EXPECT_THROW(cavity_timescales(100.0, 0.0), InvalidArgument);
  EXPECT_THROW(cavity_timescales(100.0, -1.0), InvalidArgument);
}

}  // namespace
}  // namespace etoa
