#include "etoa/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "etoa/backends.hpp"
#include "etoa/event_io.hpp"
#include "etoa/fourier.hpp"
#include "etoa/stats.hpp"

namespace etoa {
namespace {

std::string sci(const char* label, double value, double bound) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s = %.3g (bound %.3g)", label, value, bound);
  return buf;
}

SelfCheck check(const std::string& name, const std::function<SelfCheck()>& body) {
  try {
    SelfCheck c = body();
    c.name = name;
    return c;
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

SelfCheck bounded(const char* label, double value, double bound) {
  return {"", std::abs(value) < bound, sci(label, value, bound)};
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  std::vector<SelfCheck> checks;

  checks.push_back(check("fourier parseval", [] {
    const TimeGrid grid(-64.0, 0.25, 512);
    std::vector<std::complex<double>> v(grid.size());
    double energy = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid[k];
      v[k] = std::exp(std::complex<double>(-t * t / 8.0, 0.7 * t));
      energy += std::norm(v[k]) * grid.dt();
    }
    const SpectrumSignal s = fourier_forward(TimeSignal(grid, v));
    double spectral = 0.0;
    for (const auto& x : s.values()) spectral += std::norm(x);
    spectral *= s.grid().d_omega() / (2.0 * std::numbers::pi);
    return bounded("relative energy error", spectral / energy - 1.0, 1e-12);
  }));

  checks.push_back(check("filter unitarity", [] {
    double worst = 0.0;
    for (const SpectralFilter& f : {lorentzian_response(1.0 / 600.0), airy_response(0.9, 2.0)}) {
      for (int j = -2000; j <= 2000; ++j) {
        const double w = 0.01 * j;
        worst = std::max(worst,
                         std::abs(std::norm(f.transmission(w)) + std::norm(f.reflection(w)) - 1.0));
      }
    }
    return bounded("max | |t|^2 + |r|^2 - 1 |", worst, 1e-12);
  }));

  checks.push_back(check("lorentzian impulse response", [] {
    const double kappa = 1.0 / 600.0;
    const TimeGrid grid(0.0, 0.5, 16384);
    const TimeSignal h = impulse_response(lorentzian_response(kappa), grid);
    double worst = 0.0;
    for (std::size_t k = 1; grid[k] <= 5.0 / kappa; ++k) {
      const double exact = 0.5 * kappa * std::exp(-0.5 * kappa * grid[k]);
      worst = std::max(worst, std::abs(h[k] - exact) / exact);
    }
    return bounded("max relative error over 5 lifetimes", worst, 1e-6);
  }));

  // Small experiment shared by the remaining physics checks.
  SourceParams source;
  source.tau_g = 10.0;
  const TimeGrid arm2(-64.0, 0.5, 256);
  const TimeGrid arm1(-64.0, 0.5, 4096);
  const SpectralFilter filter = lorentzian_response(1.0 / 100.0);

  checks.push_back(check("source normalization", [&] {
    const JointAmplitude psi = joint_temporal_amplitude(source, arm1, arm2);
    return bounded("norm - 1", psi.norm() - 1.0, 1e-12);
  }));

  checks.push_back(check("difference-time width", [&] {
    const JointAmplitude psi = joint_temporal_amplitude(source, arm1, arm2);
    const double rms = width_report(difference_time_density(psi)).rms;
    return bounded("RMS(t1 - t2) / tau_s - 1", rms / source.tau_s - 1.0, 1e-2);
  }));

  checks.push_back(check("branch unitarity", [&] {
    const FilteredJoint f = apply_filter_arm1(joint_temporal_amplitude(source, arm1, arm2), filter);
    return bounded("|psi_T|^2 + |psi_R|^2 - 1", f.transmitted.norm() + f.reflected.norm() - 1.0,
                   1e-9);
  }));

  checks.push_back(check("no-signaling", [&] {
    const JointAmplitude psi = joint_temporal_amplitude(source, arm1, arm2);
    const Density1D before = marginal_density(psi, Arm::two);
    const BackendResult r = standard_backend(apply_filter_arm1(psi, filter));
    return bounded("L1(p2 with filter, p2 without)", l1_distance(r.p2_unconditional, before), 1e-6);
  }));

  checks.push_back(check("event round trip", [] {
    EventBatch batch;
    batch.push_back({0, Channel::trigger, 0.0});
    batch.push_back({0, Channel::detector1, 0.1});
    batch.push_back({0, Channel::detector2, -1e-300});
    batch.push_back({3, Channel::trigger, 0.0});
    bool ok = true;
    for (const EventFormat format : {EventFormat::binary, EventFormat::text}) {
      for (const EventBatch& b : {EventBatch{}, batch}) {
        std::stringstream io;
        write_events(b, io, format);
        ok = ok && read_events(io, format) == b;
      }
    }
    return SelfCheck{"", ok, ok ? "binary and text identical" : "round trip changed records"};
  }));

  return checks;
}

}  // namespace etoa
