#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "etoa/density.hpp"
#include "etoa/grid.hpp"

namespace etoa {

/// Gated down-conversion source. tau_s is the RMS of |f|^2 (pair correlation
/// time), tau_g the RMS of the pair-generation-time envelope |g|^2. Both
/// envelopes are Gaussian; tau_g is an RMS, not a hard window.
struct SourceParams {
  double tau_s = 1.0;
  double tau_g = 30.0;
  double pair_probability = 1.0;
  /// Required tau_g / tau_s ratio. Zero disables the hierarchy check.
  double hierarchy_factor = 10.0;

  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
};

/// Amplitude of the pair-generation time v = (t1 + t2)/2: exp(-v^2 / (4 tau_g^2)).
double gate_envelope(const SourceParams& params, double v) noexcept;
/// Amplitude of the arrival-time difference u = t1 - t2: exp(-u^2 / (4 tau_s^2)).
double pair_envelope(const SourceParams& params, double u) noexcept;

enum class Arm { one = 1, two = 2 };

/// Two-photon temporal amplitude psi(t1, t2). Storage is row-major with one
/// row per arm-2 sample, so each row is contiguous along t1.
class JointAmplitude {
 public:
  JointAmplitude(TimeGrid arm1, TimeGrid arm2, std::vector<std::complex<double>> values);

  const TimeGrid& arm1() const noexcept { return arm1_; }
  const TimeGrid& arm2() const noexcept { return arm2_; }

  std::span<const std::complex<double>> values() const noexcept { return values_; }
  std::span<std::complex<double>> mutable_values() noexcept { return values_; }

  std::span<const std::complex<double>> row(std::size_t j) const noexcept {
    return std::span(values_).subspan(j * arm1_.size(), arm1_.size());
  }
  std::span<std::complex<double>> mutable_row(std::size_t j) noexcept {
    return std::span(values_).subspan(j * arm1_.size(), arm1_.size());
  }

  /// psi at (t1 = arm1[i], t2 = arm2[j]).
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[j * arm1_.size() + i];
  }

  /// Integral of |psi|^2 over both arms (rectangle rule, which equals the
  /// discrete Parseval norm).
  double norm() const noexcept;

  /// Unnormalized marginal mass per sample: integral of |psi|^2 over the
  /// other arm.
  std::vector<double> marginal_mass(Arm arm) const;

 private:
  TimeGrid arm1_;
  TimeGrid arm2_;
  std::vector<std::complex<double>> values_;
};

/// psi(t1,t2) = N g((t1+t2)/2) f(t1-t2), normalized to unit norm. In the
/// rotating frame this is the regularized delta(E1 + E2 - E0): narrow in
/// Omega1 + Omega2 (width 1/tau_g), broad in Omega1 - Omega2.
/// Both grids must cover +-5 tau_g, otherwise CoverageError.
JointAmplitude joint_temporal_amplitude(const SourceParams& params, const TimeGrid& arm1,
                                        const TimeGrid& arm2);

Density1D marginal_density(const JointAmplitude& amp, Arm arm);

/// Density of u = t1 - t2, integrating |psi|^2 along the grid diagonals. The
/// result lives on a grid of spacing dt starting at the smallest attainable
/// u, zero-padded to a power of two. Arms with different dt: GridMismatch.
Density1D difference_time_density(const JointAmplitude& amp);

}  // namespace etoa
