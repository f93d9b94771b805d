#pragma once

#include <cstdint>
#include <string_view>

#include "etoa/cavity.hpp"
#include "etoa/density.hpp"
#include "etoa/events.hpp"
#include "etoa/sampling.hpp"
#include "etoa/source.hpp"

namespace etoa {

/// Pair state after photon 1 met the filter: the transmitted and reflected
/// branches (not renormalized) and the transmission probability.
struct FilteredJoint {
  JointAmplitude transmitted;
  JointAmplitude reflected;
  double survival;
};

/// Filters arm 1 by multiplying each t2 row's spectrum with t(w1) and r(w1).
///
/// The transform is periodic over the arm-1 span, so the arm-1 grid must end
/// at least 8 filter lifetimes (8 / linewidth) after the last arm-2 sample,
/// otherwise CoverageError. With a span of T the survival carries a relative
/// wrap-around bias of about 2 exp(-linewidth T / 2).
///
/// Takes the amplitude by value; pass an rvalue to reuse its storage for the
/// transmitted branch.
FilteredJoint apply_filter_arm1(JointAmplitude amplitude, const SpectralFilter& filter);

enum class Backend { standard, collapse };

std::string_view backend_name(Backend backend) noexcept;

struct BackendResult {
  Backend backend;
  /// Photon-1 arrival given transmission.
  Density1D p1;
  /// Photon-2 arrival given a coincidence.
  Density1D p2;
  /// Photon-2 arrival over all pairs, transmitted or not.
  Density1D p2_unconditional;
  /// t1 - t2 given a coincidence.
  Density1D difference;
  JointSampler joint_sampler;
  double survival;
};

/// Joint-amplitude quantum mechanics: every coincidence statistic comes from
/// |psi_T|^2, and photon 2's unconditional statistics from |psi_T|^2 + |psi_R|^2.
/// Survival below 1e-12: VanishingCoincidence.
BackendResult standard_backend(const FilteredJoint& filtered);

/// Nonlocal-collapse hypothesis: transmission of photon 1 re-prepares photon 2
/// with the same energy sharpness, so photon 2's arrival (registered to the
/// trigger, zero relative delay) copies photon 1's arrival density and is drawn
/// independently of t1. Photon-1 statistics are those of standard_backend.
BackendResult collapse_backend(const FilteredJoint& filtered, const SourceParams& source);

/// Photon-1 spectral density given transmission,
///   S(w1) ~ integral |t(w1) psi~(w1, w2)|^2 dw2,
/// computed from the transmitted branch. The rows are zero-padded and the
/// spectrum is refined so that the filter line spans many frequency samples.
SpectralDensity photon1_spectrum(const FilteredJoint& filtered);

/// FWHM of photon1_spectrum times RMS of photon 1's arrival density (hbar = 1).
double uncertainty_product(const FilteredJoint& filtered);

/// Monte Carlo realization of a run of `n_triggers` gate windows.
///
/// Per trigger (in id order, single RNG stream seeded with `seed`): emit a
/// channel-0 record at time 0; a pair exists with `pair_probability`; photon 1
/// is transmitted with probability result.survival; on transmission draw
/// (t1, t2) from the joint sampler and emit channel-1 and channel-2 records.
EventBatch sample_events(const BackendResult& result, std::uint64_t n_triggers,
                         double pair_probability, std::uint64_t seed);

}  // namespace etoa
