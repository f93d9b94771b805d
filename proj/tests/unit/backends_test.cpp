#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "etoa/backends.hpp"
#include "etoa/errors.hpp"
#include "etoa/stats.hpp"
#include "oracle.hpp"

namespace etoa {
namespace {

// Compressed hierarchy 1 : 10 : 100 so the oracle comparisons stay fast.
constexpr double kTauG = 10.0;
constexpr double kKappa = 1.0 / 100.0;

SourceParams source(double tau_g = kTauG) {
  SourceParams p;
  p.tau_g = tau_g;
  return p;
}

struct Lattice {
  TimeGrid arm1;
  TimeGrid arm2;
};

Lattice lattice(std::size_t n1 = 4096, double dt = 0.5, double tau_g = kTauG) {
  const TimeGrid arm2(-6.4 * tau_g, dt, next_power_of_two(static_cast<std::size_t>(12.8 * tau_g / dt)));
  return {TimeGrid(arm2.t_min(), dt, n1), arm2};
}

FilteredJoint filtered(const SpectralFilter& f, const Lattice& l = lattice(),
                       const SourceParams& p = source()) {
  return apply_filter_arm1(joint_temporal_amplitude(p, l.arm1, l.arm2), f);
}

std::vector<double> values_of(const Density1D& d) { return {d.values().begin(), d.values().end()}; }

class StandardLorentzian : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    filtered_ = std::make_unique<FilteredJoint>(filtered(lorentzian_response(kKappa)));
    result_ = std::make_unique<BackendResult>(standard_backend(*filtered_));
    oracle_ = oracle::LorentzianPair{1.0, kTauG, kKappa};
  }
  static void TearDownTestSuite() {
    result_.reset();
    filtered_.reset();
  }

  static std::unique_ptr<FilteredJoint> filtered_;
  static std::unique_ptr<BackendResult> result_;
  static oracle::LorentzianPair oracle_;
};

std::unique_ptr<FilteredJoint> StandardLorentzian::filtered_;
std::unique_ptr<BackendResult> StandardLorentzian::result_;
oracle::LorentzianPair StandardLorentzian::oracle_;

TEST_F(StandardLorentzian, BranchesAreUnitary) {
  EXPECT_NEAR(filtered_->transmitted.norm() + filtered_->reflected.norm(), 1.0, 1e-9);
  EXPECT_GT(filtered_->survival, 0.0);
  EXPECT_LE(filtered_->survival, 1.0);
}

TEST_F(StandardLorentzian, DensitiesAreNormalized) {
  for (const Density1D* d : {&result_->p1, &result_->p2, &result_->p2_unconditional,
                             &result_->difference}) {
    EXPECT_NEAR(d->integral(), 1.0, 1e-9);
  }
}

TEST_F(StandardLorentzian, TransmittedAmplitudeMatchesClosedForm) {
  const JointAmplitude& t = filtered_->transmitted;
  double peak = 0.0;
  double err = 0.0;
  for (std::size_t j = 0; j < t.arm2().size(); j += 5) {
    for (std::size_t i = 0; i < 2048; i += 3) {
      const double expected = oracle_.psi_t(t.arm1()[i], t.arm2()[j]);
      peak = std::max(peak, std::abs(expected));
      err = std::max(err, std::abs(t(i, j) - expected));
    }
  }
  EXPECT_LT(err, 1e-3 * peak);
}

TEST_F(StandardLorentzian, MarginalsMatchQuadratureOracle) {
  const double total = oracle_.survival();
  const auto& p1 = result_->p1;
  const auto& p2 = result_->p2;
  EXPECT_LT(oracle::l1_to_oracle(values_of(p1), p1.grid().t_min(), p1.grid().dt(),
                                 [&](double t) { return oracle_.p1_mass(t); }, total),
            1e-3);
  EXPECT_LT(oracle::l1_to_oracle(values_of(p2), p2.grid().t_min(), p2.grid().dt(),
                                 [&](double t) { return oracle_.p2_mass(t); }, total),
            1e-3);
}

TEST_F(StandardLorentzian, WidthsMatchOracle) {
  EXPECT_NEAR(width_report(result_->p1).rms / oracle_.rms_t1(), 1.0, 1e-3);
  EXPECT_NEAR(width_report(result_->p2).rms / oracle_.rms_t2(), 1.0, 1e-3);
  EXPECT_NEAR(width_report(result_->difference).rms / oracle_.rms_difference(), 1.0, 0.1);
  // Photon 1 spreads to the filter time, photon 2 keeps the gate width.
  EXPECT_NEAR(width_report(result_->p1).rms, std::hypot(kTauG, 1.0 / kKappa), 0.05 * 100.5);
  EXPECT_NEAR(width_report(result_->p2).rms, kTauG, 0.05 * kTauG);
}

TEST_F(StandardLorentzian, DifferenceSpreadGrowsToFilterTime) {
  const JointAmplitude psi = joint_temporal_amplitude(source(), filtered_->transmitted.arm1(),
                                                      filtered_->transmitted.arm2());
  const double before = width_report(difference_time_density(psi)).rms;
  const double after = width_report(result_->difference).rms;
  EXPECT_NEAR(before, 1.0, 0.02);
  EXPECT_NEAR(after * kKappa, 1.0, 0.1);
}

TEST_F(StandardLorentzian, NoSignaling) {
  const JointAmplitude psi = joint_temporal_amplitude(source(), filtered_->transmitted.arm1(),
                                                      filtered_->transmitted.arm2());
  EXPECT_LT(l1_distance(result_->p2_unconditional, marginal_density(psi, Arm::two)), 1e-6);
}

TEST_F(StandardLorentzian, SpectrumWidthIsLinewidth) {
  const WidthReport w = width_report(photon1_spectrum(*filtered_));
  EXPECT_NEAR(w.fwhm / kKappa, 1.0, 0.05);
  const double product = uncertainty_product(*filtered_);
  EXPECT_NEAR(product, w.fwhm * width_report(result_->p1).rms, 1e-12);
  EXPECT_NEAR(product / (kKappa * oracle_.rms_t1()), 1.0, 0.5);
}

TEST_F(StandardLorentzian, SamplerDrawsTransmittedDensity) {
  Rng rng(77);
  std::vector<double> t1(20000);
  std::vector<double> t2(20000);
  for (std::size_t k = 0; k < t1.size(); ++k) std::tie(t1[k], t2[k]) = result_->joint_sampler.draw(rng);
  EXPECT_GT(ks_one_sample(t1, result_->p1).p_value, 0.01);
  EXPECT_GT(ks_one_sample(t2, result_->p2).p_value, 0.01);
}

TEST_F(StandardLorentzian, CollapseCopiesPhotonOne) {
  const BackendResult c = collapse_backend(*filtered_, source());
  EXPECT_EQ(c.backend, Backend::collapse);
  EXPECT_LT(l1_distance(c.p1, result_->p1), 1e-12);
  EXPECT_LT(l1_distance(c.p2, c.p1), 1e-12);
  EXPECT_LT(l1_distance(c.p2_unconditional, c.p2), 1e-12);
  EXPECT_EQ(c.survival, result_->survival);
  const double ratio = width_report(c.p2).rms / width_report(result_->p2).rms;
  EXPECT_GT(ratio, 9.0);
  // Independent t1, t2 each ~ p1: the difference has variance 2 var(p1).
  EXPECT_NEAR(width_report(c.difference).rms, std::sqrt(2.0) * width_report(c.p1).rms,
              1e-3 * width_report(c.p1).rms);
  EXPECT_NEAR(width_report(c.difference).mean, 0.0, 1e-6);
}

TEST_F(StandardLorentzian, CollapseDrawsAreUncorrelated) {
  const BackendResult c = collapse_backend(*filtered_, source());
  Rng rng(3);
  std::vector<double> t1(100000);
  std::vector<double> t2(100000);
  for (std::size_t k = 0; k < t1.size(); ++k) std::tie(t1[k], t2[k]) = c.joint_sampler.draw(rng);
  const SampleWidths w1 = sample_widths(t1);
  const SampleWidths w2 = sample_widths(t2);
  double cov = 0.0;
  for (std::size_t k = 0; k < t1.size(); ++k) cov += (t1[k] - w1.mean) * (t2[k] - w2.mean);
  cov /= static_cast<double>(t1.size() - 1);
  EXPECT_LT(std::abs(cov / (w1.rms * w2.rms)), 0.01);
}

TEST(ApplyFilter, SurvivalMatchesFrequencyDomainOracle) {
  const Lattice l = lattice(16384);
  const oracle::LorentzianPair o{1.0, kTauG, kKappa};
  const double survival = filtered(lorentzian_response(kKappa), l).survival;
  EXPECT_NEAR(survival, oracle::lorentzian_survival(kKappa, o.omega1_variance()), 1e-6);
  const SpectralFilter lor = lorentzian_response(kKappa);
  EXPECT_NEAR(survival,
              oracle::spectral_survival([&](double w) { return std::norm(lor.transmission(w)); },
                                        o.omega1_variance(), {0.0}),
              1e-6);
}

TEST(ApplyFilter, AirySurvivalMatchesFrequencyDomainOracle) {
  const double fsr = std::numbers::pi / 2.0;
  const SpectralFilter airy = airy_response(0.9, fsr);
  const oracle::LorentzianPair o{1.0, kTauG, kKappa};
  std::vector<double> resonances;
  for (int m = -5; m <= 5; ++m) resonances.push_back(m * fsr);
  const double expected = oracle::spectral_survival(
      [&](double w) { return std::norm(airy.transmission(w)); }, o.omega1_variance(), resonances);
  const FilteredJoint f = filtered(airy, lattice(4096));
  EXPECT_NEAR(f.survival, expected, 1e-6);
  EXPECT_NEAR(f.transmitted.norm() + f.reflected.norm(), 1.0, 1e-9);
}

TEST(ApplyFilter, BroadFilterIsIdentity) {
  const Lattice l = lattice(2048);
  const JointAmplitude psi = joint_temporal_amplitude(source(), l.arm1, l.arm2);
  const FilteredJoint f = apply_filter_arm1(psi, lorentzian_response(1e4));
  EXPECT_NEAR(f.survival, 1.0, 1e-6);
  double peak = 0.0;
  double err = 0.0;
  for (std::size_t k = 0; k < psi.values().size(); ++k) {
    peak = std::max(peak, std::abs(psi.values()[k]));
    err = std::max(err, std::abs(f.transmitted.values()[k] - psi.values()[k]));
  }
  EXPECT_LT(err, 1e-3 * peak);
}

TEST(ApplyFilter, BroadFilterBackendsAgree) {
  const FilteredJoint f = filtered(lorentzian_response(10.0), lattice(2048));
  const BackendResult s = standard_backend(f);
  const BackendResult c = collapse_backend(f, source());
  const double rms_s = width_report(s.p2).rms;
  const double rms_c = width_report(c.p2).rms;
  EXPECT_NEAR(rms_c / rms_s, 1.0, 0.05);
  EXPECT_NEAR(width_report(c.p2).rms, kTauG, 0.05 * kTauG);
}

TEST(ApplyFilter, NoSignalingAcrossLinewidths) {
  for (double kappa : {1.0 / 10.0, 1.0 / 100.0, 1.0 / 300.0}) {
    const Lattice l = lattice(8192);
    const JointAmplitude psi = joint_temporal_amplitude(source(), l.arm1, l.arm2);
    const Density1D before = marginal_density(psi, Arm::two);
    const BackendResult r = standard_backend(apply_filter_arm1(psi, lorentzian_response(kappa)));
    EXPECT_LT(l1_distance(r.p2_unconditional, before), 1e-6) << kappa;
  }
  const Lattice l = lattice(4096);
  const JointAmplitude psi = joint_temporal_amplitude(source(), l.arm1, l.arm2);
  const BackendResult r =
      standard_backend(apply_filter_arm1(psi, airy_response(0.99, 2.0, 0.3)));
  EXPECT_LT(l1_distance(r.p2_unconditional, marginal_density(psi, Arm::two)), 1e-6);
}

TEST(ApplyFilter, CoverageError) {
  EXPECT_THROW(filtered(lorentzian_response(1.0 / 1000.0), lattice(2048)), CoverageError);
}

TEST(Backends, VanishingCoincidence) {
  const FilteredJoint f = filtered(lorentzian_response(0.01, 1e4), lattice(4096));
  EXPECT_LT(f.survival, 1e-12);
  EXPECT_THROW(standard_backend(f), VanishingCoincidence);
  EXPECT_THROW(collapse_backend(f, source()), VanishingCoincidence);
}

TEST(Backends, UncertaintyProductIsScaleInvariant) {
  const FilteredJoint a = filtered(lorentzian_response(kKappa), lattice(4096, 0.5));
  SourceParams scaled = source(2.0 * kTauG);
  scaled.tau_s = 2.0;
  const FilteredJoint b =
      filtered(lorentzian_response(0.5 * kKappa), lattice(4096, 1.0, 2.0 * kTauG), scaled);
  EXPECT_NEAR(uncertainty_product(b) / uncertainty_product(a), 1.0, 1e-6);
}

TEST(SampleEvents, NoPairsMeansOnlyTriggers) {
  const BackendResult r = standard_backend(filtered(lorentzian_response(1.0), lattice(2048)));
  const EventBatch b = sample_events(r, 1000, 0.0, 1);
  ASSERT_EQ(b.size(), 1000u);
  for (const auto& rec : b.records()) EXPECT_EQ(rec.channel, Channel::trigger);
  EXPECT_THROW(sample_events(r, 0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(sample_events(r, 10, 1.5, 1), InvalidArgument);
}

TEST(SampleEvents, DeterministicAndConsistent) {
  const BackendResult r = standard_backend(filtered(lorentzian_response(1.0), lattice(2048)));
  const EventBatch a = sample_events(r, 200000, 1.0, 42);
  EXPECT_EQ(a, sample_events(r, 200000, 1.0, 42));
  EXPECT_FALSE(a == sample_events(r, 200000, 1.0, 43));

  const Coincidences c = match_coincidences(a);
  EXPECT_EQ(c.triggers, 200000u);
  const double expected = r.survival * 200000.0;
  EXPECT_NEAR(static_cast<double>(c.t1.size()), expected, 5.0 * std::sqrt(expected));
  ASSERT_GT(c.t2.size(), 100000u);
  EXPECT_GT(ks_one_sample(c.t2, r.p2).p_value, 0.01);
  EXPECT_GT(ks_one_sample(c.t1, r.p1).p_value, 0.01);
}

}  // namespace
}  // namespace etoa
