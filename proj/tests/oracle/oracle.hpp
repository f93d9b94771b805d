#pragma once

// Reference values for the tests, computed without the library's grids or
// FFTs: closed forms where they exist, adaptive Gauss-Kronrod otherwise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// Tolerance of the outer integral in nested quadratures.
inline constexpr double kOuterTol = 1e-10;

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

/// Sum of integrals over consecutive panels split at `points` (sorted,
/// clipped to [a, b]).
inline double integrate_split(const std::function<double(double)>& f, double a, double b,
                              std::vector<double> points, double tol = 1e-11) {
  points.push_back(a);
  points.push_back(b);
  std::sort(points.begin(), points.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double lo = std::clamp(points[k], a, b);
    const double hi = std::clamp(points[k + 1], a, b);
    sum += integrate(f, lo, hi, tol);
  }
  return sum;
}

/// exp(z^2) erfc(z) without overflow.
inline double erfcx(double z) {
  if (z < 26.0) return std::exp(z * z) * std::erfc(z);
  // Asymptotic series 1/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4) - 15/(8z^6)).
  const double w = 1.0 / (2.0 * z * z);
  return (1.0 - w + 3.0 * w * w - 15.0 * w * w * w) / (z * std::sqrt(std::numbers::pi));
}

/// Gaussian source filtered on arm 1 by a resonant Lorentzian of linewidth
/// kappa, h(tau) = (kappa/2) exp(-kappa tau / 2) for tau >= 0.
struct LorentzianPair {
  double tau_s = 1.0;
  double tau_g = 30.0;
  double kappa = 1.0 / 600.0;

  double norm_constant() const {
    return 1.0 / std::sqrt(2.0 * std::numbers::pi * tau_g * tau_s);
  }

  double psi(double t1, double t2) const {
    const double v = 0.5 * (t1 + t2);
    const double u = t1 - t2;
    return norm_constant() *
           std::exp(-v * v / (4.0 * tau_g * tau_g) - u * u / (4.0 * tau_s * tau_s));
  }

  /// integral_0^inf h(tau) psi(t1 - tau, t2) dtau in closed form.
  double psi_t(double t1, double t2) const {
    const double a = 1.0 / (16.0 * tau_g * tau_g);
    const double b = 1.0 / (4.0 * tau_s * tau_s);
    const double s = t1 + t2;
    const double d = t1 - t2;
    const double big_a = a + b;
    const double big_b = a * s + b * d - kappa / 4.0;
    const double z = -big_b / std::sqrt(big_a);
    const double base = -a * s * s - b * d * d;
    const double pref = norm_constant() * 0.5 * kappa * 0.5 * std::sqrt(std::numbers::pi / big_a);
    if (z >= 0.0) return pref * std::exp(base) * erfcx(z);
    // B^2/A + base expanded so the large terms cancel symbolically; the direct
    // form loses all digits in the far tail and stalls the adaptive rules.
    const double k = kappa / 4.0;
    const double exponent = (-4.0 * a * b * t2 * t2 - 2.0 * k * (a * s + b * d) + k * k) / big_a;
    return pref * std::exp(exponent) * std::erfc(z);
  }

  double intensity_t(double t1, double t2) const {
    const double p = psi_t(t1, t2);
    return p * p;
  }

  /// Integral of |psi_T|^2 over t2 (unnormalized photon-1 density).
  double p1_mass(double t1) const {
    const double lo = -12.0 * tau_g;
    const double hi = std::min(12.0 * tau_g, t1 + 14.0 * tau_s);
    return integrate_split([&](double t2) { return intensity_t(t1, t2); }, lo, hi,
                           {t1 - 14.0 * tau_s, t1 - 3.0 * tau_s, t1 + 3.0 * tau_s});
  }

  /// Integral of |psi_T|^2 over t1 (unnormalized photon-2 density).
  double p2_mass(double t2) const {
    const double lo = t2 - 14.0 * tau_s;
    const double hi = t2 + 14.0 * tau_s + 60.0 / kappa;
    return integrate_split([&](double t1) { return intensity_t(t1, t2); }, lo, hi,
                           {t2 + 14.0 * tau_s, t2 + 1.0 / kappa, t2 + 10.0 / kappa});
  }

  /// Integral of |psi_T(t2 + u, t2)|^2 over t2 (unnormalized t1 - t2 density).
  double difference_mass(double u) const {
    return integrate_split([&](double t2) { return intensity_t(t2 + u, t2); }, -12.0 * tau_g,
                           12.0 * tau_g, {-3.0 * tau_g, 0.0, 3.0 * tau_g});
  }

  /// Breakpoints of the photon-1 support for outer integrals over t1.
  std::vector<double> t1_panels() const {
    std::vector<double> p = {-3.0 * tau_g, 0.0, 3.0 * tau_g};
    for (double k = 1.0; k <= 40.0; k *= 2.0) p.push_back(6.0 * tau_g + k / kappa);
    return p;
  }
  double t1_lo() const { return -12.0 * tau_g; }
  double t1_hi() const { return 12.0 * tau_g + 60.0 / kappa; }

  /// Transmission probability by quadrature over the photon-1 density.
  double survival() const {
    return integrate_split([&](double t1) { return p1_mass(t1); }, t1_lo(), t1_hi(), t1_panels(),
                           kOuterTol);
  }

  /// RMS of the normalized photon-1 density.
  double rms_t1() const {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    auto panels = t1_panels();
    panels.push_back(t1_lo());
    panels.push_back(t1_hi());
    std::sort(panels.begin(), panels.end());
    for (std::size_t k = 0; k + 1 < panels.size(); ++k) {
      const auto w = [&](double t1, int power) { return p1_mass(t1) * std::pow(t1, power); };
      m0 += integrate([&](double t) { return w(t, 0); }, panels[k], panels[k + 1], kOuterTol);
      m1 += integrate([&](double t) { return w(t, 1); }, panels[k], panels[k + 1], kOuterTol);
      m2 += integrate([&](double t) { return w(t, 2); }, panels[k], panels[k + 1], kOuterTol);
    }
    const double mean = m1 / m0;
    return std::sqrt(m2 / m0 - mean * mean);
  }

  /// RMS of the normalized photon-2 density given transmission.
  double rms_t2() const {
    const auto moment = [&](int power) {
      return integrate_split([&](double t2) { return p2_mass(t2) * std::pow(t2, power); },
                             -12.0 * tau_g, 12.0 * tau_g, {-3.0 * tau_g, 0.0, 3.0 * tau_g}, kOuterTol);
    };
    const double m0 = moment(0);
    const double mean = moment(1) / m0;
    return std::sqrt(moment(2) / m0 - mean * mean);
  }

  /// RMS of the normalized t1 - t2 density given transmission.
  double rms_difference() const {
    const std::vector<double> panels = {0.0, 1.0 / kappa, 4.0 / kappa, 10.0 / kappa};
    const double lo = -12.0 * tau_g;
    const double hi = 12.0 * tau_g + 60.0 / kappa;
    const auto moment = [&](int power) {
      return integrate_split([&](double u) { return difference_mass(u) * std::pow(u, power); },
                             lo, hi, panels, kOuterTol);
    };
    const double m0 = moment(0);
    const double mean = moment(1) / m0;
    return std::sqrt(moment(2) / m0 - mean * mean);
  }

  /// Variance of photon 1's detuning in the source spectrum |psi~|^2.
  double omega1_variance() const {
    return 1.0 / (4.0 * tau_s * tau_s) + 1.0 / (16.0 * tau_g * tau_g);
  }
};

/// Transmission probability computed in the frequency domain:
/// integral |t(w)|^2 N(w; 0, var) dw for the Gaussian source's photon-1
/// detuning distribution.
inline double spectral_survival(const std::function<double(double)>& intensity_transmission,
                                double variance, std::vector<double> breakpoints = {}) {
  const double sigma = std::sqrt(variance);
  const auto weight = [&](double w) {
    return intensity_transmission(w) * std::exp(-w * w / (2.0 * variance)) /
           (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  return integrate_split(weight, -12.0 * sigma, 12.0 * sigma, std::move(breakpoints), 1e-13);
}

/// Closed form of spectral_survival for the resonant Lorentzian.
inline double lorentzian_survival(double kappa, double variance) {
  const double gamma = 0.5 * kappa;
  const double sigma = std::sqrt(variance);
  return gamma * std::sqrt(std::numbers::pi / 2.0) / sigma *
         erfcx(gamma / (sigma * std::numbers::sqrt2));
}

/// L1 distance between a gridded density (values at t0 + k dt) and the
/// oracle density `mass(t) / total`, by the trapezoid rule on the grid.
inline double l1_to_oracle(const std::vector<double>& values, double t0, double dt,
                           const std::function<double(double)>& mass, double total) {
  std::vector<double> diff(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    diff[k] = std::abs(values[k] - mass(t0 + static_cast<double>(k) * dt) / total);
  }
  double sum = 0.5 * (diff.front() + diff.back());
  for (std::size_t k = 1; k + 1 < diff.size(); ++k) sum += diff[k];
  return sum * dt;
}

}  // namespace oracle
