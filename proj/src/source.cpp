#include "etoa/source.hpp"

#include <cmath>
#include <sstream>

#include "etoa/errors.hpp"

namespace etoa {

void SourceParams::validate() const {
  if (!(tau_s > 0.0) || !std::isfinite(tau_s)) throw InvalidArgument("tau_s must be positive");
  if (!(tau_g > 0.0) || !std::isfinite(tau_g)) throw InvalidArgument("tau_g must be positive");
  if (!(pair_probability > 0.0 && pair_probability <= 1.0)) {
    throw InvalidArgument("pair_probability must lie in (0, 1]");
  }
  if (hierarchy_factor < 0.0) throw InvalidArgument("hierarchy_factor must be nonnegative");
  if (tau_g < hierarchy_factor * tau_s) {
    std::ostringstream msg;
    msg << "tau_g = " << tau_g << " violates tau_g >= " << hierarchy_factor
        << " * tau_s (tau_s << tau_g required)";
    throw InvalidArgument(msg.str());
  }
}

double gate_envelope(const SourceParams& params, double v) noexcept {
  return std::exp(-v * v / (4.0 * params.tau_g * params.tau_g));
}

double pair_envelope(const SourceParams& params, double u) noexcept {
  return std::exp(-u * u / (4.0 * params.tau_s * params.tau_s));
}

JointAmplitude::JointAmplitude(TimeGrid arm1, TimeGrid arm2,
                               std::vector<std::complex<double>> values)
    : arm1_(arm1), arm2_(arm2), values_(std::move(values)) {
  if (values_.size() != arm1_.size() * arm2_.size()) {
    throw GridMismatch("JointAmplitude: value count does not match grid sizes");
  }
}

double JointAmplitude::norm() const noexcept {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * arm1_.dt() * arm2_.dt();
}

std::vector<double> JointAmplitude::marginal_mass(Arm arm) const {
  const std::size_t n1 = arm1_.size();
  const std::size_t n2 = arm2_.size();
  if (arm == Arm::one) {
    std::vector<double> mass(n1, 0.0);
    for (std::size_t j = 0; j < n2; ++j) {
      const auto r = row(j);
      for (std::size_t i = 0; i < n1; ++i) mass[i] += std::norm(r[i]);
    }
    for (double& m : mass) m *= arm2_.dt();
    return mass;
  }
  std::vector<double> mass(n2, 0.0);
  for (std::size_t j = 0; j < n2; ++j) {
    double sum = 0.0;
    for (const auto& v : row(j)) sum += std::norm(v);
    mass[j] = sum * arm1_.dt();
  }
  return mass;
}

namespace {

void require_coverage(const TimeGrid& grid, double half_width, const char* arm) {
  if (grid.t_min() > -half_width || grid.last() < half_width) {
    std::ostringstream msg;
    msg << "joint_temporal_amplitude: " << arm << " grid [" << grid.t_min() << ", "
        << grid.last() << "] does not cover +-" << half_width << " (5 tau_g)";
    throw CoverageError(msg.str());
  }
}

}  // namespace

JointAmplitude joint_temporal_amplitude(const SourceParams& params, const TimeGrid& arm1,
                                        const TimeGrid& arm2) {
  params.validate();
  require_coverage(arm1, 5.0 * params.tau_g, "arm-1");
  require_coverage(arm2, 5.0 * params.tau_g, "arm-2");

  const std::size_t n1 = arm1.size();
  const std::size_t n2 = arm2.size();
  std::vector<std::complex<double>> values(n1 * n2);
  double sum = 0.0;
  for (std::size_t j = 0; j < n2; ++j) {
    const double t2 = arm2[j];
    for (std::size_t i = 0; i < n1; ++i) {
      const double t1 = arm1[i];
      const double v = gate_envelope(params, 0.5 * (t1 + t2)) * pair_envelope(params, t1 - t2);
      values[j * n1 + i] = v;
      sum += v * v;
    }
  }
  const double scale = 1.0 / std::sqrt(sum * arm1.dt() * arm2.dt());
  for (auto& v : values) v *= scale;
  return JointAmplitude(arm1, arm2, std::move(values));
}

Density1D marginal_density(const JointAmplitude& amp, Arm arm) {
  return normalize_density(amp.marginal_mass(arm), arm == Arm::one ? amp.arm1() : amp.arm2());
}

Density1D difference_time_density(const JointAmplitude& amp) {
  const TimeGrid& g1 = amp.arm1();
  const TimeGrid& g2 = amp.arm2();
  if (std::abs(g1.dt() - g2.dt()) > 1e-12 * g1.dt()) {
    throw GridMismatch("difference_time_density: arms must share dt");
  }
  const std::size_t n1 = g1.size();
  const std::size_t n2 = g2.size();
  // u = t1_i - t2_j = (g1.t_min - g2.last) + (i - j + n2 - 1) dt
  const std::size_t diagonals = n1 + n2 - 1;
  const TimeGrid u_grid(g1.t_min() - g2.last(), g1.dt(), next_power_of_two(diagonals));
  std::vector<double> mass(u_grid.size(), 0.0);
  for (std::size_t j = 0; j < n2; ++j) {
    const auto r = amp.row(j);
    const std::size_t offset = n2 - 1 - j;
    for (std::size_t i = 0; i < n1; ++i) mass[i + offset] += std::norm(r[i]);
  }
  for (double& m : mass) m *= g2.dt();
  return normalize_density(std::move(mass), u_grid);
}

}  // namespace etoa
