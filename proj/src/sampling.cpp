#include "etoa/sampling.hpp"

#include <algorithm>

#include "etoa/errors.hpp"

namespace etoa {

std::uint64_t Rng::stream_seed(std::uint64_t seed, std::uint64_t k) noexcept {
  std::uint64_t z = seed + (k + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Index of the first cumulative entry strictly above u * total.
std::size_t search(const double* begin, const double* end, double target) {
  const auto* it = std::upper_bound(begin, end, target);
  if (it == end) --it;  // u * total rounding up to the final entry
  return static_cast<std::size_t>(it - begin);
}

}  // namespace

JointSampler::Table JointSampler::make_table(const Density1D& density) {
  Table table{density.grid(), std::vector<double>(density.size())};
  double acc = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) {
    acc += density[k];
    table.cumulative[k] = acc;
  }
  for (double& c : table.cumulative) c /= acc;
  return table;
}

double JointSampler::draw_from(const Table& table, double u, double jitter) {
  const auto k = search(table.cumulative.data(),
                        table.cumulative.data() + table.cumulative.size(), u);
  return table.grid[k] + (jitter - 0.5) * table.grid.dt();
}

JointSampler JointSampler::correlated(const JointAmplitude& amplitude) {
  const std::size_t n1 = amplitude.arm1().size();
  const std::size_t n2 = amplitude.arm2().size();
  auto joint = std::make_shared<Joint>(Joint{amplitude.arm1(), amplitude.arm2(),
                                             std::vector<double>(n2),
                                             std::vector<double>(n1 * n2)});
  double total = 0.0;
  for (std::size_t j = 0; j < n2; ++j) {
    const auto row = amplitude.row(j);
    double acc = 0.0;
    double* cells = joint->cell_cumulative.data() + j * n1;
    for (std::size_t i = 0; i < n1; ++i) {
      acc += std::norm(row[i]);
      cells[i] = acc;
    }
    total += acc;
    joint->row_cumulative[j] = total;
  }
  if (!(total > 0.0)) throw DegenerateDensity("JointSampler: amplitude has zero norm");
  for (double& c : joint->row_cumulative) c /= total;

  JointSampler sampler;
  sampler.joint_ = std::move(joint);
  return sampler;
}

JointSampler JointSampler::independent(const Density1D& first, const Density1D& second) {
  JointSampler sampler;
  sampler.first_ = std::make_shared<const Table>(make_table(first));
  sampler.second_ = std::make_shared<const Table>(make_table(second));
  return sampler;
}

std::pair<double, double> JointSampler::draw(Rng& rng) const {
  const double u_a = rng.uniform();
  const double u_b = rng.uniform();
  const double jitter_1 = rng.uniform();
  const double jitter_2 = rng.uniform();
  if (joint_) {
    const Joint& g = *joint_;
    const std::size_t n1 = g.arm1.size();
    const auto j = search(g.row_cumulative.data(),
                          g.row_cumulative.data() + g.row_cumulative.size(), u_a);
    const double* cells = g.cell_cumulative.data() + j * n1;
    const auto i = search(cells, cells + n1, u_b * cells[n1 - 1]);
    return {g.arm1[i] + (jitter_1 - 0.5) * g.arm1.dt(),
            g.arm2[j] + (jitter_2 - 0.5) * g.arm2.dt()};
  }
  return {draw_from(*first_, u_a, jitter_1), draw_from(*second_, u_b, jitter_2)};
}

}  // namespace etoa
