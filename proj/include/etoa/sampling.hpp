#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "etoa/density.hpp"
#include "etoa/source.hpp"

namespace etoa {

/// Deterministic uniform stream. std::mt19937_64 output is fixed by the
/// standard, and uniforms are built from its top 53 bits, so a seed yields
/// the same numbers on every platform (std::uniform_real_distribution does
/// not guarantee that).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Seed of the k-th independent sub-stream, for callers that split work
  /// across threads (splitmix64 finalizer over seed + k * golden gamma).
  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k) noexcept;

 private:
  std::mt19937_64 engine_;
};

/// Draws arrival-time pairs (t1, t2).
///
/// Densities are treated as piecewise constant on cells of width dt centered
/// at the grid points: a cell is chosen by inverse CDF over the cell masses
/// and the time is then placed uniformly inside it. Each draw consumes four
/// uniforms. The sampler is immutable and may be shared between threads, each
/// thread bringing its own Rng.
class JointSampler {
 public:
  /// Conditional-CDF sampling of |psi|^2: t2 from the row masses, then t1 from
  /// the chosen row.
  static JointSampler correlated(const JointAmplitude& amplitude);
  /// t1 ~ first and t2 ~ second, independently.
  static JointSampler independent(const Density1D& first, const Density1D& second);

  std::pair<double, double> draw(Rng& rng) const;

 private:
  JointSampler() = default;

  struct Table {
    TimeGrid grid;
    std::vector<double> cumulative;  // inclusive, normalized to end at 1
  };
  struct Joint {
    TimeGrid arm1;
    TimeGrid arm2;
    std::vector<double> row_cumulative;   // over arm-2 rows
    std::vector<double> cell_cumulative;  // per row, unnormalized, row-major
  };

  static Table make_table(const Density1D& density);
  static double draw_from(const Table& table, double u, double jitter);

  std::shared_ptr<const Joint> joint_;
  std::shared_ptr<const Table> first_;
  std::shared_ptr<const Table> second_;
};

}  // namespace etoa
