#pragma once

// Monte Carlo estimation of unfairness on large meshes.
//
// Path i of a run uses the sign stream (master_seed, i). A coupled sweep
// reuses each stream for every threshold of the grid (common random numbers),
// so curves are compared path by path rather than only in distribution.
//
// Paths are processed in fixed chunks of kChunkPaths consecutive indices;
// chunk partials are combined in chunk order. Thread count changes only who
// computes a chunk, never the arithmetic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "herding/model.hpp"
#include "herding/unfairness.hpp"

namespace herding {

struct McOptions {
  static constexpr std::uint64_t kChunkPaths = 1024;
  int workers = 1;
};

struct SweepResult {
  std::vector<double> upsilon_grid;
  /// Tax rates matching the grid (upsilon = T * rho), when the sweep was
  /// specified in tax terms.
  std::optional<std::vector<double>> rho_grid;
  std::vector<UnfairnessEstimate> estimates;
  std::uint64_t path_count = 0;
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
  Method method = Method::kLogIndicator;
  bool coupled = true;

  /// Estimated curve is nonincreasing along the grid with zero tolerance.
  bool monotone = true;
  /// (path, adjacent grid pair) instances where a path's contribution grew
  /// with the threshold.
  std::uint64_t path_increases = 0;
  /// Adjacent grid pairs whose estimate grew by more than 2 standard errors.
  std::size_t flagged_pairs = 0;

  std::size_t argmin_index = 0;
  double argmin_upsilon = 0.0;

  std::vector<double> values() const;
};

/// Sample mean of per-path contributions over path_count independent streams,
/// with standard error sd / sqrt(path_count) and the mean per-step breakdown.
/// Throws ValidationError for path_count < 2 or n == 0.
UnfairnessEstimate estimate_unfairness(const ModelParams& params, std::size_t n, double upsilon,
                                       std::uint64_t path_count, std::uint64_t seed,
                                       Method method, const McOptions& options = {});

/// Common-random-numbers sweep over an ascending threshold grid.
SweepResult coupled_sweep(const ModelParams& params, std::size_t n,
                          const std::vector<double>& upsilon_grid, std::uint64_t path_count,
                          std::uint64_t seed, Method method, const McOptions& options = {});

struct TaxOptimum {
  std::size_t index = 0;
  double upsilon = 0.0;
  std::optional<double> rho;
};

/// Largest grid point attaining the minimal estimate. Throws ValidationError
/// on an empty sweep.
TaxOptimum argmin_tax(const SweepResult& sweep);

}  // namespace herding
