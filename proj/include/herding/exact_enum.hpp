#pragma once

// Exhaustive evaluation over the finite adapted space {-1,+1}^n with its step
// filtration: exact expectations, exact unfairness and exact threshold sweeps.
//
// The kernel walks the binary tree depth first so that each node's step is
// computed once and shared by all paths below it. The 2^n paths are split into
// a fixed number of contiguous blocks (natural binary order), processed in
// parallel, and combined in block order, so results do not depend on the
// number of worker threads.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "herding/model.hpp"
#include "herding/unfairness.hpp"

namespace herding {

struct EnumOptions {
  static constexpr std::size_t kDefaultMaxN = 24;

  int workers = 1;
  std::size_t max_n = kDefaultMaxN;
};

/// Exact value plus, for the log-indicator method, the exact integer totals
/// of each drift branch over all 2^n paths and all steps.
struct ExactResult {
  UnfairnessEstimate estimate;
  DriftCounts totals;
};

/// Uniform average of the per-path contribution over all 2^n sign sequences.
/// The log-indicator value is formed from exact integer branch totals.
/// Throws ValidationError when n == 0 or n > options.max_n.
ExactResult enumerate_exact(const ModelParams& params, std::size_t n, double upsilon,
                            Method method, const EnumOptions& options = {});

double enumerate_unfairness(const ModelParams& params, std::size_t n, double upsilon,
                            Method method, const EnumOptions& options = {});

struct ExactSweepTable {
  std::size_t n = 0;
  Method method = Method::kLogIndicator;
  std::vector<double> upsilon_grid;
  std::vector<double> values;
  ModelParams params;
  /// values[i + 1] <= values[i] for every i, with zero tolerance.
  bool monotone = true;
  /// Index of the largest threshold attaining the minimum value.
  std::size_t argmin_index = 0;
};

/// Exact values over an ascending threshold grid.
ExactSweepTable exact_sweep(const ModelParams& params, std::size_t n,
                            const std::vector<double>& upsilon_grid,
                            Method method = Method::kLogIndicator,
                            const EnumOptions& options = {});

/// Largest index attaining the minimum (ties go to the largest threshold).
std::size_t argmin_last(const std::vector<double>& values);
bool nonincreasing(const std::vector<double>& values);

}  // namespace herding
