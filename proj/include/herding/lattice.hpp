#pragma once

// Binomial-lattice evolution of the log price on a mesh of n steps over [0, 1]:
//
//   X_{k+1} = X_k + psi(D_k)/n + sigma * sign_k * h - sigma^2/(2n),
//
// with h = n^{-1/2} (standard) or (2n)^{-1/2} (paper-literal).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "herding/model.hpp"
#include "herding/sign_stream.hpp"

namespace herding {

struct LatticePath {
  std::size_t n = 0;
  std::vector<Sign> signs;     // length n
  std::vector<double> values;  // X_0 .. X_n
  double upsilon = 0.0;
};

/// The three additive parts of one increment, kept apart so that conditional
/// expectations can be taken part by part.
struct Increment {
  double drift = 0.0;        // psi(D_k) / n
  double noise = 0.0;        // sigma * sign * h
  double compensator = 0.0;  // -sigma^2 / (2n)

  double total() const { return drift + noise + compensator; }
};

/// Precomputed per-mesh constants shared by every step of a run.
struct StepContext {
  StepContext(const ModelParams& params, std::size_t n);

  ModelParams params;
  std::size_t n;
  double inv_n;
  double noise_step;
  double compensator;
  std::vector<ResolvedLag> lags;
};

Increment step_increment(double gap, Sign sign, double upsilon, const StepContext& ctx);

/// X_{k+1} from the history X_0..X_k (k = hist.size() - 1).
double step(std::span<const double> hist, Sign sign, double upsilon, const StepContext& ctx);
double step(std::span<const double> hist, Sign sign, double upsilon, const ModelParams& params,
            std::size_t n);

/// Throws ValidationError for n = 0, signs.size() != n or upsilon < 0.
LatticePath simulate_path(const ModelParams& params, std::size_t n, std::span<const Sign> signs,
                          double upsilon);

/// One path per threshold, all driven by the same signs. Thresholds must be
/// ascending (ties allowed).
std::vector<LatticePath> simulate_coupled(const ModelParams& params, std::size_t n,
                                          std::span<const Sign> signs,
                                          std::span<const double> upsilon_list);

/// Throws ValidationError unless the grid is nonempty, finite, >= 0 and
/// ascending.
void validate_grid(std::span<const double> upsilon_grid);

/// Gaps D_0..D_{n-1} along a path.
std::vector<double> path_gaps(const LatticePath& path, const StepContext& ctx);

/// Running counts of the raw indicators 1{D_k >= upsilon} and
/// 1{D_k <= -upsilon} for k = 0..l.
struct PrefixCounts {
  std::vector<std::uint32_t> up;
  std::vector<std::uint32_t> down;
};

PrefixCounts prefix_counts(const LatticePath& path, const StepContext& ctx);

/// Pairwise comparison of a coupled family (ascending thresholds).
struct CouplingReport {
  std::size_t pairs_checked = 0;
  /// (pair, prefix) instances where the larger threshold has the larger
  /// running count of up (resp. down) firings.
  std::size_t up_prefix_violations = 0;
  std::size_t down_prefix_violations = 0;
  /// Pairs with at least one violating prefix of either kind.
  std::size_t violating_pairs = 0;
  /// Failures of the first-divergence rule: paths agree bit for bit until the
  /// first step whose indicators differ, and at that step only the smaller
  /// threshold fires. Zero for any correct simulator.
  std::size_t divergence_rule_failures = 0;

  std::size_t prefix_violations() const { return up_prefix_violations + down_prefix_violations; }
  CouplingReport& operator+=(const CouplingReport& o);
};

CouplingReport check_coupling(std::span<const LatticePath> coupled, const ModelParams& params);

}  // namespace herding
