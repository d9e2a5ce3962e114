#pragma once

// Discrete forms of complete-market unfairness along lattice paths.
//
// For y = exp(X), the unfairness integrates over [0, 1] the expected absolute
// relative drift of y. On the lattice there are three ways to evaluate one
// path's share of it, and the first two must agree exactly:
//
//  * log-indicator:   (1/n) sum_k |psi(D_k)|
//  * log-conditional: sum_k |E[X_{k+1} | F_k] - X_k + sigma^2/(2n)|, with the
//                     conditional mean taken over both children of the node
//  * price-level:     sum_k |E[exp(X_{k+1}) | F_k] / exp(X_k) - 1|
//
// The price-level form is the forward-difference surrogate of the definition
// and converges to the log forms as n grows.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "herding/lattice.hpp"
#include "herding/model.hpp"

namespace herding {

enum class Method { kLogIndicator, kLogConditional, kPriceLevel };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);
inline bool is_log_method(Method m) { return m != Method::kPriceLevel; }

/// How often each drift branch fired along a path.
struct DriftCounts {
  std::uint64_t up = 0;
  std::uint64_t down = 0;
  std::uint64_t zero = 0;

  void add(DriftBranch b) {
    up += b == DriftBranch::kUp ? 1U : 0U;
    down += b == DriftBranch::kDown ? 1U : 0U;
    zero += b == DriftBranch::kZero ? 1U : 0U;
  }
  DriftCounts& operator+=(const DriftCounts& o) {
    up += o.up;
    down += o.down;
    zero += o.zero;
    return *this;
  }
  bool any() const { return up + down + zero != 0; }
};

/// (|alpha_up| up + |alpha_down| down + |alpha_zero| zero) / denominator.
/// Monotone in each count, so dominated counts give dominated values exactly.
double weighted_drift(const DriftCounts& counts, const ModelParams& params, double denominator);

// Per-step terms. Each is computed from the node's gap only, never from the
// level X_k, so a constant shift of the path leaves them unchanged.

/// |psi(D_k)| / n.
double log_indicator_term(double gap, double upsilon, const StepContext& ctx);
/// |E[X_{k+1} - X_k | F_k] + sigma^2/(2n)| from the two children.
double log_conditional_term(double gap, double upsilon, const StepContext& ctx);
/// |E[exp(X_{k+1} - X_k) | F_k] - 1| from the two children. Throws
/// EvaluationError when exp leaves the double range.
double price_level_term(double gap, double upsilon, const StepContext& ctx);

double step_term(Method m, double gap, double upsilon, const StepContext& ctx);

// Per-path contributions; averaging them over paths estimates the unfairness.
// When `per_step` is non-null it receives the n terms summing to the value.

double log_indicator_unfairness(const LatticePath& path, const ModelParams& params,
                                std::vector<double>* per_step = nullptr);
double log_conditional_unfairness(const LatticePath& path, const ModelParams& params,
                                  std::vector<double>* per_step = nullptr);
double price_level_unfairness(const LatticePath& path, const ModelParams& params,
                              std::vector<double>* per_step = nullptr);
double path_unfairness(Method m, const LatticePath& path, const ModelParams& params,
                       std::vector<double>* per_step = nullptr);

DriftCounts drift_counts(const LatticePath& path, const StepContext& ctx);

struct UnfairnessEstimate {
  double value = 0.0;
  std::optional<double> std_error;  // absent for exact methods
  Method method = Method::kLogIndicator;
  std::optional<std::vector<double>> per_step;
  std::size_t n = 0;
  double upsilon = 0.0;
  std::uint64_t path_count = 0;
  std::optional<std::uint64_t> seed;  // absent for exhaustive enumeration
};

struct ConsistencyReport {
  static constexpr double kExactTolerance = 1e-12;

  double max_abs_discrepancy = 0.0;
  bool within_exact_tolerance() const { return max_abs_discrepancy <= kExactTolerance; }
};

/// Largest absolute difference between two estimates (value and, when both
/// carry one, the per-step breakdown). Throws ValidationError when n, upsilon,
/// path_count or seed differ.
ConsistencyReport unfairness_of_estimates_consistency(const UnfairnessEstimate& e1,
                                                      const UnfairnessEstimate& e2);

/// Closed form of the price-level contribution with the drift silenced:
/// n * |cosh(h) exp(-sigma^2/(2n)) - 1| with h the noise step.
double silent_drift_price_level(const ModelParams& params, std::size_t n);

}  // namespace herding
