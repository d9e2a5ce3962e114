#include "herding/unfairness.hpp"

#include <algorithm>
#include <cmath>

#include "herding/error.hpp"

namespace herding {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kLogIndicator: return "log-indicator";
    case Method::kLogConditional: return "log-conditional";
    case Method::kPriceLevel: return "price-level";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "log-indicator") return Method::kLogIndicator;
  if (text == "log-conditional") return Method::kLogConditional;
  if (text == "price-level") return Method::kPriceLevel;
  throw ValidationError("method must be log-indicator, log-conditional or price-level, got '" +
                        std::string(text) + "'");
}

double weighted_drift(const DriftCounts& counts, const ModelParams& params, double denominator) {
  const double up = std::abs(params.alpha_up()) * static_cast<double>(counts.up);
  const double down = std::abs(params.alpha_down()) * static_cast<double>(counts.down);
  const double zero = std::abs(params.alpha_zero()) * static_cast<double>(counts.zero);
  return (up + down + zero) / denominator;
}

double log_indicator_term(double gap, double upsilon, const StepContext& ctx) {
  return std::abs(psi(gap, upsilon, ctx.params)) / static_cast<double>(ctx.n);
}

double log_conditional_term(double gap, double upsilon, const StepContext& ctx) {
  const Increment plus = step_increment(gap, Sign{1}, upsilon, ctx);
  const Increment minus = step_increment(gap, Sign{-1}, upsilon, ctx);
  // Children are equally likely. Averaging part by part keeps the noise
  // cancellation exact.
  Increment mean;
  mean.drift = 0.5 * plus.drift + 0.5 * minus.drift;
  mean.noise = 0.5 * plus.noise + 0.5 * minus.noise;
  mean.compensator = 0.5 * plus.compensator + 0.5 * minus.compensator;
  return std::abs(mean.total() + ctx.compensator);
}

double price_level_term(double gap, double upsilon, const StepContext& ctx) {
  const double up = std::expm1(step_increment(gap, Sign{1}, upsilon, ctx).total());
  const double down = std::expm1(step_increment(gap, Sign{-1}, upsilon, ctx).total());
  const double ratio_minus_one = 0.5 * up + 0.5 * down;
  if (!std::isfinite(ratio_minus_one))
    throw EvaluationError("price-level unfairness: exp overflow in one-step price ratio");
  return std::abs(ratio_minus_one);
}

double step_term(Method m, double gap, double upsilon, const StepContext& ctx) {
  switch (m) {
    case Method::kLogIndicator: return log_indicator_term(gap, upsilon, ctx);
    case Method::kLogConditional: return log_conditional_term(gap, upsilon, ctx);
    case Method::kPriceLevel: return price_level_term(gap, upsilon, ctx);
  }
  return 0.0;
}

DriftCounts drift_counts(const LatticePath& path, const StepContext& ctx) {
  DriftCounts c;
  for (std::size_t k = 0; k < path.n; ++k)
    c.add(drift_branch(delay_gap(path.values, k, ctx.lags), path.upsilon));
  return c;
}

namespace {

double summed_terms(Method m, const LatticePath& path, const StepContext& ctx,
                    std::vector<double>* per_step) {
  if (per_step) per_step->assign(path.n, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < path.n; ++k) {
    const double t = step_term(m, delay_gap(path.values, k, ctx.lags), path.upsilon, ctx);
    if (per_step) (*per_step)[k] = t;
    total += t;
  }
  return total;
}

}  // namespace

double log_indicator_unfairness(const LatticePath& path, const ModelParams& params,
                                std::vector<double>* per_step) {
  const StepContext ctx(params, path.n);
  if (per_step) summed_terms(Method::kLogIndicator, path, ctx, per_step);
  return weighted_drift(drift_counts(path, ctx), params, static_cast<double>(path.n));
}

double log_conditional_unfairness(const LatticePath& path, const ModelParams& params,
                                  std::vector<double>* per_step) {
  const StepContext ctx(params, path.n);
  return summed_terms(Method::kLogConditional, path, ctx, per_step);
}

double price_level_unfairness(const LatticePath& path, const ModelParams& params,
                              std::vector<double>* per_step) {
  const StepContext ctx(params, path.n);
  return summed_terms(Method::kPriceLevel, path, ctx, per_step);
}

double path_unfairness(Method m, const LatticePath& path, const ModelParams& params,
                       std::vector<double>* per_step) {
  switch (m) {
    case Method::kLogIndicator: return log_indicator_unfairness(path, params, per_step);
    case Method::kLogConditional: return log_conditional_unfairness(path, params, per_step);
    case Method::kPriceLevel: return price_level_unfairness(path, params, per_step);
  }
  return 0.0;
}

ConsistencyReport unfairness_of_estimates_consistency(const UnfairnessEstimate& e1,
                                                      const UnfairnessEstimate& e2) {
  if (e1.n != e2.n) throw ValidationError("consistency check: estimates differ in mesh n");
  if (e1.upsilon != e2.upsilon)
    throw ValidationError("consistency check: estimates differ in threshold upsilon");
  if (e1.path_count != e2.path_count)
    throw ValidationError("consistency check: estimates differ in path count");
  if (e1.seed != e2.seed) throw ValidationError("consistency check: estimates differ in seed");

  ConsistencyReport report;
  report.max_abs_discrepancy = std::abs(e1.value - e2.value);
  if (e1.per_step && e2.per_step) {
    const auto& a = *e1.per_step;
    const auto& b = *e2.per_step;
    if (a.size() != b.size())
      throw ValidationError("consistency check: per-step breakdowns differ in length");
    for (std::size_t k = 0; k < a.size(); ++k)
      report.max_abs_discrepancy = std::max(report.max_abs_discrepancy, std::abs(a[k] - b[k]));
  }
  return report;
}

double silent_drift_price_level(const ModelParams& params, std::size_t n) {
  const double h = params.noise_step(n);
  const double c = params.compensator(n);
  // cosh(h) e^{-c} - 1 without the cancellation: cosh(h) - 1 = 2 sinh^2(h/2).
  const double s = std::sinh(0.5 * h);
  return static_cast<double>(n) * std::abs(std::expm1(std::log1p(2.0 * s * s) - c));
}

}  // namespace herding
