#include "herding/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herding/error.hpp"

namespace herding {

std::string_view to_string(Scaling s) {
  return s == Scaling::kStandard ? "standard" : "paper";
}

Scaling parse_scaling(std::string_view text) {
  if (text == "standard") return Scaling::kStandard;
  if (text == "paper" || text == "paper-literal") return Scaling::kPaperLiteral;
  throw ValidationError("scaling must be 'standard' or 'paper', got '" + std::string(text) + "'");
}

std::string_view to_string(LagRounding r) {
  return r == LagRounding::kFloor ? "floor" : "strict";
}

LagRounding parse_lag_rounding(std::string_view text) {
  if (text == "floor") return LagRounding::kFloor;
  if (text == "strict") return LagRounding::kStrict;
  throw ValidationError("lag_rounding must be 'floor' or 'strict', got '" + std::string(text) +
                        "'");
}

DelayKernel::DelayKernel(std::vector<KernelEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("delay kernel must have at least one lag");
  double sum = 0.0;
  for (const auto& e : entries_) {
    if (!std::isfinite(e.lag) || e.lag <= 0.0) {
      std::ostringstream os;
      os << "delay kernel lags must be strictly positive (got " << e.lag << ")";
      throw ValidationError(os.str());
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      std::ostringstream os;
      os << "delay kernel weights must be strictly positive (got " << e.weight << ")";
      throw ValidationError(os.str());
    }
    sum += e.weight;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "delay kernel weights must sum to 1 within " << kWeightSumTolerance << " (got " << sum
       << ")";
    throw ValidationError(os.str());
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (std::size_t j = i + 1; j < entries_.size(); ++j) {
      if (entries_[i].lag == entries_[j].lag) {
        std::ostringstream os;
        os << "delay kernel lags must be distinct (lag " << entries_[i].lag << " repeated)";
        throw ValidationError(os.str());
      }
    }
  }
}

DelayKernel DelayKernel::single(double lag) { return DelayKernel({{lag, 1.0}}); }

std::vector<ResolvedLag> resolve_lags(const DelayKernel& kernel, std::size_t n,
                                      LagRounding rounding) {
  std::vector<ResolvedLag> out;
  out.reserve(kernel.size());
  const double mesh = static_cast<double>(n);
  for (const auto& e : kernel.entries()) {
    const double scaled = e.lag * mesh;
    const double nearest = std::round(scaled);
    const bool integral = std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, nearest);
    if (!integral && rounding == LagRounding::kStrict) {
      std::ostringstream os;
      os << "strict lag rounding: lag " << e.lag << " is not a multiple of 1/" << n;
      throw ValidationError(os.str());
    }
    const double steps = integral ? nearest : std::floor(scaled);
    // Lags beyond the horizon clamp to X_0 anyway.
    const double capped = std::min(steps, mesh + 1.0);
    out.push_back({static_cast<std::size_t>(capped), e.weight});
  }
  return out;
}

ModelParams::ModelParams(ModelParamsInit init) : v_(std::move(init)) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(v_.alpha_up) || v_.alpha_up <= 0.0)
    throw ValidationError("alpha_up must be finite and > 0");
  if (!finite(v_.alpha_down) || v_.alpha_down >= 0.0)
    throw ValidationError("alpha_down must be finite and < 0");
  if (!finite(v_.alpha_zero)) throw ValidationError("alpha_zero must be finite");
  if (!finite(v_.sigma) || v_.sigma < 0.0) throw ValidationError("sigma must be finite and >= 0");
  if (!finite(v_.x0)) throw ValidationError("x0 must be finite");
}

ModelParams ModelParams::with_x0(double x0) const {
  auto init = v_;
  init.x0 = x0;
  return ModelParams(std::move(init));
}

ModelParams ModelParams::with_scaling(Scaling s) const {
  auto init = v_;
  init.scaling = s;
  return ModelParams(std::move(init));
}

double ModelParams::noise_step(std::size_t n) const {
  const double mesh = static_cast<double>(n);
  return v_.scaling == Scaling::kStandard ? v_.sigma / std::sqrt(mesh)
                                          : v_.sigma / std::sqrt(2.0 * mesh);
}

double ModelParams::compensator(std::size_t n) const {
  return v_.sigma * v_.sigma / (2.0 * static_cast<double>(n));
}

double threshold_from_tax(double rho, double holding_time) {
  if (!std::isfinite(rho) || rho < 0.0) throw ValidationError("tax rate rho must be >= 0");
  if (!std::isfinite(holding_time) || holding_time <= 0.0)
    throw ValidationError("holding time T must be > 0");
  return holding_time * rho;
}

double TaxSpec::upsilon() const { return threshold_from_tax(rho, holding_time); }

DriftBranch drift_branch(double gap, double upsilon) {
  if (gap > 0.0 && gap >= upsilon) return DriftBranch::kUp;
  if (gap < 0.0 && gap <= -upsilon) return DriftBranch::kDown;
  if (gap == 0.0 && upsilon == 0.0) return DriftBranch::kZero;
  return DriftBranch::kNone;
}

double drift_level(DriftBranch branch, const ModelParams& params) {
  switch (branch) {
    case DriftBranch::kUp: return params.alpha_up();
    case DriftBranch::kDown: return params.alpha_down();
    case DriftBranch::kZero: return params.alpha_zero();
    case DriftBranch::kNone: break;
  }
  return 0.0;
}

double psi(double gap, double upsilon, const ModelParams& params) {
  if (!(upsilon >= 0.0)) throw ValidationError("threshold upsilon must be >= 0");
  return drift_level(drift_branch(gap, upsilon), params);
}

double delay_gap(std::span<const double> values, std::size_t k,
                 std::span<const ResolvedLag> lags) {
  const double current = values[k];
  double gap = 0.0;
  for (const auto& lag : lags) {
    const std::size_t j = lag.steps >= k ? 0 : k - lag.steps;
    gap += lag.weight * (current - values[j]);
  }
  return gap;
}

}  // namespace herding
