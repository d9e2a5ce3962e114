#include "herding/lattice.hpp"

#include <cmath>

#include "herding/error.hpp"

namespace herding {

StepContext::StepContext(const ModelParams& p, std::size_t mesh)
    : params(p),
      n(mesh),
      inv_n(1.0 / static_cast<double>(mesh)),
      noise_step(p.noise_step(mesh)),
      compensator(p.compensator(mesh)),
      lags(resolve_lags(p.kernel(), mesh, p.lag_rounding())) {
  if (mesh == 0) throw ValidationError("mesh count n must be >= 1");
}

Increment step_increment(double gap, Sign sign, double upsilon, const StepContext& ctx) {
  Increment inc;
  inc.drift = drift_level(drift_branch(gap, upsilon), ctx.params) / static_cast<double>(ctx.n);
  inc.noise = ctx.noise_step * static_cast<double>(sign);
#ifdef HERDING_FAULT_FLIPPED_COMPENSATOR
  inc.compensator = ctx.compensator;
#else
  inc.compensator = -ctx.compensator;
#endif
  return inc;
}

double step(std::span<const double> hist, Sign sign, double upsilon, const StepContext& ctx) {
  const std::size_t k = hist.size() - 1;
  const double gap = delay_gap(hist, k, ctx.lags);
  return hist[k] + step_increment(gap, sign, upsilon, ctx).total();
}

double step(std::span<const double> hist, Sign sign, double upsilon, const ModelParams& params,
            std::size_t n) {
  return step(hist, sign, upsilon, StepContext(params, n));
}

namespace {

void check_upsilon(double upsilon) {
  if (!std::isfinite(upsilon) || upsilon < 0.0)
    throw ValidationError("threshold upsilon must be finite and >= 0");
}

void evolve(const StepContext& ctx, std::span<const Sign> signs, double upsilon,
            std::vector<double>& values) {
  values.resize(ctx.n + 1);
  values[0] = ctx.params.x0();
  for (std::size_t k = 0; k < ctx.n; ++k) {
    const double gap = delay_gap(values, k, ctx.lags);
    values[k + 1] = values[k] + step_increment(gap, signs[k], upsilon, ctx).total();
  }
}

void check_signs(std::size_t n, std::span<const Sign> signs) {
  if (n == 0) throw ValidationError("mesh count n must be >= 1");
  if (signs.size() != n) throw ValidationError("sign sequence length must equal n");
  for (Sign s : signs) {
    if (s != 1 && s != -1) throw ValidationError("signs must be +1 or -1");
  }
}

}  // namespace

void validate_grid(std::span<const double> upsilon_grid) {
  if (upsilon_grid.empty()) throw ValidationError("threshold grid must be nonempty");
  for (std::size_t i = 0; i < upsilon_grid.size(); ++i) {
    check_upsilon(upsilon_grid[i]);
    if (i > 0 && upsilon_grid[i] < upsilon_grid[i - 1])
      throw ValidationError("threshold grid must be ascending");
  }
}

LatticePath simulate_path(const ModelParams& params, std::size_t n, std::span<const Sign> signs,
                          double upsilon) {
  check_signs(n, signs);
  check_upsilon(upsilon);
  const StepContext ctx(params, n);
  LatticePath path;
  path.n = n;
  path.signs.assign(signs.begin(), signs.end());
  path.upsilon = upsilon;
  evolve(ctx, signs, upsilon, path.values);
  return path;
}

std::vector<LatticePath> simulate_coupled(const ModelParams& params, std::size_t n,
                                          std::span<const Sign> signs,
                                          std::span<const double> upsilon_list) {
  check_signs(n, signs);
  validate_grid(upsilon_list);
  const StepContext ctx(params, n);
  std::vector<LatticePath> out(upsilon_list.size());
  for (std::size_t i = 0; i < upsilon_list.size(); ++i) {
    out[i].n = n;
    out[i].signs.assign(signs.begin(), signs.end());
    out[i].upsilon = upsilon_list[i];
    evolve(ctx, signs, upsilon_list[i], out[i].values);
  }
  return out;
}

std::vector<double> path_gaps(const LatticePath& path, const StepContext& ctx) {
  std::vector<double> gaps(path.n);
  for (std::size_t k = 0; k < path.n; ++k) gaps[k] = delay_gap(path.values, k, ctx.lags);
  return gaps;
}

PrefixCounts prefix_counts(const LatticePath& path, const StepContext& ctx) {
  PrefixCounts c;
  c.up.resize(path.n);
  c.down.resize(path.n);
  std::uint32_t up = 0;
  std::uint32_t down = 0;
  for (std::size_t k = 0; k < path.n; ++k) {
    const double gap = delay_gap(path.values, k, ctx.lags);
    up += gap >= path.upsilon ? 1U : 0U;
    down += gap <= -path.upsilon ? 1U : 0U;
    c.up[k] = up;
    c.down[k] = down;
  }
  return c;
}

CouplingReport& CouplingReport::operator+=(const CouplingReport& o) {
  pairs_checked += o.pairs_checked;
  up_prefix_violations += o.up_prefix_violations;
  down_prefix_violations += o.down_prefix_violations;
  violating_pairs += o.violating_pairs;
  divergence_rule_failures += o.divergence_rule_failures;
  return *this;
}

CouplingReport check_coupling(std::span<const LatticePath> coupled, const ModelParams& params) {
  CouplingReport report;
  if (coupled.empty()) return report;
  const std::size_t n = coupled.front().n;
  const StepContext ctx(params, n);

  std::vector<PrefixCounts> counts;
  std::vector<std::vector<double>> gaps;
  counts.reserve(coupled.size());
  gaps.reserve(coupled.size());
  for (const auto& p : coupled) {
    if (p.n != n || p.signs != coupled.front().signs)
      throw ValidationError("coupling check needs paths on the same signs and mesh");
    counts.push_back(prefix_counts(p, ctx));
    gaps.push_back(path_gaps(p, ctx));
  }

  for (std::size_t lo = 0; lo < coupled.size(); ++lo) {
    for (std::size_t hi = lo + 1; hi < coupled.size(); ++hi) {
      ++report.pairs_checked;
      const auto& small = counts[lo];  // smaller threshold
      const auto& large = counts[hi];
      bool any = false;
      for (std::size_t l = 0; l < n; ++l) {
        if (large.up[l] > small.up[l]) {
          ++report.up_prefix_violations;
          any = true;
        }
        if (large.down[l] > small.down[l]) {
          ++report.down_prefix_violations;
          any = true;
        }
      }
      if (any) ++report.violating_pairs;

      const double u_small = coupled[lo].upsilon;
      const double u_large = coupled[hi].upsilon;
      for (std::size_t k = 0; k < n; ++k) {
        if (coupled[lo].values[k] != coupled[hi].values[k]) {
          ++report.divergence_rule_failures;  // diverged without an indicator disagreement
          break;
        }
        const double g = gaps[lo][k];
        const bool up_s = g >= u_small;
        const bool up_l = gaps[hi][k] >= u_large;
        const bool dn_s = g <= -u_small;
        const bool dn_l = gaps[hi][k] <= -u_large;
        if (up_s == up_l && dn_s == dn_l) continue;
        if ((up_l && !up_s) || (dn_l && !dn_s)) ++report.divergence_rule_failures;
        break;
      }
    }
  }
  return report;
}

}  // namespace herding
