#include "herding/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "herding/error.hpp"
#include "herding/exact_enum.hpp"
#include "herding/lattice.hpp"
#include "herding/sign_stream.hpp"

namespace herding {

namespace {

// Per-path contribution along a freshly evolved path, identical in arithmetic
// to simulate_path followed by path_unfairness.
class PathEvaluator {
 public:
  PathEvaluator(const StepContext& ctx, Method method)
      : ctx_(ctx), method_(method), values_(ctx.n + 1) {}

  double evaluate(const std::vector<Sign>& signs, double upsilon, double* step_sums) {
    const std::size_t n = ctx_.n;
    values_[0] = ctx_.params.x0();
    DriftCounts counts;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double gap = delay_gap(values_, k, ctx_.lags);
      if (method_ == Method::kLogIndicator) {
        counts.add(drift_branch(gap, upsilon));
        if (step_sums) step_sums[k] += log_indicator_term(gap, upsilon, ctx_);
      } else {
        const double t = step_term(method_, gap, upsilon, ctx_);
        if (step_sums) step_sums[k] += t;
        total += t;
      }
      values_[k + 1] = values_[k] + step_increment(gap, signs[k], upsilon, ctx_).total();
    }
    return method_ == Method::kLogIndicator
               ? weighted_drift(counts, ctx_.params, static_cast<double>(n))
               : total;
  }

 private:
  const StepContext& ctx_;
  Method method_;
  std::vector<double> values_;
};

struct ChunkResult {
  std::uint64_t count = 0;
  std::vector<double> sum;        // per grid point
  std::vector<double> m2;         // sum of squared deviations from the chunk mean
  std::vector<double> step_sums;  // grid-major, only with breakdown
  std::uint64_t path_increases = 0;
};

struct RunTotals {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::vector<std::vector<double>> per_step;
  std::uint64_t path_increases = 0;
};

RunTotals run_paths(const ModelParams& params, std::size_t n, const std::vector<double>& grid,
                    std::uint64_t path_count, std::uint64_t seed, Method method,
                    const McOptions& options, bool breakdown) {
  if (n == 0) throw ValidationError("mesh count n must be >= 1");
  if (path_count < 2)
    throw ValidationError("path_count must be >= 2 for a standard error to exist");
  if (options.workers < 1) throw ValidationError("workers must be >= 1");
  validate_grid(grid);

  const StepContext ctx(params, n);
  const std::size_t g_count = grid.size();
  const std::uint64_t chunk_paths = McOptions::kChunkPaths;
  const auto chunk_count =
      static_cast<std::int64_t>((path_count + chunk_paths - 1) / chunk_paths);
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(chunk_count));

  std::exception_ptr failure;
#pragma omp parallel num_threads(options.workers)
  {
    PathEvaluator eval(ctx, method);
    std::vector<Sign> signs(n);
    std::vector<double> contrib;  // [g * paths_in_chunk + i]
#pragma omp for schedule(dynamic)
    for (std::int64_t c = 0; c < chunk_count; ++c) {
      try {
        auto& out = chunks[static_cast<std::size_t>(c)];
        const std::uint64_t first = static_cast<std::uint64_t>(c) * chunk_paths;
        const std::uint64_t last = std::min(path_count, first + chunk_paths);
        const std::uint64_t m = last - first;
        out.count = m;
        out.sum.assign(g_count, 0.0);
        out.m2.assign(g_count, 0.0);
        if (breakdown) out.step_sums.assign(g_count * n, 0.0);
        contrib.assign(g_count * m, 0.0);

        for (std::uint64_t i = 0; i < m; ++i) {
          fill_signs({seed, first + i}, signs);
          for (std::size_t g = 0; g < g_count; ++g) {
            double* steps = breakdown ? out.step_sums.data() + g * n : nullptr;
            contrib[g * m + i] = eval.evaluate(signs, grid[g], steps);
            if (g > 0 && contrib[g * m + i] > contrib[(g - 1) * m + i]) ++out.path_increases;
          }
        }
        for (std::size_t g = 0; g < g_count; ++g) {
          const double* x = contrib.data() + g * m;
          double s = 0.0;
          for (std::uint64_t i = 0; i < m; ++i) s += x[i];
          const double mean = s / static_cast<double>(m);
          double q = 0.0;
          for (std::uint64_t i = 0; i < m; ++i) q += (x[i] - mean) * (x[i] - mean);
          out.sum[g] = s;
          out.m2[g] = q;
        }
      } catch (...) {
#pragma omp critical(herding_mc_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Fixed-order reduction: plain sums for the means, pairwise-merged squared
  // deviations (Chan et al.) for the variances.
  RunTotals totals;
  totals.mean.assign(g_count, 0.0);
  totals.std_error.assign(g_count, 0.0);
  const double total_paths = static_cast<double>(path_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    double sum = 0.0;
    double count = 0.0;
    double run_mean = 0.0;
    double m2 = 0.0;
    for (const auto& ch : chunks) {
      const double cn = static_cast<double>(ch.count);
      const double cmean = ch.sum[g] / cn;
      const double merged = count + cn;
      const double delta = cmean - run_mean;
      m2 += ch.m2[g] + delta * delta * count * cn / merged;
      run_mean += delta * cn / merged;
      count = merged;
      sum += ch.sum[g];
    }
    totals.mean[g] = sum / total_paths;
    totals.std_error[g] = std::sqrt(m2 / (total_paths - 1.0) / total_paths);
  }
  for (const auto& ch : chunks) totals.path_increases += ch.path_increases;

  if (breakdown) {
    totals.per_step.assign(g_count, std::vector<double>(n, 0.0));
    for (const auto& ch : chunks) {
      for (std::size_t g = 0; g < g_count; ++g) {
        for (std::size_t k = 0; k < n; ++k) totals.per_step[g][k] += ch.step_sums[g * n + k];
      }
    }
    for (auto& row : totals.per_step) {
      for (auto& v : row) v /= total_paths;
    }
  }
  return totals;
}

UnfairnessEstimate make_estimate(const RunTotals& t, std::size_t g, Method method, std::size_t n,
                                 double upsilon, std::uint64_t path_count, std::uint64_t seed) {
  UnfairnessEstimate e;
  e.value = t.mean[g];
  e.std_error = t.std_error[g];
  e.method = method;
  e.n = n;
  e.upsilon = upsilon;
  e.path_count = path_count;
  e.seed = seed;
  if (!t.per_step.empty()) e.per_step = t.per_step[g];
  return e;
}

}  // namespace

std::vector<double> SweepResult::values() const {
  std::vector<double> v;
  v.reserve(estimates.size());
  for (const auto& e : estimates) v.push_back(e.value);
  return v;
}

UnfairnessEstimate estimate_unfairness(const ModelParams& params, std::size_t n, double upsilon,
                                       std::uint64_t path_count, std::uint64_t seed,
                                       Method method, const McOptions& options) {
  const std::vector<double> grid{upsilon};
  const RunTotals t = run_paths(params, n, grid, path_count, seed, method, options, true);
  return make_estimate(t, 0, method, n, upsilon, path_count, seed);
}

SweepResult coupled_sweep(const ModelParams& params, std::size_t n,
                          const std::vector<double>& upsilon_grid, std::uint64_t path_count,
                          std::uint64_t seed, Method method, const McOptions& options) {
  const RunTotals t =
      run_paths(params, n, upsilon_grid, path_count, seed, method, options, false);
  SweepResult r;
  r.upsilon_grid = upsilon_grid;
  r.path_count = path_count;
  r.n = n;
  r.master_seed = seed;
  r.method = method;
  r.coupled = true;
  r.path_increases = t.path_increases;
  for (std::size_t g = 0; g < upsilon_grid.size(); ++g)
    r.estimates.push_back(make_estimate(t, g, method, n, upsilon_grid[g], path_count, seed));

  const auto values = r.values();
  r.monotone = nonincreasing(values);
  for (std::size_t g = 1; g < values.size(); ++g) {
    const double tol = 2.0 * std::max(*r.estimates[g].std_error, *r.estimates[g - 1].std_error);
    if (values[g] - values[g - 1] > tol) ++r.flagged_pairs;
  }
  r.argmin_index = argmin_last(values);
  r.argmin_upsilon = upsilon_grid[r.argmin_index];
  return r;
}

TaxOptimum argmin_tax(const SweepResult& sweep) {
  if (sweep.estimates.empty()) throw ValidationError("argmin_tax: empty sweep");
  TaxOptimum opt;
  opt.index = argmin_last(sweep.values());
  opt.upsilon = sweep.upsilon_grid[opt.index];
  if (sweep.rho_grid) opt.rho = (*sweep.rho_grid)[opt.index];
  return opt;
}

}  // namespace herding
