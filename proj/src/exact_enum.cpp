#include "herding/exact_enum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "herding/error.hpp"
#include "herding/lattice.hpp"

namespace herding {

namespace {

// 256 blocks: enough to keep a handful of threads busy, and fixed so the
// reduction order never depends on the worker count.
constexpr std::size_t kBlockDepth = 8;

struct BlockResult {
  DriftCounts counts;  // each node weighted by the number of leaves below it
  double path_sum = 0.0;
  std::vector<double> step_sums;
};

class TreeWalker {
 public:
  TreeWalker(const StepContext& ctx, double upsilon, Method method, BlockResult& out)
      : ctx_(ctx), upsilon_(upsilon), method_(method), out_(out), values_(ctx.n + 1) {}

  void run_block(std::uint64_t block, std::size_t depth) {
    const std::size_t n = ctx_.n;
    values_[0] = ctx_.params.x0();
    out_.step_sums.assign(n, 0.0);
    double partial = 0.0;
    for (std::size_t k = 0; k < depth; ++k) {
      const Sign s = ((block >> (depth - 1 - k)) & 1U) != 0 ? Sign{1} : Sign{-1};
      partial += visit_node(k, std::ldexp(1.0, static_cast<int>(n - depth)),
                            std::uint64_t{1} << (n - depth));
      values_[k + 1] = values_[k] + step_increment(gap_, s, upsilon_, ctx_).total();
    }
    descend(depth, partial);
  }

 private:
  // Evaluates step k at the current node and records its weighted share.
  double visit_node(std::size_t k, double leaf_weight, std::uint64_t leaf_count) {
    gap_ = delay_gap(values_, k, ctx_.lags);
    const DriftBranch branch = drift_branch(gap_, upsilon_);
    if (branch == DriftBranch::kUp) out_.counts.up += leaf_count;
    if (branch == DriftBranch::kDown) out_.counts.down += leaf_count;
    if (branch == DriftBranch::kZero) out_.counts.zero += leaf_count;
    const double term = step_term(method_, gap_, upsilon_, ctx_);
    out_.step_sums[k] += term * leaf_weight;
    return term;
  }

  void descend(std::size_t k, double partial) {
    const std::size_t n = ctx_.n;
    if (k == n) {
      out_.path_sum += partial;
      return;
    }
    const double term =
        visit_node(k, std::ldexp(1.0, static_cast<int>(n - k)), std::uint64_t{1} << (n - k));
    const double gap = gap_;
    for (Sign s : {Sign{-1}, Sign{1}}) {
      values_[k + 1] = values_[k] + step_increment(gap, s, upsilon_, ctx_).total();
      descend(k + 1, partial + term);
    }
  }

  const StepContext& ctx_;
  double upsilon_;
  Method method_;
  BlockResult& out_;
  std::vector<double> values_;
  double gap_ = 0.0;
};

void check_enum_args(std::size_t n, double upsilon, const EnumOptions& options) {
  if (n == 0) throw ValidationError("mesh count n must be >= 1");
  if (n > options.max_n || n > 62) {
    std::ostringstream os;
    os << "n = " << n << " exceeds the enumeration guard (max_n = " << options.max_n << ")";
    throw ValidationError(os.str());
  }
  if (!std::isfinite(upsilon) || upsilon < 0.0)
    throw ValidationError("threshold upsilon must be finite and >= 0");
  if (options.workers < 1) throw ValidationError("workers must be >= 1");
}

}  // namespace

ExactResult enumerate_exact(const ModelParams& params, std::size_t n, double upsilon,
                            Method method, const EnumOptions& options) {
  check_enum_args(n, upsilon, options);
  const StepContext ctx(params, n);
  const std::size_t depth = std::min(n, kBlockDepth);
  const auto block_count = static_cast<std::int64_t>(std::uint64_t{1} << depth);
  std::vector<BlockResult> blocks(static_cast<std::size_t>(block_count));

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(options.workers)
  for (std::int64_t b = 0; b < block_count; ++b) {
    try {
      TreeWalker walker(ctx, upsilon, method, blocks[static_cast<std::size_t>(b)]);
      walker.run_block(static_cast<std::uint64_t>(b), depth);
    } catch (...) {
#pragma omp critical(herding_enum_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ExactResult result;
  double path_sum = 0.0;
  std::vector<double> step_sums(n, 0.0);
  for (const auto& block : blocks) {
    result.totals += block.counts;
    path_sum += block.path_sum;
    for (std::size_t k = 0; k < n; ++k) step_sums[k] += block.step_sums[k];
  }

  const double paths = std::ldexp(1.0, static_cast<int>(n));
  auto& est = result.estimate;
  est.method = method;
  est.n = n;
  est.upsilon = upsilon;
  est.path_count = std::uint64_t{1} << n;
  est.value = method == Method::kLogIndicator
                  ? weighted_drift(result.totals, params, static_cast<double>(n) * paths)
                  : path_sum / paths;
  for (auto& s : step_sums) s /= paths;
  est.per_step = std::move(step_sums);
  return result;
}

double enumerate_unfairness(const ModelParams& params, std::size_t n, double upsilon,
                            Method method, const EnumOptions& options) {
  return enumerate_exact(params, n, upsilon, method, options).estimate.value;
}

bool nonincreasing(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) return false;
  }
  return true;
}

std::size_t argmin_last(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("argmin of an empty sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[best]) best = i;
  }
  return best;
}

ExactSweepTable exact_sweep(const ModelParams& params, std::size_t n,
                            const std::vector<double>& upsilon_grid, Method method,
                            const EnumOptions& options) {
  validate_grid(upsilon_grid);
  ExactSweepTable table{n, method, upsilon_grid, {}, params, true, 0};
  table.values.reserve(upsilon_grid.size());
  for (double u : upsilon_grid)
    table.values.push_back(enumerate_unfairness(params, n, u, method, options));
  table.monotone = nonincreasing(table.values);
  table.argmin_index = argmin_last(table.values);
  return table;
}

}  // namespace herding
