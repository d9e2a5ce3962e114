#include "herding/reference.hpp"

#include <cmath>
#include <sstream>

#include "herding/error.hpp"
#include "herding/lattice.hpp"
#include "herding/sign_stream.hpp"

namespace herding::reference {

ExactResult enumerate_exact(const ModelParams& params, std::size_t n, double upsilon,
                            Method method) {
  if (n == 0 || n > 30) {
    std::ostringstream os;
    os << "reference enumeration supports 1 <= n <= 30 (got " << n << ")";
    throw ValidationError(os.str());
  }
  const StepContext ctx(params, n);
  const std::uint64_t paths = std::uint64_t{1} << n;
  ExactResult result;
  double sum = 0.0;
  std::vector<double> step_sums(n, 0.0);
  std::vector<double> per_step;
  for (std::uint64_t m = 0; m < paths; ++m) {
    const LatticePath path = simulate_path(params, n, signs_from_index(m, n), upsilon);
    sum += path_unfairness(method, path, params, &per_step);
    result.totals += drift_counts(path, ctx);
    for (std::size_t k = 0; k < n; ++k) step_sums[k] += per_step[k];
  }
  const double total = static_cast<double>(paths);
  auto& est = result.estimate;
  est.method = method;
  est.n = n;
  est.upsilon = upsilon;
  est.path_count = paths;
  est.value = method == Method::kLogIndicator
                  ? weighted_drift(result.totals, params, static_cast<double>(n) * total)
                  : sum / total;
  for (auto& s : step_sums) s /= total;
  est.per_step = std::move(step_sums);
  return result;
}

McReference monte_carlo(const ModelParams& params, std::size_t n, double upsilon,
                        std::uint64_t path_count, std::uint64_t seed, Method method) {
  if (path_count < 2) throw ValidationError("path_count must be >= 2");
  std::vector<double> contrib(path_count);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < path_count; ++i) {
    const LatticePath path = simulate_path(params, n, signs_from_seed({seed, i}, n), upsilon);
    contrib[i] = path_unfairness(method, path, params);
    sum += contrib[i];
  }
  const double count = static_cast<double>(path_count);
  McReference r;
  r.mean = sum / count;
  double q = 0.0;
  for (double x : contrib) q += (x - r.mean) * (x - r.mean);
  r.std_error = std::sqrt(q / (count - 1.0) / count);
  return r;
}

}  // namespace herding::reference
