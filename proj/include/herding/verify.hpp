#pragma once

// Built-in invariant suites, run by `herding verify`.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "herding/model.hpp"

namespace herding {

enum class VerifyLevel { kQuick, kFull };

VerifyLevel parse_verify_level(const std::string& text);

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string detail;
  /// Observations reported but not failed on.
  std::vector<std::string> flags;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

VerifyReport run_verify(VerifyLevel level, int workers = 1);

/// Deterministic pseudo-random model configuration number `index` for mesh n:
/// drift levels in [0.25, 3] in magnitude, sigma in [0.3, 2], one to three lags
/// on multiples of 1/n, random scaling and x0 in [-1, 1].
struct SampledConfig {
  ModelParams params;
  double upsilon;
};

SampledConfig sample_config(std::uint64_t seed, std::uint64_t index, std::size_t n,
                            bool random_alpha_zero = false);

/// Uniform double in [0, 1) from a counter, platform independent.
double unit_uniform(std::uint64_t seed, std::uint64_t counter);

}  // namespace herding
