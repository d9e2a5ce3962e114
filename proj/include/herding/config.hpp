#pragma once

// Run configuration: one JSON document with "model", "tax" and "run" objects.
//
//   {
//     "model": {"alpha_up": 1, "alpha_down": -1, "alpha_zero": 0, "sigma": 1,
//               "kernel": [[0.25, 0.5], [0.5, 0.5]], "x0": 0,
//               "scaling": "standard", "lag_rounding": "floor"},
//     "tax":   {"rho_grid": "0:0.15:11", "holding_time": 10, "sweep_max": 0.15},
//     "run":   {"n": 12, "path_count": 100000, "master_seed": 7,
//               "method": "log-indicator", "workers": 4}
//   }
//
// Grids are arrays of numbers, comma lists, or START:STOP:COUNT shorthand
// (inclusive, evenly spaced). Every field is optional; defaults are those of
// ModelParamsInit, TaxSpec and RunSettings.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herding/model.hpp"
#include "herding/unfairness.hpp"

namespace herding {

struct TaxSettings {
  std::optional<double> rho;
  std::optional<std::vector<double>> rho_grid;
  std::optional<std::vector<double>> upsilon_grid;
  double holding_time = 1.0;
  /// Upper bound S of the tax rates under study; thresholds then live in
  /// [0, holding_time * S].
  std::optional<double> sweep_max;

  friend bool operator==(const TaxSettings&, const TaxSettings&) = default;
};

struct RunSettings {
  std::size_t n = 12;
  std::uint64_t path_count = 10000;
  std::uint64_t master_seed = 1;
  Method method = Method::kLogIndicator;
  int workers = 1;

  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct RunConfig {
  ModelParams model;
  TaxSettings tax;
  RunSettings run;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ValidationError on malformed JSON, unknown keys or any failed model
/// invariant.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);  // IoError when unreadable
std::string serialize_config(const RunConfig& config);

/// "a:b:count" (inclusive, even spacing) or "x1,x2,..." .
std::vector<double> parse_grid(std::string_view text);

/// Threshold grid of a configuration, with the matching tax rates when the
/// grid came from rho values (upsilon = T * rho) or from upsilon values
/// (rho = upsilon / T). Validates ascending order and the [0, S] bound.
struct ThresholdGrid {
  std::vector<double> upsilon;
  std::vector<double> rho;
};

ThresholdGrid resolve_grid(const RunConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace herding
