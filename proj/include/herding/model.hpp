#pragma once

// Model parameters and the pure drift/feedback rules of the delay-feedback
// herding model. The log discounted price follows
//
//   dx = psi(x_t - sum_u p_u x_{(t-u) v 0}) dt + sigma db - sigma^2/2 dt,
//
// where psi is the two-level drift, switched off inside the dead zone
// |gap| < upsilon created by the transaction tax.
//
// The logarithmic discount rate r > 0 enters no equation of the model, so it
// is not represented here.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace herding {

enum class Scaling {
  kStandard,       // noise step sigma / sqrt(n): unit quadratic variation
  kPaperLiteral,   // noise step sigma / sqrt(2n), as written for the lattice
};

enum class LagRounding {
  kFloor,    // lag u maps to floor(u * n) steps
  kStrict,   // u * n must be an integer, otherwise validation error
};

std::string_view to_string(Scaling s);
Scaling parse_scaling(std::string_view text);
std::string_view to_string(LagRounding r);
LagRounding parse_lag_rounding(std::string_view text);

struct KernelEntry {
  double lag;     // in units of the time horizon [0, 1]
  double weight;

  friend bool operator==(const KernelEntry&, const KernelEntry&) = default;
};

/// Finite convex combination of positive lags.
class DelayKernel {
 public:
  static constexpr double kWeightSumTolerance = 1e-12;

  /// Throws ValidationError unless lags are distinct and > 0, weights > 0, and
  /// the weights sum to 1 within kWeightSumTolerance.
  explicit DelayKernel(std::vector<KernelEntry> entries);

  /// Single lag carrying all the weight.
  static DelayKernel single(double lag);

  std::span<const KernelEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const DelayKernel&, const DelayKernel&) = default;

 private:
  std::vector<KernelEntry> entries_;
};

/// A lag resolved against a mesh: how many grid steps back it reaches.
struct ResolvedLag {
  std::size_t steps;
  double weight;
};

/// Maps each lag to a whole number of steps on a mesh of n steps over [0, 1].
/// Products u * n within 1e-9 (relative) of an integer count as exact.
std::vector<ResolvedLag> resolve_lags(const DelayKernel& kernel, std::size_t n,
                                      LagRounding rounding);

struct ModelParamsInit {
  double alpha_up = 1.0;
  double alpha_down = -1.0;
  double alpha_zero = 0.0;
  double sigma = 1.0;
  DelayKernel kernel = DelayKernel::single(1.0);
  double x0 = 0.0;
  Scaling scaling = Scaling::kStandard;
  LagRounding lag_rounding = LagRounding::kFloor;
};

/// Validated, immutable model parameters.
class ModelParams {
 public:
  /// Throws ValidationError unless alpha_up > 0, alpha_down < 0, sigma >= 0 and
  /// every value is finite. sigma = 0 gives the deterministic drift-only model.
  explicit ModelParams(ModelParamsInit init);
  ModelParams() : ModelParams(ModelParamsInit{}) {}

  double alpha_up() const { return v_.alpha_up; }
  double alpha_down() const { return v_.alpha_down; }
  double alpha_zero() const { return v_.alpha_zero; }
  double sigma() const { return v_.sigma; }
  const DelayKernel& kernel() const { return v_.kernel; }
  double x0() const { return v_.x0; }
  Scaling scaling() const { return v_.scaling; }
  LagRounding lag_rounding() const { return v_.lag_rounding; }

  const ModelParamsInit& fields() const { return v_; }

  /// Copy with some fields replaced; re-validated.
  ModelParams with_x0(double x0) const;
  ModelParams with_scaling(Scaling s) const;

  /// Noise amplitude per step: sigma / sqrt(n) or sigma / sqrt(2n).
  double noise_step(std::size_t n) const;
  /// Compensator magnitude per step, sigma^2 / (2n).
  double compensator(std::size_t n) const;

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    const auto& x = a.v_;
    const auto& y = b.v_;
    return x.alpha_up == y.alpha_up && x.alpha_down == y.alpha_down &&
           x.alpha_zero == y.alpha_zero && x.sigma == y.sigma && x.kernel == y.kernel &&
           x.x0 == y.x0 && x.scaling == y.scaling && x.lag_rounding == y.lag_rounding;
  }

 private:
  ModelParamsInit v_;
};

/// Tax inputs. The threshold is upsilon = holding_time * rho; sweeps study tax
/// rates in [0, sweep_max], i.e. thresholds in [0, holding_time * sweep_max].
struct TaxSpec {
  double rho = 0.0;
  double holding_time = 1.0;
  double sweep_max = 0.0;

  double upsilon() const;
  double upsilon_max() const { return holding_time * sweep_max; }
};

/// upsilon = T * rho. Throws ValidationError for rho < 0 or T <= 0.
double threshold_from_tax(double rho, double holding_time);

/// Which branch of the drift rule fired for a given gap.
enum class DriftBranch { kNone, kUp, kDown, kZero };

DriftBranch drift_branch(double gap, double upsilon);

/// Thresholded drift level: alpha_up when gap >= upsilon and gap > 0,
/// alpha_down when gap <= -upsilon and gap < 0, alpha_zero at gap = upsilon = 0,
/// and 0 inside the dead zone. The boundary |gap| = upsilon fires.
double psi(double gap, double upsilon, const ModelParams& params);

double drift_level(DriftBranch branch, const ModelParams& params);

/// Gap D_k = X_k - sum_u p_u X_{max(k - steps_u, 0)}, evaluated as the
/// weighted sum of differences so that D_0 = 0 exactly and a constant shift of
/// the path cancels term by term.
double delay_gap(std::span<const double> values, std::size_t k,
                 std::span<const ResolvedLag> lags);

}  // namespace herding
