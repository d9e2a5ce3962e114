#include <cmath>
#include <vector>

#include "doctest.h"
#include "herding/error.hpp"
#include "herding/model.hpp"
#include "herding/verify.hpp"

using namespace herding;

namespace {

ModelParams two_level(double up, double down, double zero = 0.0) {
  ModelParamsInit init;
  init.alpha_up = up;
  init.alpha_down = down;
  init.alpha_zero = zero;
  return ModelParams(init);
}

}  // namespace

TEST_CASE("threshold_from_tax is the product T * rho") {
  CHECK(threshold_from_tax(0.02, 10) == 10 * 0.02);
  CHECK(threshold_from_tax(0.02, 10) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(threshold_from_tax(0.0, 10) == 0.0);
  CHECK(threshold_from_tax(0.001, 250) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(threshold_from_tax(-0.01, 10), ValidationError);
  CHECK_THROWS_AS(threshold_from_tax(0.01, 0), ValidationError);
  CHECK_THROWS_AS(threshold_from_tax(0.01, -2), ValidationError);

  TaxSpec tax{0.001, 250, 0.002};
  CHECK(tax.upsilon() == threshold_from_tax(0.001, 250));
  CHECK(tax.upsilon_max() == 250 * 0.002);
}

TEST_CASE("psi fires outside the dead zone, boundary inclusive") {
  const auto p = two_level(0.5, -0.8);
  CHECK(psi(0.2, 0.1, p) == 0.5);
  CHECK(psi(0.05, 0.1, p) == 0.0);
  CHECK(psi(-0.1, 0.1, p) == -0.8);
  CHECK(psi(0.1, 0.1, p) == 0.5);
  CHECK(psi(-0.05, 0.1, p) == 0.0);
  CHECK(psi(0.0, 0.0, p) == 0.0);
  CHECK(psi(0.0, 0.1, p) == 0.0);
  CHECK_THROWS_AS(psi(0.3, -0.1, p), ValidationError);
}

TEST_CASE("psi at zero gap uses the configured alpha_zero only when upsilon is 0") {
  const auto p = two_level(1.0, -1.0, 0.3);
  CHECK(psi(0.0, 0.0, p) == 0.3);
  CHECK(psi(0.0, 1e-9, p) == 0.0);
  CHECK(drift_branch(0.0, 0.0) == DriftBranch::kZero);
}

TEST_CASE("psi with zero threshold is alpha(sign d)") {
  const auto p = two_level(1.7, -0.4);
  for (double d : {1e-300, 1e-9, 0.3, 12.0}) {
    CHECK(psi(d, 0.0, p) == 1.7);
    CHECK(psi(-d, 0.0, p) == -0.4);
  }
}

TEST_CASE("|psi| is nonincreasing in the threshold") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto p = two_level(0.1 + 3 * unit_uniform(1, 4 * i), -0.1 - 3 * unit_uniform(1, 4 * i + 1));
    const double d = 4 * unit_uniform(1, 4 * i + 2) - 2;
    double previous = std::abs(psi(d, 0.0, p));
    for (int j = 1; j <= 40; ++j) {
      const double current = std::abs(psi(d, 0.05 * j, p));
      CHECK(current <= previous);
      previous = current;
    }
  }
}

TEST_CASE("kernel validation") {
  CHECK_NOTHROW(DelayKernel({{0.25, 0.5}, {0.5, 0.5}}));
  CHECK_NOTHROW(DelayKernel({{0.25, 0.5}, {0.5, 0.5 - 1e-13}}));
  CHECK_THROWS_WITH_AS(DelayKernel({{0.25, 0.5}, {0.5, 0.4}}),
                       doctest::Contains("sum to 1"), ValidationError);
  CHECK_THROWS_AS(DelayKernel({{0.25, 0.5}, {0.5, 0.5 - 1e-11}}), ValidationError);
  CHECK_THROWS_AS(DelayKernel({{0.25, 0.5}, {0.25, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DelayKernel({{0.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DelayKernel({{-0.5, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DelayKernel({{0.5, 1.2}, {0.7, -0.2}}), ValidationError);
  CHECK_THROWS_AS(DelayKernel(std::vector<KernelEntry>{}), ValidationError);
}

TEST_CASE("model parameter validation") {
  ModelParamsInit init;
  CHECK_NOTHROW(ModelParams{init});
  init.alpha_up = 0.0;
  CHECK_THROWS_AS(ModelParams{init}, ValidationError);
  init = {};
  init.alpha_down = 0.0;
  CHECK_THROWS_AS(ModelParams{init}, ValidationError);
  init = {};
  init.sigma = -1.0;
  CHECK_THROWS_AS(ModelParams{init}, ValidationError);
  init = {};
  init.sigma = 0.0;
  CHECK_NOTHROW(ModelParams{init});
  init = {};
  init.x0 = NAN;
  CHECK_THROWS_AS(ModelParams{init}, ValidationError);
}

TEST_CASE("lag resolution") {
  const DelayKernel k({{0.25, 0.5}, {0.5, 0.5}});
  auto r = resolve_lags(k, 4, LagRounding::kStrict);
  CHECK(r[0].steps == 1);
  CHECK(r[1].steps == 2);

  r = resolve_lags(k, 10, LagRounding::kFloor);
  CHECK(r[0].steps == 2);
  CHECK(r[1].steps == 5);
  CHECK_THROWS_AS(resolve_lags(k, 10, LagRounding::kStrict), ValidationError);

  // 0.29 * 100 is 28.999999999999996 in binary floating point.
  r = resolve_lags(DelayKernel::single(0.29), 100, LagRounding::kStrict);
  CHECK(r[0].steps == 29);

  r = resolve_lags(DelayKernel::single(0.01), 12, LagRounding::kFloor);
  CHECK(r[0].steps == 0);
}

TEST_CASE("delay gap") {
  const std::vector<double> x{0, 0.3, 0.1, -0.2, 0.4};
  const auto lags = resolve_lags(DelayKernel({{0.25, 0.5}, {0.5, 0.5}}), 4, LagRounding::kStrict);
  CHECK(delay_gap(x, 3, lags) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(delay_gap(x, 0, lags) == 0.0);

  // Every lag reaches at least k/n back: the gap is X_k - X_0.
  const auto far = resolve_lags(DelayKernel({{0.75, 0.3}, {2.0, 0.7}}), 4, LagRounding::kFloor);
  for (std::size_t k = 0; k <= 3; ++k)
    CHECK(delay_gap(x, k, far) == doctest::Approx(x[k] - x[0]).epsilon(1e-15));
}

TEST_CASE("delay gap is invariant under shifting the whole path") {
  const auto lags =
      resolve_lags(DelayKernel({{0.1, 0.2}, {0.35, 0.3}, {0.6, 0.5}}), 20, LagRounding::kFloor);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    std::vector<double> x(21);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 2 * unit_uniform(7, trial * 64 + i) - 1;
    const double c = 10 * unit_uniform(8, trial) - 5;
    std::vector<double> shifted = x;
    for (auto& v : shifted) v += c;
    for (std::size_t k = 0; k < x.size(); ++k)
      CHECK(std::abs(delay_gap(x, k, lags) - delay_gap(shifted, k, lags)) <= 1e-12);
  }
}
