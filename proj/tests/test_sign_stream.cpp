#include <cmath>
#include <numeric>

#include "doctest.h"
#include "herding/sign_stream.hpp"

using namespace herding;

TEST_CASE("mix64 is the SplitMix64 finalizer") {
  // First output of SplitMix64 seeded with 0.
  CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
  static_assert(mix64(0) == 0);
}

TEST_CASE("streams are deterministic") {
  const SignSource src{12345, 17};
  CHECK(signs_from_seed(src, 500) == signs_from_seed(src, 500));
  CHECK(signs_from_seed(src, 0).empty());
  const auto s = signs_from_seed(src, 100);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(s[k] == sign_at(src, k));
  // A prefix of a longer stream is the shorter stream.
  const auto longer = signs_from_seed(src, 300);
  CHECK(std::equal(s.begin(), s.end(), longer.begin()));
}

TEST_CASE("neighbouring streams differ and are balanced") {
  CHECK(signs_from_seed({99, 0}, 64) != signs_from_seed({99, 1}, 64));
  CHECK(signs_from_seed({99, 0}, 64) != signs_from_seed({100, 0}, 64));

  const std::size_t n = 1000000;
  for (std::uint64_t idx : {0ULL, 1ULL, 2ULL}) {
    const auto s = signs_from_seed({2024, idx}, n);
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
  }

  // Cross-correlation of adjacent streams at the same step.
  const auto a = signs_from_seed({2024, 0}, n);
  const auto b = signs_from_seed({2024, 1}, n);
  double corr = 0.0;
  for (std::size_t k = 0; k < n; ++k) corr += a[k] * b[k];
  CHECK(std::abs(corr / static_cast<double>(n)) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("each step position is balanced across streams") {
  const std::size_t paths = 40000;
  for (std::uint64_t step : {0ULL, 1ULL, 63ULL, 999ULL}) {
    double sum = 0.0;
    for (std::uint64_t p = 0; p < paths; ++p) sum += sign_at({5, p}, step);
    CHECK(std::abs(sum / paths) <= 4.0 / std::sqrt(static_cast<double>(paths)));
  }
}

TEST_CASE("natural binary order of sign sequences") {
  using V = std::vector<Sign>;
  CHECK(signs_from_index(0, 3) == V{-1, -1, -1});
  CHECK(signs_from_index(1, 3) == V{-1, -1, 1});
  CHECK(signs_from_index(4, 3) == V{1, -1, -1});
  CHECK(signs_from_index(7, 3) == V{1, 1, 1});
  CHECK(signs_from_index(0, 0).empty());
}
