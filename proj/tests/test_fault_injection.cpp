#include <algorithm>

#include "doctest.h"
#include "herding/verify.hpp"

using namespace herding;

// Linked against a core built with the compensator sign flipped.
TEST_CASE("verify catches a flipped compensator") {
  const VerifyReport report = run_verify(VerifyLevel::kQuick, 4);
  CHECK_FALSE(report.passed());
  auto failed = [&](const char* name) {
    return std::any_of(report.suites.begin(), report.suites.end(),
                       [&](const SuiteResult& s) { return s.name == name && !s.passed; });
  };
  CHECK(failed("formula-equivalence"));
  CHECK(failed("martingale-limit"));
}
