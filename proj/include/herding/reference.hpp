#pragma once

// Serial reference implementations. They go path by path through the public
// lattice and unfairness operations, with no tree sharing, blocking or
// threads, and exist to check the parallel kernels and to benchmark them.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "herding/exact_enum.hpp"
#include "herding/model.hpp"
#include "herding/unfairness.hpp"

namespace herding::reference {

/// Same contract as enumerate_exact: sequential sum over sign sequences in
/// natural binary order.
ExactResult enumerate_exact(const ModelParams& params, std::size_t n, double upsilon,
                            Method method);

/// Plain mean and sample standard error of per-path contributions over
/// path indices 0..path_count-1 of the given seed.
struct McReference {
  double mean = 0.0;
  double std_error = 0.0;
};

McReference monte_carlo(const ModelParams& params, std::size_t n, double upsilon,
                        std::uint64_t path_count, std::uint64_t seed, Method method);

}  // namespace herding::reference
