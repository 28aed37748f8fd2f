#pragma once

#include <span>
#include <vector>

#include "chw/common.hpp"
#include "chw/op_tally.hpp"

namespace chw {

// Runs the cascade's task graph on a pool of `workers` threads, each task a
// Haar transform on its own slice.  Tasks become eligible only when their
// prerequisite completes and concurrent tasks touch disjoint slices, so the
// output is bit-identical to the serial transform for every worker count.
// Signals below the smallest cascade (m < 2) and workers == 1 run serially.
template <SampleValue T>
void parallel_execute_inplace(std::span<T> x, int workers, ScalingMode mode,
                              OpTally* tally = nullptr);

template <SampleValue T>
std::vector<T> parallel_execute(std::vector<T> x, int workers, ScalingMode mode,
                                OpTally* tally = nullptr);

}  // namespace chw
