// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>

namespace ztdyn::stats {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact (Clopper-Pearson) binomial confidence interval.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                         double confidence = 0.95);

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t count = 0;
};

MeanSE mean_se(std::span<const double> values);

// mean +- z * se with the two-sided normal quantile for `confidence`.
Interval normal_ci(const MeanSE& m, double confidence = 0.95);

}  // namespace ztdyn::stats
