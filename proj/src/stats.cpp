// SPDX-License-Identifier: Apache-2.0
#include "stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

namespace ztdyn::stats {

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                         double confidence) {
  if (trials == 0 || successes > trials)
    throw std::invalid_argument("clopper_pearson: bad counts");
  const double a = (1.0 - confidence) / 2.0;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  Interval ci;
  ci.lo = successes == 0
              ? 0.0
              : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), a);
  ci.hi = successes == trials
              ? 1.0
              : boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k),
                                      1.0 - a);
  return ci;
}

MeanSE mean_se(std::span<const double> values) {
  MeanSE m;
  m.count = values.size();
  if (m.count == 0) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.count);
  if (m.count < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  const double var = ss / static_cast<double>(m.count - 1);
  m.se = std::sqrt(var / static_cast<double>(m.count));
  return m;
}

Interval normal_ci(const MeanSE& m, double confidence) {
  const double z =
      boost::math::quantile(boost::math::normal_distribution<>(), 1.0 - (1.0 - confidence) / 2.0);
  return {m.mean - z * m.se, m.mean + z * m.se};
}

}  // namespace ztdyn::stats
