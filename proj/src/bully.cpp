// SPDX-License-Identifier: Apache-2.0
#include "bully.hpp"

#include <stdexcept>

namespace ztdyn {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool bully_from_row_sums(const CouplingMatrix& J, std::uint32_t i, std::uint32_t j,
                         double row_sum_i, double row_sum_j, BullyBond* out) {
  const double v = J.entry(i, j);
  if (v <= 0.0) return false;
  const double rest_i = row_sum_i - v;
  const double rest_j = row_sum_j - v;
  if (v > rest_i && v > rest_j) {
    if (out) *out = {std::min(i, j), std::max(i, j), v, rest_i, rest_j};
    return true;
  }
  return false;
}

}  // namespace

bool is_bully_bond(const CouplingMatrix& J, std::uint32_t i, std::uint32_t j) {
  require(i < J.n() && j < J.n(), "is_bully_bond: index out of range");
  require(i != j, "is_bully_bond: i and j must differ");
  return bully_from_row_sums(J, i, j, J.row_sum(i), J.row_sum(j), nullptr);
}

std::vector<BullyBond> bully_census(const CouplingMatrix& J) {
  const std::uint32_t n = J.n();
  std::vector<double> row_sums(n);
  for (std::uint32_t i = 0; i < n; ++i) row_sums[i] = J.row_sum(i);
  std::vector<BullyBond> census;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      BullyBond b;
      if (bully_from_row_sums(J, i, j, row_sums[i], row_sums[j], &b))
        census.push_back(b);
    }
  }
  return census;
}

SpinConfig witness_local_minimum(const CouplingMatrix& J, const BullyBond& b1,
                                 const BullyBond& b2, std::int8_t background) {
  require(background == 1 || background == -1,
          "witness_local_minimum: background must be +-1");
  require(b1.i != b2.i && b1.i != b2.j && b1.j != b2.i && b1.j != b2.j,
          "witness_local_minimum: bonds share a vertex");
  require(is_bully_bond(J, b1.i, b1.j) && is_bully_bond(J, b2.i, b2.j),
          "witness_local_minimum: pair is not a bully bond of this matrix");
  SpinConfig s(J.n(), background);
  s[b1.i] = 1;
  s[b1.j] = 1;
  s[b2.i] = -1;
  s[b2.j] = -1;
  return s;
}

}  // namespace ztdyn
