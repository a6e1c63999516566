// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "coupling.hpp"
#include "dynamics.hpp"

namespace ztdyn {

// A coupling that outweighs all remaining couplings at both endpoints; such
// a pair is dynamically frozen once its spins agree.
struct BullyBond {
  std::uint32_t i = 0, j = 0;  // i < j
  double strength = 0.0;       // J_ij
  double competing_sum_i = 0.0;  // sum_{k not in {i,j}} J_ik
  double competing_sum_j = 0.0;  // sum_{k not in {i,j}} J_jk
};

// J_ij > both competing sums (couplings are non-negative, so no absolute
// values are needed).
bool is_bully_bond(const CouplingMatrix& J, std::uint32_t i, std::uint32_t j);

// All bully bonds in pair order.  Disjointness is automatic: two bully bonds
// cannot share a vertex, so the census has at most n/2 entries.
std::vector<BullyBond> bully_census(const CouplingMatrix& J);

// b1's endpoints at +1, b2's at -1, everything else at `background`.  The
// four endpoints are strictly satisfied by the bully inequality and the
// configuration is non-uniform; whether the background sites also hold is
// checked by the caller (is_absorbing), never assumed.
SpinConfig witness_local_minimum(const CouplingMatrix& J, const BullyBond& b1,
                                 const BullyBond& b2, std::int8_t background);

}  // namespace ztdyn
