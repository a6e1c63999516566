// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coupling.hpp"
#include "dynamics.hpp"

namespace ztdyn {

// Vertex subset A of {0,...,n-1}; membership[i] != 0 means i in A.
struct Partition {
  std::vector<std::uint8_t> membership;

  std::uint32_t n() const { return static_cast<std::uint32_t>(membership.size()); }
  std::uint32_t size_a() const;
  bool trivial() const;  // A empty or full
};

enum class SearchStatus { trivial, nontrivial_local_mincut, plateau, budget_exhausted };

const char* search_status_name(SearchStatus s);

struct SearchOutcome {
  Partition final;
  SearchStatus status = SearchStatus::budget_exhausted;
  std::uint64_t iterations = 0;
  std::uint64_t moves = 0;
  double final_cut = 0.0;
};

// CUT(A) = sum_{i in A, j not in A} J_ij.
double cut_value(const CouplingMatrix& J, const Partition& part);

struct MincutWitness {
  bool local_min = true;
  // An improving vertex when local_min is false: moving it strictly lowers
  // the cut by |improvement|.
  std::optional<std::uint32_t> improving_vertex;
  double improvement = 0.0;
};

// Non-strict local minimality: every single-vertex move weakly increases the
// cut.
MincutWitness is_local_mincut(const CouplingMatrix& J, const Partition& part);

struct MoveRecord {
  std::uint64_t t;
  std::uint32_t vertex;
  double delta;  // cut change of moving the vertex
  bool moved;
  bool now_in_a;
};

struct MoveObserver {
  virtual ~MoveObserver() = default;
  virtual void on_move(const MoveRecord& rec) = 0;
};

// Greedy local MINCUT search: per iteration one uniform vertex draw and one
// coin draw; the vertex moves if that strictly lowers the cut, and on a tie
// the coin sends it to A (+1) or A^c (-1).  This is the spin dynamics in
// partition coordinates: with the same seed it consumes the stream exactly
// like run() under the fair-coin policy and follows the identical
// trajectory.
SearchOutcome greedy_search(const CouplingMatrix& J, Partition start, std::uint64_t seed,
                            std::uint64_t max_iters, MoveObserver* observer = nullptr);

// A <-> {i : s_i = +1}; mutually inverse.
Partition partition_of_spins(const SpinConfig& s);
SpinConfig spins_of_partition(const Partition& part);

Partition uniform_partition(std::uint32_t n, std::uint64_t seed);
// |A| = floor(n/2), uniformly placed.
Partition half_partition(std::uint32_t n, std::uint64_t seed);

}  // namespace ztdyn
