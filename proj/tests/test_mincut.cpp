// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "coupling.hpp"
#include "dynamics.hpp"
#include "mincut.hpp"
#include "rng.hpp"

using namespace ztdyn;

namespace {

CouplingMatrix k3() { return CouplingMatrix::sample_constant(3, 1.0); }

// Two disjoint triangles on six vertices.
CouplingMatrix two_triangles() {
  std::vector<double> e(36, 0.0);
  auto link = [&](int a, int b) { e[a * 6 + b] = e[b * 6 + a] = 1.0; };
  link(0, 1);
  link(0, 2);
  link(1, 2);
  link(3, 4);
  link(3, 5);
  link(4, 5);
  return CouplingMatrix::from_dense(6, std::move(e));
}

Partition make_partition(std::vector<std::uint8_t> m) { return Partition{std::move(m)}; }

struct SpinTrace : StepObserver {
  std::vector<std::tuple<std::uint32_t, bool, std::int8_t>> events;
  std::vector<double> deltas;  // s_v * m_v at decision time
  void on_step(const StepRecord& rec) override {
    events.emplace_back(rec.site, rec.before != rec.after, rec.after);
    deltas.push_back(rec.field * rec.before);
  }
};

struct MoveTrace : MoveObserver {
  std::vector<std::tuple<std::uint32_t, bool, bool>> events;
  std::vector<double> deltas;
  void on_move(const MoveRecord& rec) override {
    events.emplace_back(rec.vertex, rec.moved, rec.now_in_a);
    deltas.push_back(rec.delta);
  }
};

}  // namespace

TEST_CASE("cut_value examples") {
  CHECK(cut_value(k3(), make_partition({0, 0, 0})) == 0.0);
  CHECK(cut_value(k3(), make_partition({1, 0, 0})) == 2.0);
  CHECK(cut_value(two_triangles(), make_partition({1, 1, 1, 0, 0, 0})) == 0.0);
}

TEST_CASE("is_local_mincut examples") {
  SUBCASE("trivial partition is locally minimal") {
    CHECK(is_local_mincut(k3(), make_partition({0, 0, 0})).local_min);
    CHECK(is_local_mincut(k3(), make_partition({1, 1, 1})).local_min);
  }
  SUBCASE("one triangle of two is a nontrivial local mincut") {
    const auto w = is_local_mincut(two_triangles(), make_partition({1, 1, 1, 0, 0, 0}));
    CHECK(w.local_min);
  }
  SUBCASE("singleton in K_3 has an improving vertex") {
    const auto w = is_local_mincut(k3(), make_partition({1, 0, 0}));
    CHECK_FALSE(w.local_min);
    REQUIRE(w.improving_vertex.has_value());
    CHECK(*w.improving_vertex == 0);
    CHECK(w.improvement == 2.0);
  }
}

TEST_CASE("greedy_search on two disjoint triangles stops immediately") {
  const auto out =
      greedy_search(two_triangles(), make_partition({1, 1, 1, 0, 0, 0}), 3, 1000);
  CHECK(out.status == SearchStatus::nontrivial_local_mincut);
  CHECK(out.final_cut == 0.0);
  CHECK(out.iterations == 0);
}

TEST_CASE("greedy_search on K_3 from a singleton terminates trivially in ~3 iterations") {
  // Exact chain: from |A| = 1 the expected number of iterations solves
  // T = 1 + (2/3) T, i.e. T = 3.
  double total_iters = 0;
  const int seeds = 4000;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto out = greedy_search(k3(), make_partition({1, 0, 0}), seed, 10000);
    REQUIRE(out.status == SearchStatus::trivial);
    total_iters += static_cast<double>(out.iterations);
  }
  CHECK(std::abs(total_iters / seeds - 3.0) < 0.2);
}

TEST_CASE("partition/spin bijections") {
  CHECK(partition_of_spins({1, 1, 1}).size_a() == 3);
  CHECK(partition_of_spins({-1, -1}).size_a() == 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = uniform_spins(19, seed);
    CHECK(spins_of_partition(partition_of_spins(s)) == s);
  }
  const auto p = uniform_partition(21, 7);
  CHECK(partition_of_spins(spins_of_partition(p)).membership == p.membership);
  CHECK(half_partition(30, 3).size_a() == 15);
  CHECK(half_partition(31, 3).size_a() == 15);
}

TEST_CASE("cut-energy identity is exact on Bernoulli instances") {
  // n H(s) = 2 CUT(A) - total_weight, all three integer-valued here.
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const std::uint32_t n = 8 + static_cast<std::uint32_t>(rng::derive(seed, 1) % 40);
    const auto J = CouplingMatrix::sample_bernoulli(n, 0.5, rng::derive(4, seed));
    const auto s = uniform_spins(n, rng::derive(5, seed));
    const double cut = cut_value(J, partition_of_spins(s));
    CHECK(interaction_sum(J, s) == J.total_weight() - 2.0 * cut);
  }
}

TEST_CASE("complement symmetry") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto J = CouplingMatrix::sample_bernoulli(24, 0.4, seed);
    auto part = uniform_partition(24, seed + 50);
    auto comp = part;
    for (auto& b : comp.membership) b ^= 1u;
    CHECK(cut_value(J, part) == cut_value(J, comp));
    CHECK(is_local_mincut(J, part).local_min == is_local_mincut(J, comp).local_min);
  }
}

TEST_CASE("local mincut agrees with the spin-side classification exhaustively") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto J = CouplingMatrix::sample_bernoulli(8, 0.5, rng::derive(11, seed));
    const auto census = enumerate_landscape(J);
    for (std::uint64_t idx = 0; idx < 256; ++idx) {
      const auto s = spins_from_index(8, idx);
      const bool lm = is_local_mincut(J, partition_of_spins(s)).local_min;
      const bool absorbing =
          census.classes[idx] != static_cast<std::uint8_t>(StateClass::none);
      CHECK(lm == absorbing);
    }
  }
}

TEST_CASE("greedy_search follows the spin dynamics in lockstep on matched streams") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto J = CouplingMatrix::sample_bernoulli(50, 0.5, rng::derive(21, seed));
    const auto s0 = uniform_spins(50, rng::derive(22, seed));
    const std::uint64_t stream_seed = rng::derive(23, seed);

    SpinTrace spin_trace;
    const auto spin_out = run(
        J, s0, RunOptions{ZeroFieldPolicy::fair_coin, 100000, stream_seed, 0}, &spin_trace);
    MoveTrace move_trace;
    const auto cut_out =
        greedy_search(J, partition_of_spins(s0), stream_seed, 100000, &move_trace);

    REQUIRE(spin_trace.events.size() == move_trace.events.size());
    for (std::size_t k = 0; k < spin_trace.events.size(); ++k) {
      const auto& [site, flipped, after] = spin_trace.events[k];
      const auto& [vertex, moved, in_a] = move_trace.events[k];
      REQUIRE(site == vertex);
      REQUIRE(flipped == moved);
      REQUIRE((after > 0) == in_a);
      // the cut change of moving v equals s_v * m_v
      REQUIRE(move_trace.deltas[k] == spin_trace.deltas[k]);
    }
    CHECK(spin_out.steps_taken == cut_out.iterations);
    CHECK(partition_of_spins(spin_out.final_state.spins).membership ==
          cut_out.final.membership);
    switch (spin_out.status) {
      case RunStatus::ground_plus:
      case RunStatus::ground_minus:
        CHECK(cut_out.status == SearchStatus::trivial);
        break;
      case RunStatus::strict_local_min:
        CHECK(cut_out.status == SearchStatus::nontrivial_local_mincut);
        break;
      case RunStatus::plateau: CHECK(cut_out.status == SearchStatus::plateau); break;
      case RunStatus::budget_exhausted:
        CHECK(cut_out.status == SearchStatus::budget_exhausted);
        break;
    }
  }
}

TEST_CASE("greedy_search argument checks") {
  CHECK_THROWS_AS(greedy_search(k3(), make_partition({1, 0}), 0, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(greedy_search(k3(), make_partition({1, 0, 0}), 0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cut_value(k3(), make_partition({1})), std::invalid_argument);
}
