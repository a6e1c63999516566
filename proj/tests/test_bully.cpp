// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <set>
#include <stdexcept>
#include <vector>

#include "bully.hpp"
#include "coupling.hpp"
#include "dynamics.hpp"
#include "rng.hpp"

using namespace ztdyn;

namespace {

CouplingMatrix triple(double j01, double j02, double j12) {
  std::vector<double> e(9, 0.0);
  e[0 * 3 + 1] = e[1 * 3 + 0] = j01;
  e[0 * 3 + 2] = e[2 * 3 + 0] = j02;
  e[1 * 3 + 2] = e[2 * 3 + 1] = j12;
  return CouplingMatrix::from_dense(3, std::move(e));
}

CouplingMatrix two_pairs() {
  std::vector<double> e(16, 0.1);
  for (int i = 0; i < 4; ++i) e[i * 4 + i] = 0.0;
  e[0 * 4 + 1] = e[1 * 4 + 0] = 10.0;
  e[2 * 4 + 3] = e[3 * 4 + 2] = 10.0;
  return CouplingMatrix::from_dense(4, std::move(e));
}

struct FrozenCheck : StepObserver {
  std::set<std::uint32_t> guarded;
  bool violated = false;
  void on_step(const StepRecord& rec) override {
    if (rec.before != rec.after && guarded.count(rec.site)) violated = true;
  }
};

}  // namespace

TEST_CASE("is_bully_bond examples") {
  const auto J = triple(5.0, 1.0, 2.0);
  CHECK(is_bully_bond(J, 0, 1));       // 5 > max{1, 2}
  CHECK_FALSE(is_bully_bond(J, 0, 2)); // 1 > max{5, 2} fails
  CHECK_FALSE(is_bully_bond(J, 1, 2));
  // vacuous competing sums on two sites
  const auto j2 = CouplingMatrix::from_dense(2, {0, 1, 1, 0});
  CHECK(is_bully_bond(j2, 0, 1));
  CHECK(is_bully_bond(j2, 1, 0));
  CHECK_THROWS_AS(is_bully_bond(J, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(is_bully_bond(J, 0, 7), std::invalid_argument);
}

TEST_CASE("bully_census examples") {
  SUBCASE("unweighted complete graphs have no bully bonds for n >= 3") {
    for (std::uint32_t n : {3u, 4u, 6u})
      CHECK(bully_census(CouplingMatrix::sample_constant(n, 1.0)).empty());
  }
  SUBCASE("two dominant pairs") {
    const auto census = bully_census(two_pairs());
    REQUIRE(census.size() == 2);
    CHECK(census[0].i == 0);
    CHECK(census[0].j == 1);
    CHECK(census[1].i == 2);
    CHECK(census[1].j == 3);
    CHECK(census[0].strength == 10.0);
    CHECK(census[0].competing_sum_i == doctest::Approx(0.2));
    CHECK(census[0].competing_sum_j == doctest::Approx(0.2));
  }
}

TEST_CASE("census bonds never share a vertex and fit within n/2") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto J = CouplingMatrix::sample_pareto(40, 0.5, 1.0, rng::derive(31, seed));
    const auto census = bully_census(J);
    CHECK(census.size() <= 20);
    std::set<std::uint32_t> touched;
    for (const auto& b : census) {
      CHECK(is_bully_bond(J, b.i, b.j));
      CHECK(!touched.count(b.i));
      CHECK(!touched.count(b.j));
      touched.insert(b.i);
      touched.insert(b.j);
    }
  }
}

TEST_CASE("heavy-tailed census is populous at alpha = 1/2") {
  // Pilot-calibrated floor: at n=200 the mean census size sits near 0.19n,
  // far above the 0.01n requirement, and no seed comes up empty.
  std::uint64_t nonempty = 0;
  double total = 0;
  const int seeds = 200;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto J = CouplingMatrix::sample_pareto(200, 0.5, 1.0, rng::derive(71, seed));
    const auto census = bully_census(J);
    nonempty += !census.empty();
    total += static_cast<double>(census.size());
  }
  CHECK(total / seeds >= 0.01 * 200);
  CHECK(nonempty >= 180);
}

TEST_CASE("bully status is monotone in the defining inequality") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto J = CouplingMatrix::sample_pareto(16, 0.5, 1.0, rng::derive(41, seed));
    std::vector<double> e(16ull * 16);
    for (std::uint32_t i = 0; i < 16; ++i)
      for (std::uint32_t j = 0; j < 16; ++j) e[i * 16 + j] = J.entry(i, j);

    // growing J_01 never destroys (0,1)'s status
    if (is_bully_bond(J, 0, 1)) {
      auto e2 = e;
      e2[0 * 16 + 1] = e2[1 * 16 + 0] = J.entry(0, 1) * 10;
      CHECK(is_bully_bond(CouplingMatrix::from_dense(16, e2), 0, 1));
    }
    // growing another entry in row 0 never creates (0,1)'s status
    if (!is_bully_bond(J, 0, 1)) {
      auto e2 = e;
      e2[0 * 16 + 2] = e2[2 * 16 + 0] = J.entry(0, 2) + 100;
      CHECK_FALSE(is_bully_bond(CouplingMatrix::from_dense(16, e2), 0, 1));
    }
  }
}

TEST_CASE("witness_local_minimum examples") {
  const auto J = two_pairs();
  const auto census = bully_census(J);
  REQUIRE(census.size() == 2);
  SUBCASE("witness is a strict local minimum here") {
    const auto w = witness_local_minimum(J, census[0], census[1], +1);
    CHECK(w == SpinConfig{1, 1, -1, -1});
    CHECK(is_absorbing(J, w) == StateClass::strict_local_min);
  }
  SUBCASE("global spin flip is also a strict local minimum") {
    const auto w = witness_local_minimum(J, census[1], census[0], -1);
    CHECK(w == SpinConfig{-1, -1, 1, 1});
    CHECK(is_absorbing(J, w) == StateClass::strict_local_min);
  }
  SUBCASE("rejects overlapping or fake bonds") {
    BullyBond shared = census[0];
    CHECK_THROWS_AS(witness_local_minimum(J, census[0], shared, +1),
                    std::invalid_argument);
    BullyBond fake{0, 2, J.entry(0, 2), 0, 0};
    CHECK_THROWS_AS(witness_local_minimum(J, fake, census[1], +1),
                    std::invalid_argument);
  }
}

TEST_CASE("satisfied bully endpoints stay frozen along runs") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10 && seed < 200; ++seed) {
    const auto J = CouplingMatrix::sample_pareto(60, 0.5, 1.0, rng::derive(51, seed));
    const auto census = bully_census(J);
    if (census.size() < 2) continue;
    ++checked;
    const auto w = witness_local_minimum(J, census[0], census[1], +1);
    FrozenCheck frozen;
    frozen.guarded = {census[0].i, census[0].j, census[1].i, census[1].j};
    run(J, w, RunOptions{ZeroFieldPolicy::fair_coin, 0, seed, 0}, &frozen);
    CHECK_FALSE(frozen.violated);
  }
  CHECK(checked == 10);
}

TEST_CASE("two opposite frozen pairs preclude uniform absorption") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10 && seed < 200; ++seed) {
    const auto J = CouplingMatrix::sample_pareto(48, 0.5, 1.0, rng::derive(61, seed));
    const auto census = bully_census(J);
    if (census.size() < 2) continue;
    ++checked;
    const auto w = witness_local_minimum(J, census[0], census[1], +1);
    const auto out = run(J, w, RunOptions{ZeroFieldPolicy::fair_coin, 0, seed + 7, 0});
    CHECK(out.status != RunStatus::ground_plus);
    CHECK(out.status != RunStatus::ground_minus);
  }
  CHECK(checked == 10);
}
