// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coupling.hpp"

namespace ztdyn {

// Chain state sigma in {-1,+1}^n.
using SpinConfig = std::vector<std::int8_t>;

enum class ZeroFieldPolicy { fair_coin, always_minus, always_plus };

enum class RunStatus {
  ground_plus,
  ground_minus,
  strict_local_min,
  plateau,
  budget_exhausted,
};

enum class StateClass {
  ground_plus,
  ground_minus,
  strict_local_min,
  plateau_member,
  none,
};

const char* run_status_name(RunStatus s);
const char* state_class_name(StateClass c);

// Spin configuration plus cached effective fields m_i = sum_{j!=i} J_ij s_j,
// magnetization, step counter and satisfaction tallies.  For 0/1 couplings
// every cached field is an exact small integer, so == comparisons are safe.
struct DynamicsState {
  SpinConfig spins;
  std::vector<double> fields;
  std::int64_t magnetization = 0;
  std::uint64_t step = 0;
  std::uint32_t unsat_count = 0;  // sites with s_i * m_i < 0
  std::uint32_t zero_count = 0;   // sites with m_i == 0
};

// Full recomputation; the authoritative definition the incremental cache is
// checked against.
std::vector<double> compute_fields(const CouplingMatrix& J, const SpinConfig& s);

DynamicsState make_state(const CouplingMatrix& J, SpinConfig s);

// Recompute fields and tallies in place from the spins.
void refresh_state(DynamicsState& st, const CouplingMatrix& J);

// sum_{i<j} J_ij s_i s_j; exact (integer-valued) for unit-weight couplings.
double interaction_sum(const CouplingMatrix& J, const SpinConfig& s);

// H(s) = -(1/n) sum_{i<j} J_ij s_i s_j.
double energy(const CouplingMatrix& J, const SpinConfig& s);

// sign(m_i) * s_i with sign(0) = 0.
int satisfaction(const DynamicsState& st, std::uint32_t i);

struct StepResult {
  bool flipped = false;
  bool strict = false;  // energy strictly decreased
};

// Single update at `site`: flips on s_i*m_i < 0; at m_i == 0 the coin value
// becomes the spin.  Increments the step counter whether or not a flip
// happens.
StepResult step(DynamicsState& st, const CouplingMatrix& J, std::uint32_t site, int coin);

StateClass is_absorbing(const CouplingMatrix& J, const SpinConfig& s);

struct StepRecord {
  std::uint64_t t;      // 1-based step index
  std::uint32_t site;
  double field;         // m_site before the update
  std::int8_t before;
  std::int8_t after;
};

struct StepObserver {
  virtual ~StepObserver() = default;
  virtual void on_step(const StepRecord& rec) = 0;
};

struct RunOptions {
  ZeroFieldPolicy policy = ZeroFieldPolicy::fair_coin;
  std::uint64_t max_steps = 0;  // 0 => default_max_steps(n)
  std::uint64_t seed = 0;
  std::uint64_t trace_stride = 0;  // 0 => no trace
};

struct RunOutcome {
  RunStatus status = RunStatus::budget_exhausted;
  DynamicsState final_state;
  std::uint64_t steps_taken = 0;
  std::uint64_t flips = 0;         // accepted flips, strict + zero-energy
  std::uint64_t strict_flips = 0;
  std::vector<std::pair<std::uint64_t, std::int64_t>> magnetization_trace;
};

// Runs the chain: per step one uniform site draw, plus one coin draw under
// the fair policy (fixed policies consume no coin).  Early exit the moment
// no site is unsatisfied and no field is zero; plateau after n*n consecutive
// quiet steps (no unsatisfied site, no strict flip); budget_exhausted at
// max_steps.
RunOutcome run(const CouplingMatrix& J, SpinConfig sigma0, const RunOptions& opt,
               StepObserver* observer = nullptr);

// ceil(50 n ln n): several coupon-collector times.
std::uint64_t default_max_steps(std::uint32_t n);

// Initial-configuration samplers.
SpinConfig uniform_spins(std::uint32_t n, std::uint64_t seed);
// Exactly (n+m0)/2 plus spins at uniformly random positions; requires
// |m0| <= n and n+m0 even.
SpinConfig fixed_magnetization_spins(std::uint32_t n, std::int64_t m0, std::uint64_t seed);

std::int64_t magnetization_of(const SpinConfig& s);

// Bit i of the index is set iff s_i == +1.
std::uint64_t spin_index(const SpinConfig& s);
SpinConfig spins_from_index(std::uint32_t n, std::uint64_t index);

inline constexpr std::uint32_t kEnumerateCap = 22;

// Exhaustive census of all 2^n states: classification per state plus counts.
// The brute-force oracle for desk-scale equivalence tests; throws above
// kEnumerateCap.
struct LandscapeCensus {
  std::uint32_t n = 0;
  std::uint64_t ground_states = 0;
  std::uint64_t strict_local_minima = 0;
  std::uint64_t plateau_members = 0;
  double min_energy = 0.0;
  std::vector<std::uint8_t> classes;  // StateClass per spin_index
};

LandscapeCensus enumerate_landscape(const CouplingMatrix& J);

}  // namespace ztdyn
