// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bully.hpp"
#include "coupling.hpp"
#include "dynamics.hpp"
#include "mincut.hpp"
#include "stats.hpp"

namespace ztdyn {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { simulate, qd, mincut, bully, enumerate_states, mag0, drift };
enum class OutputFormat { csv, json };
enum class OverlapMode { full, site };
enum class StartMode { uniform, half };

const char* experiment_name(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  FamilyTag family{Family::bernoulli, 0.5, 0.5, 1.0, 1.0};
  std::uint32_t n = 0;
  std::uint32_t trials = 1;
  std::uint32_t replicas = 2;
  std::uint64_t master_seed = 0;
  ZeroFieldPolicy policy = ZeroFieldPolicy::fair_coin;
  // Initial magnetization: unset means uniform product sampling; m0_auto
  // means ceil(n^(0.5-m0_epsilon)).  Parity is rounded away from zero and
  // recorded in the resolved config.
  std::optional<std::int64_t> m0;
  bool m0_auto = false;
  double m0_epsilon = 0.0;
  double epsilon = 0.25;        // mag0 threshold / drift exponent
  std::uint64_t max_steps = 0;  // 0 => 50 n ln n
  std::uint64_t max_iters = 0;  // 0 => 50 n ln n
  bool trace = false;
  std::uint64_t trace_stride = 0;  // 0 => n/10 when tracing
  std::uint64_t window = 0;        // drift; 0 => floor(n^(0.5+3*epsilon))
  OverlapMode overlap = OverlapMode::full;
  StartMode start = StartMode::uniform;
  std::string couplings_file;
  std::string dump_couplings;
  // Execution knob only; never part of the output files.
  int threads = 0;
};

// Per-trial stream roots: everything a trial consumes derives from
// derive(master_seed, trial).
struct TrialSeeds {
  std::uint64_t trial = 0;
  std::uint64_t couplings = 0;
  std::uint64_t initial = 0;
  std::uint64_t search = 0;
  std::uint64_t dynamics(std::uint32_t replica) const;
};
TrialSeeds trial_seeds(std::uint64_t master_seed, std::uint32_t trial);

CouplingMatrix sample_family(const FamilyTag& tag, std::uint32_t n, std::uint64_t seed);

std::int64_t resolve_m0(const ExperimentConfig& cfg);  // throws if m0 unset

struct ExperimentResult {
  std::string csv_header;
  std::vector<std::string> csv_rows;
  nlohmann::json summary;
};

// Resolved-config echo; `include_threads` only for the stderr echo, never
// for output files.
nlohmann::json resolved_config_json(const ExperimentConfig& cfg, bool include_threads);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string result_csv_text(const ExperimentResult& r);
void write_result(const ExperimentResult& r, const std::string& path, OutputFormat format,
                  bool append = false);

// ---- individual experiments (also reachable through run_experiment) ----

struct StatusCounts {
  std::uint64_t ground_plus = 0, ground_minus = 0, strict_local_min = 0, plateau = 0,
                budget_exhausted = 0;
  std::uint64_t total() const;
  void add(RunStatus s);
};

struct SimulateTrial {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t m0 = 0;  // realized initial magnetization
  std::uint64_t steps = 0;
  std::uint64_t flips = 0;
  RunStatus status = RunStatus::budget_exhausted;
  std::int64_t final_magnetization = 0;
  std::vector<std::pair<std::uint64_t, std::int64_t>> trace;
};

struct SimulateResult {
  std::uint32_t n = 0;          // resolved (a pinned couplings file wins)
  FamilyTag family_used;
  std::vector<SimulateTrial> trials;
  StatusCounts counts;
  double ground_plus_fraction = 0.0;
  stats::Interval ground_plus_ci;
};

// Fresh J and sigma(0) per trial (or a pinned couplings file), zero-T run,
// status tally with an exact binomial CI on the ground_plus fraction.
SimulateResult absorption_experiment(const ExperimentConfig& cfg);

double pair_overlap(const SpinConfig& a, const SpinConfig& b, OverlapMode mode);

// One trial of the replica estimator: R runs from the same (J, sigma0) with
// the given dynamics seeds; returns the average over unordered replica pairs
// of the overlap.  plateau_replicas counts runs that ended in a plateau.
double qd_trial(const CouplingMatrix& J, const SpinConfig& sigma0,
                std::span<const std::uint64_t> replica_seeds, OverlapMode mode,
                ZeroFieldPolicy policy, std::uint64_t max_steps,
                std::uint32_t* plateau_replicas);

struct QdResult {
  double estimate = 0.0;
  double std_error = 0.0;
  stats::Interval ci;
  std::uint32_t trials = 0;
  std::uint32_t replicas = 0;
  double plateau_replica_fraction = 0.0;
  std::vector<double> per_trial;
  std::vector<std::uint64_t> trial_seed;
  std::vector<std::uint32_t> trial_plateaus;
};

QdResult estimate_qd(const ExperimentConfig& cfg);

struct MincutTrial {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  SearchStatus status = SearchStatus::budget_exhausted;
  std::uint64_t iterations = 0;
  double final_cut = 0.0;
  std::uint32_t final_size_a = 0;
};

struct MincutResult {
  std::vector<MincutTrial> trials;
  std::uint64_t trivial = 0, nontrivial = 0, plateau = 0, budget = 0;
  double trivial_fraction = 0.0;
  stats::Interval trivial_ci;
};

MincutResult mincut_experiment(const ExperimentConfig& cfg);

struct BullyTrial {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::uint32_t census_size = 0;
  bool has_disjoint_pair = false;
  bool witness_certified = false;
  double witness_energy = 0.0;  // NaN when no disjoint pair exists
};

struct BullyResult {
  std::vector<BullyTrial> trials;
  std::uint64_t census_nonempty = 0;
  std::uint64_t disjoint_pairs = 0;
  std::uint64_t certified = 0;
  double mean_census_size = 0.0;
  stats::Interval nonempty_ci;
};

// Census per trial; whenever two (automatically disjoint) bully bonds exist,
// builds the two-pair witness and certifies a non-uniform strict local
// minimum, descending from the witness first if the background is not
// already locally minimal.
BullyResult bully_experiment(const ExperimentConfig& cfg);

struct Mag0Result {
  double threshold = 0.0;
  std::uint64_t hits = 0;
  std::uint32_t trials = 0;
  double fraction = 0.0;
  stats::Interval ci;
  std::vector<std::int64_t> per_trial_m0;
  std::vector<std::uint64_t> trial_seed;
};

// Monte Carlo estimate of P(|M_0| >= n^(0.5-epsilon)) under uniform sigma(0).
Mag0Result initial_magnetization_stat(std::uint32_t n, double epsilon, std::uint32_t trials,
                                      std::uint64_t seed, int threads = 0);

struct DriftClassStats {
  std::uint64_t samples = 0;
  std::uint64_t positives = 0;
  double pooled_fraction = 0.0;
  stats::Interval pooled_ci;
  // Mean of per-trial fractions; the honest CI under per-trial correlation.
  stats::MeanSE trial_level;
  stats::Interval trial_ci;
};

struct DriftTrial {
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t first_visits_plus = 0, positive_plus = 0;
  std::uint64_t first_visits_minus = 0, positive_minus = 0;
};

struct DriftResult {
  std::int64_t m0 = 0;
  std::uint64_t window = 0;
  DriftClassStats plus, minus, overall;
  std::vector<DriftTrial> trials;
};

// First-visit positive-field fractions within an early window, split by the
// site's initial spin.
DriftResult drift_probe(const ExperimentConfig& cfg);

}  // namespace ztdyn
