// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "textio.hpp"

namespace ztdyn {

namespace {

using nlohmann::json;
using textio::format_double;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

const char* policy_name(ZeroFieldPolicy p) {
  switch (p) {
    case ZeroFieldPolicy::fair_coin: return "fair";
    case ZeroFieldPolicy::always_minus: return "minus";
    case ZeroFieldPolicy::always_plus: return "plus";
  }
  return "?";
}

std::uint64_t resolve_max_steps(const ExperimentConfig& cfg) {
  return cfg.max_steps ? cfg.max_steps : default_max_steps(cfg.n);
}

std::uint64_t resolve_max_iters(const ExperimentConfig& cfg) {
  return cfg.max_iters ? cfg.max_iters : default_max_steps(cfg.n);
}

std::uint64_t resolve_trace_stride(const ExperimentConfig& cfg) {
  if (!cfg.trace) return 0;
  if (cfg.trace_stride) return cfg.trace_stride;
  return std::max<std::uint64_t>(1, cfg.n / 10);
}

std::uint64_t drift_window_bound(const ExperimentConfig& cfg) {
  return static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(cfg.n), 0.5 + 3.0 * cfg.epsilon)));
}

std::uint64_t resolve_window(const ExperimentConfig& cfg) {
  return cfg.window ? cfg.window : drift_window_bound(cfg);
}

json family_json(const FamilyTag& tag) {
  json f;
  f["name"] = family_name(tag.family);
  switch (tag.family) {
    case Family::bernoulli: f["p"] = tag.p; break;
    case Family::pareto:
      f["alpha"] = tag.alpha;
      f["scale"] = tag.scale;
      break;
    case Family::constant: f["value"] = tag.value; break;
    case Family::custom: break;
  }
  return f;
}

double family_param(const FamilyTag& tag) {
  switch (tag.family) {
    case Family::bernoulli: return tag.p;
    case Family::pareto: return tag.alpha;
    case Family::constant: return tag.value;
    case Family::custom: return 0.0;
  }
  return 0.0;
}

json interval_json(const stats::Interval& ci) {
  return json{{"lo", ci.lo}, {"hi", ci.hi}};
}

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::enumerate_states) {
    require(cfg.n >= 2, "config: n must be >= 2");
    require(cfg.trials >= 1, "config: trials must be >= 1");
  }
}

// Tracks first visits within a run and tallies strictly positive fields by
// the site's initial spin.
class FirstVisitProbe : public StepObserver {
 public:
  FirstVisitProbe(const SpinConfig& initial) : initial_(initial), visited_(initial.size(), 0) {}

  void on_step(const StepRecord& rec) override {
    if (visited_[rec.site]) return;
    visited_[rec.site] = 1;
    const bool plus = initial_[rec.site] > 0;
    const bool positive = rec.field > 0.0;
    if (plus) {
      ++visits_plus;
      positive_plus += positive;
    } else {
      ++visits_minus;
      positive_minus += positive;
    }
  }

  std::uint64_t visits_plus = 0, positive_plus = 0;
  std::uint64_t visits_minus = 0, positive_minus = 0;

 private:
  SpinConfig initial_;
  std::vector<std::uint8_t> visited_;
};

}  // namespace

const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::qd: return "qd";
    case ExperimentKind::mincut: return "mincut";
    case ExperimentKind::bully: return "bully";
    case ExperimentKind::enumerate_states: return "enumerate";
    case ExperimentKind::mag0: return "mag0";
    case ExperimentKind::drift: return "drift";
  }
  return "?";
}

std::uint64_t TrialSeeds::dynamics(std::uint32_t replica) const {
  return rng::derive(trial, rng::kTagDynamics, replica);
}

TrialSeeds trial_seeds(std::uint64_t master_seed, std::uint32_t trial) {
  TrialSeeds s;
  s.trial = rng::derive(master_seed, trial);
  s.couplings = rng::derive(s.trial, rng::kTagCouplings);
  s.initial = rng::derive(s.trial, rng::kTagInitial);
  s.search = rng::derive(s.trial, rng::kTagSearch);
  return s;
}

CouplingMatrix sample_family(const FamilyTag& tag, std::uint32_t n, std::uint64_t seed) {
  switch (tag.family) {
    case Family::bernoulli: return CouplingMatrix::sample_bernoulli(n, tag.p, seed);
    case Family::pareto:
      return CouplingMatrix::sample_pareto(n, tag.alpha, tag.scale, seed);
    case Family::constant: return CouplingMatrix::sample_constant(n, tag.value);
    case Family::custom:
      throw std::invalid_argument("sample_family: custom family cannot be sampled");
  }
  throw std::invalid_argument("sample_family: unknown family");
}

std::int64_t resolve_m0(const ExperimentConfig& cfg) {
  std::int64_t m0 = 0;
  if (cfg.m0_auto) {
    require(cfg.m0_epsilon > 0.0 && cfg.m0_epsilon < 0.5,
            "config: m0 epsilon must be in (0, 0.5)");
    m0 = static_cast<std::int64_t>(
        std::ceil(std::pow(static_cast<double>(cfg.n), 0.5 - cfg.m0_epsilon)));
  } else {
    require(cfg.m0.has_value(), "config: m0 not specified");
    m0 = *cfg.m0;
  }
  require(std::llabs(m0) <= static_cast<std::int64_t>(cfg.n), "config: |m0| > n");
  // parity rounds away from zero, recorded in the resolved config
  if ((static_cast<std::int64_t>(cfg.n) + m0) % 2 != 0) m0 += m0 >= 0 ? 1 : -1;
  require(std::llabs(m0) <= static_cast<std::int64_t>(cfg.n),
          "config: m0 parity adjustment exceeds n");
  return m0;
}

std::uint64_t StatusCounts::total() const {
  return ground_plus + ground_minus + strict_local_min + plateau + budget_exhausted;
}

void StatusCounts::add(RunStatus s) {
  switch (s) {
    case RunStatus::ground_plus: ++ground_plus; break;
    case RunStatus::ground_minus: ++ground_minus; break;
    case RunStatus::strict_local_min: ++strict_local_min; break;
    case RunStatus::plateau: ++plateau; break;
    case RunStatus::budget_exhausted: ++budget_exhausted; break;
  }
}

SimulateResult absorption_experiment(const ExperimentConfig& cfg) {
  require(cfg.trials >= 1, "config: trials must be >= 1");
  std::optional<CouplingMatrix> pinned;
  if (!cfg.couplings_file.empty()) {
    pinned = CouplingMatrix::load_file(cfg.couplings_file);
    require(cfg.n == 0 || cfg.n == pinned->n(),
            "config: couplings file dimension differs from --n");
  }
  const std::uint32_t n = pinned ? pinned->n() : cfg.n;
  require(n >= 2, "config: n must be >= 2");

  ExperimentConfig resolved = cfg;
  resolved.n = n;
  const bool fixed_m0 = cfg.m0.has_value() || cfg.m0_auto;
  const std::int64_t m0 = fixed_m0 ? resolve_m0(resolved) : 0;
  const std::uint64_t max_steps = resolve_max_steps(resolved);
  const std::uint64_t stride = resolve_trace_stride(resolved);

  SimulateResult result;
  result.n = n;
  result.family_used = pinned ? pinned->family() : cfg.family;
  result.trials.resize(cfg.trials);

  parallel_for(cfg.trials, cfg.threads, [&](std::uint32_t t) {
    const TrialSeeds seeds = trial_seeds(cfg.master_seed, t);
    std::optional<CouplingMatrix> fresh;
    if (!pinned) fresh = sample_family(cfg.family, n, seeds.couplings);
    const CouplingMatrix& J = pinned ? *pinned : *fresh;
    SpinConfig sigma0 = fixed_m0 ? fixed_magnetization_spins(n, m0, seeds.initial)
                                 : uniform_spins(n, seeds.initial);
    SimulateTrial& row = result.trials[t];
    row.trial = t;
    row.seed = seeds.trial;
    row.m0 = magnetization_of(sigma0);
    RunOptions opt{cfg.policy, max_steps, seeds.dynamics(0), stride};
    RunOutcome out = run(J, std::move(sigma0), opt);
    row.steps = out.steps_taken;
    row.flips = out.flips;
    row.status = out.status;
    row.final_magnetization = out.final_state.magnetization;
    row.trace = std::move(out.magnetization_trace);
  });

  if (!cfg.dump_couplings.empty()) {
    if (pinned)
      pinned->dump_file(cfg.dump_couplings);
    else
      sample_family(cfg.family, n, trial_seeds(cfg.master_seed, 0).couplings)
          .dump_file(cfg.dump_couplings);
  }

  for (const auto& row : result.trials) result.counts.add(row.status);
  result.ground_plus_fraction =
      static_cast<double>(result.counts.ground_plus) / cfg.trials;
  result.ground_plus_ci = stats::clopper_pearson(result.counts.ground_plus, cfg.trials);
  return result;
}

double pair_overlap(const SpinConfig& a, const SpinConfig& b, OverlapMode mode) {
  if (mode == OverlapMode::site)
    return static_cast<double>(a[0]) * static_cast<double>(b[0]);
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += static_cast<std::int64_t>(a[i]) * b[i];
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

double qd_trial(const CouplingMatrix& J, const SpinConfig& sigma0,
                std::span<const std::uint64_t> replica_seeds, OverlapMode mode,
                ZeroFieldPolicy policy, std::uint64_t max_steps,
                std::uint32_t* plateau_replicas) {
  require(replica_seeds.size() >= 2, "qd_trial: need at least two replicas");
  std::vector<SpinConfig> finals;
  finals.reserve(replica_seeds.size());
  std::uint32_t plateaus = 0;
  for (std::uint64_t seed : replica_seeds) {
    RunOutcome out = run(J, sigma0, RunOptions{policy, max_steps, seed, 0});
    plateaus += out.status == RunStatus::plateau;
    finals.push_back(std::move(out.final_state.spins));
  }
  if (plateau_replicas) *plateau_replicas = plateaus;
  double sum = 0.0;
  std::uint64_t pairs = 0;
  for (std::size_t a = 0; a < finals.size(); ++a)
    for (std::size_t b = a + 1; b < finals.size(); ++b) {
      sum += pair_overlap(finals[a], finals[b], mode);
      ++pairs;
    }
  return sum / static_cast<double>(pairs);
}

QdResult estimate_qd(const ExperimentConfig& cfg) {
  validate_common(cfg);
  require(cfg.replicas >= 2, "config: qd needs replicas >= 2");
  const bool fixed_m0 = cfg.m0.has_value() || cfg.m0_auto;
  const std::int64_t m0 = fixed_m0 ? resolve_m0(cfg) : 0;
  const std::uint64_t max_steps = resolve_max_steps(cfg);

  QdResult result;
  result.trials = cfg.trials;
  result.replicas = cfg.replicas;
  result.per_trial.resize(cfg.trials);
  result.trial_seed.resize(cfg.trials);
  result.trial_plateaus.resize(cfg.trials);

  parallel_for(cfg.trials, cfg.threads, [&](std::uint32_t t) {
    const TrialSeeds seeds = trial_seeds(cfg.master_seed, t);
    const CouplingMatrix J = sample_family(cfg.family, cfg.n, seeds.couplings);
    const SpinConfig sigma0 = fixed_m0
                                  ? fixed_magnetization_spins(cfg.n, m0, seeds.initial)
                                  : uniform_spins(cfg.n, seeds.initial);
    std::vector<std::uint64_t> replica_seeds(cfg.replicas);
    for (std::uint32_t r = 0; r < cfg.replicas; ++r) replica_seeds[r] = seeds.dynamics(r);
    std::uint32_t plateaus = 0;
    result.per_trial[t] =
        qd_trial(J, sigma0, replica_seeds, cfg.overlap, cfg.policy, max_steps, &plateaus);
    result.trial_seed[t] = seeds.trial;
    result.trial_plateaus[t] = plateaus;
  });

  const auto ms = stats::mean_se(result.per_trial);
  result.estimate = ms.mean;
  result.std_error = ms.se;
  result.ci = stats::normal_ci(ms);
  std::uint64_t plateau_total = 0;
  for (auto p : result.trial_plateaus) plateau_total += p;
  result.plateau_replica_fraction =
      static_cast<double>(plateau_total) /
      (static_cast<double>(cfg.trials) * cfg.replicas);
  return result;
}

MincutResult mincut_experiment(const ExperimentConfig& cfg) {
  validate_common(cfg);
  const std::uint64_t max_iters = resolve_max_iters(cfg);
  MincutResult result;
  result.trials.resize(cfg.trials);

  parallel_for(cfg.trials, cfg.threads, [&](std::uint32_t t) {
    const TrialSeeds seeds = trial_seeds(cfg.master_seed, t);
    const CouplingMatrix J = sample_family(cfg.family, cfg.n, seeds.couplings);
    const Partition start = cfg.start == StartMode::uniform
                                ? uniform_partition(cfg.n, seeds.initial)
                                : half_partition(cfg.n, seeds.initial);
    const SearchOutcome out = greedy_search(J, start, seeds.search, max_iters);
    MincutTrial& row = result.trials[t];
    row.trial = t;
    row.seed = seeds.trial;
    row.status = out.status;
    row.iterations = out.iterations;
    row.final_cut = out.final_cut;
    row.final_size_a = out.final.size_a();
  });

  for (const auto& row : result.trials) {
    switch (row.status) {
      case SearchStatus::trivial: ++result.trivial; break;
      case SearchStatus::nontrivial_local_mincut: ++result.nontrivial; break;
      case SearchStatus::plateau: ++result.plateau; break;
      case SearchStatus::budget_exhausted: ++result.budget; break;
    }
  }
  result.trivial_fraction = static_cast<double>(result.trivial) / cfg.trials;
  result.trivial_ci = stats::clopper_pearson(result.trivial, cfg.trials);
  return result;
}

BullyResult bully_experiment(const ExperimentConfig& cfg) {
  validate_common(cfg);
  require(cfg.family.family == Family::pareto,
          "config: bully experiment samples the pareto family");
  const std::uint64_t max_steps = resolve_max_steps(cfg);
  BullyResult result;
  result.trials.resize(cfg.trials);

  parallel_for(cfg.trials, cfg.threads, [&](std::uint32_t t) {
    const TrialSeeds seeds = trial_seeds(cfg.master_seed, t);
    const CouplingMatrix J = sample_family(cfg.family, cfg.n, seeds.couplings);
    const auto census = bully_census(J);
    BullyTrial& row = result.trials[t];
    row.trial = t;
    row.seed = seeds.trial;
    row.census_size = static_cast<std::uint32_t>(census.size());
    row.has_disjoint_pair = census.size() >= 2;
    row.witness_energy = std::numeric_limits<double>::quiet_NaN();
    if (!row.has_disjoint_pair) return;
    SpinConfig witness = witness_local_minimum(J, census[0], census[1], +1);
    if (is_absorbing(J, witness) == StateClass::strict_local_min) {
      row.witness_certified = true;
      row.witness_energy = energy(J, witness);
      return;
    }
    // The two pairs are frozen in opposite signs, so the descent cannot end
    // uniform; certify whatever non-uniform absorbing state it lands in.
    RunOutcome out = run(J, std::move(witness),
                         RunOptions{cfg.policy, max_steps, seeds.dynamics(0), 0});
    const SpinConfig& final = out.final_state.spins;
    row.witness_certified = is_absorbing(J, final) == StateClass::strict_local_min;
    if (row.witness_certified) row.witness_energy = energy(J, final);
  });

  double census_sum = 0.0;
  for (const auto& row : result.trials) {
    result.census_nonempty += row.census_size > 0;
    result.disjoint_pairs += row.has_disjoint_pair;
    result.certified += row.witness_certified;
    census_sum += row.census_size;
  }
  result.mean_census_size = census_sum / cfg.trials;
  result.nonempty_ci = stats::clopper_pearson(result.census_nonempty, cfg.trials);
  return result;
}

Mag0Result initial_magnetization_stat(std::uint32_t n, double epsilon, std::uint32_t trials,
                                      std::uint64_t seed, int threads) {
  require(n >= 2, "mag0: n must be >= 2");
  require(epsilon > 0.0 && epsilon < 0.5, "mag0: epsilon must be in (0, 0.5)");
  require(trials >= 1, "mag0: trials must be >= 1");
  Mag0Result result;
  result.trials = trials;
  result.threshold = std::pow(static_cast<double>(n), 0.5 - epsilon);
  result.per_trial_m0.resize(trials);
  result.trial_seed.resize(trials);

  parallel_for(trials, threads, [&](std::uint32_t t) {
    const TrialSeeds seeds = trial_seeds(seed, t);
    result.per_trial_m0[t] = magnetization_of(uniform_spins(n, seeds.initial));
    result.trial_seed[t] = seeds.trial;
  });

  for (auto m : result.per_trial_m0)
    result.hits += static_cast<double>(std::llabs(m)) >= result.threshold;
  result.fraction = static_cast<double>(result.hits) / trials;
  result.ci = stats::clopper_pearson(result.hits, trials);
  return result;
}

DriftResult drift_probe(const ExperimentConfig& cfg) {
  validate_common(cfg);
  require(cfg.epsilon > 0.0 && cfg.epsilon < 0.5, "drift: epsilon must be in (0, 0.5)");
  const std::uint64_t window = resolve_window(cfg);
  require(window >= 1, "drift: window must be >= 1");
  require(window <= drift_window_bound(cfg),
          "drift: window exceeds n^(0.5+3*epsilon)");

  ExperimentConfig m0cfg = cfg;
  m0cfg.m0_auto = !cfg.m0.has_value();
  m0cfg.m0_epsilon = cfg.epsilon;
  const std::int64_t m0 = resolve_m0(m0cfg);

  DriftResult result;
  result.m0 = m0;
  result.window = window;
  result.trials.resize(cfg.trials);

  parallel_for(cfg.trials, cfg.threads, [&](std::uint32_t t) {
    const TrialSeeds seeds = trial_seeds(cfg.master_seed, t);
    const CouplingMatrix J = sample_family(cfg.family, cfg.n, seeds.couplings);
    SpinConfig sigma0 = fixed_magnetization_spins(cfg.n, m0, seeds.initial);
    FirstVisitProbe probe(sigma0);
    run(J, std::move(sigma0), RunOptions{cfg.policy, window, seeds.dynamics(0), 0},
        &probe);
    DriftTrial& row = result.trials[t];
    row.trial = t;
    row.seed = seeds.trial;
    row.first_visits_plus = probe.visits_plus;
    row.positive_plus = probe.positive_plus;
    row.first_visits_minus = probe.visits_minus;
    row.positive_minus = probe.positive_minus;
  });

  auto fill = [&](DriftClassStats& st, auto visits_of, auto positives_of) {
    std::vector<double> fracs;
    fracs.reserve(cfg.trials);
    for (const auto& row : result.trials) {
      st.samples += visits_of(row);
      st.positives += positives_of(row);
      if (visits_of(row) > 0)
        fracs.push_back(static_cast<double>(positives_of(row)) /
                        static_cast<double>(visits_of(row)));
    }
    st.pooled_fraction =
        st.samples ? static_cast<double>(st.positives) / static_cast<double>(st.samples)
                   : 0.0;
    st.pooled_ci = st.samples ? stats::clopper_pearson(st.positives, st.samples)
                              : stats::Interval{0.0, 1.0};
    st.trial_level = stats::mean_se(fracs);
    st.trial_ci = stats::normal_ci(st.trial_level);
  };
  fill(result.plus, [](const DriftTrial& r) { return r.first_visits_plus; },
       [](const DriftTrial& r) { return r.positive_plus; });
  fill(result.minus, [](const DriftTrial& r) { return r.first_visits_minus; },
       [](const DriftTrial& r) { return r.positive_minus; });
  fill(result.overall,
       [](const DriftTrial& r) { return r.first_visits_plus + r.first_visits_minus; },
       [](const DriftTrial& r) { return r.positive_plus + r.positive_minus; });
  return result;
}

nlohmann::json resolved_config_json(const ExperimentConfig& cfg, bool include_threads) {
  json c;
  c["experiment"] = experiment_name(cfg.kind);
  c["seed"] = cfg.master_seed;
  switch (cfg.kind) {
    case ExperimentKind::simulate: {
      ExperimentConfig res = cfg;
      if (!cfg.couplings_file.empty())
        res.n = CouplingMatrix::peek_n(cfg.couplings_file);
      if (cfg.couplings_file.empty()) c["family"] = family_json(cfg.family);
      c["n"] = res.n;
      c["trials"] = cfg.trials;
      c["policy"] = policy_name(cfg.policy);
      c["max_steps"] = resolve_max_steps(res);
      if (cfg.m0.has_value() || cfg.m0_auto)
        c["m0"] = resolve_m0(res);
      else
        c["m0"] = nullptr;
      c["trace_stride"] = resolve_trace_stride(res);
      if (!cfg.couplings_file.empty()) c["couplings_file"] = cfg.couplings_file;
      if (!cfg.dump_couplings.empty()) c["dump_couplings"] = cfg.dump_couplings;
      break;
    }
    case ExperimentKind::qd: {
      c["family"] = family_json(cfg.family);
      c["n"] = cfg.n;
      c["trials"] = cfg.trials;
      c["replicas"] = cfg.replicas;
      c["policy"] = policy_name(cfg.policy);
      c["max_steps"] = resolve_max_steps(cfg);
      c["overlap"] = cfg.overlap == OverlapMode::full ? "full" : "site";
      if (cfg.m0.has_value() || cfg.m0_auto)
        c["m0"] = resolve_m0(cfg);
      else
        c["m0"] = nullptr;
      break;
    }
    case ExperimentKind::mincut: {
      c["family"] = family_json(cfg.family);
      c["n"] = cfg.n;
      c["trials"] = cfg.trials;
      c["max_iters"] = resolve_max_iters(cfg);
      c["start"] = cfg.start == StartMode::uniform ? "uniform" : "half";
      break;
    }
    case ExperimentKind::bully: {
      c["family"] = family_json(cfg.family);
      c["n"] = cfg.n;
      c["trials"] = cfg.trials;
      c["max_steps"] = resolve_max_steps(cfg);
      break;
    }
    case ExperimentKind::enumerate_states: {
      c["couplings_file"] = cfg.couplings_file;
      break;
    }
    case ExperimentKind::mag0: {
      c["n"] = cfg.n;
      c["epsilon"] = cfg.epsilon;
      c["trials"] = cfg.trials;
      break;
    }
    case ExperimentKind::drift: {
      c["family"] = family_json(cfg.family);
      c["n"] = cfg.n;
      c["epsilon"] = cfg.epsilon;
      c["window"] = resolve_window(cfg);
      c["trials"] = cfg.trials;
      c["policy"] = policy_name(cfg.policy);
      ExperimentConfig m0cfg = cfg;
      m0cfg.m0_auto = !cfg.m0.has_value();
      m0cfg.m0_epsilon = cfg.epsilon;
      c["m0"] = resolve_m0(m0cfg);
      break;
    }
  }
  if (include_threads) c["threads"] = cfg.threads;
  return c;
}

namespace {

json envelope(const ExperimentConfig& cfg) {
  json doc;
  doc["tool"] = "ztdyn";
  doc["version"] = kVersion;
  doc["experiment"] = experiment_name(cfg.kind);
  doc["config"] = resolved_config_json(cfg, false);
  return doc;
}

std::string csv_join(std::initializer_list<std::string> fields) {
  std::string row;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) row += ',';
    row += f;
    first = false;
  }
  return row;
}

ExperimentResult simulate_result(const ExperimentConfig& cfg) {
  const SimulateResult r = absorption_experiment(cfg);
  ExperimentResult out;
  out.csv_header = "trial,seed,n,param,m0,steps,flips,status,final_magnetization";
  const std::uint32_t n = r.n;
  const std::string param = format_double(family_param(r.family_used));
  for (const auto& row : r.trials)
    out.csv_rows.push_back(csv_join(
        {std::to_string(row.trial), std::to_string(row.seed), std::to_string(n), param,
         std::to_string(row.m0), std::to_string(row.steps), std::to_string(row.flips),
         run_status_name(row.status), std::to_string(row.final_magnetization)}));

  json doc = envelope(cfg);
  json counts;
  counts["ground_plus"] = r.counts.ground_plus;
  counts["ground_minus"] = r.counts.ground_minus;
  counts["strict_local_min"] = r.counts.strict_local_min;
  counts["plateau"] = r.counts.plateau;
  counts["budget_exhausted"] = r.counts.budget_exhausted;
  json results;
  results["trials"] = cfg.trials;
  results["status_counts"] = counts;
  json fractions;
  for (auto& [key, value] : counts.items())
    fractions[key] = static_cast<double>(value.get<std::uint64_t>()) / cfg.trials;
  results["status_fractions"] = fractions;
  results["ground_plus_fraction"] = r.ground_plus_fraction;
  results["ground_plus_ci"] = interval_json(r.ground_plus_ci);
  doc["results"] = results;
  json trials = json::array();
  for (const auto& row : r.trials) {
    json tr;
    tr["trial"] = row.trial;
    tr["seed"] = row.seed;
    tr["m0"] = row.m0;
    tr["steps"] = row.steps;
    tr["flips"] = row.flips;
    tr["status"] = run_status_name(row.status);
    tr["final_magnetization"] = row.final_magnetization;
    if (!row.trace.empty()) {
      json trace = json::array();
      for (const auto& [t, m] : row.trace) trace.push_back(json::array({t, m}));
      tr["magnetization_trace"] = trace;
    }
    trials.push_back(std::move(tr));
  }
  doc["trials"] = std::move(trials);
  out.summary = std::move(doc);
  return out;
}

ExperimentResult qd_result(const ExperimentConfig& cfg) {
  const QdResult r = estimate_qd(cfg);
  ExperimentResult out;
  out.csv_header = "trial,seed,overlap,plateau_replicas";
  for (std::uint32_t t = 0; t < r.trials; ++t)
    out.csv_rows.push_back(csv_join({std::to_string(t), std::to_string(r.trial_seed[t]),
                                     format_double(r.per_trial[t]),
                                     std::to_string(r.trial_plateaus[t])}));
  json doc = envelope(cfg);
  json results;
  results["estimate"] = r.estimate;
  results["std_error"] = r.std_error;
  results["ci"] = interval_json(r.ci);
  results["trials"] = r.trials;
  results["replicas"] = r.replicas;
  results["plateau_replica_fraction"] = r.plateau_replica_fraction;
  results["family"] = family_name(cfg.family.family);
  doc["results"] = results;
  json trials = json::array();
  for (std::uint32_t t = 0; t < r.trials; ++t)
    trials.push_back(json{{"trial", t},
                          {"seed", r.trial_seed[t]},
                          {"overlap", r.per_trial[t]},
                          {"plateau_replicas", r.trial_plateaus[t]}});
  doc["trials"] = std::move(trials);
  out.summary = std::move(doc);
  return out;
}

ExperimentResult mincut_result(const ExperimentConfig& cfg) {
  const MincutResult r = mincut_experiment(cfg);
  ExperimentResult out;
  out.csv_header = "trial,seed,status,iterations,final_cut,final_size_A";
  for (const auto& row : r.trials)
    out.csv_rows.push_back(csv_join(
        {std::to_string(row.trial), std::to_string(row.seed),
         search_status_name(row.status), std::to_string(row.iterations),
         format_double(row.final_cut), std::to_string(row.final_size_a)}));
  json doc = envelope(cfg);
  json results;
  results["trials"] = cfg.trials;
  results["trivial"] = r.trivial;
  results["nontrivial_local_mincut"] = r.nontrivial;
  results["plateau"] = r.plateau;
  results["budget_exhausted"] = r.budget;
  results["trivial_fraction"] = r.trivial_fraction;
  results["trivial_ci"] = interval_json(r.trivial_ci);
  doc["results"] = results;
  json trials = json::array();
  for (const auto& row : r.trials)
    trials.push_back(json{{"trial", row.trial},
                          {"seed", row.seed},
                          {"status", search_status_name(row.status)},
                          {"iterations", row.iterations},
                          {"final_cut", row.final_cut},
                          {"final_size_A", row.final_size_a}});
  doc["trials"] = std::move(trials);
  out.summary = std::move(doc);
  return out;
}

ExperimentResult bully_result(const ExperimentConfig& cfg) {
  const BullyResult r = bully_experiment(cfg);
  ExperimentResult out;
  out.csv_header = "trial,seed,census_size,has_disjoint_pair,witness_certified,witness_energy";
  for (const auto& row : r.trials)
    out.csv_rows.push_back(csv_join(
        {std::to_string(row.trial), std::to_string(row.seed),
         std::to_string(row.census_size), std::to_string(row.has_disjoint_pair ? 1 : 0),
         std::to_string(row.witness_certified ? 1 : 0),
         std::isnan(row.witness_energy) ? "nan" : format_double(row.witness_energy)}));
  json doc = envelope(cfg);
  json results;
  results["trials"] = cfg.trials;
  results["census_nonempty"] = r.census_nonempty;
  results["census_nonempty_fraction"] =
      static_cast<double>(r.census_nonempty) / cfg.trials;
  results["census_nonempty_ci"] = interval_json(r.nonempty_ci);
  results["disjoint_pair_trials"] = r.disjoint_pairs;
  results["certified_trials"] = r.certified;
  results["mean_census_size"] = r.mean_census_size;
  doc["results"] = results;
  json trials = json::array();
  for (const auto& row : r.trials) {
    json tr;
    tr["trial"] = row.trial;
    tr["seed"] = row.seed;
    tr["census_size"] = row.census_size;
    tr["has_disjoint_pair"] = row.has_disjoint_pair;
    tr["witness_certified"] = row.witness_certified;
    if (!std::isnan(row.witness_energy)) tr["witness_energy"] = row.witness_energy;
    trials.push_back(std::move(tr));
  }
  doc["trials"] = std::move(trials);
  out.summary = std::move(doc);
  return out;
}

ExperimentResult enumerate_result(const ExperimentConfig& cfg) {
  require(!cfg.couplings_file.empty(), "enumerate: --couplings-file is required");
  const CouplingMatrix J = CouplingMatrix::load_file(cfg.couplings_file);
  const ValidationReport rep = J.validate();
  require(rep.ok(), "enumerate: couplings file fails validation: " + rep.message);
  const LandscapeCensus census = enumerate_landscape(J);
  ExperimentResult out;
  out.csv_header = "n,ground_states,strict_local_minima,plateau_members,min_energy";
  out.csv_rows.push_back(csv_join(
      {std::to_string(census.n), std::to_string(census.ground_states),
       std::to_string(census.strict_local_minima), std::to_string(census.plateau_members),
       format_double(census.min_energy)}));
  // Fixed payload schema, no envelope.
  out.summary = json{{"n", census.n},
                     {"ground_states", census.ground_states},
                     {"strict_local_minima", census.strict_local_minima},
                     {"plateau_members", census.plateau_members},
                     {"min_energy", census.min_energy}};
  return out;
}

ExperimentResult mag0_result(const ExperimentConfig& cfg) {
  const Mag0Result r = initial_magnetization_stat(cfg.n, cfg.epsilon, cfg.trials,
                                                  cfg.master_seed, cfg.threads);
  ExperimentResult out;
  out.csv_header = "trial,seed,m0,hit";
  for (std::uint32_t t = 0; t < cfg.trials; ++t) {
    const bool hit =
        static_cast<double>(std::llabs(r.per_trial_m0[t])) >= r.threshold;
    out.csv_rows.push_back(csv_join({std::to_string(t), std::to_string(r.trial_seed[t]),
                                     std::to_string(r.per_trial_m0[t]),
                                     std::to_string(hit ? 1 : 0)}));
  }
  json doc = envelope(cfg);
  json results;
  results["threshold"] = r.threshold;
  results["hits"] = r.hits;
  results["trials"] = r.trials;
  results["fraction"] = r.fraction;
  results["ci"] = interval_json(r.ci);
  doc["results"] = results;
  out.summary = std::move(doc);
  return out;
}

json drift_class_json(const DriftClassStats& st) {
  json c;
  c["samples"] = st.samples;
  c["positives"] = st.positives;
  c["pooled_fraction"] = st.pooled_fraction;
  c["pooled_ci"] = interval_json(st.pooled_ci);
  c["trial_mean"] = st.trial_level.mean;
  c["trial_se"] = st.trial_level.se;
  c["trial_ci"] = interval_json(st.trial_ci);
  return c;
}

ExperimentResult drift_result(const ExperimentConfig& cfg) {
  const DriftResult r = drift_probe(cfg);
  ExperimentResult out;
  out.csv_header =
      "trial,seed,first_visits_plus,positive_plus,first_visits_minus,positive_minus";
  for (const auto& row : r.trials)
    out.csv_rows.push_back(csv_join(
        {std::to_string(row.trial), std::to_string(row.seed),
         std::to_string(row.first_visits_plus), std::to_string(row.positive_plus),
         std::to_string(row.first_visits_minus), std::to_string(row.positive_minus)}));
  json doc = envelope(cfg);
  json results;
  results["m0"] = r.m0;
  results["window"] = r.window;
  results["initial_plus"] = drift_class_json(r.plus);
  results["initial_minus"] = drift_class_json(r.minus);
  results["overall"] = drift_class_json(r.overall);
  doc["results"] = results;
  out.summary = std::move(doc);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::simulate: return simulate_result(cfg);
    case ExperimentKind::qd: return qd_result(cfg);
    case ExperimentKind::mincut: return mincut_result(cfg);
    case ExperimentKind::bully: return bully_result(cfg);
    case ExperimentKind::enumerate_states: return enumerate_result(cfg);
    case ExperimentKind::mag0: return mag0_result(cfg);
    case ExperimentKind::drift: return drift_result(cfg);
  }
  throw std::invalid_argument("run_experiment: unknown experiment kind");
}

std::string result_csv_text(const ExperimentResult& r) {
  std::string text = r.csv_header + "\n";
  for (const auto& row : r.csv_rows) {
    text += row;
    text += '\n';
  }
  return text;
}

void write_result(const ExperimentResult& r, const std::string& path, OutputFormat format,
                  bool append) {
  namespace fs = std::filesystem;
  const bool exists_nonempty = [&] {
    std::error_code ec;
    return fs::exists(path, ec) && fs::file_size(path, ec) > 0;
  }();
  std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
  if (!f) throw IoError("cannot open output file", path);
  if (format == OutputFormat::csv) {
    if (!(append && exists_nonempty)) f << r.csv_header << '\n';
    for (const auto& row : r.csv_rows) f << row << '\n';
  } else {
    f << r.summary.dump(2) << '\n';
  }
  f.flush();
  if (!f) throw IoError("failed writing output file", path);
}

}  // namespace ztdyn
