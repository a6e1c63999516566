// SPDX-License-Identifier: Apache-2.0
#include "ztdyn.h"

#include <cstring>
#include <new>
#include <string>

#include "coupling.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "experiments.hpp"

using namespace ztdyn;

struct zt_matrix {
  CouplingMatrix m;
};

struct zt_result {
  ExperimentResult r;
  std::string summary_text;
  std::string csv_text;
};

namespace {

thread_local std::string g_last_error;

zt_status fail(zt_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
zt_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    return fail(ZT_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ZT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ZT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ZT_ERR_INTERNAL, e.what());
  }
}

SpinConfig spins_from_raw(const zt_matrix* m, const int8_t* spins) {
  if (!spins) throw std::invalid_argument("spins must not be NULL");
  const std::uint32_t n = m->m.n();
  SpinConfig s(spins, spins + n);
  for (auto v : s)
    if (v != 1 && v != -1) throw std::invalid_argument("spins entries must be +-1");
  return s;
}

ZeroFieldPolicy policy_from(int p) {
  switch (p) {
    case ZT_POLICY_FAIR: return ZeroFieldPolicy::fair_coin;
    case ZT_POLICY_MINUS: return ZeroFieldPolicy::always_minus;
    case ZT_POLICY_PLUS: return ZeroFieldPolicy::always_plus;
  }
  throw std::invalid_argument("unknown policy");
}

ExperimentConfig config_from(const zt_config* cfg) {
  if (!cfg) throw std::invalid_argument("config must not be NULL");
  ExperimentConfig c;
  switch (cfg->experiment) {
    case ZT_EXP_SIMULATE: c.kind = ExperimentKind::simulate; break;
    case ZT_EXP_QD: c.kind = ExperimentKind::qd; break;
    case ZT_EXP_MINCUT: c.kind = ExperimentKind::mincut; break;
    case ZT_EXP_BULLY: c.kind = ExperimentKind::bully; break;
    case ZT_EXP_ENUMERATE: c.kind = ExperimentKind::enumerate_states; break;
    case ZT_EXP_MAG0: c.kind = ExperimentKind::mag0; break;
    case ZT_EXP_DRIFT: c.kind = ExperimentKind::drift; break;
    default: throw std::invalid_argument("unknown experiment kind");
  }
  switch (cfg->family) {
    case ZT_FAMILY_BERNOULLI:
      c.family = {Family::bernoulli, cfg->p, 0, 0, 0};
      break;
    case ZT_FAMILY_PARETO:
      c.family = {Family::pareto, 0, cfg->alpha, cfg->scale, 0};
      break;
    case ZT_FAMILY_CONSTANT:
      c.family = {Family::constant, 0, 0, 0, cfg->value};
      break;
    case ZT_FAMILY_CUSTOM:
      c.family = {Family::custom, 0, 0, 0, 0};
      break;
    default: throw std::invalid_argument("unknown family");
  }
  c.n = cfg->n;
  c.trials = cfg->trials;
  c.replicas = cfg->replicas;
  c.master_seed = cfg->seed;
  c.policy = policy_from(cfg->policy);
  if (cfg->has_m0) c.m0 = cfg->m0;
  c.m0_auto = cfg->m0_auto != 0;
  c.m0_epsilon = cfg->m0_epsilon;
  c.epsilon = cfg->epsilon;
  c.max_steps = cfg->max_steps;
  c.max_iters = cfg->max_iters;
  c.trace = cfg->trace != 0;
  c.trace_stride = cfg->trace_stride;
  c.window = cfg->window;
  c.overlap = cfg->overlap == ZT_OVERLAP_SITE ? OverlapMode::site : OverlapMode::full;
  c.start = cfg->start == ZT_START_HALF ? StartMode::half : StartMode::uniform;
  c.threads = cfg->threads;
  if (cfg->couplings_file) c.couplings_file = cfg->couplings_file;
  if (cfg->dump_couplings) c.dump_couplings = cfg->dump_couplings;
  return c;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* zt_version(void) { return ZT_VERSION_STRING; }

const char* zt_last_error(void) { return g_last_error.c_str(); }

void zt_string_free(char* s) { delete[] s; }

zt_status zt_matrix_bernoulli(uint32_t n, double p, uint64_t seed, zt_matrix** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("out must not be NULL");
    *out = new zt_matrix{CouplingMatrix::sample_bernoulli(n, p, seed)};
    return ZT_OK;
  });
}

zt_status zt_matrix_pareto(uint32_t n, double alpha, double scale, uint64_t seed,
                           zt_matrix** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("out must not be NULL");
    *out = new zt_matrix{CouplingMatrix::sample_pareto(n, alpha, scale, seed)};
    return ZT_OK;
  });
}

zt_status zt_matrix_constant(uint32_t n, double value, zt_matrix** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("out must not be NULL");
    *out = new zt_matrix{CouplingMatrix::sample_constant(n, value)};
    return ZT_OK;
  });
}

zt_status zt_matrix_dense(uint32_t n, const double* entries, zt_matrix** out) {
  return guarded([&] {
    if (!out || !entries) throw std::invalid_argument("arguments must not be NULL");
    std::vector<double> e(entries, entries + static_cast<std::size_t>(n) * n);
    *out = new zt_matrix{CouplingMatrix::from_dense(n, std::move(e))};
    return ZT_OK;
  });
}

zt_status zt_matrix_load(const char* path, zt_matrix** out) {
  return guarded([&] {
    if (!out || !path) throw std::invalid_argument("arguments must not be NULL");
    *out = new zt_matrix{CouplingMatrix::load_file(path)};
    return ZT_OK;
  });
}

zt_status zt_matrix_dump(const zt_matrix* m, const char* path) {
  return guarded([&] {
    if (!m || !path) throw std::invalid_argument("arguments must not be NULL");
    m->m.dump_file(path);
    return ZT_OK;
  });
}

uint32_t zt_matrix_n(const zt_matrix* m) { return m ? m->m.n() : 0; }

double zt_matrix_entry(const zt_matrix* m, uint32_t i, uint32_t j) {
  return m->m.entry(i, j);
}

zt_status zt_matrix_validate(const zt_matrix* m) {
  return guarded([&] {
    if (!m) throw std::invalid_argument("matrix must not be NULL");
    const ValidationReport rep = m->m.validate();
    if (!rep.ok()) return fail(ZT_ERR_INVALID_ARGUMENT, rep.message.c_str());
    return ZT_OK;
  });
}

void zt_matrix_free(zt_matrix* m) { delete m; }

zt_status zt_uniform_spins(uint32_t n, uint64_t seed, int8_t* spins) {
  return guarded([&] {
    if (!spins) throw std::invalid_argument("spins must not be NULL");
    const SpinConfig s = uniform_spins(n, seed);
    std::memcpy(spins, s.data(), n);
    return ZT_OK;
  });
}

zt_status zt_fixed_magnetization_spins(uint32_t n, int64_t m0, uint64_t seed,
                                       int8_t* spins) {
  return guarded([&] {
    if (!spins) throw std::invalid_argument("spins must not be NULL");
    const SpinConfig s = fixed_magnetization_spins(n, m0, seed);
    std::memcpy(spins, s.data(), n);
    return ZT_OK;
  });
}

zt_status zt_energy(const zt_matrix* m, const int8_t* spins, double* out) {
  return guarded([&] {
    if (!m || !out) throw std::invalid_argument("arguments must not be NULL");
    *out = energy(m->m, spins_from_raw(m, spins));
    return ZT_OK;
  });
}

zt_status zt_is_absorbing(const zt_matrix* m, const int8_t* spins, zt_state_class* out) {
  return guarded([&] {
    if (!m || !out) throw std::invalid_argument("arguments must not be NULL");
    *out = static_cast<zt_state_class>(is_absorbing(m->m, spins_from_raw(m, spins)));
    return ZT_OK;
  });
}

zt_status zt_run_dynamics(const zt_matrix* m, const int8_t* sigma0, zt_policy policy,
                          uint64_t max_steps, uint64_t seed, zt_run_summary* out,
                          int8_t* final_spins) {
  return guarded([&] {
    if (!m || !out) throw std::invalid_argument("arguments must not be NULL");
    RunOptions opt{policy_from(policy), max_steps, seed, 0};
    const RunOutcome res = run(m->m, spins_from_raw(m, sigma0), opt);
    out->status = static_cast<zt_run_status>(res.status);
    out->steps = res.steps_taken;
    out->flips = res.flips;
    out->strict_flips = res.strict_flips;
    out->final_magnetization = res.final_state.magnetization;
    if (final_spins)
      std::memcpy(final_spins, res.final_state.spins.data(), m->m.n());
    return ZT_OK;
  });
}

zt_status zt_enumerate(const zt_matrix* m, zt_landscape_summary* out) {
  return guarded([&] {
    if (!m || !out) throw std::invalid_argument("arguments must not be NULL");
    const LandscapeCensus census = enumerate_landscape(m->m);
    out->n = census.n;
    out->ground_states = census.ground_states;
    out->strict_local_minima = census.strict_local_minima;
    out->plateau_members = census.plateau_members;
    out->min_energy = census.min_energy;
    return ZT_OK;
  });
}

void zt_config_init(zt_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof(*cfg));
  cfg->experiment = ZT_EXP_SIMULATE;
  cfg->family = ZT_FAMILY_BERNOULLI;
  cfg->p = 0.5;
  cfg->alpha = 0.5;
  cfg->scale = 1.0;
  cfg->value = 1.0;
  cfg->epsilon = 0.25;
  cfg->policy = ZT_POLICY_FAIR;
  cfg->trials = 1;
  cfg->replicas = 2;
  cfg->overlap = ZT_OVERLAP_FULL;
  cfg->start = ZT_START_UNIFORM;
}

zt_status zt_config_resolved_json(const zt_config* cfg, char** json_out) {
  return guarded([&] {
    if (!json_out) throw std::invalid_argument("json_out must not be NULL");
    const ExperimentConfig c = config_from(cfg);
    *json_out = dup_string(resolved_config_json(c, true).dump());
    return ZT_OK;
  });
}

zt_status zt_experiment_run(const zt_config* cfg, zt_result** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("out must not be NULL");
    const ExperimentConfig c = config_from(cfg);
    auto* r = new zt_result{run_experiment(c), {}, {}};
    r->summary_text = r->r.summary.dump(2);
    r->csv_text = result_csv_text(r->r);
    *out = r;
    return ZT_OK;
  });
}

zt_status zt_result_summary_json(const zt_result* r, const char** json) {
  if (!r || !json) return fail(ZT_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  *json = r->summary_text.c_str();
  return ZT_OK;
}

zt_status zt_result_csv(const zt_result* r, const char** csv) {
  if (!r || !csv) return fail(ZT_ERR_INVALID_ARGUMENT, "arguments must not be NULL");
  *csv = r->csv_text.c_str();
  return ZT_OK;
}

zt_status zt_result_write(const zt_result* r, const char* path, zt_format format,
                          int append) {
  return guarded([&] {
    if (!r || !path) throw std::invalid_argument("arguments must not be NULL");
    write_result(r->r, path,
                 format == ZT_FORMAT_JSON ? OutputFormat::json : OutputFormat::csv,
                 append != 0);
    return ZT_OK;
  });
}

void zt_result_free(zt_result* r) { delete r; }

}  // extern "C"
