// SPDX-License-Identifier: Apache-2.0
//
// ztdyn command line driver.  Thin argument layer over the ztdyn C API: it
// builds a zt_config, echoes the resolved config as JSON to stderr, runs the
// experiment and writes CSV or JSON to --out (stdout when omitted).
#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "ztdyn.h"

namespace {

int status_to_exit(zt_status st) {
  switch (st) {
    case ZT_OK: return 0;
    case ZT_ERR_INVALID_ARGUMENT: return 2;
    case ZT_ERR_IO: return 3;
    default: return 1;
  }
}

int parse_family(const std::string& name, zt_config& cfg) {
  if (name == "bernoulli")
    cfg.family = ZT_FAMILY_BERNOULLI;
  else if (name == "pareto")
    cfg.family = ZT_FAMILY_PARETO;
  else if (name == "constant")
    cfg.family = ZT_FAMILY_CONSTANT;
  else
    return -1;
  return 0;
}

int parse_policy(const std::string& name, zt_config& cfg) {
  if (name == "fair")
    cfg.policy = ZT_POLICY_FAIR;
  else if (name == "minus")
    cfg.policy = ZT_POLICY_MINUS;
  else if (name == "plus")
    cfg.policy = ZT_POLICY_PLUS;
  else
    return -1;
  return 0;
}

// --m0 accepts a signed integer or "auto:EPS" for ceil(n^(0.5-EPS)).
int parse_m0(const std::string& spec, zt_config& cfg) {
  if (spec.rfind("auto:", 0) == 0) {
    try {
      cfg.m0_auto = 1;
      cfg.m0_epsilon = std::stod(spec.substr(5));
    } catch (...) {
      return -1;
    }
    return 0;
  }
  try {
    std::size_t pos = 0;
    cfg.m0 = std::stoll(spec, &pos);
    if (pos != spec.size()) return -1;
    cfg.has_m0 = 1;
  } catch (...) {
    return -1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-temperature dynamics toolkit for disordered Curie-Weiss models"};
  app.require_subcommand(1);
  app.fallthrough();

  zt_config cfg;
  zt_config_init(&cfg);

  std::string out_path, format = "csv", model = "bernoulli", policy = "fair";
  std::string m0_spec, overlap = "full", start = "uniform";
  std::string couplings_file, dump_couplings;
  bool append = false;
  bool trace = false;
  unsigned long long trace_stride = 0;

  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--append", append, "append CSV rows instead of truncating");

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model, "coupling family")
        ->check(CLI::IsMember({"bernoulli", "pareto", "constant"}));
    sub->add_option("--p", cfg.p, "bernoulli edge probability");
    sub->add_option("--alpha", cfg.alpha, "pareto tail exponent");
    sub->add_option("--scale", cfg.scale, "pareto scale");
    sub->add_option("--value", cfg.value, "constant coupling value");
  };

  auto* sim = app.add_subcommand("simulate", "zero-temperature dynamics runs");
  add_model(sim);
  sim->add_option("--n", cfg.n, "number of sites");
  sim->add_option("--m0", m0_spec, "initial magnetization: integer or auto:EPS");
  sim->add_option("--policy", policy, "zero-field coin policy")
      ->check(CLI::IsMember({"fair", "minus", "plus"}));
  sim->add_option("--max-steps", cfg.max_steps, "step budget (0 = 50 n ln n)");
  sim->add_option("--trials", cfg.trials, "number of trials");
  sim->add_option("--trace-stride", trace_stride, "record M_t every N steps (0 = n/10)");
  sim->add_option("--couplings-file", couplings_file, "load a pinned coupling matrix");
  sim->add_option("--dump-couplings", dump_couplings,
                  "dump the (first) sampled coupling matrix");

  auto* qd = app.add_subcommand("qd", "dynamical order parameter estimate");
  add_model(qd);
  qd->add_option("--n", cfg.n, "number of sites");
  qd->add_option("--trials", cfg.trials, "number of trials");
  qd->add_option("--replicas", cfg.replicas, "dynamics replicas per trial");
  qd->add_option("--policy", policy, "zero-field coin policy")
      ->check(CLI::IsMember({"fair", "minus", "plus"}));
  qd->add_option("--overlap", overlap, "replica-pair estimator form")
      ->check(CLI::IsMember({"full", "site"}));
  qd->add_option("--m0", m0_spec, "fixed initial magnetization (default: uniform)");
  qd->add_option("--max-steps", cfg.max_steps, "step budget (0 = 50 n ln n)");

  auto* mc = app.add_subcommand("mincut", "greedy local MINCUT search on G(n,p)");
  mc->add_option("--n", cfg.n, "number of vertices");
  mc->add_option("--p", cfg.p, "edge probability");
  mc->add_option("--trials", cfg.trials, "number of trials");
  mc->add_option("--max-iters", cfg.max_iters, "iteration budget (0 = 50 n ln n)");
  mc->add_option("--start", start, "start partition")
      ->check(CLI::IsMember({"uniform", "half"}));

  auto* bl = app.add_subcommand("bully", "bully-bond census and witness minima");
  bl->add_option("--n", cfg.n, "number of sites");
  bl->add_option("--alpha", cfg.alpha, "pareto tail exponent");
  bl->add_option("--scale", cfg.scale, "pareto scale");
  bl->add_option("--trials", cfg.trials, "number of trials");
  bl->add_option("--max-steps", cfg.max_steps, "descent step budget (0 = 50 n ln n)");

  auto* en = app.add_subcommand("enumerate", "exhaustive landscape census (n <= 22)");
  en->add_option("--couplings-file", couplings_file, "coupling matrix to enumerate")
      ->required();

  auto* mg = app.add_subcommand("mag0", "initial magnetization tail statistic");
  mg->add_option("--n", cfg.n, "number of sites");
  mg->add_option("--epsilon", cfg.epsilon, "threshold exponent: |M0| >= n^(0.5-eps)");
  mg->add_option("--trials", cfg.trials, "number of trials");

  auto* dr = app.add_subcommand("drift", "early-window first-visit field probe");
  dr->add_option("--n", cfg.n, "number of sites");
  dr->add_option("--p", cfg.p, "bernoulli edge probability");
  dr->add_option("--epsilon", cfg.epsilon, "exponent: m0 = ceil(n^(0.5-eps))");
  dr->add_option("--window", cfg.window, "probe window (0 = n^(0.5+3 eps))");
  dr->add_option("--trials", cfg.trials, "number of trials");
  dr->add_option("--policy", policy, "zero-field coin policy")
      ->check(CLI::IsMember({"fair", "minus", "plus"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (sim->parsed()) cfg.experiment = ZT_EXP_SIMULATE;
  if (qd->parsed()) cfg.experiment = ZT_EXP_QD;
  if (mc->parsed()) cfg.experiment = ZT_EXP_MINCUT;
  if (bl->parsed()) cfg.experiment = ZT_EXP_BULLY;
  if (en->parsed()) cfg.experiment = ZT_EXP_ENUMERATE;
  if (mg->parsed()) cfg.experiment = ZT_EXP_MAG0;
  if (dr->parsed()) cfg.experiment = ZT_EXP_DRIFT;

  if (bl->parsed()) model = "pareto";
  if (parse_family(model, cfg) != 0 || parse_policy(policy, cfg) != 0) {
    std::fprintf(stderr, "ztdyn: bad --model or --policy value\n");
    return 2;
  }
  if (!m0_spec.empty() && parse_m0(m0_spec, cfg) != 0) {
    std::fprintf(stderr, "ztdyn: bad --m0 value: %s\n", m0_spec.c_str());
    return 2;
  }
  cfg.overlap = overlap == "site" ? ZT_OVERLAP_SITE : ZT_OVERLAP_FULL;
  cfg.start = start == "half" ? ZT_START_HALF : ZT_START_UNIFORM;
  trace = trace || sim->count("--trace-stride") > 0;
  cfg.trace = trace ? 1 : 0;
  cfg.trace_stride = trace_stride;
  if (!couplings_file.empty()) cfg.couplings_file = couplings_file.c_str();
  if (!dump_couplings.empty()) cfg.dump_couplings = dump_couplings.c_str();

  char* echo = nullptr;
  zt_status st = zt_config_resolved_json(&cfg, &echo);
  if (st != ZT_OK) {
    std::fprintf(stderr, "ztdyn: %s\n", zt_last_error());
    return status_to_exit(st);
  }
  std::fprintf(stderr, "%s\n", echo);
  zt_string_free(echo);

  zt_result* result = nullptr;
  st = zt_experiment_run(&cfg, &result);
  if (st != ZT_OK) {
    std::fprintf(stderr, "ztdyn: %s\n", zt_last_error());
    return status_to_exit(st);
  }

  const bool json = format == "json";
  if (out_path.empty()) {
    const char* text = nullptr;
    st = json ? zt_result_summary_json(result, &text) : zt_result_csv(result, &text);
    if (st == ZT_OK) std::fputs(text, stdout);
    if (st == ZT_OK && json) std::fputc('\n', stdout);
  } else {
    st = zt_result_write(result, out_path.c_str(),
                         json ? ZT_FORMAT_JSON : ZT_FORMAT_CSV, append ? 1 : 0);
  }
  if (st != ZT_OK) std::fprintf(stderr, "ztdyn: %s\n", zt_last_error());
  zt_result_free(result);
  return status_to_exit(st);
}
