// SPDX-License-Identifier: Apache-2.0
#include "dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "rng.hpp"

namespace ztdyn {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// 0 satisfied, 1 unsatisfied, 2 zero field.
inline int site_class(double field, std::int8_t spin) {
  if (field == 0.0) return 2;
  return ((field > 0.0) == (spin > 0)) ? 0 : 1;
}

inline void count_add(DynamicsState& st, int cls, int delta) {
  if (cls == 1)
    st.unsat_count += delta;
  else if (cls == 2)
    st.zero_count += delta;
}

// Packs the +1 sites of s as a bit mask aligned with the matrix rows.
std::vector<std::uint64_t> plus_mask(const CouplingMatrix& J, const SpinConfig& s) {
  std::vector<std::uint64_t> mask(J.words_per_row(), 0);
  for (std::uint32_t i = 0; i < J.n(); ++i)
    if (s[i] > 0) mask[i >> 6] |= 1ull << (i & 63u);
  return mask;
}

void apply_flip(DynamicsState& st, const CouplingMatrix& J, std::uint32_t site,
                std::int8_t new_spin) {
  const std::uint32_t n = J.n();
  const double d = 2.0 * static_cast<double>(new_spin);
  if (J.bitpacked()) {
    const auto row = J.row_bits(site);
    for (std::uint32_t w = 0; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        const std::uint32_t j = (w << 6) + std::countr_zero(bits);
        bits &= bits - 1;
        const double f = st.fields[j];
        const double nf = f + d;
        count_add(st, site_class(f, st.spins[j]), -1);
        count_add(st, site_class(nf, st.spins[j]), +1);
        st.fields[j] = nf;
      }
    }
  } else {
    const double* row = J.row(site);
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == site || row[j] == 0.0) continue;
      const double f = st.fields[j];
      const double nf = f + d * row[j];
      count_add(st, site_class(f, st.spins[j]), -1);
      count_add(st, site_class(nf, st.spins[j]), +1);
      st.fields[j] = nf;
    }
  }
  // The flipped site's own field is untouched; only its satisfaction moves.
  count_add(st, site_class(st.fields[site], st.spins[site]), -1);
  st.spins[site] = new_spin;
  count_add(st, site_class(st.fields[site], new_spin), +1);
  st.magnetization += 2 * static_cast<std::int64_t>(new_spin);
}

}  // namespace

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ground_plus: return "ground_plus";
    case RunStatus::ground_minus: return "ground_minus";
    case RunStatus::strict_local_min: return "strict_local_min";
    case RunStatus::plateau: return "plateau";
    case RunStatus::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

const char* state_class_name(StateClass c) {
  switch (c) {
    case StateClass::ground_plus: return "ground_plus";
    case StateClass::ground_minus: return "ground_minus";
    case StateClass::strict_local_min: return "strict_local_min";
    case StateClass::plateau_member: return "plateau_member";
    case StateClass::none: return "none";
  }
  return "?";
}

std::vector<double> compute_fields(const CouplingMatrix& J, const SpinConfig& s) {
  const std::uint32_t n = J.n();
  require(s.size() == n, "compute_fields: dimension mismatch");
  std::vector<double> fields(n, 0.0);
  if (J.bitpacked()) {
    const auto mask = plus_mask(J, s);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto row = J.row_bits(i);
      std::int64_t plus = 0, deg = 0;
      for (std::uint32_t w = 0; w < row.size(); ++w) {
        plus += std::popcount(row[w] & mask[w]);
        deg += std::popcount(row[w]);
      }
      fields[i] = static_cast<double>(2 * plus - deg);
    }
  } else {
    for (std::uint32_t i = 0; i < n; ++i) {
      const double* row = J.row(i);
      double m = 0.0;
      for (std::uint32_t j = 0; j < n; ++j)
        if (j != i) m += row[j] * static_cast<double>(s[j]);
      fields[i] = m;
    }
  }
  return fields;
}

DynamicsState make_state(const CouplingMatrix& J, SpinConfig s) {
  DynamicsState st;
  st.spins = std::move(s);
  refresh_state(st, J);
  return st;
}

void refresh_state(DynamicsState& st, const CouplingMatrix& J) {
  require(st.spins.size() == J.n(), "refresh_state: dimension mismatch");
  st.fields = compute_fields(J, st.spins);
  st.magnetization = magnetization_of(st.spins);
  st.unsat_count = 0;
  st.zero_count = 0;
  for (std::uint32_t i = 0; i < J.n(); ++i)
    count_add(st, site_class(st.fields[i], st.spins[i]), +1);
}

double interaction_sum(const CouplingMatrix& J, const SpinConfig& s) {
  const std::uint32_t n = J.n();
  require(s.size() == n, "interaction_sum: dimension mismatch");
  if (J.bitpacked()) {
    const auto mask = plus_mask(J, s);
    std::int64_t twice = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto row = J.row_bits(i);
      std::int64_t plus = 0, deg = 0;
      for (std::uint32_t w = 0; w < row.size(); ++w) {
        plus += std::popcount(row[w] & mask[w]);
        deg += std::popcount(row[w]);
      }
      twice += static_cast<std::int64_t>(s[i]) * (2 * plus - deg);
    }
    return static_cast<double>(twice / 2);
  }
  double sum = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double* row = J.row(i);
    for (std::uint32_t j = i + 1; j < n; ++j)
      sum += row[j] * static_cast<double>(s[i]) * static_cast<double>(s[j]);
  }
  return sum;
}

double energy(const CouplingMatrix& J, const SpinConfig& s) {
  return -interaction_sum(J, s) / static_cast<double>(J.n());
}

int satisfaction(const DynamicsState& st, std::uint32_t i) {
  require(i < st.spins.size(), "satisfaction: index out of range");
  const double m = st.fields[i];
  if (m == 0.0) return 0;
  return (m > 0.0 ? 1 : -1) * static_cast<int>(st.spins[i]);
}

StepResult step(DynamicsState& st, const CouplingMatrix& J, std::uint32_t site, int coin) {
  require(site < J.n() && st.spins.size() == J.n(), "step: bad site or dimension");
  const double m = st.fields[site];
  const std::int8_t s = st.spins[site];
  const bool strict = (s > 0) ? (m < 0.0) : (m > 0.0);
  const bool zero_move = (m == 0.0) && coin != s;
  ++st.step;
  if (!strict && !zero_move) return {};
  apply_flip(st, J, site, static_cast<std::int8_t>(-s));
  return {true, strict};
}

StateClass is_absorbing(const CouplingMatrix& J, const SpinConfig& s) {
  const std::uint32_t n = J.n();
  require(s.size() == n, "is_absorbing: dimension mismatch");
  const auto fields = compute_fields(J, s);
  bool uniform_plus = true, uniform_minus = true;
  bool any_zero = false;
  for (std::uint32_t i = 0; i < n; ++i) {
    uniform_plus &= s[i] > 0;
    uniform_minus &= s[i] < 0;
    const int c = site_class(fields[i], s[i]);
    if (c == 1) return StateClass::none;
    any_zero |= c == 2;
  }
  if (uniform_plus) return StateClass::ground_plus;
  if (uniform_minus) return StateClass::ground_minus;
  return any_zero ? StateClass::plateau_member : StateClass::strict_local_min;
}

std::uint64_t default_max_steps(std::uint32_t n) {
  return static_cast<std::uint64_t>(
      std::ceil(50.0 * static_cast<double>(n) * std::log(std::max<double>(n, 2))));
}

RunOutcome run(const CouplingMatrix& J, SpinConfig sigma0, const RunOptions& opt,
               StepObserver* observer) {
  const std::uint32_t n = J.n();
  require(sigma0.size() == n, "run: dimension mismatch");
  const std::uint64_t max_steps = opt.max_steps ? opt.max_steps : default_max_steps(n);
  require(max_steps > 0, "run: max_steps must be > 0");

  RunOutcome out;
  DynamicsState st = make_state(J, std::move(sigma0));
  rng::SplitMix64 stream(opt.seed);

  const bool trace = opt.trace_stride > 0;
  if (trace) out.magnetization_trace.emplace_back(0, st.magnetization);

  auto absorbed_status = [&]() {
    if (st.magnetization == static_cast<std::int64_t>(n)) return RunStatus::ground_plus;
    if (st.magnetization == -static_cast<std::int64_t>(n)) return RunStatus::ground_minus;
    return RunStatus::strict_local_min;
  };

  if (st.unsat_count == 0 && st.zero_count == 0) {
    out.status = absorbed_status();
    out.final_state = std::move(st);
    return out;
  }

  // Forced exact recomputation bounds float drift for real-valued couplings.
  const std::uint64_t refresh_period =
      J.unit_weights() ? 0 : static_cast<std::uint64_t>(n) * n;
  const std::uint64_t quiet_limit = static_cast<std::uint64_t>(n) * n;
  std::uint64_t quiet = 0;

  for (std::uint64_t t = 1; t <= max_steps; ++t) {
    const auto site = static_cast<std::uint32_t>(stream.next_below(n));
    const int coin = opt.policy == ZeroFieldPolicy::fair_coin ? stream.next_sign()
                     : opt.policy == ZeroFieldPolicy::always_minus ? -1
                                                                   : +1;
    const std::int8_t before = st.spins[site];
    const double field = st.fields[site];
    const StepResult res = step(st, J, site, coin);
    if (observer) observer->on_step({t, site, field, before, st.spins[site]});
    out.flips += res.flipped;
    out.strict_flips += res.strict;

    if (trace && t % opt.trace_stride == 0)
      out.magnetization_trace.emplace_back(t, st.magnetization);

    if (refresh_period && t % refresh_period == 0) refresh_state(st, J);

    if (st.unsat_count == 0 && st.zero_count == 0) {
      out.status = absorbed_status();
      out.steps_taken = t;
      break;
    }
    if (res.strict || st.unsat_count > 0)
      quiet = 0;
    else
      ++quiet;
    if (quiet >= quiet_limit) {
      out.status = RunStatus::plateau;
      out.steps_taken = t;
      break;
    }
    if (t == max_steps) {
      out.status = RunStatus::budget_exhausted;
      out.steps_taken = t;
    }
  }
  if (trace && out.magnetization_trace.back().first != out.steps_taken)
    out.magnetization_trace.emplace_back(out.steps_taken, st.magnetization);
  out.final_state = std::move(st);
  return out;
}

SpinConfig uniform_spins(std::uint32_t n, std::uint64_t seed) {
  rng::SplitMix64 stream(seed);
  SpinConfig s(n);
  for (auto& v : s) v = static_cast<std::int8_t>(stream.next_sign());
  return s;
}

SpinConfig fixed_magnetization_spins(std::uint32_t n, std::int64_t m0, std::uint64_t seed) {
  require(std::llabs(m0) <= n, "fixed_magnetization_spins: |m0| > n");
  require((static_cast<std::int64_t>(n) + m0) % 2 == 0,
          "fixed_magnetization_spins: n + m0 must be even");
  const auto k_plus = static_cast<std::uint32_t>((static_cast<std::int64_t>(n) + m0) / 2);
  SpinConfig s(n, -1);
  std::fill(s.begin(), s.begin() + k_plus, 1);
  rng::SplitMix64 stream(seed);
  for (std::uint32_t i = n - 1; i > 0; --i)
    std::swap(s[i], s[stream.next_below(i + 1)]);
  return s;
}

std::int64_t magnetization_of(const SpinConfig& s) {
  std::int64_t m = 0;
  for (auto v : s) m += v;
  return m;
}

std::uint64_t spin_index(const SpinConfig& s) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] > 0) idx |= 1ull << i;
  return idx;
}

SpinConfig spins_from_index(std::uint32_t n, std::uint64_t index) {
  SpinConfig s(n);
  for (std::uint32_t i = 0; i < n; ++i)
    s[i] = (index >> i) & 1u ? 1 : -1;
  return s;
}

LandscapeCensus enumerate_landscape(const CouplingMatrix& J) {
  const std::uint32_t n = J.n();
  require(n <= kEnumerateCap, "enumerate_landscape: n above cap");
  LandscapeCensus census;
  census.n = n;
  const std::uint64_t total = 1ull << n;
  census.classes.assign(total, static_cast<std::uint8_t>(StateClass::none));

  // Gray-code walk: one spin flip per state, fields and the pair sum carry
  // over incrementally.
  SpinConfig s(n, -1);
  DynamicsState st = make_state(J, s);
  double pair_sum = interaction_sum(J, st.spins);
  census.min_energy = -pair_sum / n;
  std::uint64_t gray = 0;

  auto classify = [&](std::uint64_t idx) {
    bool uniform_plus = true, uniform_minus = true, any_zero = false, any_unsat = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      uniform_plus &= st.spins[i] > 0;
      uniform_minus &= st.spins[i] < 0;
      const int c = site_class(st.fields[i], st.spins[i]);
      any_unsat |= c == 1;
      any_zero |= c == 2;
    }
    StateClass cls = StateClass::none;
    if (!any_unsat) {
      if (uniform_plus)
        cls = StateClass::ground_plus;
      else if (uniform_minus)
        cls = StateClass::ground_minus;
      else
        cls = any_zero ? StateClass::plateau_member : StateClass::strict_local_min;
    }
    census.classes[idx] = static_cast<std::uint8_t>(cls);
    switch (cls) {
      case StateClass::ground_plus:
      case StateClass::ground_minus: ++census.ground_states; break;
      case StateClass::strict_local_min: ++census.strict_local_minima; break;
      case StateClass::plateau_member: ++census.plateau_members; break;
      case StateClass::none: break;
    }
    census.min_energy = std::min(census.min_energy, -pair_sum / n);
  };

  classify(0);
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint32_t b = std::countr_zero(k);
    pair_sum -= 2.0 * static_cast<double>(st.spins[b]) * st.fields[b];
    apply_flip(st, J, b, static_cast<std::int8_t>(-st.spins[b]));
    gray ^= 1ull << b;
    if (!J.unit_weights() && (k & 0xFFFu) == 0) {
      refresh_state(st, J);
      pair_sum = interaction_sum(J, st.spins);
    }
    classify(gray);
  }
  return census;
}

}  // namespace ztdyn
