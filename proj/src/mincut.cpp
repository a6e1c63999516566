// SPDX-License-Identifier: Apache-2.0
#include "mincut.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

#include "rng.hpp"

namespace ztdyn {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Per-vertex crossing/non-crossing weights; delta(v) = same(v) - cross(v) is
// the cut change of moving v to the other side.
struct CutState {
  std::vector<std::uint8_t> in_a;
  std::vector<double> same, cross;
  double cut = 0.0;
  std::uint32_t improving = 0;  // vertices with delta < 0
  std::uint32_t ties = 0;       // vertices with delta == 0
};

inline int vertex_class(double same, double cross) {
  const double delta = same - cross;
  if (delta == 0.0) return 2;
  return delta > 0.0 ? 0 : 1;  // 0 strictly held, 1 improving
}

void class_add(CutState& cs, int cls, int delta) {
  if (cls == 1)
    cs.improving += delta;
  else if (cls == 2)
    cs.ties += delta;
}

CutState make_cut_state(const CouplingMatrix& J, const Partition& part) {
  const std::uint32_t n = J.n();
  CutState cs;
  cs.in_a = part.membership;
  cs.same.assign(n, 0.0);
  cs.cross.assign(n, 0.0);
  if (J.bitpacked()) {
    std::vector<std::uint64_t> a_mask(J.words_per_row(), 0);
    for (std::uint32_t i = 0; i < n; ++i)
      if (cs.in_a[i]) a_mask[i >> 6] |= 1ull << (i & 63u);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto row = J.row_bits(i);
      std::int64_t to_a = 0, deg = 0;
      for (std::uint32_t w = 0; w < row.size(); ++w) {
        to_a += std::popcount(row[w] & a_mask[w]);
        deg += std::popcount(row[w]);
      }
      const auto same = static_cast<double>(cs.in_a[i] ? to_a : deg - to_a);
      cs.same[i] = same;
      cs.cross[i] = static_cast<double>(deg) - same;
    }
  } else {
    for (std::uint32_t i = 0; i < n; ++i) {
      const double* row = J.row(i);
      for (std::uint32_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (cs.in_a[j] == cs.in_a[i])
          cs.same[i] += row[j];
        else
          cs.cross[i] += row[j];
      }
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    cs.cut += cs.cross[i];
    class_add(cs, vertex_class(cs.same[i], cs.cross[i]), +1);
  }
  cs.cut /= 2.0;
  return cs;
}

void move_vertex(CutState& cs, const CouplingMatrix& J, std::uint32_t v) {
  const std::uint32_t n = J.n();
  cs.cut += cs.same[v] - cs.cross[v];
  class_add(cs, vertex_class(cs.same[v], cs.cross[v]), -1);
  cs.in_a[v] ^= 1u;
  std::swap(cs.same[v], cs.cross[v]);
  class_add(cs, vertex_class(cs.same[v], cs.cross[v]), +1);
  auto shift = [&](std::uint32_t j, double w) {
    class_add(cs, vertex_class(cs.same[j], cs.cross[j]), -1);
    if (cs.in_a[j] == cs.in_a[v]) {
      cs.same[j] += w;
      cs.cross[j] -= w;
    } else {
      cs.same[j] -= w;
      cs.cross[j] += w;
    }
    class_add(cs, vertex_class(cs.same[j], cs.cross[j]), +1);
  };
  if (J.bitpacked()) {
    const auto row = J.row_bits(v);
    for (std::uint32_t w = 0; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        const std::uint32_t j = (w << 6) + std::countr_zero(bits);
        bits &= bits - 1;
        shift(j, 1.0);
      }
    }
  } else {
    const double* row = J.row(v);
    for (std::uint32_t j = 0; j < n; ++j)
      if (j != v && row[j] != 0.0) shift(j, row[j]);
  }
}

}  // namespace

std::uint32_t Partition::size_a() const {
  std::uint32_t k = 0;
  for (auto b : membership) k += b != 0;
  return k;
}

bool Partition::trivial() const {
  const std::uint32_t k = size_a();
  return k == 0 || k == n();
}

const char* search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::trivial: return "trivial";
    case SearchStatus::nontrivial_local_mincut: return "nontrivial_local_mincut";
    case SearchStatus::plateau: return "plateau";
    case SearchStatus::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

double cut_value(const CouplingMatrix& J, const Partition& part) {
  const std::uint32_t n = J.n();
  require(part.membership.size() == n, "cut_value: dimension mismatch");
  double cut = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!part.membership[i]) continue;
    for (std::uint32_t j = 0; j < n; ++j)
      if (!part.membership[j]) cut += J.entry(i, j);
  }
  return cut;
}

MincutWitness is_local_mincut(const CouplingMatrix& J, const Partition& part) {
  const std::uint32_t n = J.n();
  require(part.membership.size() == n, "is_local_mincut: dimension mismatch");
  MincutWitness w;
  for (std::uint32_t v = 0; v < n; ++v) {
    double same = 0.0, cross = 0.0;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == v) continue;
      if (part.membership[j] == part.membership[v])
        same += J.entry(v, j);
      else
        cross += J.entry(v, j);
    }
    if (same - cross < 0.0) {
      w.local_min = false;
      w.improving_vertex = v;
      w.improvement = cross - same;
      return w;
    }
  }
  return w;
}

SearchOutcome greedy_search(const CouplingMatrix& J, Partition start, std::uint64_t seed,
                            std::uint64_t max_iters, MoveObserver* observer) {
  const std::uint32_t n = J.n();
  require(start.membership.size() == n, "greedy_search: dimension mismatch");
  require(max_iters > 0, "greedy_search: max_iters must be > 0");

  SearchOutcome out;
  CutState cs = make_cut_state(J, start);
  rng::SplitMix64 stream(seed);

  auto finish = [&](SearchStatus status, std::uint64_t iters) {
    out.status = status;
    out.iterations = iters;
    out.final.membership = std::move(cs.in_a);
    out.final_cut = cut_value(J, out.final);
    return out;
  };

  if (cs.improving == 0 && cs.ties == 0)
    return finish(Partition{cs.in_a}.trivial() ? SearchStatus::trivial
                                               : SearchStatus::nontrivial_local_mincut,
                  0);

  const std::uint64_t quiet_limit = static_cast<std::uint64_t>(n) * n;
  std::uint64_t quiet = 0;
  for (std::uint64_t t = 1; t <= max_iters; ++t) {
    const auto v = static_cast<std::uint32_t>(stream.next_below(n));
    const int coin = stream.next_sign();
    const double delta = cs.same[v] - cs.cross[v];
    const bool strict = delta < 0.0;
    const bool tie_move = delta == 0.0 && (coin > 0) != (cs.in_a[v] != 0);
    if (strict || tie_move) {
      move_vertex(cs, J, v);
      ++out.moves;
    }
    if (observer) observer->on_move({t, v, delta, strict || tie_move, cs.in_a[v] != 0});

    if (cs.improving == 0 && cs.ties == 0)
      return finish(Partition{cs.in_a}.trivial() ? SearchStatus::trivial
                                                 : SearchStatus::nontrivial_local_mincut,
                    t);
    if (strict || cs.improving > 0)
      quiet = 0;
    else
      ++quiet;
    if (quiet >= quiet_limit) return finish(SearchStatus::plateau, t);
  }
  return finish(SearchStatus::budget_exhausted, max_iters);
}

Partition partition_of_spins(const SpinConfig& s) {
  Partition p;
  p.membership.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) p.membership[i] = s[i] > 0;
  return p;
}

SpinConfig spins_of_partition(const Partition& part) {
  SpinConfig s(part.membership.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = part.membership[i] ? 1 : -1;
  return s;
}

Partition uniform_partition(std::uint32_t n, std::uint64_t seed) {
  return partition_of_spins(uniform_spins(n, seed));
}

Partition half_partition(std::uint32_t n, std::uint64_t seed) {
  const std::int64_t m0 = n % 2 == 0 ? 0 : -1;
  return partition_of_spins(fixed_magnetization_spins(n, m0, seed));
}

}  // namespace ztdyn
