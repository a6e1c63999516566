// SPDX-License-Identifier: Apache-2.0
#include "coupling.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "rng.hpp"
#include "textio.hpp"

namespace ztdyn {

namespace {

using textio::format_double;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double parse_double(const std::string& tok, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::invalid_argument(std::string("malformed number in ") + what + ": " + tok);
  return v;
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::bernoulli: return "bernoulli";
    case Family::pareto: return "pareto";
    case Family::constant: return "constant";
    case Family::custom: return "custom";
  }
  return "?";
}

CouplingMatrix CouplingMatrix::sample_bernoulli(std::uint32_t n, double p,
                                                std::uint64_t seed) {
  require(n >= 2, "sample_bernoulli: n must be >= 2");
  require(p > 0.0 && p <= 1.0, "sample_bernoulli: p must be in (0,1]");
  CouplingMatrix m;
  m.n_ = n;
  m.tag_ = {Family::bernoulli, p, 0, 0, 0};
  m.seed_ = seed;
  m.bitpacked_ = true;
  m.unit_weights_ = true;
  m.wpr_ = (n + 63u) / 64u;
  m.bits_.assign(static_cast<std::size_t>(n) * m.wpr_, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double u =
          static_cast<double>(rng::derive(seed, i, j) >> 11) * 0x1.0p-53;
      if (u < p) {
        m.bits_[static_cast<std::size_t>(i) * m.wpr_ + (j >> 6)] |= 1ull << (j & 63u);
        m.bits_[static_cast<std::size_t>(j) * m.wpr_ + (i >> 6)] |= 1ull << (i & 63u);
      }
    }
  }
  return m;
}

CouplingMatrix CouplingMatrix::sample_pareto(std::uint32_t n, double alpha, double scale,
                                             std::uint64_t seed) {
  require(n >= 2, "sample_pareto: n must be >= 2");
  require(alpha > 0.0 && alpha < 1.0, "sample_pareto: alpha must be in (0,1)");
  require(scale > 0.0, "sample_pareto: scale must be > 0");
  CouplingMatrix m;
  m.n_ = n;
  m.tag_ = {Family::pareto, 0, alpha, scale, 0};
  m.seed_ = seed;
  m.dense_.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double u =
          static_cast<double>((rng::derive(seed, i, j) >> 11) + 1) * 0x1.0p-53;
      const double v = rng::pareto_from_unit(u, alpha, scale);
      m.dense_[static_cast<std::size_t>(i) * n + j] = v;
      m.dense_[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return m;
}

CouplingMatrix CouplingMatrix::sample_constant(std::uint32_t n, double value) {
  require(n >= 2, "sample_constant: n must be >= 2");
  require(value > 0.0, "sample_constant: value must be > 0");
  CouplingMatrix m;
  m.n_ = n;
  m.tag_ = {Family::constant, 0, 0, 0, value};
  m.unit_weights_ = value == 1.0;
  m.dense_.assign(static_cast<std::size_t>(n) * n, value);
  for (std::uint32_t i = 0; i < n; ++i) m.dense_[static_cast<std::size_t>(i) * n + i] = 0.0;
  return m;
}

CouplingMatrix CouplingMatrix::from_dense(std::uint32_t n, std::vector<double> entries) {
  require(n >= 2, "from_dense: n must be >= 2");
  require(entries.size() == static_cast<std::size_t>(n) * n,
          "from_dense: entries must have n*n elements");
  CouplingMatrix m;
  m.n_ = n;
  m.tag_ = {Family::custom, 0, 0, 0, 0};
  m.dense_ = std::move(entries);
  m.unit_weights_ = true;
  for (double v : m.dense_) {
    if (v != 0.0 && v != 1.0) {
      m.unit_weights_ = false;
      break;
    }
  }
  return m;
}

double CouplingMatrix::row_sum(std::uint32_t i) const {
  if (bitpacked_) return static_cast<double>(degree(i));
  double s = 0.0;
  const double* r = row(i);
  for (std::uint32_t j = 0; j < n_; ++j) s += r[j];
  return s;
}

std::uint64_t CouplingMatrix::degree(std::uint32_t i) const {
  std::uint64_t d = 0;
  for (std::uint64_t w : row_bits(i)) d += std::popcount(w);
  return d;
}

double CouplingMatrix::total_weight() const {
  double s = 0.0;
  for (std::uint32_t i = 0; i < n_; ++i) s += row_sum(i);
  return s / 2.0;
}

ValidationReport CouplingMatrix::validate() const {
  ValidationReport rep;
  auto offend = [&](std::uint32_t i, std::uint32_t j, const std::string& msg) {
    if (!rep.first_offense) {
      rep.first_offense = {i, j};
      rep.message = msg + " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  };
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (entry(i, i) != 0.0) {
      rep.diagonal_ok = false;
      offend(i, i, "nonzero diagonal");
    }
  }
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t j = i + 1; j < n_; ++j) {
      if (entry(i, j) != entry(j, i)) {
        rep.symmetry_ok = false;
        offend(i, j, "asymmetric entry");
      }
    }
  }
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t j = 0; j < n_; ++j) {
      const double v = entry(i, j);
      if (v < 0.0 || std::isnan(v)) {
        rep.nonnegative_ok = false;
        offend(i, j, "negative entry");
      }
    }
  }
  for (std::uint32_t i = 0; i < n_ && rep.family_ok; ++i) {
    for (std::uint32_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      const double v = entry(i, j);
      bool ok = true;
      std::string why;
      switch (tag_.family) {
        case Family::bernoulli:
          ok = v == 0.0 || v == 1.0;
          why = "bernoulli entry not 0/1";
          break;
        case Family::pareto:
          ok = v >= tag_.scale;
          why = "pareto entry below scale";
          break;
        case Family::constant:
          ok = v == tag_.value;
          why = "constant entry differs from value";
          break;
        case Family::custom:
          break;
      }
      if (!ok) {
        rep.family_ok = false;
        offend(i, j, why);
        break;
      }
    }
  }
  return rep;
}

bool CouplingMatrix::same_entries(const CouplingMatrix& other) const {
  if (n_ != other.n_) return false;
  for (std::uint32_t i = 0; i < n_; ++i)
    for (std::uint32_t j = 0; j < n_; ++j)
      if (entry(i, j) != other.entry(i, j)) return false;
  return true;
}

void CouplingMatrix::dump(std::ostream& out) const {
  out << n_ << ' ' << family_name(tag_.family);
  switch (tag_.family) {
    case Family::bernoulli: out << ' ' << format_double(tag_.p); break;
    case Family::pareto:
      out << ' ' << format_double(tag_.alpha) << ' ' << format_double(tag_.scale);
      break;
    case Family::constant: out << ' ' << format_double(tag_.value); break;
    case Family::custom: break;
  }
  out << ' ' << seed_ << '\n';
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::uint32_t j = 0; j < n_; ++j) {
      if (j) out << ' ';
      if (tag_.family == Family::bernoulli)
        out << (entry(i, j) != 0.0 ? '1' : '0');
      else
        out << format_double(entry(i, j));
    }
    out << '\n';
  }
}

void CouplingMatrix::dump_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open couplings file for writing", path);
  dump(f);
  f.flush();
  if (!f) throw IoError("failed writing couplings file", path);
}

CouplingMatrix CouplingMatrix::load(std::istream& in) {
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("couplings: missing header line");
  std::istringstream hs(header);
  std::uint64_t n64 = 0;
  std::string fam;
  if (!(hs >> n64 >> fam))
    throw std::invalid_argument("couplings: malformed header: " + header);
  if (n64 < 2 || n64 > (1u << 20))
    throw std::invalid_argument("couplings: unreasonable n in header");
  const auto n = static_cast<std::uint32_t>(n64);

  FamilyTag tag;
  std::string tok;
  auto next_tok = [&](const char* what) {
    if (!(hs >> tok)) throw std::invalid_argument(std::string("couplings: header missing ") + what);
    return tok;
  };
  if (fam == "bernoulli") {
    tag.family = Family::bernoulli;
    tag.p = parse_double(next_tok("p"), "header");
  } else if (fam == "pareto") {
    tag.family = Family::pareto;
    tag.alpha = parse_double(next_tok("alpha"), "header");
    tag.scale = parse_double(next_tok("scale"), "header");
  } else if (fam == "constant") {
    tag.family = Family::constant;
    tag.value = parse_double(next_tok("value"), "header");
  } else if (fam == "custom") {
    tag.family = Family::custom;
  } else {
    throw std::invalid_argument("couplings: unknown family: " + fam);
  }
  std::uint64_t seed = 0;
  hs >> seed;  // absent seed (hand-written files) defaults to 0

  std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (!(in >> tok))
        throw std::invalid_argument("couplings: truncated matrix body at row " +
                                    std::to_string(i));
      entries[static_cast<std::size_t>(i) * n + j] = parse_double(tok, "matrix body");
    }
  }

  CouplingMatrix m;
  m.n_ = n;
  m.tag_ = tag;
  m.seed_ = seed;
  bool unit = true;
  for (double v : entries)
    if (v != 0.0 && v != 1.0) {
      unit = false;
      break;
    }
  m.unit_weights_ = unit;
  if (tag.family == Family::bernoulli && unit) {
    m.bitpacked_ = true;
    m.wpr_ = (n + 63u) / 64u;
    m.bits_.assign(static_cast<std::size_t>(n) * m.wpr_, 0);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (entries[static_cast<std::size_t>(i) * n + j] != 0.0)
          m.bits_[static_cast<std::size_t>(i) * m.wpr_ + (j >> 6)] |= 1ull << (j & 63u);
  } else {
    m.dense_ = std::move(entries);
  }
  return m;
}

CouplingMatrix CouplingMatrix::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open couplings file", path);
  return load(f);
}

std::uint32_t CouplingMatrix::peek_n(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open couplings file", path);
  std::uint64_t n64 = 0;
  if (!(f >> n64) || n64 < 2)
    throw std::invalid_argument("couplings: malformed header in " + path);
  return static_cast<std::uint32_t>(n64);
}

}  // namespace ztdyn
