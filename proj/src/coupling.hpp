// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ztdyn {

enum class Family { bernoulli, pareto, constant, custom };

const char* family_name(Family f);

// Disorder family plus its parameters; `custom` carries none.
struct FamilyTag {
  Family family = Family::custom;
  double p = 0.0;      // bernoulli
  double alpha = 0.0;  // pareto
  double scale = 0.0;  // pareto
  double value = 0.0;  // constant
};

struct ValidationReport {
  bool symmetry_ok = true;
  bool diagonal_ok = true;
  bool nonnegative_ok = true;
  bool family_ok = true;
  // First offending entry of the first failing check, row-major order.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> first_offense;
  std::string message;

  bool ok() const { return symmetry_ok && diagonal_ok && nonnegative_ok && family_ok; }
};

// Symmetric non-negative couplings with zero diagonal: the quenched
// environment.  Immutable after construction; safe to share across threads.
//
// Bernoulli matrices are stored bit-packed (one adjacency bit per pair); all
// other families are stored dense.  entry() is the authoritative semantic
// view either way.
class CouplingMatrix {
 public:
  static CouplingMatrix sample_bernoulli(std::uint32_t n, double p, std::uint64_t seed);
  static CouplingMatrix sample_pareto(std::uint32_t n, double alpha, double scale,
                                      std::uint64_t seed);
  static CouplingMatrix sample_constant(std::uint32_t n, double value);
  // Entries as given, row-major n*n; no invariant is enforced here so that
  // validate() has something to report on.
  static CouplingMatrix from_dense(std::uint32_t n, std::vector<double> entries);

  static CouplingMatrix load(std::istream& in);
  static CouplingMatrix load_file(const std::string& path);
  // Reads only the header line.
  static std::uint32_t peek_n(const std::string& path);
  void dump(std::ostream& out) const;
  void dump_file(const std::string& path) const;

  std::uint32_t n() const { return n_; }
  const FamilyTag& family() const { return tag_; }
  std::uint64_t seed() const { return seed_; }

  double entry(std::uint32_t i, std::uint32_t j) const {
    if (bitpacked_) {
      const std::uint64_t w = bits_[static_cast<std::size_t>(i) * wpr_ + (j >> 6)];
      return static_cast<double>((w >> (j & 63u)) & 1u);
    }
    return dense_[static_cast<std::size_t>(i) * n_ + j];
  }

  bool bitpacked() const { return bitpacked_; }
  // True iff every entry is exactly 0 or 1; field caches are then exact.
  bool unit_weights() const { return unit_weights_; }

  std::uint32_t words_per_row() const { return static_cast<std::uint32_t>(wpr_); }
  std::span<const std::uint64_t> row_bits(std::uint32_t i) const {
    return {bits_.data() + static_cast<std::size_t>(i) * wpr_, wpr_};
  }
  const double* row(std::uint32_t i) const {
    return dense_.data() + static_cast<std::size_t>(i) * n_;
  }

  double row_sum(std::uint32_t i) const;
  double total_weight() const;  // sum over unordered pairs
  std::uint64_t degree(std::uint32_t i) const;  // bitpacked only

  ValidationReport validate() const;

  bool same_entries(const CouplingMatrix& other) const;

 private:
  CouplingMatrix() = default;

  std::uint32_t n_ = 0;
  FamilyTag tag_;
  std::uint64_t seed_ = 0;
  bool bitpacked_ = false;
  bool unit_weights_ = false;
  std::size_t wpr_ = 0;  // 64-bit words per bit-packed row
  std::vector<std::uint64_t> bits_;
  std::vector<double> dense_;
};

}  // namespace ztdyn
