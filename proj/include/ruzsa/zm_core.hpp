#pragma once

// Subsets of Z_m and their representation functions.
//
// R_A(n) counts ordered pairs (a, a') in A x A with a + a' = n (mod m), so
// the pair (a, a) contributes once to R_A(2a) and the counts sum to |A|^2.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ruzsa/error.hpp"

namespace ruzsa::core {

/// Order of the cyclic group Z_m.
class Modulus {
 public:
  explicit Modulus(std::uint32_t m);
  std::uint32_t value() const { return m_; }
  friend bool operator==(Modulus, Modulus) = default;

 private:
  std::uint32_t m_;
};

/// Subset of Z_m stored as a length-m membership bit vector.
class ResidueSet {
 public:
  /// Empty set in Z_m.
  explicit ResidueSet(Modulus m);
  /// Throws PreconditionError if a member is >= m or repeated.
  ResidueSet(Modulus m, std::span<const std::uint32_t> members);
  ResidueSet(Modulus m, std::initializer_list<std::uint32_t> members);

  /// Builds from arbitrary integers, reducing each mod m; duplicates merge.
  static ResidueSet from_residues(Modulus m, std::span<const std::int64_t> values);
  /// Low `m` bits of `mask` are the members; requires m <= 64.
  static ResidueSet from_mask(Modulus m, std::uint64_t mask);

  Modulus modulus() const { return m_; }
  std::uint32_t m() const { return m_.value(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool contains(std::uint32_t residue) const;

  /// Members in ascending order.
  std::vector<std::uint32_t> members() const;
  std::span<const std::uint64_t> words() const { return words_; }
  /// Single-word view; requires m <= 64.
  std::uint64_t mask() const;

  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

 private:
  Modulus m_;
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Counts indexed by residue: R_A(n), R_{A,-A}(n), ...
struct RepVector {
  Modulus modulus;
  std::vector<std::uint32_t> counts;

  std::uint64_t total() const;
  std::uint32_t max() const;
  std::uint32_t min() const;
};

/// Histogram of a RepVector: k_counts[i-1] = #{n : R(n) = i} for 1 <= i <= cap.
struct RepProfile {
  Modulus modulus;
  std::size_t cardinality = 0;
  std::vector<std::uint32_t> k_counts;
  std::uint32_t overflow = 0;  // residues with R(n) > cap
  std::uint32_t zeros = 0;     // residues with R(n) = 0
};

RepVector rep_function(const ResidueSet& a);
RepVector diff_function(const ResidueSet& a);
bool is_basis(const ResidueSet& a);
std::uint32_t max_rep(const ResidueSet& a);
RepProfile rep_profile(const ResidueSet& a, std::uint32_t cap);
RepProfile profile_of(const RepVector& rep, std::size_t cardinality, std::uint32_t cap);

/// 1 <= R_A(n) <= r for every n. Throws PreconditionError on modulus mismatch.
bool verify_witness(Modulus m, const ResidueSet& a, std::uint32_t r);

/// Smallest n violating 1 <= R(n) <= r, or -1.
std::int64_t first_violation(const RepVector& rep, std::uint32_t r);

/// Parses `m:{a1,a2,...}` or `{"m": 6, "set": [0,3,4,5]}`.
/// Members must be distinct residues in [0, m); throws ParseError otherwise.
ResidueSet parse_residue_set(std::string_view text);
/// `m:{a1,a2,...}` with ascending members.
std::string format_residue_set(const ResidueSet& a);
/// `{"m":6,"set":[0,3,4,5]}`.
std::string format_residue_set_json(const ResidueSet& a);

}  // namespace ruzsa::core
