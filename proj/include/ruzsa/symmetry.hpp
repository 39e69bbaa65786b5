#pragma once

// The affine group x -> l x + t (gcd(l, m) = 1) acting on subsets of Z_m.
// It preserves basis-ness and the multiset of representation counts, since
// R_{A+t}(n + 2t) = R_A(n) and R_{lA}(l n) = R_A(n).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ruzsa/zm_core.hpp"

namespace ruzsa::symmetry {

using core::ResidueSet;

/// x -> dilation * x + translation in Z_m.
struct AffineMap {
  std::uint32_t m = 1;
  std::uint32_t translation = 0;
  std::uint32_t dilation = 1;

  /// Throws PreconditionError unless gcd(dilation, m) = 1.
  static AffineMap make(std::uint32_t m, std::uint32_t translation, std::uint32_t dilation);
  std::uint32_t operator()(std::uint32_t x) const;
  ResidueSet apply(const ResidueSet& a) const;
};

ResidueSet translate(const ResidueSet& a, std::uint32_t t);
ResidueSet dilate(const ResidueSet& a, std::uint32_t l);

/// Units of Z_m in ascending order.
std::vector<std::uint32_t> units(std::uint32_t m);
std::uint32_t gcd(std::uint32_t a, std::uint32_t b);
/// Inverse of a unit mod m.
std::uint32_t inverse_mod(std::uint32_t unit, std::uint32_t m);

/// Orbit representative: the lexicographically least ascending member list
/// among all images l A + t.
ResidueSet canonical_form(const ResidueSet& a);
bool is_canonical(const ResidueSet& a);

/// One branch of a lossless search-space reduction. Every set admitted by
/// the task lies in the affine orbit of some set admitted by at least one
/// branch of the plan.
struct Branch {
  std::string name;
  std::vector<std::uint32_t> forced;  // members every candidate must contain
  std::vector<std::uint32_t> pool;    // residues the search may add, ascending
  /// Translation normalization: 0 in A and the wrap-around gap m - max(A) is
  /// at least every gap between consecutive members.
  bool widest_gap_last = false;
};

struct NormalizationPlan {
  std::string name;
  std::vector<Branch> branches;
  /// Stable 64-bit digest of the plan, stored in checkpoints.
  std::uint64_t digest() const;
};

enum class NormalizationMode {
  automatic,  // targeted for (m, r) = (40, 5) and (41, 5), generic otherwise
  generic,    // 0 in A plus the widest-gap translation rule
  zero_only,  // 0 in A only
  targeted,   // 0, m-1 in A for prime m; the coprime / non-coprime split for m = 40
};

std::string to_string(NormalizationMode mode);
NormalizationMode parse_normalization_mode(const std::string& text);

/// Requires m >= 1. `targeted` mode is defined for m = 40 and for prime m; any
/// other m falls back to generic.
NormalizationPlan search_normalization(std::uint32_t m, NormalizationMode mode = NormalizationMode::generic);
/// Resolves `automatic` for a concrete cap r.
NormalizationMode resolve_mode(NormalizationMode mode, std::uint32_t m, std::uint32_t r);

/// True if `a` satisfies every constraint of `branch`.
bool admits(const Branch& branch, const ResidueSet& a);
/// Some affine image of `a` is admitted by some branch; returns that image.
std::optional<ResidueSet> normalize(const NormalizationPlan& plan, const ResidueSet& a);

}  // namespace ruzsa::symmetry
