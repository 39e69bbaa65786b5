#pragma once

// Cyclic (v, k, lambda) difference sets: A in Z_v, |A| = k, every nonzero
// residue arising as a difference a - a' exactly lambda times.

#include <cstdint>
#include <optional>
#include <string>

#include "ruzsa/zm_core.hpp"

namespace ruzsa::diffset {

struct DiffSetParams {
  std::int64_t v = 0;
  std::int64_t k = 0;
  std::int64_t lambda = 0;

  /// k(k-1) = lambda(v-1), necessary for existence.
  bool counting_identity() const { return k * (k - 1) == lambda * (v - 1); }
};

/// Baumert's Test C certificate. All fields satisfy:
/// p prime, p^e || k - lambda, p^l || v, w | v, gcd(w, p) = 1, p^f = -1 (mod w).
struct TestCWitness {
  std::int64_t p = 0;
  std::int64_t w = 0;
  std::int64_t f = 0;
  std::int64_t e = 0;
  std::int64_t l = 0;
  friend bool operator==(const TestCWitness&, const TestCWitness&) = default;
};

/// `witness` is set iff Test C rules the parameters out. A pass is not an
/// existence proof.
struct TestCResult {
  std::optional<TestCWitness> witness;
  bool ruled_out() const { return witness.has_value(); }
};

/// Largest e with p^e | n. Throws PreconditionError for n = 0 or p < 2.
std::int64_t exact_prime_power(std::int64_t p, std::int64_t n);

/// Least f > 0 with p^f = -1 (mod w), if any; w = 1 gives 1.
/// Throws PreconditionError unless gcd(p, w) = 1 and w >= 1.
std::optional<std::int64_t> minus_one_exponent(std::int64_t p, std::int64_t w);

/// Tries primes p | k - lambda ascending, then divisors w | v ascending, and
/// reports the first (p, w) with p^floor(e/2) * w * p^l >= v.
/// Requires v >= k > lambda >= 1.
TestCResult test_c(const DiffSetParams& params);

inline constexpr std::int64_t kBruteForceLimit = 25;

/// Exhaustive search for a difference set, returned in canonical affine form.
/// Throws PreconditionError if v exceeds `limit`.
std::optional<core::ResidueSet> brute_force_exists(const DiffSetParams& params,
                                                    std::int64_t limit = kBruteForceLimit);

/// diff_function(a) equals lambda off zero.
bool is_difference_set(const core::ResidueSet& a, std::int64_t lambda);

void validate(const DiffSetParams& params);

}  // namespace ruzsa::diffset
