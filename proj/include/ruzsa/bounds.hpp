#pragma once

// Exact analytic filters on (m, k) = (group order, |A|).
//
// Every verdict is decided in integer arithmetic after clearing denominators;
// the decimal renderings of Rational are for display only.

#include <cstdint>
#include <optional>
#include <vector>

#include "ruzsa/rational.hpp"

namespace ruzsa::bounds {

struct PairCandidate {
  std::int64_t m = 0;
  std::int64_t k = 0;
  friend auto operator<=>(const PairCandidate&, const PairCandidate&) = default;
};

/// Outcome of one inequality. `lhs_scaled` and `rhs_scaled` are both sides
/// multiplied by the positive integer `scale`; `margin` is the signed slack in
/// the direction of the inequality, so holds <=> margin >= 0 for non-strict
/// inequalities and margin > 0 for strict ones.
struct BoundVerdict {
  bool holds = false;
  Int128 lhs_scaled = 0;
  Int128 rhs_scaled = 0;
  Int128 scale = 1;
  Rational margin;
};

/// (k_1, ..., k_cap): number of residues n with R_A(n) = i.
using Profile = std::vector<std::int64_t>;

/// Lev-Sarkozy lower bound for sum (R_A(g) - c)^2 over Z_m with |A| = k:
/// (k^4/m - 2k^3 + k^2 m) / (m - 1). Requires m >= 2 and 0 <= k <= m.
Rational lev_sarkozy_rhs(std::int64_t m, std::int64_t k);
/// The same value through the factored form k^2 (m-k)^2 / (m (m-1)).
Rational lev_sarkozy_rhs_factored(std::int64_t m, std::int64_t k);

/// Least k with k > sqrt(2m) - 1/2, i.e. (2k+1)^2 > 8m.
std::int64_t size_lower(std::int64_t m);
/// floor(sqrt(c m)).
std::int64_t size_upper(std::int64_t m, std::int64_t c);

/// No A in Z_m with 1 <= R_A <= 3: k(m-k)^2 > m(m-1) for every admissible k.
/// Requires m >= 12. The margin is the smallest slack over k.
BoundVerdict theorem1_excludes(std::int64_t m);

/// k^2 (m-k)^2 <= (m + 3k) m (m-1).
BoundVerdict ineq5_holds(std::int64_t m, std::int64_t k);

/// All (k_1..k_cap) with sum k_i = m, sum i k_i = k^2 and
/// sum_{i odd} k_i <= k (equality for odd m), in lexicographic order.
std::vector<Profile> profile_candidates(std::int64_t m, std::int64_t k, int cap = 5);

/// sum_i (i - k^2/m)^2 k_i.
Rational weighted_square_sum(const Profile& profile, std::int64_t m, std::int64_t k);

/// Largest weighted_square_sum over profile_candidates, or nullopt if no
/// profile exists.
std::optional<Rational> max_weighted_square_sum(std::int64_t m, std::int64_t k, int cap = 5);

struct ImprovedBoundTerms {
  std::int64_t q = 0;    // floor((k^2 - k) / (m - 1))
  std::int64_t rem = 0;  // k^2 - k - q (m - 1)
  Rational rhs;          // sum_n R_A(n)^2 lower bound minus k^4/m
};

/// Lower bound for sum (R_A(n) - k^2/m)^2 from spreading the k^2 - k nonzero
/// differences as evenly as possible. Requires m >= 2.
ImprovedBoundTerms improved_rhs(std::int64_t m, std::int64_t k);

/// Some profile reaches the Lev-Sarkozy bound. margin = best - bound.
BoundVerdict step1_verdict(std::int64_t m, std::int64_t k, int cap = 5);
bool step1_feasible(std::int64_t m, std::int64_t k, int cap = 5);
/// Some profile reaches the improved bound. margin = best - bound.
BoundVerdict step2_verdict(std::int64_t m, std::int64_t k, int cap = 5);
bool step2_feasible(std::int64_t m, std::int64_t k, int cap = 5);

struct Step3Report {
  Int128 nonzero_diff_square_sum = 0;  // lower bound on sum_{n != 0} R_{A,-A}(n)^2
  Int128 uniform_square_sum = 0;       // the value if every nonzero difference occurred exactly 3 times
  Rational refined_lower;              // k^2 + nonzero_diff_square_sum - k^4/m
  Rational profile_max;                // max weighted_square_sum over all (45,12) profiles
  std::size_t profile_count = 0;
  std::vector<Profile> maximizers;     // profiles attaining profile_max, lexicographic
  BoundVerdict verdict;                // holds: refined_lower > profile_max
};

/// (45, 12) is impossible: with no perfect (45,12,3) difference set the
/// nonzero differences cannot all occur 3 times, which lifts the lower bound
/// above every admissible profile.
Step3Report step3_45_12_contradiction();

struct LargeModulusCheck {
  bool lower_vs_1_9 = false;  // sqrt(2m) - 1/2 > sqrt(1.9 m)
  bool gap_vs_0_9 = false;    // m - sqrt(5m) > 0.9 m
  bool sum_vs_1_3 = false;    // m + 3 sqrt(5m) < 1.3 m
  bool constant_chain = false;  // 1.9 * 0.9^2 > 1.3
  bool direct_all_k = false;  // k^2(m-k)^2 > (m+3k)m(m-1) for every admissible k
  BoundVerdict verdict;       // margin: smallest direct slack over k
};

/// Certifies R_m >= 6 for one m > 500.
LargeModulusCheck m_gt_500_check(std::int64_t m);
BoundVerdict m_gt_500_excludes(std::int64_t m);

enum class Filter { eq5, step1, step2 };

struct ScanRow {
  PairCandidate pair;
  bool survives = false;
  /// Empty when no profile exists (step1/step2), which also means the pair is
  /// eliminated.
  std::optional<Rational> margin;
};

/// Every pair with m in [m_lo, m_hi] and size_lower(m) <= k <= size_upper(m, 5),
/// sorted by (m, k). `threads` only affects runtime.
std::vector<ScanRow> scan(std::int64_t m_lo, std::int64_t m_hi, Filter filter, int cap = 5, int threads = 1);

std::vector<PairCandidate> survivors(const std::vector<ScanRow>& rows);

}  // namespace ruzsa::bounds
