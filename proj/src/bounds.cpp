#include "ruzsa/bounds.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "ruzsa/diffset.hpp"
#include "ruzsa/error.hpp"
#include "ruzsa/parallel.hpp"

namespace ruzsa::bounds {

namespace {

constexpr int kMaxCap = 16;

using Slots = std::array<std::int64_t, kMaxCap>;

BoundVerdict make_verdict(Int128 lhs, Int128 rhs, Int128 scale, bool strict) {
  BoundVerdict v;
  v.lhs_scaled = lhs;
  v.rhs_scaled = rhs;
  v.scale = scale;
  v.margin = Rational(lhs - rhs, scale);
  v.holds = strict ? lhs > rhs : lhs >= rhs;
  return v;
}

void require_cap(int cap) {
  if (cap < 1 || cap > kMaxCap) throw PreconditionError("profile cap must be in [1, 16]");
}

// Visits every profile (k_1..k_cap) of the modeled scenario 1 <= R_A(n) <= cap
// for all n. Odd slots are bounded by k (each odd R_A(n) needs a 2a = n),
// which keeps the enumeration small; the last two even slots are solved from
// the two linear constraints.
template <typename Visit>
void for_each_profile(std::int64_t m, std::int64_t k, int cap, Visit&& visit) {
  require_cap(cap);
  if (k < 0 || k > m) return;
  std::vector<int> odd, even;
  for (int i = 1; i <= cap; ++i) (i % 2 ? odd : even).push_back(i);
  const bool odd_exact = (m % 2) == 1;
  const std::int64_t square = k * k;
  Slots slots{};

  auto solve_evens = [&](std::int64_t count_left, std::int64_t sum_left) {
    // Recursive over all but the last two even slots.
    auto rec = [&](auto&& self, std::size_t idx, std::int64_t c, std::int64_t s) -> void {
      const std::size_t left = even.size() - idx;
      if (left == 0) {
        if (c == 0 && s == 0) visit(slots);
        return;
      }
      const std::int64_t e1 = even[idx];
      if (left == 1) {
        if (c * e1 == s) {
          slots[e1 - 1] = c;
          visit(slots);
          slots[e1 - 1] = 0;
        }
        return;
      }
      if (left == 2) {
        const std::int64_t e2 = even[idx + 1];
        const std::int64_t num = s - e1 * c;
        if (num < 0 || num % (e2 - e1) != 0) return;
        const std::int64_t hi = num / (e2 - e1);
        const std::int64_t lo = c - hi;
        if (lo < 0) return;
        slots[e1 - 1] = lo;
        slots[e2 - 1] = hi;
        visit(slots);
        slots[e1 - 1] = 0;
        slots[e2 - 1] = 0;
        return;
      }
      for (std::int64_t v = 0; v <= c && v * e1 <= s; ++v) {
        slots[e1 - 1] = v;
        self(self, idx + 1, c - v, s - v * e1);
      }
      slots[e1 - 1] = 0;
    };
    rec(rec, 0, count_left, sum_left);
  };

  auto rec_odd = [&](auto&& self, std::size_t idx, std::int64_t used, std::int64_t count_left,
                     std::int64_t sum_left) -> void {
    if (idx == odd.size()) {
      if (odd_exact && used != k) return;
      if (count_left < 0 || sum_left < 0) return;
      solve_evens(count_left, sum_left);
      return;
    }
    const std::int64_t i = odd[idx];
    for (std::int64_t v = 0; used + v <= k && v <= count_left && v * i <= sum_left; ++v) {
      slots[i - 1] = v;
      self(self, idx + 1, used + v, count_left - v, sum_left - v * i);
    }
    slots[i - 1] = 0;
  };
  rec_odd(rec_odd, 0, 0, m, square);
}

// m^2 * weighted_square_sum = sum_i (i m - k^2)^2 k_i.
Int128 scaled_square_sum(const Slots& slots, int cap, std::int64_t m, std::int64_t k) {
  Int128 total = 0;
  for (int i = 1; i <= cap; ++i) {
    const Int128 d = static_cast<Int128>(i) * m - static_cast<Int128>(k) * k;
    total += d * d * slots[i - 1];
  }
  return total;
}

std::optional<Int128> max_scaled_square_sum(std::int64_t m, std::int64_t k, int cap) {
  std::optional<Int128> best;
  for_each_profile(m, k, cap, [&](const Slots& s) {
    const Int128 v = scaled_square_sum(s, cap, m, k);
    if (!best || v > *best) best = v;
  });
  return best;
}

void require_group(std::int64_t m) {
  if (m < 2) throw PreconditionError("the group Z_m must be non-trivial (m >= 2)");
}

}  // namespace

Rational lev_sarkozy_rhs(std::int64_t m, std::int64_t k) {
  require_group(m);
  if (k < 0 || k > m) throw PreconditionError("need 0 <= k <= m");
  const Rational kk(k);
  const Rational k2 = kk * kk;
  const Rational inner = k2 * k2 / Rational(m) - Rational(2) * k2 * kk + k2 * Rational(m);
  return inner / Rational(m - 1);
}

Rational lev_sarkozy_rhs_factored(std::int64_t m, std::int64_t k) {
  require_group(m);
  if (k < 0 || k > m) throw PreconditionError("need 0 <= k <= m");
  const Int128 d = m - k;
  return Rational(static_cast<Int128>(k) * k * d * d, static_cast<Int128>(m) * (m - 1));
}

std::int64_t size_lower(std::int64_t m) {
  if (m < 1) throw PreconditionError("size_lower needs m >= 1");
  // (2k + 1)^2 > 8m  <=>  2k + 1 > isqrt(8m)
  const auto root = static_cast<std::int64_t>(isqrt(static_cast<Int128>(8) * m));
  std::int64_t k = root / 2;  // 2k + 1 <= root + 1
  while (static_cast<Int128>(2 * k + 1) * (2 * k + 1) <= static_cast<Int128>(8) * m) ++k;
  while (k > 0 && static_cast<Int128>(2 * k - 1) * (2 * k - 1) > static_cast<Int128>(8) * m) --k;
  return k;
}

std::int64_t size_upper(std::int64_t m, std::int64_t c) {
  if (m < 1 || c < 1) throw PreconditionError("size_upper needs m >= 1 and c >= 1");
  return static_cast<std::int64_t>(isqrt(static_cast<Int128>(c) * m));
}

BoundVerdict theorem1_excludes(std::int64_t m) {
  if (m < 12) throw PreconditionError("the r <= 3 exclusion argument needs m >= 12");
  const Int128 rhs = static_cast<Int128>(m) * (m - 1);
  std::optional<BoundVerdict> worst;
  for (std::int64_t k = size_lower(m); k <= size_upper(m, 3); ++k) {
    const Int128 d = m - k;
    auto v = make_verdict(static_cast<Int128>(k) * d * d, rhs, 1, true);
    if (!worst || v.margin < worst->margin) worst = v;
  }
  return worst.value_or(make_verdict(1, 0, 1, true));
}

BoundVerdict ineq5_holds(std::int64_t m, std::int64_t k) {
  if (k < 1 || k > m) throw PreconditionError("need 1 <= k <= m");
  const Int128 d = m - k;
  const Int128 lhs = static_cast<Int128>(k) * k * d * d;
  const Int128 rhs = static_cast<Int128>(m + 3 * k) * m * (m - 1);
  // Direction "lhs <= rhs": slack is rhs - lhs.
  return make_verdict(rhs, lhs, 1, false);
}

std::vector<Profile> profile_candidates(std::int64_t m, std::int64_t k, int cap) {
  std::vector<Profile> out;
  for_each_profile(m, k, cap, [&](const Slots& s) { out.emplace_back(s.begin(), s.begin() + cap); });
  std::sort(out.begin(), out.end());
  return out;
}

Rational weighted_square_sum(const Profile& profile, std::int64_t m, std::int64_t k) {
  if (m < 1) throw PreconditionError("need m >= 1");
  Rational total;
  const Rational mean(static_cast<Int128>(k) * k, m);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Rational d = Rational(static_cast<Int128>(i + 1)) - mean;
    total += d * d * Rational(profile[i]);
  }
  return total;
}

std::optional<Rational> max_weighted_square_sum(std::int64_t m, std::int64_t k, int cap) {
  const auto best = max_scaled_square_sum(m, k, cap);
  if (!best) return std::nullopt;
  return Rational(*best, static_cast<Int128>(m) * m);
}

ImprovedBoundTerms improved_rhs(std::int64_t m, std::int64_t k) {
  require_group(m);
  const std::int64_t pairs = k * k - k;
  ImprovedBoundTerms t;
  t.q = pairs / (m - 1);
  t.rem = pairs - t.q * (m - 1);
  const Int128 square_sum = static_cast<Int128>(k) * k + static_cast<Int128>(t.q) * t.q * (m - 1) +
                            static_cast<Int128>(2 * t.q + 1) * t.rem;
  const Int128 k4 = static_cast<Int128>(k) * k * k * k;
  t.rhs = Rational(square_sum * m - k4, m);
  return t;
}

namespace {

std::optional<BoundVerdict> step1_opt(std::int64_t m, std::int64_t k, int cap) {
  require_group(m);
  const auto best = max_scaled_square_sum(m, k, cap);
  if (!best) return std::nullopt;
  const Int128 scale = static_cast<Int128>(m) * m * (m - 1);
  const Int128 d = m - k;
  return make_verdict(*best * (m - 1), static_cast<Int128>(k) * k * d * d * m, scale, false);
}

std::optional<BoundVerdict> step2_opt(std::int64_t m, std::int64_t k, int cap) {
  const auto terms = improved_rhs(m, k);
  const auto best = max_scaled_square_sum(m, k, cap);
  if (!best) return std::nullopt;
  const Int128 scale = static_cast<Int128>(m) * m;
  return make_verdict(*best, terms.rhs.num() * (scale / terms.rhs.den()), scale, false);
}

// No admissible profile: the pair is eliminated outright.
BoundVerdict infeasible() {
  BoundVerdict v;
  v.holds = false;
  return v;
}

}  // namespace

BoundVerdict step1_verdict(std::int64_t m, std::int64_t k, int cap) {
  return step1_opt(m, k, cap).value_or(infeasible());
}

bool step1_feasible(std::int64_t m, std::int64_t k, int cap) { return step1_verdict(m, k, cap).holds; }

BoundVerdict step2_verdict(std::int64_t m, std::int64_t k, int cap) {
  return step2_opt(m, k, cap).value_or(infeasible());
}

bool step2_feasible(std::int64_t m, std::int64_t k, int cap) { return step2_verdict(m, k, cap).holds; }

Step3Report step3_45_12_contradiction() {
  constexpr std::int64_t m = 45, k = 12, lambda = 3;
  const auto test = diffset::test_c({m, k, lambda});
  if (!test.ruled_out()) throw std::logic_error("Test C unexpectedly fails to rule out (45,12,3)");

  Step3Report rep;
  const auto terms = improved_rhs(m, k);
  // k^2 - k = 132 differences spread over 44 nonzero residues, 3 each when
  // perfectly even; rem = 0 here.
  rep.uniform_square_sum = static_cast<Int128>(terms.q) * terms.q * (m - 1);
  // Without a perfect difference set some residue differs from 3. Moving one
  // unit from one residue to another is the cheapest deviation:
  // (q-1)^2 + (q+1)^2 = 2q^2 + 2.
  rep.nonzero_diff_square_sum = rep.uniform_square_sum + 2;
  const Int128 k4 = static_cast<Int128>(k) * k * k * k;
  rep.refined_lower = Rational(static_cast<Int128>(k) * k + rep.nonzero_diff_square_sum) - Rational(k4, m);

  const auto profiles = profile_candidates(m, k, 5);
  rep.profile_count = profiles.size();
  for (const auto& p : profiles) {
    const auto w = weighted_square_sum(p, m, k);
    if (p == profiles.front() || w > rep.profile_max) {
      rep.profile_max = w;
      rep.maximizers.clear();
    }
    if (w == rep.profile_max) rep.maximizers.push_back(p);
  }
  const Int128 scale = rep.refined_lower.den() * rep.profile_max.den();
  rep.verdict = make_verdict(rep.refined_lower.num() * rep.profile_max.den(),
                             rep.profile_max.num() * rep.refined_lower.den(), scale, true);
  return rep;
}

LargeModulusCheck m_gt_500_check(std::int64_t m) {
  if (m <= 500) throw PreconditionError("the large-modulus exclusion needs m > 500");
  LargeModulusCheck c;
  const Int128 M = m;
  // sqrt(2m) - 1/2 > sqrt(1.9m)  <=>  (2m - 5)/20 > sqrt(1.9 m) > 0
  //                              <=>  2m > 5 and (2m - 5)^2 > 760 m
  c.lower_vs_1_9 = 2 * M > 5 && (2 * M - 5) * (2 * M - 5) > 760 * M;
  // m - sqrt(5m) > 0.9m  <=>  0.1m > sqrt(5m)  <=>  m^2 > 500 m
  c.gap_vs_0_9 = M * M > 500 * M;
  // m + 3 sqrt(5m) < 1.3m  <=>  sqrt(5m) < 0.1m, the same condition
  c.sum_vs_1_3 = M * M > 500 * M;
  // 1.9 * 0.81 = 1.539 > 1.3
  c.constant_chain = 19 * 81 > 13 * 100;

  // The chain also needs (m + 3 sqrt(5m)) m^2 > (m + 3|A|) m (m - 1), which
  // holds since |A| <= sqrt(5m) and m^2 > m(m - 1); the direct check below
  // does not rely on it.
  std::optional<BoundVerdict> worst;
  for (std::int64_t k = size_lower(m); k <= size_upper(m, 5); ++k) {
    const Int128 d = M - k;
    const Int128 lhs = checked_mul(checked_mul(static_cast<Int128>(k) * k, d), d);
    const Int128 rhs = checked_mul(checked_mul(M + 3 * k, M), M - 1);
    auto v = make_verdict(lhs, rhs, 1, true);
    if (!worst || v.margin < worst->margin) worst = v;
  }
  c.direct_all_k = worst.has_value() && worst->holds;
  c.verdict = worst.value_or(BoundVerdict{});
  c.verdict.holds = c.lower_vs_1_9 && c.gap_vs_0_9 && c.sum_vs_1_3 && c.constant_chain && c.direct_all_k;
  return c;
}

BoundVerdict m_gt_500_excludes(std::int64_t m) { return m_gt_500_check(m).verdict; }

std::vector<ScanRow> scan(std::int64_t m_lo, std::int64_t m_hi, Filter filter, int cap, int threads) {
  if (m_lo < 2 || m_hi < m_lo) throw PreconditionError("scan range must satisfy 2 <= lo <= hi");
  std::vector<PairCandidate> pairs;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    for (std::int64_t k = size_lower(m); k <= std::min(m, size_upper(m, 5)); ++k) pairs.push_back({m, k});
  }
  std::vector<ScanRow> rows(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto [m, k] = pairs[i];
    ScanRow row{pairs[i], false, std::nullopt};
    std::optional<BoundVerdict> v;
    switch (filter) {
      case Filter::eq5:
        v = ineq5_holds(m, k);
        break;
      case Filter::step1:
        v = step1_opt(m, k, cap);
        break;
      case Filter::step2:
        v = step2_opt(m, k, cap);
        break;
    }
    if (v) {
      row.margin = v->margin;
      row.survives = v->holds;
    }
    rows[i] = row;
  });
  return rows;
}

std::vector<PairCandidate> survivors(const std::vector<ScanRow>& rows) {
  std::vector<PairCandidate> out;
  for (const auto& r : rows) {
    if (r.survives) out.push_back(r.pair);
  }
  return out;
}

}  // namespace ruzsa::bounds
