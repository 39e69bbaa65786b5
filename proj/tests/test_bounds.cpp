#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ruzsa/bounds.hpp"
#include "ruzsa/pipeline.hpp"
#include "ruzsa/zm_core.hpp"

using namespace ruzsa;
using namespace ruzsa::bounds;

namespace {

Rational closed_form(std::int64_t m, std::int64_t k) {
  return Rational(static_cast<Int128>(k) * k * (m - k) * (m - k), static_cast<Int128>(m) * (m - 1));
}

// Every (k_1..k_5) for (45, 12) with the largest weighted square sum.
const std::vector<Profile> kMax45 = {
    {0, 24, 0, 9, 12}, {1, 22, 0, 11, 11}, {2, 20, 0, 13, 10}, {3, 18, 0, 15, 9}, {4, 16, 0, 17, 8},
    {5, 14, 0, 19, 7}, {6, 12, 0, 21, 6},  {7, 10, 0, 23, 5},  {8, 8, 0, 25, 4},  {9, 6, 0, 27, 3},
    {10, 4, 0, 29, 2}, {11, 2, 0, 31, 1},  {12, 0, 0, 33, 0}};

}  // namespace

TEST(LevSarkozy, Examples) {
  EXPECT_EQ(lev_sarkozy_rhs(45, 12), Rational(396, 5));
  EXPECT_EQ(lev_sarkozy_rhs(45, 12).decimal(), "79.2");
  EXPECT_EQ(lev_sarkozy_rhs(10, 0), Rational(0));
  EXPECT_EQ(lev_sarkozy_rhs(10, 10), Rational(0));
  EXPECT_THROW(lev_sarkozy_rhs(1, 1), PreconditionError);
}

TEST(LevSarkozy, ClosedFormsAgree) {
  for (std::int64_t m = 2; m <= 200; ++m) {
    for (std::int64_t k = 0; k <= m; ++k) {
      ASSERT_EQ(lev_sarkozy_rhs(m, k), lev_sarkozy_rhs_factored(m, k));
      ASSERT_EQ(lev_sarkozy_rhs(m, k), closed_form(m, k));
    }
  }
}

TEST(LevSarkozy, LowerBoundHoldsForRandomSetsAndCenters) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10000; ++i) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng() % 39);
    std::vector<std::uint32_t> mem;
    for (std::uint32_t x = 0; x < m; ++x) {
      if (rng() % 3 == 0) mem.push_back(x);
    }
    const auto rep = oracle::sums(m, mem);
    const Rational c(static_cast<Int128>(rng() % 2001) - 1000, 1 + static_cast<Int128>(rng() % 97));
    Rational lhs;
    for (auto r : rep) lhs += (Rational(r) - c) * (Rational(r) - c);
    ASSERT_GE(lhs, closed_form(m, static_cast<std::int64_t>(mem.size())));
  }
}

TEST(SizeBounds, Examples) {
  EXPECT_EQ(size_lower(45), 9);
  EXPECT_EQ(size_lower(1), 1);
  EXPECT_EQ(size_lower(91), 13);
  EXPECT_EQ(size_upper(45, 5), 15);
  EXPECT_EQ(size_upper(1, 1), 1);
  EXPECT_EQ(size_upper(12, 3), 6);
  for (std::int64_t m = 1; m <= 5000; ++m) {
    const auto k = size_lower(m);
    ASSERT_GT((2 * k + 1) * (2 * k + 1), 8 * m);
    ASSERT_LE((2 * k - 1) * (2 * k - 1), 8 * m);
  }
}

TEST(SizeBounds, EveryBasisSatisfiesThem) {
  for (std::uint32_t m = 1; m <= 14; ++m) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      const auto mem = oracle::members_of(m, mask);
      const auto rep = oracle::sums(m, mem);
      if (*std::min_element(rep.begin(), rep.end()) == 0) continue;
      const auto k = static_cast<std::int64_t>(mem.size());
      ASSERT_GE(k, size_lower(m));
      ASSERT_LE(k, size_upper(m, *std::max_element(rep.begin(), rep.end())));
    }
  }
}

TEST(SmallCapExclusion, Examples) {
  EXPECT_TRUE(theorem1_excludes(12).holds);
  EXPECT_TRUE(theorem1_excludes(100).holds);
  EXPECT_THROW(theorem1_excludes(11), PreconditionError);
  for (std::int64_t m = 12; m <= 3000; ++m) {
    bool direct = true;
    for (std::int64_t k = size_lower(m); k <= size_upper(m, 3); ++k) direct = direct && k * (m - k) * (m - k) > m * (m - 1);
    ASSERT_EQ(theorem1_excludes(m).holds, direct) << m;
  }
}

TEST(Ineq5, Examples) {
  EXPECT_TRUE(ineq5_holds(91, 13).holds);
  EXPECT_FALSE(ineq5_holds(100, 14).holds);
  for (std::int64_t m = 2; m <= 50; ++m) EXPECT_TRUE(ineq5_holds(m, m).holds);
  const auto v = ineq5_holds(91, 13);
  EXPECT_EQ(v.margin.sign() >= 0, v.holds);
}

TEST(Ineq5, MaximalPairOverScanRange) {
  const auto pairs = survivors(scan(21, 500, Filter::eq5));
  ASSERT_FALSE(pairs.empty());
  EXPECT_EQ(pairs.back(), (PairCandidate{91, 13}));
  for (const auto& p : pairs) {
    const __int128 lhs = static_cast<__int128>(p.k) * p.k * (p.m - p.k) * (p.m - p.k);
    EXPECT_LE(lhs, static_cast<__int128>(p.m + 3 * p.k) * p.m * (p.m - 1));
  }
}

TEST(Profiles, Table45x12) {
  const auto got = profile_candidates(45, 12);
  EXPECT_EQ(got.size(), 91u);
  std::vector<Profile> at_max;
  for (const auto& p : got) {
    if (weighted_square_sum(p, 45, 12) == Rational(396, 5)) at_max.push_back(p);
    EXPECT_LE(weighted_square_sum(p, 45, 12), Rational(396, 5));
  }
  EXPECT_EQ(at_max, kMax45);
  // The published table omits (3,18,0,15,9); everything it lists is maximal.
  for (const auto& p : pipeline::published_45_12_profiles()) {
    EXPECT_NE(std::find(kMax45.begin(), kMax45.end(), p), kMax45.end());
  }
  EXPECT_EQ(pipeline::published_45_12_profiles().size() + 1, kMax45.size());
}

TEST(Profiles, MatchNestedEnumeration) {
  for (std::int64_t m = 2; m <= 40; ++m) {
    for (std::int64_t k = 1; k <= m && k * k <= 5 * m; ++k) {
      for (int cap : {3, 4, 5}) {
        ASSERT_EQ(profile_candidates(m, k, cap), oracle::profiles(m, k, cap)) << m << "," << k << " cap " << cap;
      }
    }
  }
}

TEST(Profiles, SmallExamples) {
  const auto p32 = profile_candidates(3, 2);
  EXPECT_NE(std::find(p32.begin(), p32.end(), Profile{2, 1, 0, 0, 0}), p32.end());
  const auto p64 = profile_candidates(6, 4, 4);
  EXPECT_NE(std::find(p64.begin(), p64.end(), Profile{0, 3, 2, 1}), p64.end());
  EXPECT_EQ(weighted_square_sum({2, 1, 0, 0, 0}, 3, 2), Rational(2, 3));
  EXPECT_EQ(weighted_square_sum({0, 0, 0, 0, 0}, 7, 3), Rational(0));
}

TEST(Profiles, MaximumMatchesScaledOracle) {
  for (std::int64_t m = 21; m <= 60; ++m) {
    for (std::int64_t k = size_lower(m); k <= size_upper(m, 5); ++k) {
      const auto all = oracle::profiles(m, k, 5);
      const auto got = max_weighted_square_sum(m, k);
      if (all.empty()) {
        ASSERT_FALSE(got.has_value());
        continue;
      }
      __int128 best = 0;
      for (const auto& p : all) best = std::max(best, oracle::scaled_square_sum(p, m, k));
      ASSERT_EQ(*got, Rational(best, static_cast<__int128>(m) * m));
    }
  }
}

TEST(ImprovedRhs, Examples) {
  const auto a = improved_rhs(45, 12);
  EXPECT_EQ(a.q, 3);
  EXPECT_EQ(a.rem, 0);
  EXPECT_EQ(a.rhs, Rational(396, 5));
  const auto b = improved_rhs(50, 12);
  EXPECT_EQ(b.q, 2);
  EXPECT_EQ(b.rem, 34);
  EXPECT_EQ(b.rhs.decimal(), "95.28");
  const auto c = improved_rhs(100, 5);
  EXPECT_EQ(c.q, 0);
  EXPECT_EQ(c.rhs, Rational(25 + 20) - Rational(625, 100));
}

TEST(ImprovedRhs, MatchesDirectEvaluation) {
  for (std::int64_t m = 2; m <= 300; ++m) {
    for (std::int64_t k = 1; k <= m; ++k) {
      const auto t = improved_rhs(m, k);
      ASSERT_GE(t.rem, 0);
      ASSERT_LT(t.rem, m - 1);
      ASSERT_EQ(k * k - k, t.q * (m - 1) + t.rem);
      const std::int64_t q = (k * k - k) / (m - 1);
      const std::int64_t r = k * k - k - q * (m - 1);
      const __int128 num = (static_cast<__int128>(k) * k + static_cast<__int128>(q) * q * (m - 1) + (2 * q + 1) * r) * m -
                           static_cast<__int128>(k) * k * k * k;
      ASSERT_EQ(t.rhs, Rational(num, m));
      // The floor form is never weaker than the Lev-Sarkozy value.
      ASSERT_GE(t.rhs, lev_sarkozy_rhs(m, k));
    }
  }
}

TEST(Filters, StepExamples) {
  EXPECT_TRUE(step1_feasible(50, 12));
  EXPECT_FALSE(step1_feasible(91, 13));
  EXPECT_TRUE(step1_feasible(3, 2));
  EXPECT_FALSE(step2_feasible(50, 12));
  EXPECT_TRUE(step2_feasible(45, 12));
  const auto s1 = survivors(scan(21, 500, Filter::step1));
  EXPECT_EQ(s1.back(), (PairCandidate{50, 12}));
}

TEST(Filters, MonotonicallyStronger) {
  for (const auto& row : scan(21, 500, Filter::step2)) {
    const auto [m, k] = row.pair;
    if (row.survives) ASSERT_TRUE(step1_feasible(m, k)) << m << "," << k;
    if (step1_feasible(m, k)) ASSERT_TRUE(ineq5_holds(m, k).holds) << m << "," << k;
  }
}

TEST(Filters, Step2ScanAgreesWithOracle) {
  std::vector<PairCandidate> want;
  for (std::int64_t m = 21; m <= 60; ++m) {
    for (std::int64_t k = size_lower(m); k <= size_upper(m, 5); ++k) {
      const auto t = improved_rhs(m, k);
      const __int128 rhs_scaled = t.rhs.num() * (static_cast<__int128>(m) * m / t.rhs.den());
      for (const auto& p : oracle::profiles(m, k, 5)) {
        if (oracle::scaled_square_sum(p, m, k) >= rhs_scaled) {
          want.push_back({m, k});
          break;
        }
      }
    }
  }
  EXPECT_EQ(survivors(scan(21, 60, Filter::step2)), want);
}

TEST(Filters, Step2SurvivorsVersusPublishedList) {
  std::vector<PairCandidate> published;
  for (auto [m, k] : pipeline::published_step2_pairs()) published.push_back({m, k});
  auto got = survivors(scan(21, 500, Filter::step2));
  // (37, 10) meets the improved bound with equality, so the exact filter keeps it.
  EXPECT_EQ(step2_verdict(37, 10).margin, Rational(0));
  EXPECT_TRUE(step2_feasible(37, 10));
  got.erase(std::remove(got.begin(), got.end(), PairCandidate{37, 10}), got.end());
  EXPECT_EQ(got, published);
}

TEST(Filters, ScanIsIndependentOfThreadCount) {
  const auto one = scan(21, 300, Filter::step2, 5, 1);
  const auto many = scan(21, 300, Filter::step2, 5, 8);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    ASSERT_EQ(one[i].pair, many[i].pair);
    ASSERT_EQ(one[i].survives, many[i].survives);
    ASSERT_EQ(one[i].margin, many[i].margin);
  }
}

// The necessary conditions never reject a real witness.
TEST(Filters, AppendixWitnessesPassEveryCondition) {
  for (const auto& row : pipeline::appendix()) {
    const auto m = static_cast<std::int64_t>(row.m);
    const auto k = static_cast<std::int64_t>(row.witness.size());
    const int cap = static_cast<int>(row.r_m);
    const auto prof = core::rep_profile(row.witness, row.r_m);
    const Profile p(prof.k_counts.begin(), prof.k_counts.end());
    const auto cands = profile_candidates(m, k, cap);
    ASSERT_NE(std::find(cands.begin(), cands.end(), p), cands.end()) << m;
    const auto w = weighted_square_sum(p, m, k);
    if (m >= 2) {
      ASSERT_GE(w, lev_sarkozy_rhs(m, k)) << m;
      ASSERT_GE(w, improved_rhs(m, k).rhs) << m;
    }
  }
}

TEST(Step3, Endgame) {
  const auto r = step3_45_12_contradiction();
  EXPECT_EQ(r.uniform_square_sum, 396);
  EXPECT_EQ(r.nonzero_diff_square_sum, 398);
  EXPECT_EQ(398, 9 * 42 + 4 + 16);
  EXPECT_EQ(r.refined_lower, Rational(406, 5));
  EXPECT_EQ(r.profile_max, Rational(396, 5));
  EXPECT_EQ(r.profile_count, 91u);
  EXPECT_EQ(r.maximizers, kMax45);
  EXPECT_TRUE(r.verdict.holds);
}

TEST(LargeModulus, Examples) {
  EXPECT_TRUE(m_gt_500_excludes(501).holds);
  EXPECT_TRUE(m_gt_500_excludes(1000000).holds);
  EXPECT_THROW(m_gt_500_excludes(500), PreconditionError);
  const auto c = m_gt_500_check(501);
  EXPECT_TRUE(c.lower_vs_1_9 && c.gap_vs_0_9 && c.sum_vs_1_3 && c.constant_chain && c.direct_all_k);
}

TEST(LargeModulus, DirectCheckAgainstOracle) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t m = 501 + static_cast<std::int64_t>(rng() % 100000);
    bool all = true;
    for (std::int64_t k = size_lower(m); k <= size_upper(m, 5); ++k) {
      const __int128 lhs = static_cast<__int128>(k) * k * (m - k) * (m - k);
      all = all && lhs > static_cast<__int128>(m + 3 * k) * m * (m - 1);
    }
    ASSERT_TRUE(all);
    ASSERT_TRUE(m_gt_500_excludes(m).holds);
  }
}
