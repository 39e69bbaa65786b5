#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ruzsa/rational.hpp"
#include "ruzsa/zm_core.hpp"

using namespace ruzsa;
using namespace ruzsa::core;

namespace {

ResidueSet make(std::uint32_t m, std::initializer_list<std::uint32_t> members) { return ResidueSet(Modulus(m), members); }

std::vector<std::uint32_t> counts(const RepVector& v) { return v.counts; }

}  // namespace

TEST(ResidueSet, RejectsBadMembers) {
  EXPECT_THROW(Modulus(0), PreconditionError);
  EXPECT_THROW(make(6, {0, 6}), PreconditionError);
  EXPECT_THROW(make(6, {1, 1}), PreconditionError);
  const auto a = make(6, {5, 0, 3, 4});
  EXPECT_EQ(a.members(), (std::vector<std::uint32_t>{0, 3, 4, 5}));
  EXPECT_EQ(a.size(), 4u);
  EXPECT_TRUE(a.contains(3));
  EXPECT_FALSE(a.contains(2));
}

TEST(ResidueSet, LargeModulusUsesSeveralWords) {
  const ResidueSet a(Modulus(200), {0, 63, 64, 199});
  EXPECT_EQ(a.words().size(), 4u);
  EXPECT_EQ(a.members(), (std::vector<std::uint32_t>{0, 63, 64, 199}));
  EXPECT_THROW(a.mask(), PreconditionError);
}

TEST(RepFunction, Examples) {
  EXPECT_EQ(counts(rep_function(ResidueSet(Modulus(5)))), (std::vector<std::uint32_t>{0, 0, 0, 0, 0}));
  EXPECT_EQ(counts(rep_function(make(3, {0, 1}))), (std::vector<std::uint32_t>{1, 2, 1}));
  const auto r6 = rep_function(make(6, {0, 3, 4, 5}));
  EXPECT_EQ(r6.counts, (std::vector<std::uint32_t>{2, 2, 3, 4, 3, 2}));
  EXPECT_EQ(r6.max(), 4u);
  EXPECT_EQ(counts(rep_function(make(1, {0}))), (std::vector<std::uint32_t>{1}));
}

TEST(DiffFunction, Examples) {
  EXPECT_EQ(counts(diff_function(make(3, {0, 1}))), (std::vector<std::uint32_t>{2, 1, 1}));
  EXPECT_EQ(counts(diff_function(ResidueSet(Modulus(4)))), (std::vector<std::uint32_t>{0, 0, 0, 0}));
  EXPECT_EQ(counts(diff_function(make(7, {1, 2, 4}))), (std::vector<std::uint32_t>{3, 1, 1, 1, 1, 1, 1}));
}

TEST(IsBasis, Examples) {
  EXPECT_TRUE(is_basis(make(3, {0, 1})));
  EXPECT_FALSE(is_basis(make(4, {0, 2})));
  EXPECT_TRUE(is_basis(make(7, {0, 1, 2, 4})));
}

TEST(MaxRep, Examples) {
  EXPECT_EQ(max_rep(make(5, {0, 1, 2})), 3u);
  EXPECT_EQ(max_rep(make(4, {0})), 1u);
  EXPECT_EQ(max_rep(make(9, {0, 4, 6, 7, 8})), 4u);
  EXPECT_EQ(max_rep(ResidueSet(Modulus(4))), 0u);
}

TEST(RepProfile, Examples) {
  const auto p = rep_profile(make(3, {0, 1}), 5);
  EXPECT_EQ(p.zeros, 0u);
  EXPECT_EQ(p.overflow, 0u);
  EXPECT_EQ(p.k_counts, (std::vector<std::uint32_t>{2, 1, 0, 0, 0}));
  const auto empty = rep_profile(ResidueSet(Modulus(4)), 5);
  EXPECT_EQ(empty.zeros, 4u);
  EXPECT_EQ(empty.k_counts, (std::vector<std::uint32_t>{0, 0, 0, 0, 0}));
  const auto six = rep_profile(make(6, {0, 3, 4, 5}), 5);
  EXPECT_EQ(six.k_counts, (std::vector<std::uint32_t>{0, 3, 2, 1, 0}));
  const auto capped = rep_profile(make(6, {0, 3, 4, 5}), 3);
  EXPECT_EQ(capped.overflow, 1u);
}

TEST(VerifyWitness, Examples) {
  EXPECT_TRUE(verify_witness(Modulus(35), make(35, {0, 1, 4, 5, 10, 12, 16, 19, 26, 34}), 5));
  EXPECT_TRUE(verify_witness(Modulus(19), make(19, {0, 1, 5, 7, 8, 15, 18}), 4));
  EXPECT_FALSE(verify_witness(Modulus(6), make(6, {0, 3, 4, 5}), 3));
  EXPECT_THROW(verify_witness(Modulus(7), make(6, {0, 3, 4, 5}), 4), PreconditionError);
  EXPECT_EQ(first_violation(rep_function(make(6, {0, 3, 4, 5})), 3), 3);
  EXPECT_EQ(first_violation(rep_function(make(6, {0, 3, 4, 5})), 4), -1);
}

TEST(Parse, TextAndJsonForms) {
  EXPECT_EQ(parse_residue_set("6:{0,3,4,5}"), make(6, {0, 3, 4, 5}));
  EXPECT_EQ(parse_residue_set(" 6 : { 5, 0 ,3,4 } "), make(6, {0, 3, 4, 5}));
  EXPECT_EQ(parse_residue_set(R"({"m": 6, "set": [0,3,4,5]})"), make(6, {0, 3, 4, 5}));
  EXPECT_EQ(parse_residue_set("5:{}"), ResidueSet(Modulus(5)));
  for (const char* bad : {"6:{0,3,4,9}", "6:{0,0}", "6:{0,}", "0:{}", "6{0}", "x:{0}", "6:{a}", R"({"m":6})",
                          R"({"m":6,"set":[-1]})"}) {
    EXPECT_THROW(parse_residue_set(bad), ParseError) << bad;
  }
}

TEST(Parse, FormatsRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 100);
    std::vector<std::int64_t> v;
    for (std::uint32_t x = 0; x < m; ++x) {
      if (rng() % 3 == 0) v.push_back(x);
    }
    const auto a = ResidueSet::from_residues(Modulus(m), v);
    EXPECT_EQ(parse_residue_set(format_residue_set(a)), a);
    EXPECT_EQ(parse_residue_set(format_residue_set_json(a)), a);
  }
  EXPECT_EQ(format_residue_set(make(6, {5, 0})), "6:{0,5}");
  EXPECT_EQ(format_residue_set_json(make(6, {0, 3})), R"({"m":6,"set":[0,3]})");
}

// Every subset of Z_m for m <= 16 against the double loop.
TEST(RepFunction, MatchesNaiveOracleForAllSmallSets) {
  for (std::uint32_t m = 1; m <= 16; ++m) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      const auto mem = oracle::members_of(m, mask);
      const auto a = ResidueSet::from_mask(Modulus(m), mask);
      ASSERT_EQ(rep_function(a).counts, oracle::sums(m, mem)) << format_residue_set(a);
      ASSERT_EQ(diff_function(a).counts, oracle::diffs(m, mem)) << format_residue_set(a);
    }
  }
}

TEST(RepFunction, MatchesNaiveOracleForLargeModuli) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t m = 65 + static_cast<std::uint32_t>(rng() % 400);
    std::vector<std::uint32_t> mem;
    for (std::uint32_t x = 0; x < m; ++x) {
      if (rng() % 7 == 0) mem.push_back(x);
    }
    const ResidueSet a(Modulus(m), mem);
    ASSERT_EQ(rep_function(a).counts, oracle::sums(m, mem));
    ASSERT_EQ(diff_function(a).counts, oracle::diffs(m, mem));
  }
}

TEST(Properties, SumsParityAndSquareIdentity) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3000; ++i) {
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 120);
    std::vector<std::uint32_t> mem;
    for (std::uint32_t x = 0; x < m; ++x) {
      if (rng() % 4 == 0) mem.push_back(x);
    }
    const ResidueSet a(Modulus(m), mem);
    const std::uint64_t k = mem.size();
    const auto rep = rep_function(a);
    const auto dif = diff_function(a);
    ASSERT_EQ(rep.total(), k * k);
    ASSERT_EQ(dif.total(), k * k);
    ASSERT_EQ(dif.counts[0], k);
    for (auto c : rep.counts) ASSERT_LE(c, k);

    // R_A(n) is odd iff an odd number of a have 2a = n.
    std::vector<std::uint32_t> halves(m, 0);
    for (auto x : mem) ++halves[(2 * x) % m];
    std::uint64_t odd = 0;
    for (std::uint32_t n = 0; n < m; ++n) {
      ASSERT_EQ(rep.counts[n] % 2, halves[n] % 2);
      odd += rep.counts[n] % 2;
    }
    ASSERT_LE(odd, k);
    if (m % 2 == 1) ASSERT_EQ(odd, k);

    // sum (R - k^2/m)^2 = sum R^2 - k^4/m, and sum R^2 = sum R_{A,-A}^2.
    const Rational c(static_cast<Int128>(k * k), m);
    Rational lhs;
    Int128 sq = 0;
    Int128 dsq = 0;
    for (std::uint32_t n = 0; n < m; ++n) {
      lhs += (Rational(rep.counts[n]) - c) * (Rational(rep.counts[n]) - c);
      sq += static_cast<Int128>(rep.counts[n]) * rep.counts[n];
      dsq += static_cast<Int128>(dif.counts[n]) * dif.counts[n];
    }
    ASSERT_EQ(sq, dsq);
    ASSERT_EQ(lhs, Rational(sq) - Rational(static_cast<Int128>(k * k) * static_cast<Int128>(k * k), m));
  }
}

TEST(RepProfile, InvariantsOnRandomSets) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 2000; ++i) {
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 60);
    std::vector<std::uint32_t> mem;
    for (std::uint32_t x = 0; x < m; ++x) {
      if (rng() % 3 == 0) mem.push_back(x);
    }
    const ResidueSet a(Modulus(m), mem);
    const std::uint32_t cap = 1 + static_cast<std::uint32_t>(rng() % 8);
    const auto p = rep_profile(a, cap);
    std::uint64_t count = p.zeros + p.overflow;
    std::uint64_t weight = 0;
    for (std::size_t i2 = 0; i2 < p.k_counts.size(); ++i2) {
      count += p.k_counts[i2];
      weight += (i2 + 1) * p.k_counts[i2];
    }
    ASSERT_EQ(count, m);
    if (p.overflow == 0) ASSERT_EQ(weight, mem.size() * mem.size());
  }
}
