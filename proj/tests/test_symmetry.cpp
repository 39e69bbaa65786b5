#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "ruzsa/symmetry.hpp"

using namespace ruzsa;
using namespace ruzsa::symmetry;
using core::Modulus;

namespace {

ResidueSet set_of(std::uint32_t m, const oracle::Members& mem) { return ResidueSet(Modulus(m), mem); }

std::multiset<std::uint32_t> rep_values(const ResidueSet& a) {
  const auto rep = core::rep_function(a);
  return {rep.counts.begin(), rep.counts.end()};
}

ResidueSet random_set(std::mt19937_64& rng, std::uint32_t m, std::uint32_t k) {
  std::vector<std::uint32_t> all(m);
  std::iota(all.begin(), all.end(), 0u);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return set_of(m, all);
}

}  // namespace

TEST(Affine, Examples) {
  const auto a = set_of(6, {0, 3, 4, 5});
  EXPECT_EQ(translate(a, 1), set_of(6, {0, 1, 4, 5}));
  EXPECT_EQ(core::max_rep(translate(a, 1)), 4u);
  EXPECT_EQ(translate(a, 0), a);
  EXPECT_EQ(translate(set_of(3, {0, 1}), 2), set_of(3, {0, 2}));
  EXPECT_EQ(dilate(a, 5), set_of(6, {0, 1, 2, 3}));
  EXPECT_EQ(core::max_rep(dilate(a, 5)), 4u);
  EXPECT_EQ(dilate(a, 1), a);
  EXPECT_THROW(dilate(set_of(4, {0, 1}), 2), PreconditionError);
  EXPECT_THROW(AffineMap::make(10, 0, 5), PreconditionError);
  EXPECT_EQ(AffineMap::make(10, 3, 7)(4), 1u);
}

TEST(Affine, UnitsAndInverses) {
  EXPECT_EQ(units(1), std::vector<std::uint32_t>({0}));
  EXPECT_EQ(units(12), std::vector<std::uint32_t>({1, 5, 7, 11}));
  for (std::uint32_t m = 2; m <= 100; ++m) {
    for (auto u : units(m)) {
      ASSERT_EQ(std::gcd(u, m), 1u);
      ASSERT_EQ(std::uint64_t{u} * inverse_mod(u, m) % m, 1u);
    }
  }
}

TEST(Affine, RepMultisetInvariantForAllSmallSets) {
  for (std::uint32_t m = 1; m <= 12; ++m) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      const auto a = ResidueSet::from_mask(Modulus(m), mask);
      const auto base = rep_values(a);
      const auto rep = core::rep_function(a);
      for (auto l : units(m)) {
        for (std::uint32_t t = 0; t < m; ++t) {
          const auto img = AffineMap::make(m, t, l).apply(a);
          ASSERT_EQ(img.size(), a.size());
          const auto img_rep = core::rep_function(img);
          for (std::uint32_t n = 0; n < m; ++n) {
            ASSERT_EQ(img_rep.counts[(std::uint64_t{l} * n + 2 * t) % m], rep.counts[n]);
          }
          ASSERT_EQ(rep_values(img), base);
          ASSERT_EQ(core::is_basis(img), core::is_basis(a));
        }
      }
    }
  }
}

TEST(Canonical, Examples) {
  EXPECT_EQ(canonical_form(set_of(6, {0, 1, 4, 5})), canonical_form(set_of(6, {0, 3, 4, 5})));
  const auto orbit = oracle::orbit(7, {1, 2, 4});
  const auto want = set_of(7, *orbit.begin());
  for (const auto& img : orbit) EXPECT_EQ(canonical_form(set_of(7, img)), want);
  EXPECT_TRUE(is_canonical(want));
  EXPECT_EQ(canonical_form(ResidueSet(Modulus(5))), ResidueSet(Modulus(5)));
}

TEST(Canonical, IdempotentOnRandomSets) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng() % 80);
    const auto a = random_set(rng, m, 1 + static_cast<std::uint32_t>(rng() % m));
    const auto c = canonical_form(a);
    ASSERT_EQ(canonical_form(c), c);
    ASSERT_EQ(c.members(), *oracle::orbit(m, a.members()).begin());
  }
}

TEST(Canonical, EqualExactlyOnOrbits) {
  for (std::uint32_t m = 1; m <= 10; ++m) {
    std::map<oracle::Members, oracle::Members> orbit_id;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      const auto mem = oracle::members_of(m, mask);
      if (!orbit_id.count(mem)) {
        const auto orb = oracle::orbit(m, mem);
        for (const auto& x : orb) orbit_id[x] = *orb.begin();
      }
    }
    std::map<oracle::Members, oracle::Members> canon;
    for (const auto& [mem, id] : orbit_id) canon[mem] = canonical_form(set_of(m, mem)).members();
    for (const auto& [x, idx] : orbit_id) {
      for (const auto& [y, idy] : orbit_id) {
        ASSERT_EQ(idx == idy, canon[x] == canon[y]) << m;
      }
    }
  }
}

TEST(Normalization, Modes) {
  EXPECT_EQ(parse_normalization_mode("auto"), NormalizationMode::automatic);
  EXPECT_EQ(parse_normalization_mode("targeted"), NormalizationMode::targeted);
  EXPECT_THROW(parse_normalization_mode("bogus"), ParseError);
  EXPECT_EQ(resolve_mode(NormalizationMode::automatic, 40, 5), NormalizationMode::targeted);
  EXPECT_EQ(resolve_mode(NormalizationMode::automatic, 41, 5), NormalizationMode::targeted);
  EXPECT_EQ(resolve_mode(NormalizationMode::automatic, 41, 4), NormalizationMode::generic);
  EXPECT_EQ(resolve_mode(NormalizationMode::zero_only, 40, 5), NormalizationMode::zero_only);
  EXPECT_THROW(search_normalization(0), PreconditionError);
}

TEST(Normalization, GenericAlwaysForcesZero) {
  for (std::uint32_t m : {2u, 12u, 35u, 64u}) {
    const auto plan = search_normalization(m);
    ASSERT_EQ(plan.branches.size(), 1u);
    EXPECT_EQ(plan.branches[0].forced, std::vector<std::uint32_t>({0}));
    EXPECT_EQ(plan.branches[0].pool.size(), m - 1);
  }
}

TEST(Normalization, Targeted41) {
  const auto plan = search_normalization(41, NormalizationMode::targeted);
  ASSERT_EQ(plan.branches.size(), 1u);
  EXPECT_EQ(plan.branches[0].forced, std::vector<std::uint32_t>({0, 40}));
  // 39 free residues, 9 more elements for k = 11.
  EXPECT_EQ(plan.branches[0].pool.size(), 39u);
}

TEST(Normalization, Targeted40) {
  const auto plan = search_normalization(40, NormalizationMode::targeted);
  ASSERT_EQ(plan.branches.size(), 2u);
  EXPECT_EQ(plan.branches[0].forced, std::vector<std::uint32_t>({0, 39}));
  std::vector<std::uint32_t> pool_b = plan.branches[1].forced;
  pool_b.insert(pool_b.end(), plan.branches[1].pool.begin(), plan.branches[1].pool.end());
  EXPECT_EQ(pool_b, std::vector<std::uint32_t>({0, 2, 4, 5, 6, 8, 10, 12, 14, 15, 16, 18,
                                                20, 22, 24, 25, 26, 28, 30, 32, 34, 35, 36, 38}));
  EXPECT_EQ(plan.branches[1].pool.size(), 23u);
  EXPECT_NE(plan.digest(), search_normalization(40).digest());
  EXPECT_EQ(plan.digest(), search_normalization(40, NormalizationMode::targeted).digest());
}

TEST(Normalization, LosslessOnEverySmallSet) {
  for (std::uint32_t m = 1; m <= 12; ++m) {
    for (auto mode : {NormalizationMode::generic, NormalizationMode::zero_only, NormalizationMode::targeted}) {
      const auto plan = search_normalization(m, mode);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        const auto a = ResidueSet::from_mask(Modulus(m), mask);
        if (mode == NormalizationMode::targeted && a.size() < 2 && m > 2) continue;
        const auto img = normalize(plan, a);
        ASSERT_TRUE(img.has_value()) << m << " " << core::format_residue_set(a);
        ASSERT_EQ(oracle::orbit(m, img->members()).count(a.members()), 1u);
      }
    }
  }
}

TEST(Normalization, LosslessForTargetedModuliOnRandomSets) {
  std::mt19937_64 rng(32);
  for (std::uint32_t m : {40u, 41u}) {
    const auto plan = search_normalization(m, NormalizationMode::targeted);
    for (int i = 0; i < 200; ++i) {
      const auto a = random_set(rng, m, 2 + static_cast<std::uint32_t>(rng() % 12));
      const auto img = normalize(plan, a);
      ASSERT_TRUE(img.has_value()) << core::format_residue_set(a);
      ASSERT_EQ(rep_values(*img), rep_values(a));
    }
  }
  // No element coprime to 40: only the second branch applies.
  const auto a = set_of(40, {2, 5, 8, 20, 30});
  const auto plan = search_normalization(40, NormalizationMode::targeted);
  const auto img = normalize(plan, a);
  ASSERT_TRUE(img.has_value());
  EXPECT_FALSE(admits(plan.branches[0], *img));
  EXPECT_TRUE(admits(plan.branches[1], *img));
}

TEST(Normalization, WidestGapRule) {
  const auto plan = search_normalization(10);
  const auto& b = plan.branches[0];
  EXPECT_TRUE(admits(b, set_of(10, {0, 1, 2})));
  EXPECT_FALSE(admits(b, set_of(10, {0, 7})));
  EXPECT_FALSE(admits(b, set_of(10, {1, 2})));
}
