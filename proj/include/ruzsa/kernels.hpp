#pragma once

// Data-parallel inner loops shared by zm-core and the search engine.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is chosen once at runtime from CPUID; setting the
// environment variable RUZSA_ISA=scalar forces the reference path. The two
// paths are required to agree bit for bit (see tests/test_kernels.cpp).

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ruzsa::simd {

/// Largest modulus handled by the single-word kernels.
inline constexpr unsigned kWordModulus = 64;

/// Per-residue representation counts for m <= 64. Entries at index >= m are
/// kept at zero.
struct alignas(32) CountBlock {
  std::array<std::uint8_t, 64> v{};
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  /// popcount(a & b) over `words` 64-bit words.
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  /// Adds element x to a set with the given member mask: counts[x + a] += 2
  /// for each member a, then counts[2x] += 1 (indices mod m). Returns true iff
  /// every entry in [0, m) is <= cap afterwards. Requires x not a member.
  bool (*add_element)(CountBlock& counts, std::uint64_t members, unsigned m, unsigned x, unsigned cap);
  /// Bit n set iff counts[n] == 0, for n < m.
  std::uint64_t (*zero_mask)(const CountBlock& counts, unsigned m);
  /// Union over c in `shifts` of base rotated by c inside Z_m, i.e. the
  /// sumset base + shifts as a bit mask.
  std::uint64_t (*sumset_reach)(std::uint64_t base, std::uint64_t shifts, unsigned m);
};

const KernelTable& scalar_kernels();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();
/// Best supported table, honoring RUZSA_ISA.
const KernelTable& active_kernels();

inline constexpr std::uint64_t low_mask(unsigned m) {
  return m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
}

/// Rotation of an m-bit mask by `shift` (0 <= shift < m): bit i moves to
/// bit (i + shift) mod m.
inline constexpr std::uint64_t rotl_mod(std::uint64_t mask, unsigned shift, unsigned m) {
  if (shift == 0) return mask;
  return ((mask << shift) | (mask >> (m - shift))) & low_mask(m);
}

}  // namespace ruzsa::simd
