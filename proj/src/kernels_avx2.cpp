// Compiled with -mavx2 -mpopcnt; only reached after a CPUID check.

#include "kernels_internal.hpp"

#if RUZSA_HAVE_AVX2

#include <immintrin.h>

#include <bit>

namespace ruzsa::simd::detail {

namespace {

inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::size_t i = 0;
  __m256i acc = _mm256_setzero_si256();
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    // Per-byte counts are <= 8, so summing into 64-bit lanes via SAD is exact.
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(_mm256_and_si256(va, vb)), _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < words; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
  return total;
}

// Byte j of the result is 1 if bit j of `bits` is set, else 0.
inline __m256i expand_bits(std::uint32_t bits) {
  const __m256i shuffle = _mm256_setr_epi8(0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1,  //
                                           2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3);
  const __m256i select = _mm256_set1_epi64x(static_cast<long long>(0x8040201008040201ULL));
  __m256i v = _mm256_shuffle_epi8(_mm256_set1_epi32(static_cast<int>(bits)), shuffle);
  v = _mm256_cmpeq_epi8(_mm256_and_si256(v, select), select);
  return _mm256_and_si256(v, _mm256_set1_epi8(1));
}

bool add_element_avx2(CountBlock& counts, std::uint64_t members, unsigned m, unsigned x, unsigned cap) {
  const std::uint64_t sums = rotl_mod(members, x, m);
  const std::uint64_t twice = std::uint64_t{1} << ((2 * x) % m);
  auto* base = reinterpret_cast<__m256i*>(counts.v.data());
  __m256i lo = _mm256_load_si256(base);
  __m256i hi = _mm256_load_si256(base + 1);
  const __m256i add_lo = expand_bits(static_cast<std::uint32_t>(sums));
  const __m256i add_hi = expand_bits(static_cast<std::uint32_t>(sums >> 32));
  lo = _mm256_adds_epu8(lo, _mm256_add_epi8(add_lo, add_lo));
  hi = _mm256_adds_epu8(hi, _mm256_add_epi8(add_hi, add_hi));
  lo = _mm256_adds_epu8(lo, expand_bits(static_cast<std::uint32_t>(twice)));
  hi = _mm256_adds_epu8(hi, expand_bits(static_cast<std::uint32_t>(twice >> 32)));
  _mm256_store_si256(base, lo);
  _mm256_store_si256(base + 1, hi);
  // Entries beyond m are zero, so they never exceed the cap.
  const __m256i limit = _mm256_set1_epi8(static_cast<char>(cap > 255 ? 255 : cap));
  const __m256i over = _mm256_or_si256(_mm256_subs_epu8(lo, limit), _mm256_subs_epu8(hi, limit));
  return _mm256_testz_si256(over, over) != 0;
}

std::uint64_t zero_mask_avx2(const CountBlock& counts, unsigned m) {
  const auto* base = reinterpret_cast<const __m256i*>(counts.v.data());
  const __m256i zero = _mm256_setzero_si256();
  const auto lo = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(_mm256_load_si256(base), zero)));
  const auto hi = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(_mm256_load_si256(base + 1), zero)));
  return ((static_cast<std::uint64_t>(hi) << 32) | lo) & low_mask(m);
}

std::uint64_t sumset_reach_avx2(std::uint64_t base, std::uint64_t shifts, unsigned m) {
  alignas(32) std::uint64_t lanes[4];
  const __m256i vbase = _mm256_set1_epi64x(static_cast<long long>(base));
  const __m256i vm = _mm256_set1_epi64x(m);
  __m256i acc = _mm256_setzero_si256();
  std::uint64_t rest = shifts;
  while (rest != 0) {
    // Pad unused lanes with shift 0, which contributes `base` itself only
    // when 0 is one of the requested shifts.
    std::uint64_t s[4] = {0, 0, 0, 0};
    std::uint64_t valid = 0;
    for (int lane = 0; lane < 4 && rest != 0; ++lane, rest &= rest - 1) {
      s[lane] = static_cast<std::uint64_t>(std::countr_zero(rest));
      valid |= std::uint64_t{0xff} << (8 * lane);
    }
    const __m256i vs = _mm256_setr_epi64x(static_cast<long long>(s[0]), static_cast<long long>(s[1]),
                                          static_cast<long long>(s[2]), static_cast<long long>(s[3]));
    // Shift counts of 64 yield zero in vpsrlvq, which is the right answer for
    // the s = 0 lanes.
    __m256i rot = _mm256_or_si256(_mm256_sllv_epi64(vbase, vs), _mm256_srlv_epi64(vbase, _mm256_sub_epi64(vm, vs)));
    const __m256i lane_mask = _mm256_setr_epi64x(valid & 0xff ? -1 : 0, valid & 0xff00 ? -1 : 0,
                                                 valid & 0xff0000 ? -1 : 0, valid & 0xff000000 ? -1 : 0);
    acc = _mm256_or_si256(acc, _mm256_and_si256(rot, lane_mask));
  }
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return (lanes[0] | lanes[1] | lanes[2] | lanes[3]) & low_mask(m);
}

constexpr KernelTable kAvx2{
    Isa::avx2, and_popcount_avx2, add_element_avx2, zero_mask_avx2, sumset_reach_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace ruzsa::simd::detail

#endif
