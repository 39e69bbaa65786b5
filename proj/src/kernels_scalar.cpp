#include <bit>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "ruzsa/kernels.hpp"

namespace ruzsa::simd {

namespace {

std::uint64_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return total;
}

bool add_element_scalar(CountBlock& counts, std::uint64_t members, unsigned m, unsigned x, unsigned cap) {
  for (std::uint64_t rest = members; rest != 0; rest &= rest - 1) {
    const unsigned a = static_cast<unsigned>(std::countr_zero(rest));
    const unsigned n = (x + a) % m;
    const unsigned sum = counts.v[n] + 2u;
    counts.v[n] = static_cast<std::uint8_t>(sum > 255 ? 255 : sum);
  }
  const unsigned d = (2 * x) % m;
  if (counts.v[d] < 255) ++counts.v[d];
  for (unsigned n = 0; n < m; ++n) {
    if (counts.v[n] > cap) return false;
  }
  return true;
}

std::uint64_t zero_mask_scalar(const CountBlock& counts, unsigned m) {
  std::uint64_t out = 0;
  for (unsigned n = 0; n < m; ++n) {
    if (counts.v[n] == 0) out |= std::uint64_t{1} << n;
  }
  return out;
}

std::uint64_t sumset_reach_scalar(std::uint64_t base, std::uint64_t shifts, unsigned m) {
  std::uint64_t out = 0;
  for (std::uint64_t rest = shifts; rest != 0; rest &= rest - 1) {
    out |= rotl_mod(base, static_cast<unsigned>(std::countr_zero(rest)), m);
  }
  return out;
}

constexpr KernelTable kScalar{
    Isa::scalar, and_popcount_scalar, add_element_scalar, zero_mask_scalar, sumset_reach_scalar,
};

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if RUZSA_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable* table = [] {
    const char* env = std::getenv("RUZSA_ISA");
    if (env != nullptr && std::string(env) == "scalar") return &kScalar;
    const KernelTable* avx2 = avx2_kernels();
    return avx2 != nullptr ? avx2 : &kScalar;
  }();
  return *table;
}

}  // namespace ruzsa::simd
