#pragma once

#include "ruzsa/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RUZSA_HAVE_AVX2 1
#else
#define RUZSA_HAVE_AVX2 0
#endif

namespace ruzsa::simd::detail {

#if RUZSA_HAVE_AVX2
const KernelTable& avx2_table();
#endif

}  // namespace ruzsa::simd::detail
