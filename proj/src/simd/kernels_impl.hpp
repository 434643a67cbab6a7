#pragma once

#include "protorecon/simd/kernels.hpp"

namespace protorecon::simd::detail {

extern const KernelTable kScalarTable;

#if defined(PROTORECON_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace protorecon::simd::detail
