#pragma once

#include "amdrelay/bits.hpp"

namespace amdrelay {

// Carry-less (GF(2)[x]) multiplication kernels. The scalar version is the
// reference; on x86-64 a PCLMULQDQ variant is selected at runtime when the
// CPU supports it. Both must agree bit-for-bit (see clmul_test).

u128 clmul64_scalar(uint64_t a, uint64_t b);

#if defined(__x86_64__) || defined(_M_X64)
#define AMDRELAY_HAVE_PCLMUL_KERNEL 1
u128 clmul64_pclmul(uint64_t a, uint64_t b);
#endif

// Dispatched 64x64 -> 128 carry-less multiply.
u128 clmul64(uint64_t a, uint64_t b);

// Name of the kernel clmul64() dispatches to ("pclmul" or "scalar").
const char* clmul_backend();

// 128x128 -> 256 carry-less multiply built from four 64-bit products.
Poly256 clmul128(u128 a, u128 b);

} // namespace amdrelay
