#include "amdrelay/clmul.hpp"

#if defined(AMDRELAY_HAVE_PCLMUL_KERNEL)
#include <wmmintrin.h>
#endif

namespace amdrelay {

u128 clmul64_scalar(uint64_t a, uint64_t b) {
    u128 acc = 0;
    u128 aa = a;
    while (b != 0) {
        acc ^= aa << __builtin_ctzll(b);
        b &= b - 1;
    }
    return acc;
}

#if defined(AMDRELAY_HAVE_PCLMUL_KERNEL)
__attribute__((target("pclmul"))) u128 clmul64_pclmul(uint64_t a, uint64_t b) {
    __m128i va = _mm_set_epi64x(0, static_cast<long long>(a));
    __m128i vb = _mm_set_epi64x(0, static_cast<long long>(b));
    __m128i prod = _mm_clmulepi64_si128(va, vb, 0x00);
    uint64_t lo = static_cast<uint64_t>(_mm_cvtsi128_si64(prod));
    uint64_t hi = static_cast<uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(prod, prod)));
    return u128_from(hi, lo);
}

static bool detect_pclmul() { return __builtin_cpu_supports("pclmul"); }
#endif

using Clmul64Fn = u128 (*)(uint64_t, uint64_t);

static Clmul64Fn pick_kernel(const char** name) {
#if defined(AMDRELAY_HAVE_PCLMUL_KERNEL)
    if (detect_pclmul()) {
        *name = "pclmul";
        return &clmul64_pclmul;
    }
#endif
    *name = "scalar";
    return &clmul64_scalar;
}

static const char* g_backend_name = nullptr;
static const Clmul64Fn g_clmul64 = pick_kernel(&g_backend_name);

u128 clmul64(uint64_t a, uint64_t b) { return g_clmul64(a, b); }

const char* clmul_backend() { return g_backend_name; }

Poly256 clmul128(u128 a, u128 b) {
    uint64_t al = lo64(a), ah = hi64(a);
    uint64_t bl = lo64(b), bh = hi64(b);
    u128 ll = g_clmul64(al, bl);
    u128 lh = g_clmul64(al, bh);
    u128 hl = g_clmul64(ah, bl);
    u128 hh = g_clmul64(ah, bh);
    Poly256 out;
    out.w[0] = lo64(ll);
    out.w[1] = hi64(ll);
    out.w[2] = lo64(hh);
    out.w[3] = hi64(hh);
    out.xor_shifted(lh ^ hl, 64);
    return out;
}

} // namespace amdrelay
