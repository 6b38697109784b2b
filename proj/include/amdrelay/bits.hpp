#pragma once

#include <cstdint>
#include <string>

namespace amdrelay {

using u128 = unsigned __int128;

constexpr u128 u128_from(uint64_t hi, uint64_t lo) {
    return (static_cast<u128>(hi) << 64) | lo;
}
constexpr uint64_t lo64(u128 v) { return static_cast<uint64_t>(v); }
constexpr uint64_t hi64(u128 v) { return static_cast<uint64_t>(v >> 64); }

// Index of the highest set bit, or -1 for zero.
inline int bit_length_minus_one(u128 v) {
    if (v == 0) return -1;
    uint64_t h = hi64(v);
    if (h != 0) return 127 - __builtin_clzll(h);
    return 63 - __builtin_clzll(lo64(v));
}

// Polynomial over GF(2) with degree < 256, as four 64-bit words (w[0] = lowest).
struct Poly256 {
    uint64_t w[4] = {0, 0, 0, 0};

    bool test(unsigned bit) const { return (w[bit >> 6] >> (bit & 63)) & 1; }

    void xor_shifted(u128 v, unsigned shift) {
        unsigned word = shift >> 6, off = shift & 63;
        uint64_t a = lo64(v), b = hi64(v);
        if (off == 0) {
            w[word] ^= a;
            if (word + 1 < 4) w[word + 1] ^= b;
        } else {
            w[word] ^= a << off;
            if (word + 1 < 4) w[word + 1] ^= (a >> (64 - off)) ^ (b << off);
            if (word + 2 < 4) w[word + 2] ^= b >> (64 - off);
        }
    }

    int degree() const {
        for (int i = 3; i >= 0; --i)
            if (w[i] != 0) return 64 * i + 63 - __builtin_clzll(w[i]);
        return -1;
    }

    u128 low128() const { return u128_from(w[1], w[0]); }
};

std::string u128_to_hex(u128 v, size_t width_bytes);

} // namespace amdrelay
