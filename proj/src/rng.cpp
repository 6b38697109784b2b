#include "amdrelay/rng.hpp"

namespace amdrelay {

static inline uint32_t rotl32(uint32_t v, int c) { return (v << c) | (v >> (32 - c)); }

static inline void quarter_round(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = rotl32(d, 16);
    c += d; b ^= c; b = rotl32(b, 12);
    a += b; d ^= a; d = rotl32(d, 8);
    c += d; b ^= c; b = rotl32(b, 7);
}

void chacha20_block(const uint32_t key[8], const uint32_t input[4], uint32_t out[16]) {
    static const uint32_t kSigma[4] = {0x61707865, 0x3320646e, 0x79622d32, 0x6b206574};
    uint32_t s[16];
    for (int i = 0; i < 4; ++i) s[i] = kSigma[i];
    for (int i = 0; i < 8; ++i) s[4 + i] = key[i];
    for (int i = 0; i < 4; ++i) s[12 + i] = input[i];
    uint32_t x[16];
    for (int i = 0; i < 16; ++i) x[i] = s[i];
    for (int round = 0; round < 10; ++round) {
        quarter_round(x[0], x[4], x[8], x[12]);
        quarter_round(x[1], x[5], x[9], x[13]);
        quarter_round(x[2], x[6], x[10], x[14]);
        quarter_round(x[3], x[7], x[11], x[15]);
        quarter_round(x[0], x[5], x[10], x[15]);
        quarter_round(x[1], x[6], x[11], x[12]);
        quarter_round(x[2], x[7], x[8], x[13]);
        quarter_round(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) out[i] = x[i] + s[i];
}

static uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(uint64_t seed) {
    uint64_t s = seed;
    for (int i = 0; i < 4; ++i) {
        uint64_t v = splitmix64(s);
        key_[2 * i] = static_cast<uint32_t>(v);
        key_[2 * i + 1] = static_cast<uint32_t>(v >> 32);
    }
}

Rng::Rng(const std::array<uint32_t, 8>& key) : key_(key) {}

void Rng::refill() {
    // Output domain: input words = (counter_lo, counter_hi, 0, 0).
    uint32_t input[4] = {static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32), 0, 0};
    chacha20_block(key_.data(), input, block_.data());
    ++counter_;
    pos_ = 0;
}

uint64_t Rng::next_u64() {
    if (pos_ + 2 > 16) refill();
    uint64_t lo = block_[pos_];
    uint64_t hi = block_[pos_ + 1];
    pos_ += 2;
    return (hi << 32) | lo;
}

Rng Rng::derive(uint64_t label) const {
    // Derivation domain: input words = (label_lo, label_hi, 0, 1); the
    // trailing 1 separates child-key blocks from output blocks.
    uint32_t input[4] = {static_cast<uint32_t>(label), static_cast<uint32_t>(label >> 32), 0, 1};
    uint32_t out[16];
    chacha20_block(key_.data(), input, out);
    std::array<uint32_t, 8> child_key;
    for (int i = 0; i < 8; ++i) child_key[i] = out[i];
    return Rng(child_key);
}

uint64_t Rng::below(uint64_t bound) {
    if (bound <= 1) return 0;
    int bits = 64 - __builtin_clzll(bound - 1);
    uint64_t mask = (bits == 64) ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
        uint64_t v = next_u64() & mask;
        if (v < bound) return v;
    }
}

} // namespace amdrelay
