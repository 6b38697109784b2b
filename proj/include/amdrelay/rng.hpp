#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace amdrelay {

// Source of uniform random words. Field sampling and all randomized
// operations draw through this interface so tests can substitute scripted
// tapes for exhaustive enumeration.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual uint64_t next_u64() = 0;
};

// ChaCha20 block function. `key` is 8 words, `input` the four state words
// 12..15 (counter/nonce block), `out` receives the 16 output words.
void chacha20_block(const uint32_t key[8], const uint32_t input[4], uint32_t out[16]);

// Deterministic, seedable generator backed by the ChaCha20 keystream.
//
// Besides sequential output, an Rng can `derive` independent child
// generators by label. Derivation is a pure function of (key, label), so a
// stream such as trial.derive(kNet).derive(i).derive(j) names the same
// values no matter when or in which order it is materialised. The game
// harness leans on this for coupled paired-seed executions.
//
// Not suitable for securing real data; this powers a simulator.
class Rng final : public RandomSource {
public:
    explicit Rng(uint64_t seed);
    explicit Rng(const std::array<uint32_t, 8>& key);

    uint64_t next_u64() override;

    // Child generator with an independent keystream.
    Rng derive(uint64_t label) const;

    // Uniform integer in [0, bound) by rejection on bit_width(bound-1) bits.
    uint64_t below(uint64_t bound);

private:
    void refill();

    std::array<uint32_t, 8> key_;
    uint64_t counter_ = 0;
    std::array<uint32_t, 16> block_{};
    size_t pos_ = 16; // in words; 16 = empty buffer
};

// Stream labels used by the game harness. Module-level code derives
// per-purpose child generators so that randomness consumption in one
// component can never shift another's.
enum StreamLabel : uint64_t {
    kStreamTrial = 1,
    kStreamGame = 2,
    kStreamAdversary = 3,
    kStreamKeys = 4,
    kStreamNet = 5,
    kStreamLazyKey = 6,
    kStreamShift = 7,
};

} // namespace amdrelay
