#pragma once

#include <vector>

#include "amdrelay/field.hpp"

namespace amdrelay {

// Dense bit vector over 64-bit words, for the parity-check machinery.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t bits);
    static BitVec random(size_t bits, RandomSource& rng);

    size_t size() const { return bits_; }
    bool get(size_t i) const;
    void set(size_t i, bool v);
    void flip(size_t i);
    BitVec operator^(const BitVec& o) const;
    bool operator==(const BitVec& o) const;

    // Parity of the AND with another vector (one GF(2) inner product).
    bool dot(const BitVec& o) const;

    const std::vector<uint64_t>& words() const { return w_; }
    std::string to_hex() const;

private:
    size_t bits_ = 0;
    std::vector<uint64_t> w_;
};

struct BitMatrix {
    size_t rows = 0, cols = 0;
    std::vector<BitVec> row;

    static BitMatrix random(size_t rows, size_t cols, RandomSource& rng);
    BitVec mul(const BitVec& v) const; // over GF(2)
};

struct SecoqcParams {
    unsigned tag_bits = 64;     // hash/tag width; the hash family lives in GF(2^tag_bits)
    unsigned parity_rows = 32;  // number of random parity checks
    unsigned payload_bits = 160;// length of the checked secret segment
    int n_paths = 3;
    size_t max_msg_bits = 1u << 20;

    const FieldSpec& tag_field() const { return FieldSpec::gf2m(tag_bits); }
};

// Two-time MAC key: a hash-family index and two one-time pads, the three
// segments of the key part of the secret-sharing output.
struct WcMacKey {
    FieldElement kappa1;
    FieldElement kappa2;
    FieldElement kappa3; // reserved for the receiver's reply tag; unused here
};

// tag = f_{kappa1}(msg) + kappa2, where f is polynomial evaluation over
// GF(2^tag_bits) with zero constant term (an almost-XOR-universal family).
FieldElement wc_mac(const SecoqcParams& params, const WcMacKey& key, const BitVec& msg);

// The hash part alone, for universality estimation.
FieldElement wc_hash(const SecoqcParams& params, const FieldElement& kappa1, const BitVec& msg);

struct PathVerdict {
    bool parity_ok = false;
    bool tag_ok = false;
    bool valid() const { return parity_ok && tag_ok; }
};

// Adversarial knobs for one protocol run. tag_delta2 != 0 plays the
// algebraic-shift attack: the receiver's kappa2 segment and the tag
// delivered on the last path are both offset by it. flip_payload_bit >= 0
// flips one bit of the receiver's payload copy (a plain corruption that the
// parity checks are meant to catch). garble_tag_path >= 0 delivers a
// damaged tag on that path without touching any key.
struct SecoqcTamper {
    u128 tag_delta2 = 0;
    int flip_payload_bit = -1;
    int garble_tag_path = -1;
};

struct SecoqcRun {
    BitVec payload;                    // sender-side checked segment
    BitVec payload_bob;                // receiver-side copy
    BitMatrix lambda;                  // parity_rows x payload_bits
    BitVec parity;                     // lambda * payload
    FieldElement tag;                  // sender tag over lambda || parity
    std::vector<FieldElement> delivered_tags; // per path
    std::vector<PathVerdict> verdicts; // receiver's per-path checks
    bool accepted;                     // exists a path with both checks passing
    // Reply step, recorded but not acted on: the receiver returns the
    // accept bit tagged under kappa3 (the second pad of the two-time key).
    FieldElement reply_tag;
    // The final bit-removal step is deliberately a no-op here; the checked
    // segment is returned unshortened.
    BitVec surviving_payload;
};

SecoqcRun secoqc_run(const SecoqcParams& params, const SecoqcTamper& tamper, RandomSource& rng);

// All paths honest; the receiver accepts and every path verdict is valid.
SecoqcRun secoqc_honest_run(const SecoqcParams& params, RandomSource& rng);

struct AttackReport {
    SecoqcParams params;
    u128 delta2;
    bool bob_accepted;
    bool corrupt_path_valid;     // the manipulated path passes verification
    bool honest_paths_rejected;  // every honest path's tag fails
    bool mac_shift_identity;     // T + delta2 equals the tag under the shifted key
    bool tag_xor_identity;       // T_i + T_n == delta2 for every honest i
    std::vector<PathVerdict> verdicts;
    std::vector<FieldElement> delivered_tags;
    bool success() const {
        return bob_accepted && corrupt_path_valid && honest_paths_rejected && mac_shift_identity &&
               tag_xor_identity;
    }
};

// The misidentification attack: a nonzero kappa2-segment shift makes the
// manipulated path verify under the receiver's key while every honest path
// fails, deterministically.
AttackReport secoqc_attack(const SecoqcParams& params, u128 delta2, RandomSource& rng);

} // namespace amdrelay
