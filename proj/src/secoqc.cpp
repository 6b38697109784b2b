#include "amdrelay/secoqc.hpp"

namespace amdrelay {

BitVec::BitVec(size_t bits) : bits_(bits), w_((bits + 63) / 64, 0) {}

BitVec BitVec::random(size_t bits, RandomSource& rng) {
    BitVec v(bits);
    for (auto& word : v.w_) word = rng.next_u64();
    if (bits % 64 != 0 && !v.w_.empty()) v.w_.back() &= (1ULL << (bits % 64)) - 1;
    return v;
}

bool BitVec::get(size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }

void BitVec::set(size_t i, bool v) {
    uint64_t mask = 1ULL << (i % 64);
    if (v)
        w_[i / 64] |= mask;
    else
        w_[i / 64] &= ~mask;
}

void BitVec::flip(size_t i) { w_[i / 64] ^= 1ULL << (i % 64); }

BitVec BitVec::operator^(const BitVec& o) const {
    if (bits_ != o.bits_) throw std::invalid_argument("bit vector length mismatch");
    BitVec out(bits_);
    for (size_t i = 0; i < w_.size(); ++i) out.w_[i] = w_[i] ^ o.w_[i];
    return out;
}

bool BitVec::operator==(const BitVec& o) const { return bits_ == o.bits_ && w_ == o.w_; }

bool BitVec::dot(const BitVec& o) const {
    if (bits_ != o.bits_) throw std::invalid_argument("bit vector length mismatch");
    uint64_t acc = 0;
    for (size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return __builtin_parityll(acc);
}

std::string BitVec::to_hex() const {
    std::string out;
    size_t bytes = (bits_ + 7) / 8;
    for (size_t b = 0; b < bytes; ++b) {
        uint8_t byte = static_cast<uint8_t>(w_[b / 8] >> ((b % 8) * 8));
        static const char* digits = "0123456789abcdef";
        out += digits[byte >> 4];
        out += digits[byte & 0xf];
    }
    return out;
}

BitMatrix BitMatrix::random(size_t rows, size_t cols, RandomSource& rng) {
    BitMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row.reserve(rows);
    for (size_t r = 0; r < rows; ++r) m.row.push_back(BitVec::random(cols, rng));
    return m;
}

BitVec BitMatrix::mul(const BitVec& v) const {
    BitVec out(rows);
    for (size_t r = 0; r < rows; ++r) out.set(r, row[r].dot(v));
    return out;
}

// ---------------------------------------------------------------------------

FieldElement wc_hash(const SecoqcParams& params, const FieldElement& kappa1, const BitVec& msg) {
    const FieldSpec& f = params.tag_field();
    if (&kappa1.spec() != &f) throw SpecMismatchError("hash key from wrong field");
    if (msg.size() > params.max_msg_bits) throw std::invalid_argument("message exceeds configured maximum");
    // Message blocks of tag_bits bits become coefficients; Horner with a
    // trailing multiply keeps the constant term zero.
    FieldElement acc = FieldElement::zero(f);
    size_t nblocks = (msg.size() + params.tag_bits - 1) / params.tag_bits;
    for (size_t b = 0; b < nblocks; ++b) {
        u128 block = 0;
        for (size_t k = 0; k < params.tag_bits; ++k) {
            size_t bit = b * params.tag_bits + k;
            if (bit < msg.size() && msg.get(bit)) block |= static_cast<u128>(1) << k;
        }
        acc = (acc + FieldElement(f, block)) * kappa1;
    }
    return acc;
}

FieldElement wc_mac(const SecoqcParams& params, const WcMacKey& key, const BitVec& msg) {
    return wc_hash(params, key.kappa1, msg) + key.kappa2;
}

// ---------------------------------------------------------------------------

static BitVec concat_lambda_parity(const BitMatrix& lambda, const BitVec& parity) {
    BitVec msg(lambda.rows * lambda.cols + parity.size());
    size_t pos = 0;
    for (size_t r = 0; r < lambda.rows; ++r)
        for (size_t c = 0; c < lambda.cols; ++c) msg.set(pos++, lambda.row[r].get(c));
    for (size_t i = 0; i < parity.size(); ++i) msg.set(pos++, parity.get(i));
    return msg;
}

SecoqcRun secoqc_run(const SecoqcParams& params, const SecoqcTamper& tamper, RandomSource& rng) {
    const FieldSpec& f = params.tag_field();
    if (params.n_paths < 2) throw std::invalid_argument("the attack story needs at least two paths");

    // Step 1 result: both ends hold the secret-sharing output kappa || s.
    // The adversary's step-1 manipulation shows up as the kappa2-segment
    // shift and/or a flipped payload bit on the receiver side.
    WcMacKey alice{random_element(f, rng), random_element(f, rng), random_element(f, rng)};
    BitVec payload = BitVec::random(params.payload_bits, rng);

    WcMacKey bob = alice;
    if (tamper.tag_delta2 != 0) bob.kappa2 = bob.kappa2 + FieldElement(f, tamper.tag_delta2);
    BitVec payload_bob = payload;
    if (tamper.flip_payload_bit >= 0) payload_bob.flip(static_cast<size_t>(tamper.flip_payload_bit));

    // Step 2, sender side.
    SecoqcRun run{payload,
                  payload_bob,
                  BitMatrix::random(params.parity_rows, params.payload_bits, rng),
                  BitVec(0),
                  FieldElement::zero(f),
                  {},
                  {},
                  false,
                  FieldElement::zero(f),
                  BitVec(0)};
    run.parity = run.lambda.mul(payload);
    BitVec msg = concat_lambda_parity(run.lambda, run.parity);
    run.tag = wc_mac(params, alice, msg);

    // Delivery: the manipulated last path adds delta2 to the tag in
    // transit, the others forward it unmodified.
    for (int i = 0; i < params.n_paths; ++i) {
        FieldElement t = run.tag;
        if (tamper.tag_delta2 != 0 && i == params.n_paths - 1)
            t = t + FieldElement(f, tamper.tag_delta2);
        if (tamper.garble_tag_path == i) t = t + FieldElement::one(f);
        run.delivered_tags.push_back(t);
    }

    // Step 2, receiver side: per-path parity and tag verification under the
    // receiver's key.
    BitVec parity_check = run.lambda.mul(payload_bob);
    FieldElement expected = wc_mac(params, bob, msg);
    for (int i = 0; i < params.n_paths; ++i) {
        PathVerdict v;
        v.parity_ok = parity_check == run.parity;
        v.tag_ok = run.delivered_tags[i] == expected;
        run.verdicts.push_back(v);
        run.accepted = run.accepted || v.valid();
    }

    // Step 3: the receiver replies with the accept bit under the second
    // pad. Step 4 (removing the bits leaked through the parity data) stays
    // a no-op; both are recorded only.
    BitVec reply(1);
    reply.set(0, run.accepted);
    run.reply_tag = wc_hash(params, bob.kappa1, reply) + bob.kappa3;
    run.surviving_payload = payload_bob;
    return run;
}

SecoqcRun secoqc_honest_run(const SecoqcParams& params, RandomSource& rng) {
    return secoqc_run(params, SecoqcTamper{}, rng);
}

AttackReport secoqc_attack(const SecoqcParams& params, u128 delta2, RandomSource& rng) {
    if (delta2 == 0) throw std::invalid_argument("the attack needs a nonzero shift");
    const FieldSpec& f = params.tag_field();
    if (!f.canonical(delta2)) throw std::invalid_argument("delta2 exceeds the tag width");

    SecoqcRun run = secoqc_run(params, SecoqcTamper{delta2, -1}, rng);

    AttackReport rep{params, delta2, run.accepted, false, true, false, true, run.verdicts,
                     run.delivered_tags};
    int last = params.n_paths - 1;
    rep.corrupt_path_valid = run.verdicts[last].valid();
    for (int i = 0; i < last; ++i) {
        if (run.verdicts[i].tag_ok) rep.honest_paths_rejected = false;
        if ((run.delivered_tags[i] + run.delivered_tags[last]).value() != delta2)
            rep.tag_xor_identity = false;
    }
    // T + delta2 = f_{k1}(msg) + k2 + delta2 = MAC under the shifted key.
    rep.mac_shift_identity =
        run.delivered_tags[last] == run.tag + FieldElement(f, delta2) && rep.corrupt_path_valid;
    return rep;
}

} // namespace amdrelay
