#pragma once

#include <cstdint>
#include <optional>

#include "amdrelay/field.hpp"

namespace amdrelay {

// Parameters for the polynomial-tag manipulation detection code: messages
// are d field elements, codewords are d+2 (systematic: message, x, tag).
// Requires that the field characteristic does not divide d+2.
class AmdParams {
public:
    AmdParams(const FieldSpec& spec, unsigned d);

    const FieldSpec& spec() const { return *spec_; }
    unsigned d() const { return d_; }
    unsigned codeword_len() const { return d_ + 2; }

private:
    const FieldSpec* spec_;
    unsigned d_;
};

struct AmdCodeword {
    FieldVec s;        // d message elements
    FieldElement x;    // encoding randomness
    FieldElement tag;  // f(x, s)

    FieldVec flatten() const; // (s..., x, tag), length d+2
    static AmdCodeword from_flat(const AmdParams& params, const FieldVec& flat);

    // Componentwise group addition on F^d x F x F.
    AmdCodeword operator+(const AmdCodeword& o) const;
};

// f(x, s) = x^(d+2) + sum_{i=1..d} s_i x^i, via Horner.
FieldElement tag_eval(const AmdParams& params, const FieldElement& x, const FieldVec& s);

AmdCodeword amd_encode(const AmdParams& params, const FieldVec& s, RandomSource& rng);

// Returns the message iff the tag verifies, nullopt (rejection) otherwise.
// Malformed codewords (wrong length, foreign field) throw instead.
std::optional<FieldVec> amd_decode(const AmdParams& params, const AmdCodeword& c);

// Exact maximum undetected-manipulation probability, as a fraction over the
// number of encoding-randomness choices q.
struct DeltaValue {
    uint64_t numerator;
    uint64_t denominator; // q
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

// Exhaustive worst case over all messages s and all nonzero shifts Delta of
//   Pr_x[ Decode(Encode(s; x) + Delta) not in {s, bot} ].
// Feasible only at small parameters; throws std::invalid_argument with a
// size message beyond the guard (q <= 64, d <= 2, q^(2d+2) <= 2^28).
DeltaValue delta_oracle(const AmdParams& params);

// Upper bound used when the oracle is out of reach: (d+1)/q. Verified
// against the oracle for every enumerable parameter set in the test suite,
// conjectured (flagged `exact == false`) elsewhere.
struct DeltaBound {
    double value;
    bool exact; // true when produced by delta_oracle
};

DeltaBound delta_bound(const AmdParams& params);

} // namespace amdrelay
