#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amdrelay/bits.hpp"
#include "amdrelay/rng.hpp"

namespace amdrelay {

// Mixing elements of different fields in one operation.
struct SpecMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed serialized or hex element (wrong length, non-canonical value).
struct FieldParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Description of GF(p) or GF(2^m). Instances are interned and immutable:
// every (p, m, polynomial) triple maps to exactly one FieldSpec for the
// lifetime of the process, so identity comparison is pointer comparison.
//
// Elements are dense canonical representatives in a u128: the integer in
// [0,p) for prime fields, the coefficient bitstring for GF(2^m). Arithmetic
// is not constant-time; this library simulates protocols and must not be
// used to secure real data.
class FieldSpec {
public:
    // GF(p) for prime p (64-bit). Rejects composites.
    static const FieldSpec& prime(uint64_t p);

    // GF(2^m) with the built-in reduction polynomial for m (2 <= m <= 128).
    static const FieldSpec& gf2m(unsigned m);

    // GF(2^m) with an explicit reduction polynomial (low coefficients; the
    // leading x^m term is implicit). Irreducibility is checked: exhaustive
    // trial division for m <= 32, table membership plus Frobenius samples
    // beyond that.
    static const FieldSpec& gf2m(unsigned m, u128 poly_low);

    // Named field: "gf7", "gf2_86", "gf16" (power of two sizes map to
    // binary extension fields), "gf8", ...
    static const FieldSpec& parse(std::string_view name);

    uint64_t characteristic() const { return p_; }
    unsigned degree() const { return m_; }
    bool binary() const { return p_ == 2; }
    bool extension() const { return m_ > 1; }
    u128 reduction_poly_low() const { return poly_low_; }

    // Field order q = p^m; only valid when q fits in 128 bits (always true
    // for supported parameters). q == 0 encodes 2^128.
    u128 order() const { return order_; }
    unsigned order_bits() const { return order_bits_; } // bit width of q-1 (+1)
    size_t byte_size() const { return byte_size_; }     // serialized width

    std::string name() const;

    // Raw value arithmetic on canonical representatives.
    u128 add(u128 a, u128 b) const;
    u128 sub(u128 a, u128 b) const;
    u128 neg(u128 a) const;
    u128 mul(u128 a, u128 b) const;
    u128 inv(u128 a) const; // throws std::domain_error on 0
    u128 pow(u128 base, u128 exp) const;
    u128 sample(RandomSource& rng) const;
    bool canonical(u128 v) const;

    FieldSpec(const FieldSpec&) = delete;
    FieldSpec& operator=(const FieldSpec&) = delete;

private:
    FieldSpec(uint64_t p, unsigned m, u128 poly_low);
    static const FieldSpec& intern(uint64_t p, unsigned m, u128 poly_low);

    uint64_t p_;
    unsigned m_;
    u128 poly_low_;
    u128 order_;
    unsigned order_bits_;
    size_t byte_size_;
};

class FieldElement {
public:
    FieldElement(const FieldSpec& spec, u128 value);

    static FieldElement zero(const FieldSpec& spec) { return {spec, 0}; }
    static FieldElement one(const FieldSpec& spec) { return {spec, 1}; }

    u128 value() const { return value_; }
    const FieldSpec& spec() const { return *spec_; }
    bool is_zero() const { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement inv() const;
    FieldElement pow(u128 exp) const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    std::vector<uint8_t> serialize() const;
    static FieldElement deserialize(const FieldSpec& spec, std::span<const uint8_t> bytes);

    // Lowercase fixed-width hex (2 * byte_size() digits).
    std::string to_hex() const;
    static FieldElement from_hex(const FieldSpec& spec, std::string_view hex);

private:
    const FieldSpec* spec_;
    u128 value_;
};

FieldElement random_element(const FieldSpec& spec, RandomSource& rng);

using FieldVec = std::vector<FieldElement>;

FieldVec vec_add(const FieldVec& a, const FieldVec& b);
FieldVec vec_sub(const FieldVec& a, const FieldVec& b);
FieldVec random_vec(const FieldSpec& spec, size_t len, RandomSource& rng);
FieldVec zero_vec(const FieldSpec& spec, size_t len);
std::string vec_to_hex(const FieldVec& v); // concatenated fixed-width elements
FieldVec vec_from_hex(const FieldSpec& spec, size_t len, std::string_view hex);

// True iff p is prime (deterministic Miller-Rabin for 64-bit inputs).
bool is_prime_u64(uint64_t p);

// True iff x^m + poly_low is irreducible over GF(2); exhaustive trial
// division, intended for m <= 32.
bool gf2_poly_irreducible_exhaustive(unsigned m, u128 poly_low);

} // namespace amdrelay
