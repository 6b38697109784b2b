#include "amdrelay/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "amdrelay/clmul.hpp"

namespace amdrelay {

// ---------------------------------------------------------------------------
// Primality (deterministic Miller-Rabin, valid for all 64-bit inputs).

static uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t mod) {
    return static_cast<uint64_t>((static_cast<u128>(a) * b) % mod);
}

static uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t r = 1 % mod;
    base %= mod;
    while (exp != 0) {
        if (exp & 1) r = mulmod_u64(r, base, mod);
        base = mulmod_u64(base, base, mod);
        exp >>= 1;
    }
    return r;
}

bool is_prime_u64(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (p == small) return true;
        if (p % small == 0) return false;
    }
    uint64_t d = p - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This base set is a proven witness set for every n < 3.3 * 10^24.
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, p);
        if (x == 1 || x == p - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, p);
            if (x == p - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// GF(2)[x] helpers for irreducibility checking.

// Remainder of a (degree <= 128 as value with implicit semantics: full bits)
// modulo g; both are plain GF(2) polynomials encoded in integers.
static u128 gf2_poly_mod(u128 a, u128 g) {
    int dg = bit_length_minus_one(g);
    int da = bit_length_minus_one(a);
    while (da >= dg) {
        a ^= g << (da - dg);
        da = bit_length_minus_one(a);
    }
    return a;
}

bool gf2_poly_irreducible_exhaustive(unsigned m, u128 poly_low) {
    if (m == 0) return false;
    u128 f = (static_cast<u128>(1) << m) | poly_low;
    if ((f & 1) == 0) return false; // divisible by x
    for (unsigned deg = 1; 2 * deg <= m; ++deg) {
        u128 top = static_cast<u128>(1) << deg;
        for (u128 low = 0; low < top; ++low) {
            u128 g = top | low;
            if (gf2_poly_mod(f, g) == 0) return false;
        }
    }
    return true;
}

// Built-in reduction polynomials (taps below the leading x^m term), each
// verified irreducible; the unit tests re-prove every entry with a Rabin
// irreducibility check.
struct PolyEntry {
    unsigned m;
    u128 low;
};

static u128 taps(std::initializer_list<unsigned> ts) {
    u128 v = 0;
    for (unsigned t : ts) v |= static_cast<u128>(1) << t;
    return v;
}

static const std::vector<PolyEntry>& poly_table() {
    static const std::vector<PolyEntry> table = {
        {2, taps({1, 0})},      {3, taps({1, 0})},      {4, taps({1, 0})},
        {5, taps({2, 0})},      {6, taps({1, 0})},      {7, taps({1, 0})},
        {8, taps({4, 3, 1, 0})},{10, taps({3, 0})},     {12, taps({3, 0})},
        {16, taps({5, 3, 1, 0})},{20, taps({3, 0})},    {24, taps({4, 3, 1, 0})},
        {32, taps({7, 3, 2, 0})},{48, taps({5, 3, 2, 0})},{64, taps({4, 3, 1, 0})},
        {86, taps({21, 0})},    {128, taps({7, 2, 1, 0})},
    };
    return table;
}

static const PolyEntry* poly_table_lookup(unsigned m) {
    for (const auto& e : poly_table())
        if (e.m == m) return &e;
    return nullptr;
}

// ---------------------------------------------------------------------------
// FieldSpec

static u128 gf2m_reduce(Poly256 prod, unsigned m, u128 poly_low) {
    int deg = prod.degree();
    while (deg >= static_cast<int>(m)) {
        // Clearing bit `deg` is the x^m part of the reduction polynomial.
        prod.w[deg >> 6] ^= 1ULL << (deg & 63);
        prod.xor_shifted(poly_low, deg - m);
        deg = prod.degree();
    }
    return prod.low128();
}

FieldSpec::FieldSpec(uint64_t p, unsigned m, u128 poly_low) : p_(p), m_(m), poly_low_(poly_low) {
    if (!is_prime_u64(p)) throw std::invalid_argument("field characteristic must be prime");
    if (m == 0) throw std::invalid_argument("extension degree must be positive");
    if (m > 1 && p != 2) throw std::invalid_argument("extension fields supported only for p=2");
    if (m > 128) throw std::invalid_argument("extension degree above 128 not supported");
    if (p == 2) {
        order_ = (m_ == 128) ? 0 : (static_cast<u128>(1) << m_);
        order_bits_ = m_;
        byte_size_ = (m_ + 7) / 8;
    } else {
        order_ = p;
        order_bits_ = 64 - __builtin_clzll(p - 1);
        byte_size_ = (order_bits_ + 7) / 8;
    }
    if (m > 1) {
        if (poly_low == 0 || bit_length_minus_one(poly_low) >= static_cast<int>(m))
            throw std::invalid_argument("reduction polynomial out of range");
        if (m <= 32) {
            if (!gf2_poly_irreducible_exhaustive(m, poly_low))
                throw std::invalid_argument("reduction polynomial is reducible");
        } else {
            const PolyEntry* e = poly_table_lookup(m);
            if (e == nullptr || e->low != poly_low)
                throw std::invalid_argument("no vetted reduction polynomial for this degree");
            // Frobenius spot check: a^(2^m) == a for sampled elements.
            Rng probe(0x616d64726c798653ULL ^ m);
            for (int k = 0; k < 8; ++k) {
                u128 a = sample(probe);
                u128 x = a;
                for (unsigned i = 0; i < m_; ++i) x = mul(x, x);
                if (x != a) throw std::invalid_argument("reduction polynomial failed Frobenius check");
            }
        }
    }
}

u128 FieldSpec::add(u128 a, u128 b) const {
    if (p_ == 2) return a ^ b;
    u128 s = a + b;
    if (s >= p_) s -= p_;
    return s;
}

u128 FieldSpec::sub(u128 a, u128 b) const {
    if (p_ == 2) return a ^ b;
    return a >= b ? a - b : a + p_ - b;
}

u128 FieldSpec::neg(u128 a) const {
    if (p_ == 2) return a;
    return a == 0 ? 0 : p_ - a;
}

u128 FieldSpec::mul(u128 a, u128 b) const {
    if (p_ != 2) {
        // p < 2^64, so the product fits in u128.
        return (a * b) % p_;
    }
    if (m_ == 1) return a & b;
    return gf2m_reduce(clmul128(a, b), m_, poly_low_);
}

u128 FieldSpec::pow(u128 base, u128 exp) const {
    u128 r = 1;
    u128 b = base;
    while (exp != 0) {
        if (exp & 1) r = mul(r, b);
        b = mul(b, b);
        exp >>= 1;
    }
    return r;
}

u128 FieldSpec::inv(u128 a) const {
    if (a == 0) throw std::domain_error("division by zero in " + name());
    // q - 2; order_ == 0 encodes 2^128, giving 2^128 - 2 here.
    u128 e = order_ - 2;
    return pow(a, e);
}

u128 FieldSpec::sample(RandomSource& rng) const {
    if (p_ == 2) {
        // Power-of-two order: mask, no rejection.
        u128 v = rng.next_u64();
        if (m_ > 64) v |= static_cast<u128>(rng.next_u64()) << 64;
        return (m_ == 128) ? v : (v & ((static_cast<u128>(1) << m_) - 1));
    }
    for (;;) {
        uint64_t v = rng.next_u64() & ((order_bits_ == 64) ? ~0ULL : ((1ULL << order_bits_) - 1));
        if (v < p_) return v;
    }
}

bool FieldSpec::canonical(u128 v) const {
    if (order_ == 0) return true; // 2^128
    return v < order_;
}

std::string FieldSpec::name() const {
    if (p_ == 2 && m_ > 1) return "gf2_" + std::to_string(m_);
    return "gf" + std::to_string(p_);
}

namespace {
struct SpecKey {
    uint64_t p;
    unsigned m;
    u128 poly;
    bool operator<(const SpecKey& o) const {
        return std::tie(p, m, poly) < std::tie(o.p, o.m, o.poly);
    }
};
} // namespace

const FieldSpec& FieldSpec::intern(uint64_t p, unsigned m, u128 poly) {
    static std::mutex mu;
    static std::map<SpecKey, std::unique_ptr<FieldSpec>> registry;
    std::lock_guard<std::mutex> lock(mu);
    SpecKey key{p, m, poly};
    auto it = registry.find(key);
    if (it == registry.end()) {
        auto spec = std::unique_ptr<FieldSpec>(new FieldSpec(p, m, poly));
        it = registry.emplace(key, std::move(spec)).first;
    }
    return *it->second;
}

const FieldSpec& FieldSpec::prime(uint64_t p) { return intern(p, 1, 0); }

const FieldSpec& FieldSpec::gf2m(unsigned m) {
    if (m == 1) return prime(2);
    const PolyEntry* e = poly_table_lookup(m);
    if (e == nullptr) throw std::invalid_argument("no built-in reduction polynomial for degree " + std::to_string(m));
    return intern(2, m, e->low);
}

const FieldSpec& FieldSpec::gf2m(unsigned m, u128 poly_low) {
    if (m == 1) return prime(2);
    return intern(2, m, poly_low);
}

const FieldSpec& FieldSpec::parse(std::string_view name) {
    std::string s(name);
    if (s.rfind("gf", 0) != 0) throw std::invalid_argument("field name must start with 'gf': " + s);
    std::string rest = s.substr(2);
    auto underscore = rest.find('_');
    if (underscore != std::string::npos) {
        // gf<p>_<m>: extension field (p must be 2).
        uint64_t p = std::stoull(rest.substr(0, underscore));
        unsigned m = static_cast<unsigned>(std::stoul(rest.substr(underscore + 1)));
        if (p != 2) throw std::invalid_argument("extension fields supported only for p=2");
        return gf2m(m);
    }
    uint64_t q = std::stoull(rest);
    if (q >= 2 && (q & (q - 1)) == 0) {
        unsigned m = static_cast<unsigned>(__builtin_ctzll(q));
        return gf2m(m == 1 ? 1 : m);
    }
    if (!is_prime_u64(q)) throw std::invalid_argument("field size must be prime or a power of two: " + s);
    return prime(q);
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(const FieldSpec& spec, u128 value) : spec_(&spec), value_(value) {
    if (!spec.canonical(value)) throw std::invalid_argument("field element out of canonical range");
}

static void check_same_spec(const FieldSpec* a, const FieldSpec* b) {
    if (a != b)
        throw SpecMismatchError("operands belong to different fields: " + a->name() + " vs " + b->name());
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_spec(spec_, o.spec_);
    return {*spec_, spec_->add(value_, o.value_)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_spec(spec_, o.spec_);
    return {*spec_, spec_->sub(value_, o.value_)};
}

FieldElement FieldElement::operator-() const { return {*spec_, spec_->neg(value_)}; }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_spec(spec_, o.spec_);
    return {*spec_, spec_->mul(value_, o.value_)};
}

FieldElement FieldElement::inv() const { return {*spec_, spec_->inv(value_)}; }

FieldElement FieldElement::pow(u128 exp) const { return {*spec_, spec_->pow(value_, exp)}; }

bool FieldElement::operator==(const FieldElement& o) const {
    check_same_spec(spec_, o.spec_);
    return value_ == o.value_;
}

std::vector<uint8_t> FieldElement::serialize() const {
    size_t n = spec_->byte_size();
    std::vector<uint8_t> out(n);
    u128 v = value_;
    for (size_t i = 0; i < n; ++i) {
        out[n - 1 - i] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

FieldElement FieldElement::deserialize(const FieldSpec& spec, std::span<const uint8_t> bytes) {
    if (bytes.size() != spec.byte_size())
        throw FieldParseError("expected " + std::to_string(spec.byte_size()) + " bytes for " + spec.name() +
                              ", got " + std::to_string(bytes.size()));
    u128 v = 0;
    for (uint8_t b : bytes) v = (v << 8) | b;
    if (!spec.canonical(v)) throw FieldParseError("non-canonical element for " + spec.name());
    return {spec, v};
}

std::string u128_to_hex(u128 v, size_t width_bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out(width_bytes * 2, '0');
    for (size_t i = 0; i < width_bytes * 2; ++i) {
        out[width_bytes * 2 - 1 - i] = digits[static_cast<unsigned>(v & 0xf)];
        v >>= 4;
    }
    return out;
}

std::string FieldElement::to_hex() const { return u128_to_hex(value_, spec_->byte_size()); }

// Lowercase only: every external hex surface is lowercase fixed-width.
static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

FieldElement FieldElement::from_hex(const FieldSpec& spec, std::string_view hex) {
    if (hex.size() != spec.byte_size() * 2)
        throw FieldParseError("expected " + std::to_string(spec.byte_size() * 2) + " hex digits for " +
                              spec.name() + ", got " + std::to_string(hex.size()));
    u128 v = 0;
    for (char c : hex) {
        int d = hex_digit(c);
        if (d < 0) throw FieldParseError(std::string("invalid hex digit '") + c + "'");
        v = (v << 4) | static_cast<unsigned>(d);
    }
    if (!spec.canonical(v)) throw FieldParseError("non-canonical element for " + spec.name());
    return {spec, v};
}

FieldElement random_element(const FieldSpec& spec, RandomSource& rng) {
    return {spec, spec.sample(rng)};
}

FieldVec vec_add(const FieldVec& a, const FieldVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    FieldVec out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

FieldVec vec_sub(const FieldVec& a, const FieldVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    FieldVec out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

FieldVec random_vec(const FieldSpec& spec, size_t len, RandomSource& rng) {
    FieldVec out;
    out.reserve(len);
    for (size_t i = 0; i < len; ++i) out.push_back(random_element(spec, rng));
    return out;
}

FieldVec zero_vec(const FieldSpec& spec, size_t len) {
    return FieldVec(len, FieldElement::zero(spec));
}

std::string vec_to_hex(const FieldVec& v) {
    std::string out;
    for (const auto& e : v) out += e.to_hex();
    return out;
}

FieldVec vec_from_hex(const FieldSpec& spec, size_t len, std::string_view hex) {
    size_t w = spec.byte_size() * 2;
    if (hex.size() != w * len) throw FieldParseError("hex string has wrong length for vector");
    FieldVec out;
    out.reserve(len);
    for (size_t i = 0; i < len; ++i) out.push_back(FieldElement::from_hex(spec, hex.substr(i * w, w)));
    return out;
}

} // namespace amdrelay
