#include "amdrelay/sss.hpp"

namespace amdrelay {

AccessStructure AccessStructure::additive(int n) {
    if (n < 1) throw std::invalid_argument("need at least one share");
    return AccessStructure{Kind::additive, n, n};
}

AccessStructure AccessStructure::threshold(int t, int n) {
    if (n < 1 || t < 1 || t > n) throw std::invalid_argument("threshold requires 1 <= t <= n");
    return AccessStructure{Kind::threshold, n, t};
}

std::string AccessStructure::describe() const {
    if (kind == Kind::additive) return "additive(" + std::to_string(n) + ")";
    return "shamir(" + std::to_string(t) + "-of-" + std::to_string(n) + ")";
}

int ShareVector::present_count() const {
    int c = 0;
    for (const auto& e : entries)
        if (e.has_value()) ++c;
    return c;
}

static void validate_secret(const FieldVec& secret) {
    if (secret.empty()) throw std::invalid_argument("secret must be non-empty");
    for (const auto& e : secret)
        if (&e.spec() != &secret[0].spec()) throw SpecMismatchError("secret elements from mixed fields");
}

static ShareVector share_additive(const AccessStructure& as, const FieldVec& secret, RandomSource& rng) {
    const FieldSpec& spec = secret[0].spec();
    ShareVector out;
    out.entries.reserve(as.n);
    FieldVec running = secret;
    for (int i = 0; i + 1 < as.n; ++i) {
        FieldVec si = random_vec(spec, secret.size(), rng);
        running = vec_sub(running, si);
        out.entries.push_back(std::move(si));
    }
    out.entries.push_back(std::move(running)); // secret - sum of the others
    return out;
}

static ShareVector share_threshold(const AccessStructure& as, const FieldVec& secret, RandomSource& rng) {
    const FieldSpec& spec = secret[0].spec();
    if (spec.order() != 0 && static_cast<u128>(as.n) >= spec.order())
        throw std::invalid_argument("threshold sharing needs n < field order");
    std::vector<FieldVec> values(as.n);
    for (auto& v : values) v.reserve(secret.size());
    // Independent polynomial per coordinate, evaluation points 1..n.
    for (const auto& coord : secret) {
        FieldVec coeffs; // a_0 = coord, a_1..a_{t-1} random
        coeffs.push_back(coord);
        for (int k = 1; k < as.t; ++k) coeffs.push_back(random_element(spec, rng));
        for (int i = 0; i < as.n; ++i) {
            FieldElement xi(spec, static_cast<u128>(i + 1));
            FieldElement acc = coeffs.back();
            for (size_t k = coeffs.size() - 1; k >= 1; --k) acc = acc * xi + coeffs[k - 1];
            values[i].push_back(acc);
        }
    }
    ShareVector out;
    for (auto& v : values) out.entries.push_back(std::move(v));
    return out;
}

ShareVector share(const AccessStructure& as, const FieldVec& secret, RandomSource& rng) {
    validate_secret(secret);
    if (as.kind == AccessStructure::Kind::additive) return share_additive(as, secret, rng);
    return share_threshold(as, secret, rng);
}

static void validate_shares(const AccessStructure& as, const ShareVector& shares) {
    if (static_cast<int>(shares.size()) != as.n)
        throw std::invalid_argument("share vector must have n entries");
    const FieldVec* first = nullptr;
    for (const auto& e : shares.entries) {
        if (!e.has_value()) continue;
        if (first == nullptr) {
            first = &*e;
        } else if (e->size() != first->size()) {
            throw std::invalid_argument("present shares have inconsistent lengths");
        }
    }
}

std::optional<FieldVec> recover(const AccessStructure& as, const ShareVector& shares) {
    validate_shares(as, shares);
    if (as.kind == AccessStructure::Kind::additive) {
        // bot absorbs: any missing share rejects.
        std::optional<FieldVec> acc;
        for (const auto& e : shares.entries) {
            if (!e.has_value()) return std::nullopt;
            acc = acc.has_value() ? vec_add(*acc, *e) : *e;
        }
        return acc;
    }
    // Threshold: lowest-index t present entries, Lagrange at zero.
    std::vector<int> idx;
    for (int i = 0; i < as.n && static_cast<int>(idx.size()) < as.t; ++i)
        if (shares.entries[i].has_value()) idx.push_back(i);
    if (static_cast<int>(idx.size()) < as.t) return std::nullopt;
    const FieldSpec& spec = shares.entries[idx[0]]->at(0).spec();
    size_t len = shares.entries[idx[0]]->size();
    FieldVec out = zero_vec(spec, len);
    for (int k : idx) {
        FieldElement xk(spec, static_cast<u128>(k + 1));
        FieldElement lambda = FieldElement::one(spec);
        for (int j : idx) {
            if (j == k) continue;
            FieldElement xj(spec, static_cast<u128>(j + 1));
            lambda *= xj * (xj - xk).inv();
        }
        for (size_t c = 0; c < len; ++c) out[c] += lambda * shares.entries[k]->at(c);
    }
    return out;
}

ShareVector share_star(const AccessStructure& as, const AmdParams& params, const FieldVec& secret,
                       RandomSource& rng) {
    if (secret.size() != params.d()) throw std::invalid_argument("secret length must equal d");
    AmdCodeword cw = amd_encode(params, secret, rng);
    return share(as, cw.flatten(), rng);
}

std::optional<FieldVec> recover_star(const AccessStructure& as, const AmdParams& params,
                                     const ShareVector& shares) {
    std::optional<FieldVec> flat = recover(as, shares);
    if (!flat.has_value()) return std::nullopt;
    return amd_decode(params, AmdCodeword::from_flat(params, *flat));
}

LinearScheme::LinearScheme(AccessStructure as, const FieldSpec& spec, size_t secret_len)
    : as_(as), spec_(&spec), len_(secret_len) {
    if (secret_len == 0) throw std::invalid_argument("secret length must be positive");
}

ShareVector LinearScheme::share(const FieldVec& secret, RandomSource& rng) const {
    if (secret.size() != len_) throw std::invalid_argument("secret has wrong length for scheme");
    return amdrelay::share(as_, secret, rng);
}

std::optional<FieldVec> LinearScheme::recover(const ShareVector& shares) const {
    return amdrelay::recover(as_, shares);
}

std::string LinearScheme::describe() const {
    return as_.describe() + " over " + spec_->name() + ", len " + std::to_string(len_);
}

RobustScheme::RobustScheme(AccessStructure as, AmdParams params) : as_(as), params_(params) {}

ShareVector RobustScheme::share(const FieldVec& secret, RandomSource& rng) const {
    return share_star(as_, params_, secret, rng);
}

std::optional<FieldVec> RobustScheme::recover(const ShareVector& shares) const {
    return recover_star(as_, params_, shares);
}

std::string RobustScheme::describe() const {
    return as_.describe() + " over " + params_.spec().name() + ", amd d=" + std::to_string(params_.d());
}

} // namespace amdrelay
