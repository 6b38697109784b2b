#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>

#include "amdrelay/amd.hpp"
#include "amdrelay/field.hpp"

namespace amdrelay {

// Which share subsets determine the secret: all n (additive) or any t
// (threshold / Shamir).
struct AccessStructure {
    enum class Kind { additive, threshold };

    Kind kind;
    int n;
    int t; // t == n for additive

    static AccessStructure additive(int n);
    static AccessStructure threshold(int t, int n);

    bool qualified_count(int present) const { return present >= t; }
    bool unqualified(const std::set<int>& subset) const { return static_cast<int>(subset.size()) < t; }
    std::string describe() const;
};

// n share slots, each a vector of field elements or absent (bot). Absent
// entries absorb under recovery: any missing share makes an additive
// recovery reject.
struct ShareVector {
    std::vector<std::optional<FieldVec>> entries;

    size_t size() const { return entries.size(); }
    int present_count() const;
};

// Split `secret` (element-wise, independently per coordinate). Additive:
// n-1 uniform shares, last = secret - sum. Threshold: independent random
// degree-(t-1) polynomials per coordinate, evaluated at points 1..n, with
// the secret as constant term.
ShareVector share(const AccessStructure& as, const FieldVec& secret, RandomSource& rng);

// Sum of shares (additive) or Lagrange interpolation at zero from the
// lowest-index t present entries (threshold). Returns nullopt when the
// present entries are unqualified.
std::optional<FieldVec> recover(const AccessStructure& as, const ShareVector& shares);

// Robust composition: share the manipulation-detection codeword.
ShareVector share_star(const AccessStructure& as, const AmdParams& params, const FieldVec& secret,
                       RandomSource& rng);
std::optional<FieldVec> recover_star(const AccessStructure& as, const AmdParams& params,
                                     const ShareVector& shares);

// Uniform interface the security games run against: either a plain linear
// scheme or the robust (encode-then-share) composition.
class Scheme {
public:
    virtual ~Scheme() = default;
    virtual int n() const = 0;
    virtual size_t secret_len() const = 0;
    virtual size_t share_len() const = 0;
    virtual const FieldSpec& spec() const = 0;
    virtual ShareVector share(const FieldVec& secret, RandomSource& rng) const = 0;
    virtual std::optional<FieldVec> recover(const ShareVector& shares) const = 0;
    virtual bool unqualified(const std::set<int>& subset) const = 0;
    virtual std::string describe() const = 0;
};

class LinearScheme final : public Scheme {
public:
    LinearScheme(AccessStructure as, const FieldSpec& spec, size_t secret_len);

    int n() const override { return as_.n; }
    size_t secret_len() const override { return len_; }
    size_t share_len() const override { return len_; }
    const FieldSpec& spec() const override { return *spec_; }
    ShareVector share(const FieldVec& secret, RandomSource& rng) const override;
    std::optional<FieldVec> recover(const ShareVector& shares) const override;
    bool unqualified(const std::set<int>& subset) const override { return as_.unqualified(subset); }
    std::string describe() const override;
    const AccessStructure& structure() const { return as_; }

private:
    AccessStructure as_;
    const FieldSpec* spec_;
    size_t len_;
};

class RobustScheme final : public Scheme {
public:
    RobustScheme(AccessStructure as, AmdParams params);

    int n() const override { return as_.n; }
    size_t secret_len() const override { return params_.d(); }
    size_t share_len() const override { return params_.codeword_len(); }
    const FieldSpec& spec() const override { return params_.spec(); }
    ShareVector share(const FieldVec& secret, RandomSource& rng) const override;
    std::optional<FieldVec> recover(const ShareVector& shares) const override;
    bool unqualified(const std::set<int>& subset) const override { return as_.unqualified(subset); }
    std::string describe() const override;
    const AccessStructure& structure() const { return as_; }
    const AmdParams& params() const { return params_; }

private:
    AccessStructure as_;
    AmdParams params_;
};

} // namespace amdrelay
