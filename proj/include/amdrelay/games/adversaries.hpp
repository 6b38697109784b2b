#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amdrelay/relay.hpp"
#include "amdrelay/sss.hpp"

namespace amdrelay {

// Thrown by oracle guards when an adversary breaks the game protocol
// (out-of-range indices, malformed output). The trial aborts as a flagged
// loss; it is never silently repaired.
struct ProtocolViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Share-corruption oracle of the secret-sharing games: marks the index
// corrupted and reveals the share.
class SssCorruptOracle {
public:
    virtual ~SssCorruptOracle() = default;
    virtual FieldVec corrupt(int index) = 0;
};

// Relay and corruption oracles of the network games. Both return nullopt
// for the once-only / already-deleted cases; out-of-range arguments throw
// and abort the trial as a protocol violation.
class RelayOracles {
public:
    virtual ~RelayOracles() = default;
    virtual std::optional<FieldVec> relay(int path, int node, const FieldVec& delivered) = 0;
    virtual std::optional<std::pair<FieldVec, FieldVec>> corrupt(int path, int node) = 0;
};

// Adversary stage contracts. Instances are per-trial: the runner constructs
// a fresh adversary for every trial through a factory, so strategies may
// keep state between their stages.

class IndSssAdversary {
public:
    virtual ~IndSssAdversary() = default;
    virtual std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& scheme, RandomSource& adv) = 0;
    virtual int guess(const Scheme& scheme, const FieldVec& s0, const FieldVec& s1,
                      SssCorruptOracle& oracle, RandomSource& adv) = 0;
};

class ShiftAdversary {
public:
    virtual ~ShiftAdversary() = default;
    virtual FieldVec choose_secret(const Scheme& scheme, RandomSource& adv) = 0;
    // Entries may be absent (bot). Corrupted indices are replaced by the
    // entry, uncorrupted indices are shifted by it.
    virtual std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec& s,
                                                               SssCorruptOracle& oracle,
                                                               RandomSource& adv) = 0;
};

class IndRelayAdversary {
public:
    virtual ~IndRelayAdversary() = default;
    virtual std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& scheme, RandomSource& adv) = 0;
    virtual int guess(const Scheme& scheme, const RelayNetwork& net, const std::vector<FieldVec>& c0,
                      const FieldVec& s0, const FieldVec& s1, RelayOracles& oracles,
                      RandomSource& adv) = 0;
};

class ForgeRelayAdversary {
public:
    virtual ~ForgeRelayAdversary() = default;
    virtual FieldVec choose_secret(const Scheme& scheme, RandomSource& adv) = 0;
    // Final ciphertexts delivered to the receiver, one slot per path.
    virtual std::vector<std::optional<FieldVec>> deliver(const Scheme& scheme, const RelayNetwork& net,
                                                         const std::vector<FieldVec>& c0,
                                                         RelayOracles& oracles, RandomSource& adv) = 0;
};

template <typename A>
using AdversaryFactory = std::function<std::unique_ptr<A>()>;

// Tuning knobs for the built-in strategies; defaults match the common test
// topology (tamper path 0 on its last edge, corrupt n-1 paths).
struct AdversaryConfig {
    int target_path = 0;
    int target_edge = -1;   // -1: last edge of the target path
    int delta_coord = 0;
    u128 delta_value = 1;
    int corrupt_budget = -1; // -1: n-1 paths (largest unqualified set for additive)
};

// Built-in adversary library, keyed by game and name. Unknown names throw
// std::invalid_argument listing the options.
std::vector<std::string> ind_sss_adversary_names();
std::vector<std::string> shift_adversary_names();
std::vector<std::string> ind_relay_adversary_names();
std::vector<std::string> forge_relay_adversary_names();

AdversaryFactory<IndSssAdversary> make_ind_sss_adversary(const std::string& name,
                                                         const AdversaryConfig& cfg = {});
AdversaryFactory<ShiftAdversary> make_shift_adversary(const std::string& name,
                                                      const AdversaryConfig& cfg = {});
AdversaryFactory<IndRelayAdversary> make_ind_relay_adversary(const std::string& name,
                                                             const AdversaryConfig& cfg = {});
AdversaryFactory<ForgeRelayAdversary> make_forge_relay_adversary(const std::string& name,
                                                                 const AdversaryConfig& cfg = {});

// Unit vector with `value` at `coord`, zeros elsewhere.
FieldVec make_delta(const FieldSpec& spec, size_t len, size_t coord, u128 value);

} // namespace amdrelay
