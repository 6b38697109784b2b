#include "amdrelay/games/adversaries.hpp"

#include <algorithm>

namespace amdrelay {

FieldVec make_delta(const FieldSpec& spec, size_t len, size_t coord, u128 value) {
    FieldVec v = zero_vec(spec, len);
    if (coord >= len) throw std::invalid_argument("delta coordinate out of range");
    v[coord] = FieldElement(spec, value);
    return v;
}

namespace {

FieldVec zero_secret(const Scheme& scheme) { return zero_vec(scheme.spec(), scheme.secret_len()); }

FieldVec unit_secret(const Scheme& scheme) {
    return make_delta(scheme.spec(), scheme.secret_len(), 0, 1);
}

int resolved_budget(const AdversaryConfig& cfg, int n) {
    int b = cfg.corrupt_budget < 0 ? n - 1 : cfg.corrupt_budget;
    return std::clamp(b, 0, n);
}

int resolved_edge(const AdversaryConfig& cfg, const RelayNetwork& net, int path) {
    return cfg.target_edge < 0 ? net.lengths[path] - 1 : cfg.target_edge;
}

// --- Ind-SSS strategies ----------------------------------------------------

// Ignores the shares entirely and flips a coin.
class RandomGuessSss final : public IndSssAdversary {
public:
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme&, const FieldVec&, const FieldVec&, SssCorruptOracle&, RandomSource& adv) override {
        return static_cast<int>(adv.next_u64() & 1);
    }
};

// Corrupts every share and recovers: always right, but qualified, so the
// gate zeroes it out.
class CorruptAllSss final : public IndSssAdversary {
public:
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme& scheme, const FieldVec& s0, const FieldVec&, SssCorruptOracle& oracle,
              RandomSource& adv) override {
        ShareVector shares;
        shares.entries.resize(scheme.n());
        for (int i = 0; i < scheme.n(); ++i) shares.entries[i] = oracle.corrupt(i);
        auto rec = scheme.recover(shares);
        if (rec.has_value()) return *rec == s0 ? 0 : 1;
        return static_cast<int>(adv.next_u64() & 1);
    }
};

// Corrupts the largest unqualified prefix; an unqualified view carries no
// information, so this stays at a coin flip.
class CorruptUnqualifiedSss final : public IndSssAdversary {
public:
    explicit CorruptUnqualifiedSss(AdversaryConfig cfg) : cfg_(cfg) {}
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme& scheme, const FieldVec&, const FieldVec&, SssCorruptOracle& oracle,
              RandomSource& adv) override {
        int budget = resolved_budget(cfg_, scheme.n());
        budget = std::min(budget, scheme.n() - 1);
        for (int i = 0; i < budget; ++i) oracle.corrupt(i);
        return static_cast<int>(adv.next_u64() & 1);
    }

private:
    AdversaryConfig cfg_;
};

// --- Shift-Robust strategies -----------------------------------------------

class ZeroShift final : public ShiftAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec&,
                                                       SssCorruptOracle&, RandomSource&) override {
        return std::vector<std::optional<FieldVec>>(scheme.n(),
                                                    zero_vec(scheme.spec(), scheme.share_len()));
    }
};

// Fixed nonzero offset on one uncorrupted share.
class BlindShift final : public ShiftAdversary {
public:
    explicit BlindShift(AdversaryConfig cfg) : cfg_(cfg) {}
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec&,
                                                       SssCorruptOracle&, RandomSource&) override {
        std::vector<std::optional<FieldVec>> a(scheme.n(),
                                               zero_vec(scheme.spec(), scheme.share_len()));
        int target = std::clamp(cfg_.target_path, 0, scheme.n() - 1);
        a[target] = make_delta(scheme.spec(), scheme.share_len(), cfg_.delta_coord, cfg_.delta_value);
        return a;
    }

private:
    AdversaryConfig cfg_;
};

// Uniformly random offset on one share.
class RandomShift final : public ShiftAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec&,
                                                       SssCorruptOracle&, RandomSource& adv) override {
        std::vector<std::optional<FieldVec>> a(scheme.n(),
                                               zero_vec(scheme.spec(), scheme.share_len()));
        a[0] = random_vec(scheme.spec(), scheme.share_len(), adv);
        return a;
    }
};

// Corrupts an unqualified set and replays the learned shares shifted.
class CorruptShift final : public ShiftAdversary {
public:
    explicit CorruptShift(AdversaryConfig cfg) : cfg_(cfg) {}
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec&,
                                                       SssCorruptOracle& oracle, RandomSource&) override {
        std::vector<std::optional<FieldVec>> a(scheme.n(),
                                               zero_vec(scheme.spec(), scheme.share_len()));
        int budget = std::min(resolved_budget(cfg_, scheme.n()), scheme.n() - 1);
        FieldVec delta =
            make_delta(scheme.spec(), scheme.share_len(), cfg_.delta_coord, cfg_.delta_value);
        for (int i = 0; i < budget; ++i) a[i] = vec_add(oracle.corrupt(i), delta);
        return a;
    }

private:
    AdversaryConfig cfg_;
};

// Withholds one share; recovery must reject, never forge.
class DropShift final : public ShiftAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec&,
                                                       SssCorruptOracle&, RandomSource&) override {
        std::vector<std::optional<FieldVec>> a(scheme.n(),
                                               zero_vec(scheme.spec(), scheme.share_len()));
        a[0] = std::nullopt;
        return a;
    }
};

// --- Relay helpers ----------------------------------------------------------

// Drives every path through its full relay chain, optionally adding an
// offset to the ciphertext in transit on one edge. Returns the final
// deliveries (what the receiver would get).
std::vector<std::optional<FieldVec>> forward_all(const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 int tamper_path, int tamper_edge,
                                                 const FieldVec* tamper_delta) {
    std::vector<std::optional<FieldVec>> final_deliveries(net.n_paths);
    for (int i = 0; i < net.n_paths; ++i) {
        FieldVec in_flight = c0[i];
        for (int edge = 0; edge < net.lengths[i]; ++edge) {
            if (i == tamper_path && edge == tamper_edge && tamper_delta != nullptr)
                in_flight = vec_add(in_flight, *tamper_delta);
            if (edge + 1 < net.lengths[i]) {
                auto out = oracles.relay(i, edge + 1, in_flight);
                if (!out.has_value()) return final_deliveries; // unreachable when honest
                in_flight = *out;
            }
        }
        final_deliveries[i] = in_flight;
    }
    return final_deliveries;
}

// --- Ind-Relay strategies ----------------------------------------------------

class PassiveInd final : public IndRelayAdversary {
public:
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme&, const RelayNetwork&, const std::vector<FieldVec>&, const FieldVec&,
              const FieldVec&, RelayOracles&, RandomSource& adv) override {
        return static_cast<int>(adv.next_u64() & 1);
    }
};

// Relays honestly with a tampered edge, then guesses at random; exercises
// the oracle plumbing without any distinguishing power.
class BlindShiftInd final : public IndRelayAdversary {
public:
    explicit BlindShiftInd(AdversaryConfig cfg) : cfg_(cfg) {}
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme& scheme, const RelayNetwork& net, const std::vector<FieldVec>& c0,
              const FieldVec&, const FieldVec&, RelayOracles& oracles, RandomSource& adv) override {
        int path = std::clamp(cfg_.target_path, 0, net.n_paths - 1);
        FieldVec delta =
            make_delta(scheme.spec(), scheme.share_len(), cfg_.delta_coord, cfg_.delta_value);
        forward_all(net, c0, oracles, path, resolved_edge(cfg_, net, path), &delta);
        return static_cast<int>(adv.next_u64() & 1);
    }

private:
    AdversaryConfig cfg_;
};

// Stops forwarding one path entirely.
class DropPathInd final : public IndRelayAdversary {
public:
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme&, const RelayNetwork& net, const std::vector<FieldVec>& c0, const FieldVec&,
              const FieldVec&, RelayOracles& oracles, RandomSource& adv) override {
        for (int i = 1; i < net.n_paths; ++i) {
            FieldVec in_flight = c0[i];
            for (int node = 1; node < net.lengths[i]; ++node) {
                auto out = oracles.relay(i, node, in_flight);
                if (out.has_value()) in_flight = *out;
            }
        }
        return static_cast<int>(adv.next_u64() & 1);
    }
};

// Replays a relay query; the second call must yield bot.
class ReplayInd final : public IndRelayAdversary {
public:
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme&, const RelayNetwork& net, const std::vector<FieldVec>& c0, const FieldVec&,
              const FieldVec&, RelayOracles& oracles, RandomSource& adv) override {
        if (net.lengths[0] > 1) {
            oracles.relay(0, 1, c0[0]);
            oracles.relay(0, 1, c0[0]); // bot: once-only rule
            oracles.corrupt(0, 1);      // bot: keys deleted after relaying
        }
        return static_cast<int>(adv.next_u64() & 1);
    }
};

// Corrupts an unqualified set of paths, decrypts what it can, guesses.
class PartialCorruptInd final : public IndRelayAdversary {
public:
    explicit PartialCorruptInd(AdversaryConfig cfg) : cfg_(cfg) {}
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme&, const RelayNetwork& net, const std::vector<FieldVec>& c0, const FieldVec&,
              const FieldVec&, RelayOracles& oracles, RandomSource& adv) override {
        int budget = std::min(resolved_budget(cfg_, net.n_paths), net.n_paths - 1);
        for (int i = 0; i < budget; ++i) {
            if (net.lengths[i] < 2) continue;
            auto keys = oracles.corrupt(i, 1);
            if (keys.has_value()) {
                FieldVec share = vec_sub(c0[i], keys->first); // S_i, useless alone
                (void)share;
            }
        }
        return static_cast<int>(adv.next_u64() & 1);
    }

private:
    AdversaryConfig cfg_;
};

// Corrupts every path, decrypts all shares and recovers the secret. Wins
// the raw guess almost surely; the unqualified gate nullifies it.
class FullCorruptInd final : public IndRelayAdversary {
public:
    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
        return {zero_secret(s), unit_secret(s)};
    }
    int guess(const Scheme& scheme, const RelayNetwork& net, const std::vector<FieldVec>& c0,
              const FieldVec& s0, const FieldVec&, RelayOracles& oracles, RandomSource& adv) override {
        ShareVector shares;
        shares.entries.resize(net.n_paths);
        for (int i = 0; i < net.n_paths; ++i) {
            if (net.lengths[i] < 2) continue;
            auto keys = oracles.corrupt(i, 1);
            if (keys.has_value()) shares.entries[i] = vec_sub(c0[i], keys->first);
        }
        if (shares.present_count() == net.n_paths) {
            auto rec = scheme.recover(shares);
            if (rec.has_value()) return *rec == s0 ? 0 : 1;
        }
        return static_cast<int>(adv.next_u64() & 1);
    }
};

// --- Forge-Relay strategies --------------------------------------------------

class HonestForward final : public ForgeRelayAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme&, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        return forward_all(net, c0, oracles, -1, -1, nullptr);
    }
};

class BlindShiftForge final : public ForgeRelayAdversary {
public:
    explicit BlindShiftForge(AdversaryConfig cfg) : cfg_(cfg) {}
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme& scheme, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        int path = std::clamp(cfg_.target_path, 0, net.n_paths - 1);
        FieldVec delta =
            make_delta(scheme.spec(), scheme.share_len(), cfg_.delta_coord, cfg_.delta_value);
        return forward_all(net, c0, oracles, path, resolved_edge(cfg_, net, path), &delta);
    }

private:
    AdversaryConfig cfg_;
};

// Uniform random offset in transit on one edge.
class RandomTamperForge final : public ForgeRelayAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme& scheme, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource& adv) override {
        int path = static_cast<int>(adv.next_u64() % static_cast<uint64_t>(net.n_paths));
        int edge = static_cast<int>(adv.next_u64() % static_cast<uint64_t>(net.lengths[path]));
        FieldVec delta = random_vec(scheme.spec(), scheme.share_len(), adv);
        return forward_all(net, c0, oracles, path, edge, &delta);
    }
};

class DropPathForge final : public ForgeRelayAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme&, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        auto out = forward_all(net, c0, oracles, -1, -1, nullptr);
        out[0] = std::nullopt;
        return out;
    }
};

// Relays honestly but delivers the stale initial ciphertext on one path.
class ReplayForge final : public ForgeRelayAdversary {
public:
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme&, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        auto out = forward_all(net, c0, oracles, -1, -1, nullptr);
        out[0] = c0[0]; // stale: decrypts to a share masked by unrelated keys
        return out;
    }
};

// Tries to corrupt after the nodes already relayed (yields bot, T stays
// empty), then falls back to a blind shift on the final edge of path 0.
class LateCorruptForge final : public ForgeRelayAdversary {
public:
    explicit LateCorruptForge(AdversaryConfig cfg) : cfg_(cfg) {}
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme& scheme, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        auto out = forward_all(net, c0, oracles, -1, -1, nullptr);
        int budget = std::min(resolved_budget(cfg_, net.n_paths), net.n_paths - 1);
        for (int i = 0; i < budget; ++i)
            if (net.lengths[i] >= 2) oracles.corrupt(i, 1); // bot: keys deleted after relaying
        FieldVec delta =
            make_delta(scheme.spec(), scheme.share_len(), cfg_.delta_coord, cfg_.delta_value);
        if (out[0].has_value()) out[0] = vec_add(*out[0], delta);
        return out;
    }

private:
    AdversaryConfig cfg_;
};

// Corrupts nodes before relaying so the first-hop keys are known, then
// replaces the corrupted paths' shares with shifted copies end to end.
class CorruptSubstituteForge final : public ForgeRelayAdversary {
public:
    explicit CorruptSubstituteForge(AdversaryConfig cfg) : cfg_(cfg) {}
    FieldVec choose_secret(const Scheme& s, RandomSource&) override { return unit_secret(s); }
    std::vector<std::optional<FieldVec>> deliver(const Scheme& scheme, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        std::vector<std::optional<FieldVec>> out(net.n_paths);
        int budget = std::min(resolved_budget(cfg_, net.n_paths), net.n_paths - 1);
        FieldVec delta =
            make_delta(scheme.spec(), scheme.share_len(), cfg_.delta_coord, cfg_.delta_value);
        for (int i = 0; i < net.n_paths; ++i) {
            bool corrupt_this = i < budget && net.lengths[i] >= 2;
            if (!corrupt_this) {
                FieldVec in_flight = c0[i];
                for (int node = 1; node < net.lengths[i]; ++node) {
                    auto o = oracles.relay(i, node, in_flight);
                    if (o.has_value()) in_flight = *o;
                }
                out[i] = in_flight;
                continue;
            }
            // Corrupt every node on the path before any relaying: the
            // revealed keys chain from the sender's edge to the receiver's.
            std::vector<FieldVec> keys;
            keys.reserve(net.lengths[i]);
            for (int node = 1; node < net.lengths[i]; ++node) {
                auto k = oracles.corrupt(i, node);
                if (!k.has_value()) break;
                if (keys.empty()) keys.push_back(k->first);
                keys.push_back(k->second);
            }
            if (static_cast<int>(keys.size()) != net.lengths[i]) {
                out[i] = c0[i];
                continue;
            }
            FieldVec share = vec_sub(c0[i], keys.front());
            // Deliver share + delta under the receiver-side key directly.
            out[i] = vec_add(vec_add(share, delta), keys.back());
        }
        return out;
    }

private:
    AdversaryConfig cfg_;
};

template <typename Base, typename T>
AdversaryFactory<Base> factory_of() {
    return [] { return std::make_unique<T>(); };
}

template <typename Base, typename T>
AdversaryFactory<Base> factory_of(const AdversaryConfig& cfg) {
    return [cfg] { return std::make_unique<T>(cfg); };
}

[[noreturn]] void unknown(const std::string& game, const std::string& name,
                          const std::vector<std::string>& options) {
    std::string msg = "unknown " + game + " adversary '" + name + "'; options:";
    for (const auto& o : options) msg += " " + o;
    throw std::invalid_argument(msg);
}

} // namespace

std::vector<std::string> ind_sss_adversary_names() {
    return {"random-guess", "corrupt-all", "corrupt-unqualified"};
}

std::vector<std::string> shift_adversary_names() {
    return {"zero-shift", "blind-shift", "random-shift", "corrupt-shift", "drop-share"};
}

std::vector<std::string> ind_relay_adversary_names() {
    return {"passive", "blind-shift", "drop-path", "replay", "partial-corrupt", "full-corrupt"};
}

std::vector<std::string> forge_relay_adversary_names() {
    return {"honest-forward", "blind-shift", "random-tamper", "drop-path", "replay",
            "late-corrupt", "corrupt-substitute"};
}

AdversaryFactory<IndSssAdversary> make_ind_sss_adversary(const std::string& name,
                                                         const AdversaryConfig& cfg) {
    if (name == "random-guess") return factory_of<IndSssAdversary, RandomGuessSss>();
    if (name == "corrupt-all") return factory_of<IndSssAdversary, CorruptAllSss>();
    if (name == "corrupt-unqualified") return factory_of<IndSssAdversary, CorruptUnqualifiedSss>(cfg);
    unknown("ind-sss", name, ind_sss_adversary_names());
}

AdversaryFactory<ShiftAdversary> make_shift_adversary(const std::string& name,
                                                      const AdversaryConfig& cfg) {
    if (name == "zero-shift") return factory_of<ShiftAdversary, ZeroShift>();
    if (name == "blind-shift") return factory_of<ShiftAdversary, BlindShift>(cfg);
    if (name == "random-shift") return factory_of<ShiftAdversary, RandomShift>();
    if (name == "corrupt-shift") return factory_of<ShiftAdversary, CorruptShift>(cfg);
    if (name == "drop-share") return factory_of<ShiftAdversary, DropShift>();
    unknown("shift-robust", name, shift_adversary_names());
}

AdversaryFactory<IndRelayAdversary> make_ind_relay_adversary(const std::string& name,
                                                             const AdversaryConfig& cfg) {
    if (name == "passive") return factory_of<IndRelayAdversary, PassiveInd>();
    if (name == "blind-shift") return factory_of<IndRelayAdversary, BlindShiftInd>(cfg);
    if (name == "drop-path") return factory_of<IndRelayAdversary, DropPathInd>();
    if (name == "replay") return factory_of<IndRelayAdversary, ReplayInd>();
    if (name == "partial-corrupt") return factory_of<IndRelayAdversary, PartialCorruptInd>(cfg);
    if (name == "full-corrupt") return factory_of<IndRelayAdversary, FullCorruptInd>();
    unknown("ind-relay", name, ind_relay_adversary_names());
}

AdversaryFactory<ForgeRelayAdversary> make_forge_relay_adversary(const std::string& name,
                                                                 const AdversaryConfig& cfg) {
    if (name == "honest-forward") return factory_of<ForgeRelayAdversary, HonestForward>();
    if (name == "blind-shift") return factory_of<ForgeRelayAdversary, BlindShiftForge>(cfg);
    if (name == "random-tamper") return factory_of<ForgeRelayAdversary, RandomTamperForge>();
    if (name == "drop-path") return factory_of<ForgeRelayAdversary, DropPathForge>();
    if (name == "replay") return factory_of<ForgeRelayAdversary, ReplayForge>();
    if (name == "late-corrupt") return factory_of<ForgeRelayAdversary, LateCorruptForge>(cfg);
    if (name == "corrupt-substitute") return factory_of<ForgeRelayAdversary, CorruptSubstituteForge>(cfg);
    unknown("forge-relay", name, forge_relay_adversary_names());
}

} // namespace amdrelay
