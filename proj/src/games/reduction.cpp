#include "amdrelay/games/reduction.hpp"

namespace amdrelay {

FieldVec stream_vec(const Rng& root, uint64_t a, uint64_t b, const FieldSpec& spec, size_t len) {
    Rng r = root.derive(a).derive(b);
    return random_vec(spec, len, r);
}

namespace {

void check_deliveries(const RelayNetwork& net, const std::vector<std::optional<FieldVec>>& c) {
    if (c.size() != static_cast<size_t>(net.n_paths))
        throw ProtocolViolation("delivery vector must have one slot per path");
    for (const auto& e : c)
        if (e.has_value() && e->size() != net.vec_len)
            throw ProtocolViolation("delivered ciphertext has wrong length");
}

void check_secret(const Scheme& scheme, const FieldVec& s) {
    if (s.size() != scheme.secret_len()) throw ProtocolViolation("adversary secret has wrong length");
    for (const auto& e : s)
        if (&e.spec() != &scheme.spec()) throw ProtocolViolation("adversary secret from wrong field");
}

// Oracle simulation shared by the lazy direct games and both reductions:
// uncorrupted relays answer with fresh per-edge uniforms, corruption derives
// every key on the path consistently with what the adversary has seen and
// samples the rest fresh.
class SimState : public RelayOracles {
public:
    SimState(const RelayNetwork& net, const Rng& trial_rng, std::function<FieldVec(int)> reveal_share)
        : net_(net),
          net_root_(trial_rng.derive(kStreamNet)),
          key_root_(trial_rng.derive(kStreamLazyKey)),
          shift_root_(trial_rng.derive(kStreamShift)),
          reveal_share_(std::move(reveal_share)) {
        keys_.resize(net.n_paths);
        sent_.resize(net.n_paths);
        delivered_.resize(net.n_paths);
        for (int i = 0; i < net.n_paths; ++i) {
            keys_[i].resize(net.lengths[i]);
            sent_[i].resize(net.lengths[i]);
            delivered_[i].resize(net.lengths[i]);
            c0_.push_back(stream_vec(net_root_, i, 0, *net.spec, net.vec_len));
            sent_[i][0] = c0_[i];
        }
    }

    const std::vector<FieldVec>& initial_ciphertexts() const { return c0_; }
    const std::set<int>& corrupted() const { return T_; }

    std::optional<FieldVec> relay(int path, int node, const FieldVec& c) override {
        check_indices(path, node);
        if (c.size() != net_.vec_len) throw ProtocolViolation("ciphertext length mismatch");
        if (relayed_.count({path, node}) != 0) return std::nullopt; // once only
        relayed_.insert({path, node});
        delivered_[path][node - 1] = c;
        FieldVec out = T_.count(path) != 0
                           // Re-encrypt with the keys derived at corruption.
                           ? vec_add(vec_sub(c, *keys_[path][node - 1]), *keys_[path][node])
                           // Fresh uniform ciphertext on uncorrupted paths.
                           : stream_vec(net_root_, path, node, *net_.spec, net_.vec_len);
        sent_[path][node] = out;
        return out;
    }

    std::optional<std::pair<FieldVec, FieldVec>> corrupt(int path, int node) override {
        check_indices(path, node);
        if (relayed_.count({path, node}) != 0) return std::nullopt; // keys deleted after relaying
        materialize_keys(path);
        return std::make_pair(*keys_[path][node - 1], *keys_[path][node]);
    }

    // Receiver-side value of path i given its final delivered ciphertext,
    // expressed relative to the real share: returns (kind, value) where the
    // value is the decrypted share for corrupted paths and the shift
    // S'_i - S_i for uncorrupted ones.
    struct PathFinal {
        ReductionPathRecord::Kind kind;
        std::optional<FieldVec> value;
    };

    PathFinal finalize_path(int path, const std::optional<FieldVec>& cfinal) {
        int len = net_.lengths[path];
        if (!cfinal.has_value()) return {ReductionPathRecord::Kind::missing, std::nullopt};
        if (T_.count(path) != 0)
            return {ReductionPathRecord::Kind::corrupted, vec_sub(*cfinal, *keys_[path][len - 1])};
        for (int edge = 0; edge + 1 < len; ++edge)
            if (!delivered_[path][edge].has_value()) {
                // Not fully relayed: the receiver decrypts with a key the
                // adversary never touched, a fresh uniform shift.
                Rng r = shift_root_.derive(path);
                return {ReductionPathRecord::Kind::not_fully_relayed,
                        random_vec(*net_.spec, net_.vec_len, r)};
            }
        // Fully relayed: telescoping sum of per-hop differences.
        FieldVec a = vec_sub(*cfinal, *sent_[path][len - 1]);
        for (int edge = 0; edge + 1 < len; ++edge)
            a = vec_add(a, vec_sub(*delivered_[path][edge], *sent_[path][edge]));
        return {ReductionPathRecord::Kind::fully_relayed, a};
    }

    std::map<std::pair<int, int>, FieldVec> key_snapshot() const {
        std::map<std::pair<int, int>, FieldVec> out;
        for (int i = 0; i < net_.n_paths; ++i)
            for (int j = 0; j < net_.lengths[i]; ++j)
                if (keys_[i][j].has_value()) out[{i, j}] = *keys_[i][j];
        return out;
    }

private:
    void check_indices(int path, int node) const {
        if (path < 0 || path >= net_.n_paths) throw ProtocolViolation("path index out of range");
        if (node < 1 || node >= net_.lengths[path]) throw ProtocolViolation("node index out of range");
    }

    void materialize_keys(int path) {
        if (T_.count(path) != 0) return;
        T_.insert(path);
        FieldVec share = reveal_share_(path);
        keys_[path][0] = vec_sub(c0_[path], share); // consistent with the first ciphertext
        for (int k = 1; k < net_.lengths[path]; ++k) {
            if (relayed_.count({path, k}) != 0)
                // Consistent with the relayed ciphertext the adversary saw.
                keys_[path][k] =
                    vec_add(vec_sub(*sent_[path][k], *delivered_[path][k - 1]), *keys_[path][k - 1]);
            else
                keys_[path][k] = stream_vec(key_root_, path, k, *net_.spec, net_.vec_len);
        }
    }

    RelayNetwork net_;
    Rng net_root_, key_root_, shift_root_;
    std::function<FieldVec(int)> reveal_share_;
    std::vector<std::vector<std::optional<FieldVec>>> keys_, sent_, delivered_;
    std::vector<FieldVec> c0_;
    std::set<std::pair<int, int>> relayed_;
    std::set<int> T_;
};

void check_network(const Scheme& scheme, const RelayNetwork& net) {
    if (net.n_paths != scheme.n() || net.vec_len != scheme.share_len() || net.spec != &scheme.spec())
        throw std::invalid_argument("scheme does not match network geometry");
}

} // namespace

// ---------------------------------------------------------------------------
// Lazy direct games.

TrialOutcome lazy_forge_relay_trial(const Scheme& scheme, const RelayNetwork& net,
                                    ForgeRelayAdversary& adv, const Rng& trial_rng, bool gate,
                                    LazyTrialTranscript* transcript) {
    check_network(scheme, net);
    Rng game_rand = trial_rng.derive(kStreamGame);
    Rng adv_rand = trial_rng.derive(kStreamAdversary);
    try {
        FieldVec s = adv.choose_secret(scheme, adv_rand);
        check_secret(scheme, s);
        ShareVector shares = scheme.share(s, game_rand);
        SimState state(net, trial_rng, [&](int i) { return *shares.entries[i]; });
        auto cfinal = adv.deliver(scheme, net, state.initial_ciphertexts(), state, adv_rand);
        check_deliveries(net, cfinal);
        ShareVector decrypted;
        decrypted.entries.resize(net.n_paths);
        for (int i = 0; i < net.n_paths; ++i) {
            auto fin = state.finalize_path(i, cfinal[i]);
            if (!fin.value.has_value()) continue;
            decrypted.entries[i] = fin.kind == ReductionPathRecord::Kind::corrupted
                                       ? *fin.value
                                       : vec_add(*shares.entries[i], *fin.value);
        }
        auto rec = scheme.recover(decrypted);
        bool win = rec.has_value() && *rec != s &&
                   (!gate || scheme.unqualified(state.corrupted()));
        if (transcript != nullptr) {
            transcript->shares = shares;
            transcript->decrypted = decrypted;
            transcript->initial_ciphertexts = state.initial_ciphertexts();
            transcript->corrupted = state.corrupted();
        }
        return {win, false};
    } catch (const ProtocolViolation&) {
        return {false, true};
    }
}

TrialOutcome lazy_ind_relay_trial(const Scheme& scheme, const RelayNetwork& net, IndRelayAdversary& adv,
                                  const Rng& trial_rng, bool gate, LazyTrialTranscript* transcript) {
    check_network(scheme, net);
    Rng game_rand = trial_rng.derive(kStreamGame);
    Rng adv_rand = trial_rng.derive(kStreamAdversary);
    int b = static_cast<int>(game_rand.next_u64() & 1);
    try {
        auto [s0, s1] = adv.choose_secrets(scheme, adv_rand);
        check_secret(scheme, s0);
        check_secret(scheme, s1);
        ShareVector shares = scheme.share(b ? s1 : s0, game_rand);
        SimState state(net, trial_rng, [&](int i) { return *shares.entries[i]; });
        int guess = adv.guess(scheme, net, state.initial_ciphertexts(), s0, s1, state, adv_rand);
        if (guess != 0 && guess != 1) throw ProtocolViolation("guess must be a bit");
        bool win = (guess == b) && (!gate || scheme.unqualified(state.corrupted()));
        if (transcript != nullptr) {
            transcript->shares = shares;
            transcript->initial_ciphertexts = state.initial_ciphertexts();
            transcript->corrupted = state.corrupted();
        }
        return {win, false};
    } catch (const ProtocolViolation&) {
        return {false, true};
    }
}

// ---------------------------------------------------------------------------
// Reductions.

struct ForgeToShiftReduction::Impl {
    RelayNetwork net;
    Rng trial_rng;
    std::unique_ptr<SimState> state;
    std::vector<FieldVec> c0;
    Impl(const RelayNetwork& n, const Rng& r) : net(n), trial_rng(r) {}
};

ForgeToShiftReduction::ForgeToShiftReduction(std::unique_ptr<ForgeRelayAdversary> inner,
                                             const RelayNetwork& net, const Rng& trial_rng)
    : inner_(std::move(inner)), impl_(std::make_unique<Impl>(net, trial_rng)) {}

ForgeToShiftReduction::~ForgeToShiftReduction() = default;

FieldVec ForgeToShiftReduction::choose_secret(const Scheme& scheme, RandomSource& adv) {
    return inner_->choose_secret(scheme, adv);
}

std::vector<std::optional<FieldVec>> ForgeToShiftReduction::choose_shifts(const Scheme& scheme,
                                                                          const FieldVec&,
                                                                          SssCorruptOracle& oracle,
                                                                          RandomSource& adv) {
    check_network(scheme, impl_->net);
    impl_->state = std::make_unique<SimState>(impl_->net, impl_->trial_rng,
                                              [&oracle](int i) { return oracle.corrupt(i); });
    auto cfinal = inner_->deliver(scheme, impl_->net, impl_->state->initial_ciphertexts(),
                                  *impl_->state, adv);
    check_deliveries(impl_->net, cfinal);
    std::vector<std::optional<FieldVec>> a(impl_->net.n_paths);
    records_.clear();
    for (int i = 0; i < impl_->net.n_paths; ++i) {
        auto fin = impl_->state->finalize_path(i, cfinal[i]);
        a[i] = fin.value;
        records_.push_back(ReductionPathRecord{fin.kind, fin.value});
    }
    return a;
}

std::map<std::pair<int, int>, FieldVec> ForgeToShiftReduction::derived_keys() const {
    if (!impl_->state) return {};
    return impl_->state->key_snapshot();
}

std::vector<FieldVec> ForgeToShiftReduction::simulated_initial_ciphertexts() const {
    if (!impl_->state) return {};
    return impl_->state->initial_ciphertexts();
}

struct IndToSssReduction::Impl {
    RelayNetwork net;
    Rng trial_rng;
    std::unique_ptr<SimState> state;
    Impl(const RelayNetwork& n, const Rng& r) : net(n), trial_rng(r) {}
};

IndToSssReduction::IndToSssReduction(std::unique_ptr<IndRelayAdversary> inner, const RelayNetwork& net,
                                     const Rng& trial_rng)
    : inner_(std::move(inner)), impl_(std::make_unique<Impl>(net, trial_rng)) {}

IndToSssReduction::~IndToSssReduction() = default;

std::pair<FieldVec, FieldVec> IndToSssReduction::choose_secrets(const Scheme& scheme,
                                                                RandomSource& adv) {
    return inner_->choose_secrets(scheme, adv);
}

int IndToSssReduction::guess(const Scheme& scheme, const FieldVec& s0, const FieldVec& s1,
                             SssCorruptOracle& oracle, RandomSource& adv) {
    check_network(scheme, impl_->net);
    impl_->state = std::make_unique<SimState>(impl_->net, impl_->trial_rng,
                                              [&oracle](int i) { return oracle.corrupt(i); });
    return inner_->guess(scheme, impl_->net, impl_->state->initial_ciphertexts(), s0, s1, *impl_->state,
                         adv);
}

std::map<std::pair<int, int>, FieldVec> IndToSssReduction::derived_keys() const {
    if (!impl_->state) return {};
    return impl_->state->key_snapshot();
}

std::vector<FieldVec> IndToSssReduction::simulated_initial_ciphertexts() const {
    if (!impl_->state) return {};
    return impl_->state->initial_ciphertexts();
}

std::unique_ptr<ShiftAdversary> reduce_forge_to_shift(std::unique_ptr<ForgeRelayAdversary> inner,
                                                      const RelayNetwork& net, const Rng& trial_rng) {
    return std::make_unique<ForgeToShiftReduction>(std::move(inner), net, trial_rng);
}

std::unique_ptr<IndSssAdversary> reduce_ind_to_sss(std::unique_ptr<IndRelayAdversary> inner,
                                                   const RelayNetwork& net, const Rng& trial_rng) {
    return std::make_unique<IndToSssReduction>(std::move(inner), net, trial_rng);
}

// ---------------------------------------------------------------------------
// Coupled runners.

CoupledOutcome coupled_forge_trial(const Scheme& scheme, const RelayNetwork& net,
                                   const AdversaryFactory<ForgeRelayAdversary>& factory,
                                   const Rng& trial_rng, bool gate,
                                   LazyTrialTranscript* direct_transcript,
                                   std::vector<ReductionPathRecord>* reduction_transcript) {
    CoupledOutcome out;
    {
        auto adv = factory();
        out.direct = lazy_forge_relay_trial(scheme, net, *adv, trial_rng, gate, direct_transcript);
    }
    {
        ForgeToShiftReduction wrapped(factory(), net, trial_rng);
        Rng game_rand = trial_rng.derive(kStreamGame);
        Rng adv_rand = trial_rng.derive(kStreamAdversary);
        out.reduced = shift_robust_trial(scheme, wrapped, game_rand, adv_rand, gate);
        if (reduction_transcript != nullptr) *reduction_transcript = wrapped.transcript();
    }
    return out;
}

CoupledOutcome coupled_ind_trial(const Scheme& scheme, const RelayNetwork& net,
                                 const AdversaryFactory<IndRelayAdversary>& factory,
                                 const Rng& trial_rng, bool gate) {
    CoupledOutcome out;
    {
        auto adv = factory();
        out.direct = lazy_ind_relay_trial(scheme, net, *adv, trial_rng, gate);
    }
    {
        IndToSssReduction wrapped(factory(), net, trial_rng);
        Rng game_rand = trial_rng.derive(kStreamGame);
        Rng adv_rand = trial_rng.derive(kStreamAdversary);
        out.reduced = ind_sss_trial(scheme, wrapped, game_rand, adv_rand, gate);
    }
    return out;
}

static CoupledReport run_coupled(uint64_t trials, uint64_t seed,
                                 const std::function<CoupledOutcome(const Rng&)>& one) {
    Rng master(seed);
    Rng trials_root = master.derive(kStreamTrial);
    CoupledReport rep;
    rep.trials = trials;
    for (uint64_t i = 0; i < trials; ++i) {
        CoupledOutcome o = one(trials_root.derive(i));
        rep.mismatches += o.agree() ? 0 : 1;
        rep.direct_wins += o.direct.win ? 1 : 0;
        rep.reduced_wins += o.reduced.win ? 1 : 0;
    }
    return rep;
}

CoupledReport run_coupled_forge(const Scheme& scheme, const RelayNetwork& net,
                                const AdversaryFactory<ForgeRelayAdversary>& factory,
                                const GameOptions& opts) {
    return run_coupled(opts.trials, opts.seed, [&](const Rng& trial) {
        return coupled_forge_trial(scheme, net, factory, trial, opts.enforce_unqualified_gate);
    });
}

CoupledReport run_coupled_ind(const Scheme& scheme, const RelayNetwork& net,
                              const AdversaryFactory<IndRelayAdversary>& factory,
                              const GameOptions& opts) {
    return run_coupled(opts.trials, opts.seed, [&](const Rng& trial) {
        return coupled_ind_trial(scheme, net, factory, trial, opts.enforce_unqualified_gate);
    });
}

} // namespace amdrelay
