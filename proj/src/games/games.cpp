#include "amdrelay/games/games.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

namespace amdrelay {

// ---------------------------------------------------------------------------
// Report and statistics.

void wilson_interval(uint64_t wins, uint64_t trials, double& lo, double& hi) {
    if (trials == 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    const double z = 1.96;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(wins) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
    // The score interval contains the observed rate; keep that exact under
    // floating point at the 0 and 1 boundaries.
    lo = std::min(lo, p);
    hi = std::max(hi, p);
}

double GameReport::sigma() const {
    if (trials == 0) return 0.0;
    double v = two_sided ? 0.25 : bound * (1.0 - bound);
    return std::sqrt(v / static_cast<double>(trials));
}

bool GameReport::exceeds_bound(double k_sigma) const {
    if (two_sided) return std::fabs(rate - 0.5) > (bound - 0.5) + k_sigma * sigma();
    return rate > bound + k_sigma * sigma();
}

std::string GameReport::human_line() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s/%s: rate %.6g \xe2\x88\x88 [%.6g,%.6g] vs bound %.6g%s", game.c_str(),
                  adversary.c_str(), rate, wilson_lo, wilson_hi, bound, bound_exact ? "" : " (conjectured)");
    return buf;
}

// ---------------------------------------------------------------------------
// Trial bodies.

namespace {

class TrackingSssOracle final : public SssCorruptOracle {
public:
    TrackingSssOracle(const ShareVector& shares) : shares_(&shares) {}
    FieldVec corrupt(int index) override {
        if (index < 0 || index >= static_cast<int>(shares_->size()))
            throw ProtocolViolation("corrupt index out of range");
        corrupted.insert(index);
        return *shares_->entries[index];
    }
    std::set<int> corrupted;

private:
    const ShareVector* shares_;
};

void validate_secret_choice(const Scheme& scheme, const FieldVec& s) {
    if (s.size() != scheme.secret_len()) throw ProtocolViolation("adversary secret has wrong length");
    for (const auto& e : s)
        if (&e.spec() != &scheme.spec()) throw ProtocolViolation("adversary secret from wrong field");
}

} // namespace

TrialOutcome ind_sss_trial(const Scheme& scheme, IndSssAdversary& adv, RandomSource& game_rand,
                           RandomSource& adv_rand, bool gate) {
    int b = static_cast<int>(game_rand.next_u64() & 1);
    try {
        auto [s0, s1] = adv.choose_secrets(scheme, adv_rand);
        validate_secret_choice(scheme, s0);
        validate_secret_choice(scheme, s1);
        ShareVector shares = scheme.share(b ? s1 : s0, game_rand);
        TrackingSssOracle oracle(shares);
        int guess = adv.guess(scheme, s0, s1, oracle, adv_rand);
        if (guess != 0 && guess != 1) throw ProtocolViolation("guess must be a bit");
        bool win = (guess == b) && (!gate || scheme.unqualified(oracle.corrupted));
        return {win, false};
    } catch (const ProtocolViolation&) {
        return {false, true};
    }
}

TrialOutcome shift_robust_trial(const Scheme& scheme, ShiftAdversary& adv, RandomSource& game_rand,
                                RandomSource& adv_rand, bool gate) {
    try {
        FieldVec s = adv.choose_secret(scheme, adv_rand);
        validate_secret_choice(scheme, s);
        ShareVector shares = scheme.share(s, game_rand);
        TrackingSssOracle oracle(shares);
        auto a = adv.choose_shifts(scheme, s, oracle, adv_rand);
        if (a.size() != static_cast<size_t>(scheme.n()))
            throw ProtocolViolation("shift vector must have n entries");
        ShareVector tampered;
        tampered.entries.resize(scheme.n());
        for (int i = 0; i < scheme.n(); ++i) {
            if (!a[i].has_value()) continue; // bot replaces or absorbs either way
            if (a[i]->size() != scheme.share_len())
                throw ProtocolViolation("shift entry has wrong length");
            if (oracle.corrupted.count(i) != 0)
                tampered.entries[i] = *a[i]; // corrupted share replaced
            else
                tampered.entries[i] = vec_add(*shares.entries[i], *a[i]); // uncorrupted share shifted
        }
        auto rec = scheme.recover(tampered);
        bool forged = rec.has_value() && *rec != s;
        bool win = forged && (!gate || scheme.unqualified(oracle.corrupted));
        return {win, false};
    } catch (const ProtocolViolation&) {
        return {false, true};
    }
}

namespace {

class SessionOracles final : public RelayOracles {
public:
    explicit SessionOracles(RelaySession& session) : session_(&session) {}
    std::optional<FieldVec> relay(int path, int node, const FieldVec& delivered) override {
        try {
            return session_->relay_hop(path, node, delivered);
        } catch (const std::out_of_range& e) {
            throw ProtocolViolation(e.what());
        } catch (const std::invalid_argument& e) {
            throw ProtocolViolation(e.what());
        }
    }
    std::optional<std::pair<FieldVec, FieldVec>> corrupt(int path, int node) override {
        try {
            return session_->corrupt(path, node);
        } catch (const std::out_of_range& e) {
            throw ProtocolViolation(e.what());
        }
    }

private:
    RelaySession* session_;
};

void validate_deliveries(const RelayNetwork& net, const std::vector<std::optional<FieldVec>>& c) {
    if (c.size() != static_cast<size_t>(net.n_paths))
        throw ProtocolViolation("delivery vector must have one slot per path");
    for (const auto& e : c)
        if (e.has_value() && e->size() != net.vec_len)
            throw ProtocolViolation("delivered ciphertext has wrong length");
}

} // namespace

TrialOutcome ind_relay_trial(const Scheme& scheme, const RelayNetwork& net, IndRelayAdversary& adv,
                             const Rng& trial_rng, bool gate) {
    Rng game_rand = trial_rng.derive(kStreamGame);
    Rng adv_rand = trial_rng.derive(kStreamAdversary);
    Rng keys_rand = trial_rng.derive(kStreamKeys);
    int b = static_cast<int>(game_rand.next_u64() & 1);
    try {
        auto [s0, s1] = adv.choose_secrets(scheme, adv_rand);
        validate_secret_choice(scheme, s0);
        validate_secret_choice(scheme, s1);
        ShareVector shares = scheme.share(b ? s1 : s0, game_rand);
        RelaySession session(net, keys_rand);
        std::vector<FieldVec> c0 = session.alice_send(shares);
        SessionOracles oracles(session);
        int guess = adv.guess(scheme, net, c0, s0, s1, oracles, adv_rand);
        if (guess != 0 && guess != 1) throw ProtocolViolation("guess must be a bit");
        bool win = (guess == b) && (!gate || scheme.unqualified(session.ledger().corrupted));
        return {win, false};
    } catch (const ProtocolViolation&) {
        return {false, true};
    }
}

TrialOutcome forge_relay_trial(const Scheme& scheme, const RelayNetwork& net, ForgeRelayAdversary& adv,
                               const Rng& trial_rng, bool gate) {
    Rng game_rand = trial_rng.derive(kStreamGame);
    Rng adv_rand = trial_rng.derive(kStreamAdversary);
    Rng keys_rand = trial_rng.derive(kStreamKeys);
    try {
        FieldVec s = adv.choose_secret(scheme, adv_rand);
        validate_secret_choice(scheme, s);
        ShareVector shares = scheme.share(s, game_rand);
        RelaySession session(net, keys_rand);
        std::vector<FieldVec> c0 = session.alice_send(shares);
        SessionOracles oracles(session);
        auto cfinal = adv.deliver(scheme, net, c0, oracles, adv_rand);
        validate_deliveries(net, cfinal);
        auto rec = session.bob_receive(cfinal, scheme);
        bool forged = rec.has_value() && *rec != s;
        bool win = forged && (!gate || scheme.unqualified(session.ledger().corrupted));
        return {win, false};
    } catch (const ProtocolViolation&) {
        return {false, true};
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo runners.

namespace {

struct Tally {
    uint64_t wins = 0;
    uint64_t flagged = 0;
};

Tally run_trials(uint64_t trials, int jobs, const std::function<TrialOutcome(uint64_t)>& trial_fn) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || trials < 2) {
        Tally t;
        for (uint64_t i = 0; i < trials; ++i) {
            TrialOutcome o = trial_fn(i);
            t.wins += o.win ? 1 : 0;
            t.flagged += o.flagged ? 1 : 0;
        }
        return t;
    }
    std::vector<Tally> parts(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            uint64_t lo = trials * w / jobs;
            uint64_t hi = trials * (w + 1) / jobs;
            for (uint64_t i = lo; i < hi; ++i) {
                TrialOutcome o = trial_fn(i);
                parts[w].wins += o.win ? 1 : 0;
                parts[w].flagged += o.flagged ? 1 : 0;
            }
        });
    }
    for (auto& t : workers) t.join();
    Tally total;
    for (const auto& p : parts) {
        total.wins += p.wins;
        total.flagged += p.flagged;
    }
    return total;
}

GameReport finish_report(std::string game, std::string adversary, const GameOptions& opts, Tally tally,
                         double bound, bool two_sided, bool bound_exact, std::string params) {
    GameReport r;
    r.game = std::move(game);
    r.adversary = std::move(adversary);
    r.trials = opts.trials;
    r.wins = tally.wins;
    r.flagged = tally.flagged;
    r.rate = opts.trials == 0 ? 0.0 : static_cast<double>(tally.wins) / static_cast<double>(opts.trials);
    wilson_interval(tally.wins, opts.trials, r.wilson_lo, r.wilson_hi);
    r.bound = bound;
    r.two_sided = two_sided;
    r.bound_exact = bound_exact;
    r.params = std::move(params);
    r.seed = opts.seed;
    return r;
}

std::string net_params(const Scheme& scheme, const RelayNetwork* net) {
    std::string p = scheme.describe();
    if (net != nullptr) {
        p += ", n=" + std::to_string(net->n_paths) + ", lengths=";
        for (size_t i = 0; i < net->lengths.size(); ++i)
            p += (i == 0 ? "" : ",") + std::to_string(net->lengths[i]);
        char eps[32];
        std::snprintf(eps, sizeof(eps), "%g", net->epsilon);
        p += std::string(", epsilon=") + eps;
    }
    return p;
}

} // namespace

double ind_sss_bound() { return 0.5; }

double shift_robust_bound(const Scheme& scheme, bool* exact) {
    if (const auto* robust = dynamic_cast<const RobustScheme*>(&scheme)) {
        DeltaBound b = delta_bound(robust->params());
        if (exact != nullptr) *exact = b.exact;
        return b.value;
    }
    // A plain linear scheme offers no shift protection.
    if (exact != nullptr) *exact = true;
    return 1.0;
}

double ind_relay_bound(const RelayNetwork& net) {
    return 0.5 + net.n_paths * net.max_length() * net.epsilon;
}

double forge_relay_bound(const Scheme& scheme, const RelayNetwork& net, bool* exact) {
    return std::min(1.0, shift_robust_bound(scheme, exact) +
                             net.n_paths * net.max_length() * net.epsilon);
}

GameReport run_ind_sss(const Scheme& scheme, const AdversaryFactory<IndSssAdversary>& factory,
                       const std::string& adversary_name, const GameOptions& opts) {
    Rng master(opts.seed);
    Rng trials_root = master.derive(kStreamTrial);
    Tally tally = run_trials(opts.trials, opts.jobs, [&](uint64_t i) {
        Rng trial = trials_root.derive(i);
        Rng game_rand = trial.derive(kStreamGame);
        Rng adv_rand = trial.derive(kStreamAdversary);
        auto adv = factory();
        return ind_sss_trial(scheme, *adv, game_rand, adv_rand, opts.enforce_unqualified_gate);
    });
    return finish_report("ind-sss", adversary_name, opts, tally, ind_sss_bound(), true, true,
                         net_params(scheme, nullptr));
}

GameReport run_shift_robust(const Scheme& scheme, const AdversaryFactory<ShiftAdversary>& factory,
                            const std::string& adversary_name, const GameOptions& opts) {
    Rng master(opts.seed);
    Rng trials_root = master.derive(kStreamTrial);
    Tally tally = run_trials(opts.trials, opts.jobs, [&](uint64_t i) {
        Rng trial = trials_root.derive(i);
        Rng game_rand = trial.derive(kStreamGame);
        Rng adv_rand = trial.derive(kStreamAdversary);
        auto adv = factory();
        return shift_robust_trial(scheme, *adv, game_rand, adv_rand, opts.enforce_unqualified_gate);
    });
    bool exact = true;
    double bound = shift_robust_bound(scheme, &exact);
    return finish_report("shift-robust", adversary_name, opts, tally, bound, false, exact,
                         net_params(scheme, nullptr));
}

GameReport run_ind_relay(const Scheme& scheme, const RelayNetwork& net,
                         const AdversaryFactory<IndRelayAdversary>& factory,
                         const std::string& adversary_name, const GameOptions& opts) {
    Rng master(opts.seed);
    Rng trials_root = master.derive(kStreamTrial);
    Tally tally = run_trials(opts.trials, opts.jobs, [&](uint64_t i) {
        Rng trial = trials_root.derive(i);
        auto adv = factory();
        return ind_relay_trial(scheme, net, *adv, trial, opts.enforce_unqualified_gate);
    });
    return finish_report("ind-relay", adversary_name, opts, tally, ind_relay_bound(net), true, true,
                         net_params(scheme, &net));
}

GameReport run_forge_relay(const Scheme& scheme, const RelayNetwork& net,
                           const AdversaryFactory<ForgeRelayAdversary>& factory,
                           const std::string& adversary_name, const GameOptions& opts) {
    Rng master(opts.seed);
    Rng trials_root = master.derive(kStreamTrial);
    Tally tally = run_trials(opts.trials, opts.jobs, [&](uint64_t i) {
        Rng trial = trials_root.derive(i);
        auto adv = factory();
        return forge_relay_trial(scheme, net, *adv, trial, opts.enforce_unqualified_gate);
    });
    bool exact = true;
    double bound = forge_relay_bound(scheme, net, &exact);
    return finish_report("forge-relay", adversary_name, opts, tally, bound, false, exact,
                         net_params(scheme, &net));
}

} // namespace amdrelay
