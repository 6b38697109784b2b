#include <doctest.h>

#include <cmath>
#include <map>

#include "amdrelay/games/reduction.hpp"
#include "tape.hpp"

using namespace amdrelay;

namespace {

RobustScheme gf8_scheme(int n = 3) {
    return RobustScheme(AccessStructure::additive(n), AmdParams(FieldSpec::gf2m(3), 1));
}

RelayNetwork net_for(const Scheme& s, std::vector<int> lengths) {
    return RelayNetwork(s.n(), std::move(lengths), s.spec(), s.share_len());
}

// Delivers the final ciphertext of path 0 without relaying its middle hop;
// other paths are forwarded honestly. Exercises the not-fully-relayed
// branch of the reduction.
struct SkipHop final : ForgeRelayAdversary {
    FieldVec choose_secret(const Scheme& s, RandomSource&) override {
        return zero_vec(s.spec(), s.secret_len());
    }
    std::vector<std::optional<FieldVec>> deliver(const Scheme&, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource&) override {
        std::vector<std::optional<FieldVec>> out(net.n_paths);
        out[0] = c0[0]; // delivered to the receiver without the middle relays
        for (int i = 1; i < net.n_paths; ++i) {
            FieldVec cur = c0[i];
            for (int node = 1; node < net.lengths[i]; ++node) cur = *oracles.relay(i, node, cur);
            out[i] = cur;
        }
        return out;
    }
};

// Corrupts path 0 at node 1 and path 1 at node 2, then relays everything
// honestly; checks key handling across mixed corruption times.
struct CorruptThenForward final : ForgeRelayAdversary {
    FieldVec choose_secret(const Scheme& s, RandomSource&) override {
        return zero_vec(s.spec(), s.secret_len());
    }
    std::vector<std::optional<FieldVec>> deliver(const Scheme&, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource& adv) override {
        oracles.corrupt(0, 1);
        std::vector<std::optional<FieldVec>> out(net.n_paths);
        for (int i = 0; i < net.n_paths; ++i) {
            FieldVec cur = c0[i];
            for (int node = 1; node < net.lengths[i]; ++node) {
                if (i == 1 && node == 2) oracles.corrupt(1, 2); // mid-chain corruption
                cur = *oracles.relay(i, node, cur);
            }
            // Tamper the final delivery on the corrupted path.
            if (i == 0) cur = vec_add(cur, random_vec(cur[0].spec(), cur.size(), adv));
            out[i] = cur;
        }
        return out;
    }
};

// Relays out of order (last node first) with tampered inputs.
struct OutOfOrder final : ForgeRelayAdversary {
    FieldVec choose_secret(const Scheme& s, RandomSource&) override {
        return zero_vec(s.spec(), s.secret_len());
    }
    std::vector<std::optional<FieldVec>> deliver(const Scheme& sch, const RelayNetwork& net,
                                                 const std::vector<FieldVec>& c0, RelayOracles& oracles,
                                                 RandomSource& adv) override {
        std::vector<std::optional<FieldVec>> out(net.n_paths);
        for (int i = 0; i < net.n_paths; ++i) {
            std::vector<int> order;
            for (int node = 1; node < net.lengths[i]; ++node) order.push_back(node);
            std::reverse(order.begin(), order.end());
            FieldVec last = c0[i];
            for (int node : order) {
                FieldVec garbage = random_vec(sch.spec(), sch.share_len(), adv);
                auto o = oracles.relay(i, node, garbage);
                if (o.has_value()) last = *o;
            }
            out[i] = last;
        }
        return out;
    }
};

} // namespace

TEST_CASE("coupled forge executions agree trial by trial (built-in suite)") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    for (const std::string& name : forge_relay_adversary_names()) {
        GameOptions opts{300, 21, 1, true};
        CoupledReport rep = run_coupled_forge(scheme, net, make_forge_relay_adversary(name), opts);
        CAPTURE(name);
        CHECK(rep.mismatches == 0);
    }
}

TEST_CASE("coupled forge agreement on longer and uneven paths") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {1, 3, 4});
    for (const std::string& name : {std::string("blind-shift"), std::string("random-tamper"),
                                    std::string("corrupt-substitute"), std::string("replay")}) {
        GameOptions opts{300, 22, 1, true};
        CoupledReport rep = run_coupled_forge(scheme, net, make_forge_relay_adversary(name), opts);
        CAPTURE(name);
        CHECK(rep.mismatches == 0);
    }
}

TEST_CASE("coupled forge agreement for custom oracle-driving adversaries") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {3, 3, 3});
    GameOptions opts{400, 23, 1, true};
    CHECK(run_coupled_forge(scheme, net, [] { return std::make_unique<SkipHop>(); }, opts).mismatches ==
          0);
    CHECK(run_coupled_forge(scheme, net, [] { return std::make_unique<CorruptThenForward>(); }, opts)
              .mismatches == 0);
    CHECK(run_coupled_forge(scheme, net, [] { return std::make_unique<OutOfOrder>(); }, opts)
              .mismatches == 0);
}

TEST_CASE("coupled forge agreement under the shamir structure") {
    RobustScheme scheme(AccessStructure::threshold(2, 3), AmdParams(FieldSpec::prime(7), 1));
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    GameOptions opts{400, 24, 1, true};
    for (const std::string& name : {std::string("honest-forward"), std::string("blind-shift"),
                                    std::string("corrupt-substitute")}) {
        CoupledReport rep = run_coupled_forge(scheme, net, make_forge_relay_adversary(name), opts);
        CAPTURE(name);
        CHECK(rep.mismatches == 0);
    }
}

TEST_CASE("coupled ind executions agree trial by trial") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    for (const std::string& name : ind_relay_adversary_names()) {
        GameOptions opts{300, 25, 1, true};
        CoupledReport rep = run_coupled_ind(scheme, net, make_ind_relay_adversary(name), opts);
        CAPTURE(name);
        CHECK(rep.mismatches == 0);
    }
}

TEST_CASE("a passive adversary wraps to a passive adversary at one half") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    GameOptions opts{4000, 33, 1, true};
    CoupledReport rep = run_coupled_ind(scheme, net, make_ind_relay_adversary("passive"), opts);
    CHECK(rep.mismatches == 0);
    double sigma = std::sqrt(0.25 / static_cast<double>(opts.trials));
    CHECK(std::fabs(static_cast<double>(rep.direct_wins) / opts.trials - 0.5) <= 3 * sigma);
    CHECK(std::fabs(static_cast<double>(rep.reduced_wins) / opts.trials - 0.5) <= 3 * sigma);
}

TEST_CASE("fully relayed paths: the translated shift telescopes to S' - S") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    Rng master(26);
    Rng trials = master.derive(kStreamTrial);
    for (uint64_t t = 0; t < 200; ++t) {
        LazyTrialTranscript direct;
        std::vector<ReductionPathRecord> reduction;
        CoupledOutcome o = coupled_forge_trial(scheme, net, make_forge_relay_adversary("blind-shift"),
                                               trials.derive(t), true, &direct, &reduction);
        CHECK(o.agree());
        REQUIRE(reduction.size() == 3);
        for (int i = 0; i < 3; ++i) {
            REQUIRE(reduction[i].kind == ReductionPathRecord::Kind::fully_relayed);
            // a_i == S'_i - S_i, the telescoped end-to-end difference.
            FieldVec diff = vec_sub(*direct.decrypted.entries[i], *direct.shares.entries[i]);
            CHECK(*reduction[i].shift == diff);
        }
    }
}

TEST_CASE("skipped hops classify as not-fully-relayed with uniform shifts") {
    // gf2 share vectors have 8 possible values; the substituted shift must
    // look uniform across trials.
    RobustScheme scheme(AccessStructure::additive(2), AmdParams(FieldSpec::prime(2), 1));
    RelayNetwork net = net_for(scheme, {3, 3});
    Rng master(27);
    Rng trials = master.derive(kStreamTrial);
    std::map<unsigned, int> hist;
    const int N = 4000;
    for (int t = 0; t < N; ++t) {
        LazyTrialTranscript direct;
        std::vector<ReductionPathRecord> reduction;
        CoupledOutcome o = coupled_forge_trial(scheme, net, [] { return std::make_unique<SkipHop>(); },
                                               trials.derive(t), true, &direct, &reduction);
        CHECK(o.agree());
        REQUIRE(reduction[0].kind == ReductionPathRecord::Kind::not_fully_relayed);
        REQUIRE(reduction[1].kind == ReductionPathRecord::Kind::fully_relayed);
        unsigned key = 0;
        for (const auto& e : *reduction[0].shift) key = (key << 1) | static_cast<unsigned>(e.value());
        ++hist[key];
    }
    // Chi-square over the 8 cells, alpha = 0.001 (df=7 critical 24.32).
    double expected = N / 8.0;
    double chi2 = 0;
    for (unsigned k = 0; k < 8; ++k) {
        double d = hist[k] - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 24.32);
}

TEST_CASE("confidentiality reduction derives keys consistent with the view") {
    // White-box: run the wrapped adversary against a hand-rolled corruption
    // oracle and check q_{i,0} = c_{i,0} - S_i for the corrupted path.
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    Rng trial = Rng(28).derive(kStreamTrial).derive(0);

    struct CorruptOne final : IndRelayAdversary {
        std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& s, RandomSource&) override {
            return {zero_vec(s.spec(), s.secret_len()),
                    FieldVec{FieldElement::one(s.spec())}};
        }
        int guess(const Scheme&, const RelayNetwork&, const std::vector<FieldVec>&, const FieldVec&,
                  const FieldVec&, RelayOracles& oracles, RandomSource&) override {
            auto keys = oracles.corrupt(1, 1);
            REQUIRE(keys.has_value());
            return 0;
        }
    };

    struct FixedShares final : SssCorruptOracle {
        ShareVector shares;
        FieldVec corrupt(int i) override { return *shares.entries[i]; }
    };

    Rng game_rand = trial.derive(kStreamGame);
    (void)game_rand.next_u64(); // challenge bit position
    Rng share_rand = trial.derive(kStreamGame);
    (void)share_rand.next_u64();
    FixedShares oracle;
    Rng adv_rand = trial.derive(kStreamAdversary);
    FieldVec secret = zero_vec(scheme.spec(), scheme.secret_len());
    oracle.shares = scheme.share(secret, share_rand);

    IndToSssReduction wrapped(std::make_unique<CorruptOne>(), net, trial);
    wrapped.choose_secrets(scheme, adv_rand);
    wrapped.guess(scheme, secret, FieldVec{FieldElement::one(scheme.spec())}, oracle, adv_rand);

    auto keys = wrapped.derived_keys();
    auto c0 = wrapped.simulated_initial_ciphertexts();
    REQUIRE(keys.count({1, 0}) == 1);
    CHECK(keys.at({1, 0}) == vec_sub(c0[1], *oracle.shares.entries[1]));
}

TEST_CASE("lazy and eager direct games estimate the same rates") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    const uint64_t N = 20000;
    for (const std::string& name : {std::string("blind-shift"), std::string("random-tamper"),
                                    std::string("corrupt-substitute")}) {
        auto factory = make_forge_relay_adversary(name);
        GameOptions opts{N, 29, 2, true};
        GameReport eager = run_forge_relay(scheme, net, factory, name, opts);

        Rng master(30);
        Rng trials = master.derive(kStreamTrial);
        uint64_t lazy_wins = 0;
        for (uint64_t t = 0; t < N; ++t) {
            auto adv = factory();
            lazy_wins += lazy_forge_relay_trial(scheme, net, *adv, trials.derive(t), true).win ? 1 : 0;
        }
        double pe = eager.rate;
        double pl = static_cast<double>(lazy_wins) / N;
        // Two-sample comparison at 4 sigma of the pooled estimate.
        double pool = (pe + pl) / 2;
        double sigma = std::sqrt(std::max(pool * (1 - pool), 1e-9) * 2.0 / N);
        CAPTURE(name);
        CHECK(std::fabs(pe - pl) <= 4 * sigma + 1e-9);
    }
}

TEST_CASE("lazy ind game matches the eager rate for the passive adversary") {
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    const uint64_t N = 20000;
    Rng master(31);
    Rng trials = master.derive(kStreamTrial);
    uint64_t wins = 0;
    auto factory = make_ind_relay_adversary("passive");
    for (uint64_t t = 0; t < N; ++t) {
        auto adv = factory();
        wins += lazy_ind_relay_trial(scheme, net, *adv, trials.derive(t), true).win ? 1 : 0;
    }
    double rate = static_cast<double>(wins) / N;
    CHECK(std::fabs(rate - 0.5) <= 3 * std::sqrt(0.25 / N));
}

TEST_CASE("misuse couples to a flagged loss on both sides") {
    struct Misuse final : ForgeRelayAdversary {
        FieldVec choose_secret(const Scheme& s, RandomSource&) override {
            return zero_vec(s.spec(), s.secret_len());
        }
        std::vector<std::optional<FieldVec>> deliver(const Scheme&, const RelayNetwork&,
                                                     const std::vector<FieldVec>& c0, RelayOracles& o,
                                                     RandomSource&) override {
            o.relay(0, 99, c0[0]);
            return {};
        }
    };
    RobustScheme scheme = gf8_scheme();
    RelayNetwork net = net_for(scheme, {2, 2, 2});
    CoupledOutcome o = coupled_forge_trial(scheme, net, [] { return std::make_unique<Misuse>(); },
                                           Rng(32).derive(kStreamTrial).derive(0), true);
    CHECK(o.direct.flagged);
    CHECK(o.reduced.flagged);
    CHECK(o.agree());
}
