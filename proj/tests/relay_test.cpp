#include <doctest.h>

#include <cmath>

#include <algorithm>

#include "amdrelay/relay.hpp"
#include "tape.hpp"

using namespace amdrelay;

namespace {

FieldElement fe(const FieldSpec& s, u128 v) { return FieldElement(s, v); }

ShareVector all_present(std::vector<FieldVec> vs) {
    ShareVector sv;
    for (auto& v : vs) sv.entries.push_back(std::move(v));
    return sv;
}

} // namespace

TEST_CASE("network setup draws one key vector per edge") {
    const FieldSpec& f = FieldSpec::gf2m(16);
    Rng rng(1);
    RelayNetwork net(3, {2, 2, 2}, f, 5);
    CHECK(net.total_edges() == 6);
    CHECK(net.max_length() == 2);
    RelaySession session(net, rng);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) CHECK(session.key_value(i, j).size() == 5);

    RelayNetwork tiny(1, {1}, f, 2);
    RelaySession degenerate(tiny, rng);
    CHECK(tiny.total_edges() == 1);

    RelayNetwork mixed(3, {1, 4, 2}, f, 1);
    CHECK(mixed.total_edges() == 7);
    CHECK(mixed.max_length() == 4);

    CHECK_THROWS_AS(RelayNetwork(2, {1}, f, 1), std::invalid_argument);
    CHECK_THROWS_AS(RelayNetwork(1, {0}, f, 1), std::invalid_argument);
}

TEST_CASE("sender encryption and key deletion") {
    const FieldSpec& f7 = FieldSpec::prime(7);
    Rng rng(2);
    RelayNetwork net(1, {1}, f7, 1);

    // Scripted key draw: q = 5, so the share (3) encrypts to 3+5 = 1.
    TapeSource tape({5});
    RelaySession session(net, tape);
    auto c = session.alice_send(all_present({FieldVec{fe(f7, 3)}}));
    CHECK(c[0] == FieldVec{fe(f7, 1)});

    CHECK_THROWS_AS(session.alice_send(all_present({FieldVec{fe(f7, 3)}})), DeletedKeyError);
}

TEST_CASE("xor involution in binary fields") {
    const FieldSpec& f = FieldSpec::gf2m(16);
    Rng rng(3);
    RelayNetwork net(2, {1, 1}, f, 3);
    RelaySession session(net, rng);
    FieldVec s0 = random_vec(f, 3, rng), s1 = random_vec(f, 3, rng);
    FieldVec q0 = session.key_value(0, 0);
    auto c = session.alice_send(all_present({s0, s1}));
    CHECK(vec_add(c[0], q0) == s0); // c xor q recovers the share
}

TEST_CASE("relay hop re-encrypts and honours the once-only rule") {
    const FieldSpec& f7 = FieldSpec::prime(7);
    RelayNetwork net(1, {2}, f7, 1);

    // Keys: q_{0,0} = 5, q_{0,1} = 2. Delivered 1 -> 1 - 5 + 2 = 5.
    TapeSource tape({5, 2});
    RelaySession session(net, tape);
    auto out = session.relay_hop(0, 1, FieldVec{fe(f7, 1)});
    REQUIRE(out.has_value());
    CHECK(*out == FieldVec{fe(f7, 5)});

    // Second relay of the same node is bot, not an error.
    auto again = session.relay_hop(0, 1, FieldVec{fe(f7, 1)});
    CHECK_FALSE(again.has_value());

    CHECK_THROWS_AS(session.relay_hop(0, 0, FieldVec{fe(f7, 1)}), std::out_of_range);
    CHECK_THROWS_AS(session.relay_hop(0, 2, FieldVec{fe(f7, 1)}), std::out_of_range);
}

TEST_CASE("honest end-to-end runs recover the secret") {
    Rng rng(4);
    for (const FieldSpec* spec : {&FieldSpec::prime(7), &FieldSpec::gf2m(16)}) {
        for (int n = 1; n <= 4; ++n) {
            for (int l = 1; l <= 4; ++l) {
                std::vector<int> lengths(n, l);
                lengths[0] = std::max(1, l - 1); // mixed lengths
                AmdParams params(*spec, 3);
                RobustScheme scheme(AccessStructure::additive(n), params);
                RelayNetwork net(n, lengths, *spec, scheme.share_len());
                RelaySession session(net, rng);
                FieldVec secret = random_vec(*spec, 3, rng);
                ShareVector shares = scheme.share(secret, rng);
                auto c = session.alice_send(shares);
                std::vector<std::optional<FieldVec>> delivered(n);
                for (int i = 0; i < n; ++i) {
                    FieldVec cur = c[i];
                    for (int node = 1; node < lengths[i]; ++node)
                        cur = *session.relay_hop(i, node, cur);
                    delivered[i] = cur;
                }
                auto rec = session.bob_receive(delivered, scheme);
                REQUIRE(rec.has_value());
                CHECK(*rec == secret);
            }
        }
    }
}

TEST_CASE("missing delivery rejects under the additive structure") {
    const FieldSpec& f = FieldSpec::gf2m(16);
    AmdParams params(f, 3);
    RobustScheme scheme(AccessStructure::additive(2), params);
    Rng rng(5);
    RelayNetwork net(2, {1, 1}, f, scheme.share_len());
    RelaySession session(net, rng);
    FieldVec secret = random_vec(f, 3, rng);
    auto c = session.alice_send(scheme.share(secret, rng));
    auto rec = session.bob_receive({c[0], std::nullopt}, scheme);
    CHECK_FALSE(rec.has_value());
}

TEST_CASE("tampering on the final edge is caught at the oracle rate") {
    const FieldSpec& f8 = FieldSpec::gf2m(3);
    AmdParams params(f8, 1);
    DeltaValue oracle = delta_oracle(params);
    RobustScheme scheme(AccessStructure::additive(2), params);
    Rng rng(6);
    const int trials = 20000;
    int forged = 0;
    for (int t = 0; t < trials; ++t) {
        RelayNetwork net(2, {2, 2}, f8, scheme.share_len());
        RelaySession session(net, rng);
        FieldVec secret = random_vec(f8, 1, rng);
        auto c = session.alice_send(scheme.share(secret, rng));
        FieldVec mid0 = *session.relay_hop(0, 1, c[0]);
        FieldVec mid1 = *session.relay_hop(1, 1, c[1]);
        FieldVec delta = random_vec(f8, 3, rng); // may be zero; harmless
        auto rec = session.bob_receive({vec_add(mid0, delta), mid1}, scheme);
        if (rec.has_value() && *rec != secret) ++forged;
    }
    double rate = static_cast<double>(forged) / trials;
    double sigma = std::sqrt(oracle.value() * (1 - oracle.value()) / trials);
    CHECK(rate <= oracle.value() + 3 * sigma);
}

TEST_CASE("corruption semantics follow the once-only ledger") {
    const FieldSpec& f = FieldSpec::gf2m(8);
    Rng rng(7);
    RelayNetwork net(2, {3, 3}, f, 2);
    RelaySession session(net, rng);

    // Before any relay: corruption of node 2 reveals its two keys without
    // deleting them, and marks the whole path corrupted.
    FieldVec q1 = session.key_value(0, 1), q2 = session.key_value(0, 2);
    auto keys = session.corrupt(0, 2);
    REQUIRE(keys.has_value());
    CHECK(keys->first == q1);
    CHECK(keys->second == q2);
    CHECK(session.ledger().corrupted.count(0) == 1);
    CHECK_NOTHROW(session.key_value(0, 1));

    // The corrupted node can still relay afterwards.
    ShareVector shares = all_present({random_vec(f, 2, rng), random_vec(f, 2, rng)});
    auto c = session.alice_send(shares);
    auto relayed = session.relay_hop(0, 2, c[0]);
    CHECK(relayed.has_value());

    // After relaying, the node's copies are gone: corruption yields bot.
    CHECK_FALSE(session.corrupt(0, 2).has_value());

    // Corrupting any node marks the path index, whichever node it is.
    auto other = session.corrupt(1, 1);
    REQUIRE(other.has_value());
    CHECK(session.ledger().corrupted.count(1) == 1);

    CHECK_THROWS_AS(session.corrupt(0, 0), std::out_of_range);
    CHECK_THROWS_AS(session.corrupt(0, 3), std::out_of_range);
}

TEST_CASE("telescoping identity under arbitrary per-hop tampering") {
    Rng rng(8);
    const FieldSpec& f = FieldSpec::gf2m(16);
    for (int l = 1; l <= 4; ++l) {
        for (int rep = 0; rep < 50; ++rep) {
            RelayNetwork net(1, {l}, f, 2);
            RelaySession session(net, rng);
            FieldVec share0 = random_vec(f, 2, rng);
            auto c = session.alice_send(all_present({share0}));
            FieldVec in_flight = c[0];
            std::vector<FieldVec> sent{c[0]}, delivered;
            for (int node = 1; node < l; ++node) {
                FieldVec tampered = vec_add(in_flight, random_vec(f, 2, rng));
                delivered.push_back(tampered);
                in_flight = *session.relay_hop(0, node, tampered);
                sent.push_back(in_flight);
            }
            FieldVec final_delivered = vec_add(in_flight, random_vec(f, 2, rng));
            delivered.push_back(final_delivered);
            ShareVector decrypted = session.bob_decrypt({final_delivered});
            REQUIRE(decrypted.entries[0].has_value());
            // S + sum(delivered - sent) over all edges = decrypted share.
            FieldVec acc = share0;
            for (int e = 0; e < l; ++e) acc = vec_add(acc, vec_sub(delivered[e], sent[e]));
            CHECK(acc == *decrypted.entries[0]);
        }
    }
}

TEST_CASE("key single-use over exhaustive small traces") {
    const FieldSpec& f = FieldSpec::prime(5);
    // All interleavings of relay/corrupt calls on a 3-edge path.
    struct Op {
        char kind; // 'r' relay, 'c' corrupt
        int node;
    };
    std::vector<Op> ops = {{'r', 1}, {'r', 2}, {'c', 1}, {'c', 2}};
    std::sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) {
        return std::tie(a.kind, a.node) < std::tie(b.kind, b.node);
    });
    do {
        Rng rng(9);
        RelayNetwork net(1, {3}, f, 1);
        RelaySession session(net, rng);
        auto c = session.alice_send(all_present({random_vec(f, 1, rng)}));
        std::set<int> relayed;
        for (const Op& op : ops) {
            if (op.kind == 'r') {
                auto out = session.relay_hop(0, op.node, c[0]);
                CHECK(out.has_value() == (relayed.count(op.node) == 0));
                relayed.insert(op.node);
            } else {
                auto keys = session.corrupt(0, op.node);
                // Corruption succeeds exactly while the node has not relayed.
                CHECK(keys.has_value() == (relayed.count(op.node) == 0));
            }
        }
        // The receiver's copy survives every interleaving.
        CHECK_NOTHROW(session.bob_decrypt({c[0]}));
    } while (std::next_permutation(
        ops.begin(), ops.end(),
        [](const Op& a, const Op& b) { return std::tie(a.kind, a.node) < std::tie(b.kind, b.node); }));
}

TEST_CASE("deletion is irreversible") {
    const FieldSpec& f = FieldSpec::prime(7);
    Rng rng(10);
    RelayNetwork net(1, {1}, f, 1);
    RelaySession session(net, rng);
    auto c = session.alice_send(all_present({random_vec(f, 1, rng)}));
    session.bob_decrypt({c[0]});
    // Both copies of the only key are gone now.
    CHECK(session.key_fully_deleted(0, 0));
    CHECK_THROWS_AS(session.key_value(0, 0), DeletedKeyError);
    CHECK_THROWS_AS(session.bob_decrypt({c[0]}), DeletedKeyError);
}

TEST_CASE("trace events record the protocol trace in order") {
    const FieldSpec& f = FieldSpec::gf2m(8);
    Rng rng(11);
    RelayNetwork net(1, {2}, f, 1);
    RelaySession session(net, rng);
    auto c = session.alice_send(all_present({random_vec(f, 1, rng)}));
    auto mid = session.relay_hop(0, 1, c[0]);
    session.bob_decrypt({*mid});
    const auto& events = session.ledger().events;
    REQUIRE(events.size() >= 4);
    for (size_t i = 0; i < events.size(); ++i) CHECK(events[i].ordinal == i);
    CHECK(events[0].event == "send");
    CHECK(events[0].ciphertext_hex.has_value());
}
