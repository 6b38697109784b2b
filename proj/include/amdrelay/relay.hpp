#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amdrelay/sss.hpp"

namespace amdrelay {

// Reading a key copy that its holder already deleted.
struct DeletedKeyError : std::logic_error {
    using std::logic_error::logic_error;
};

// Static multipath topology: n disjoint paths from the sender to the
// receiver, path i having lengths[i] edges. Nodes on a path are numbered
// 0 (sender) .. lengths[i] (receiver); edge j connects node j to node j+1.
// Every edge carries one pre-established key vector of vec_len elements.
//
// epsilon is the per-link privacy parameter; it never affects simulation,
// it only enters the analytic bounds printed in reports (n*l*epsilon for
// confidentiality, n*l*epsilon + delta for integrity).
struct RelayNetwork {
    int n_paths;
    std::vector<int> lengths;
    const FieldSpec* spec;
    size_t vec_len;
    double epsilon = 0.0;

    RelayNetwork(int n, std::vector<int> lens, const FieldSpec& field, size_t len, double eps = 0.0);
    int max_length() const;
    int total_edges() const;
};

struct TraceEvent {
    uint64_t ordinal;
    std::string event; // "send", "deliver", "relay_bot", "corrupt", "deliver_bot"
    int path;
    int index;                  // edge for send/deliver, node for relay_bot/corrupt
    std::optional<std::string> ciphertext_hex;
};

// Everything observable about one protocol trace: which nodes relayed (R),
// which paths are corrupted (T), and every sent/delivered ciphertext.
struct RelayLedger {
    std::set<std::pair<int, int>> relayed;              // (path, node)
    std::set<int> corrupted;                            // T
    std::map<std::pair<int, int>, FieldVec> sent;       // (path, edge) -> c
    std::map<std::pair<int, int>, FieldVec> delivered;  // (path, edge) -> c'
    std::vector<TraceEvent> events;
};

// One protocol run over a trusted-repeater network. Owns the key table and
// the ledger; a single trace is single-owner mutable state, distinct traces
// are independent.
//
// Key deletion follows the per-holder model: each edge key has a copy at
// both endpoints. A node's relay consumes both of its copies at once, so
// "already relayed" is tracked per node; the sender's and receiver's copies
// get their own tombstones. Corrupting a node that already relayed yields
// nothing (its copies are gone); any other read of a deleted copy is a hard
// error, distinct from the game-level bot outcome.
class RelaySession {
public:
    // network_setup: draws one uniform key vector per edge (path-major,
    // edge-minor), leaves the ledger empty.
    RelaySession(const RelayNetwork& net, RandomSource& rng);

    const RelayNetwork& network() const { return net_; }
    const RelayLedger& ledger() const { return ledger_; }

    // Sender: c_{i,0} = S_i + q_{i,0}; deletes the sender-side key copies.
    // All shares must be present.
    std::vector<FieldVec> alice_send(const ShareVector& shares);

    // Node `node` (1 <= node < length) re-encrypts a delivered ciphertext
    // from edge node-1 onto edge node, deleting both of its key copies.
    // Returns nullopt if this node already relayed (once-only rule).
    std::optional<FieldVec> relay_hop(int path, int node, const FieldVec& delivered);

    // Corruption of node `node` on `path`: marks the whole path corrupted
    // and reveals the node's two keys, unless the node already relayed
    // (then its keys are deleted and the result is nullopt).
    std::optional<std::pair<FieldVec, FieldVec>> corrupt(int path, int node);

    // Receiver-side decryption: S'_i = c'_i - q_{i,last}, absent deliveries
    // map to absent shares. Deletes the receiver-side key copies.
    ShareVector bob_decrypt(const std::vector<std::optional<FieldVec>>& delivered);

    // bob_decrypt followed by the scheme's recovery.
    std::optional<FieldVec> bob_receive(const std::vector<std::optional<FieldVec>>& delivered,
                                        const Scheme& scheme);

    // Key value for tests and bound computations; throws DeletedKeyError
    // once both holder copies are gone.
    const FieldVec& key_value(int path, int edge) const;
    bool key_fully_deleted(int path, int edge) const;

private:
    struct EdgeKey {
        FieldVec value;
        bool up_deleted = false;   // copy at node `edge` (the encrypting side)
        bool down_deleted = false; // copy at node `edge+1` (the decrypting side)
    };

    void check_path(int path) const;
    EdgeKey& edge_key(int path, int edge);
    void record(std::string event, int path, int index, const FieldVec* c);

    RelayNetwork net_;
    std::vector<std::vector<EdgeKey>> keys_;
    std::vector<bool> alice_sent_;
    std::vector<bool> bob_received_;
    RelayLedger ledger_;
    uint64_t next_ordinal_ = 0;
};

} // namespace amdrelay
