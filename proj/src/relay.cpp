#include "amdrelay/relay.hpp"

namespace amdrelay {

RelayNetwork::RelayNetwork(int n, std::vector<int> lens, const FieldSpec& field, size_t len, double eps)
    : n_paths(n), lengths(std::move(lens)), spec(&field), vec_len(len), epsilon(eps) {
    if (n < 1) throw std::invalid_argument("need at least one path");
    if (static_cast<int>(lengths.size()) != n) throw std::invalid_argument("one length per path required");
    for (int l : lengths)
        if (l < 1) throw std::invalid_argument("every path needs at least one edge");
    if (len == 0) throw std::invalid_argument("key vector length must be positive");
    if (eps < 0) throw std::invalid_argument("epsilon must be non-negative");
}

int RelayNetwork::max_length() const {
    int m = 0;
    for (int l : lengths) m = std::max(m, l);
    return m;
}

int RelayNetwork::total_edges() const {
    int s = 0;
    for (int l : lengths) s += l;
    return s;
}

RelaySession::RelaySession(const RelayNetwork& net, RandomSource& rng)
    : net_(net), alice_sent_(net.n_paths, false), bob_received_(net.n_paths, false) {
    keys_.resize(net.n_paths);
    for (int i = 0; i < net.n_paths; ++i) {
        keys_[i].resize(net.lengths[i]);
        for (int j = 0; j < net.lengths[i]; ++j)
            keys_[i][j].value = random_vec(*net.spec, net.vec_len, rng);
    }
}

void RelaySession::check_path(int path) const {
    if (path < 0 || path >= net_.n_paths) throw std::out_of_range("path index out of range");
}

RelaySession::EdgeKey& RelaySession::edge_key(int path, int edge) {
    check_path(path);
    if (edge < 0 || edge >= net_.lengths[path]) throw std::out_of_range("edge index out of range");
    return keys_[path][edge];
}

void RelaySession::record(std::string event, int path, int index, const FieldVec* c) {
    TraceEvent ev{next_ordinal_++, std::move(event), path, index,
                  c == nullptr ? std::nullopt : std::optional<std::string>(vec_to_hex(*c))};
    ledger_.events.push_back(std::move(ev));
}

std::vector<FieldVec> RelaySession::alice_send(const ShareVector& shares) {
    if (static_cast<int>(shares.size()) != net_.n_paths)
        throw std::invalid_argument("one share per path required");
    for (const auto& e : shares.entries) {
        if (!e.has_value()) throw std::invalid_argument("sender cannot encrypt an absent share");
        if (e->size() != net_.vec_len) throw std::invalid_argument("share length does not match key length");
    }
    std::vector<FieldVec> out;
    out.reserve(net_.n_paths);
    for (int i = 0; i < net_.n_paths; ++i) {
        EdgeKey& k = edge_key(i, 0);
        if (alice_sent_[i] || k.up_deleted)
            throw DeletedKeyError("sender key for path " + std::to_string(i) + " already deleted");
        FieldVec c = vec_add(*shares.entries[i], k.value);
        alice_sent_[i] = true;
        k.up_deleted = true;
        if (k.down_deleted) k.value.clear();
        ledger_.sent[{i, 0}] = c;
        record("send", i, 0, &c);
        out.push_back(std::move(c));
    }
    return out;
}

std::optional<FieldVec> RelaySession::relay_hop(int path, int node, const FieldVec& delivered) {
    check_path(path);
    if (node < 1 || node >= net_.lengths[path])
        throw std::out_of_range("relay node index out of range");
    if (delivered.size() != net_.vec_len) throw std::invalid_argument("ciphertext length mismatch");
    if (ledger_.relayed.count({path, node}) != 0) {
        record("relay_bot", path, node, nullptr);
        return std::nullopt; // once only, modelling key deletion
    }
    EdgeKey& prev = edge_key(path, node - 1);
    EdgeKey& next = edge_key(path, node);
    if (prev.down_deleted || next.up_deleted)
        throw DeletedKeyError("relay node key copy already deleted");
    FieldVec c = vec_add(vec_sub(delivered, prev.value), next.value); // re-encrypt
    ledger_.relayed.insert({path, node});
    prev.down_deleted = true;
    next.up_deleted = true;
    if (prev.up_deleted) prev.value.clear();
    if (next.down_deleted) next.value.clear();
    ledger_.delivered[{path, node - 1}] = delivered;
    ledger_.sent[{path, node}] = c;
    record("deliver", path, node - 1, &delivered);
    record("send", path, node, &c);
    return c;
}

std::optional<std::pair<FieldVec, FieldVec>> RelaySession::corrupt(int path, int node) {
    check_path(path);
    if (node < 1 || node >= net_.lengths[path])
        throw std::out_of_range("only intermediate nodes can be corrupted");
    record("corrupt", path, node, nullptr);
    if (ledger_.relayed.count({path, node}) != 0)
        return std::nullopt; // keys already deleted after relaying
    ledger_.corrupted.insert(path);
    return std::make_pair(keys_[path][node - 1].value, keys_[path][node].value);
}

ShareVector RelaySession::bob_decrypt(const std::vector<std::optional<FieldVec>>& delivered) {
    if (static_cast<int>(delivered.size()) != net_.n_paths)
        throw std::invalid_argument("one delivery slot per path required");
    ShareVector out;
    out.entries.resize(net_.n_paths);
    for (int i = 0; i < net_.n_paths; ++i) {
        int last = net_.lengths[i] - 1;
        if (!delivered[i].has_value()) {
            record("deliver_bot", i, last, nullptr);
            continue; // absent delivery -> absent share
        }
        if (delivered[i]->size() != net_.vec_len)
            throw std::invalid_argument("ciphertext length mismatch");
        EdgeKey& k = edge_key(i, last);
        if (bob_received_[i] || k.down_deleted)
            throw DeletedKeyError("receiver key for path " + std::to_string(i) + " already deleted");
        out.entries[i] = vec_sub(*delivered[i], k.value);
        bob_received_[i] = true;
        k.down_deleted = true;
        if (k.up_deleted) k.value.clear();
        ledger_.delivered[{i, last}] = *delivered[i];
        record("deliver", i, last, &*delivered[i]);
    }
    return out;
}

std::optional<FieldVec> RelaySession::bob_receive(const std::vector<std::optional<FieldVec>>& delivered,
                                                  const Scheme& scheme) {
    if (scheme.n() != net_.n_paths || scheme.share_len() != net_.vec_len)
        throw std::invalid_argument("scheme does not match network geometry");
    return scheme.recover(bob_decrypt(delivered));
}

const FieldVec& RelaySession::key_value(int path, int edge) const {
    const_cast<RelaySession*>(this)->check_path(path);
    if (edge < 0 || edge >= net_.lengths[path]) throw std::out_of_range("edge index out of range");
    const EdgeKey& k = keys_[path][edge];
    if (k.up_deleted && k.down_deleted)
        throw DeletedKeyError("both copies of this key were deleted");
    return k.value;
}

bool RelaySession::key_fully_deleted(int path, int edge) const {
    const EdgeKey& k = keys_[path][edge];
    return k.up_deleted && k.down_deleted;
}

} // namespace amdrelay
