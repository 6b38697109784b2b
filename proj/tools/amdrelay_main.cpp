// Command-line harness: encode/decode, robust share/recover, relay
// simulation with optional tampering, security-game execution, and the
// misidentification attack demo. Exit codes: 0 success, 1 error, 2 rejected
// value (bot), 3 empirical rate above the analytic bound.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "amdrelay/games/games.hpp"
#include "amdrelay/json_io.hpp"

using namespace amdrelay;

namespace {

struct CommonConfig {
    std::string field = "gf2_86";
    unsigned d = 3;
    int n = 3;
    std::string lengths = "2";
    std::string scheme = "additive";
    int threshold = 0; // 0: n (additive) or required for shamir
    double epsilon = 0.0;
    uint64_t trials = 1000;
    uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::string format = "table";
};

void add_common_flags(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("--field", cfg.field, "field preset, e.g. gf2_86, gf7, gf16, gf2_16");
    cmd->add_option("--d", cfg.d, "message length in field elements");
    cmd->add_option("--n", cfg.n, "number of paths / shares");
    cmd->add_option("--lengths", cfg.lengths, "per-path edge counts, comma separated (one value: uniform)");
    cmd->add_option("--scheme", cfg.scheme, "additive or shamir");
    cmd->add_option("--threshold", cfg.threshold, "shamir threshold t");
    cmd->add_option("--epsilon", cfg.epsilon, "per-link privacy parameter (analytic only)");
    cmd->add_option("--trials", cfg.trials, "number of Monte Carlo trials");
    cmd->add_option("--seed", cfg.seed, "master seed (default: AMDRELAY_SEED or 0)")
        ->each([&cfg](const std::string&) { cfg.seed_set = true; });
    cmd->add_option("--jobs", cfg.jobs, "parallel trial workers");
    cmd->add_option("--format", cfg.format, "json, table or csv");
}

uint64_t resolve_seed(const CommonConfig& cfg) {
    if (cfg.seed_set) return cfg.seed;
    if (const char* env = std::getenv("AMDRELAY_SEED")) return std::strtoull(env, nullptr, 0);
    return cfg.seed;
}

std::vector<int> parse_lengths(const CommonConfig& cfg) {
    std::vector<int> out;
    std::string s = cfg.lengths;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("--lengths must name at least one edge count");
    if (out.size() == 1) out.assign(cfg.n, out[0]);
    if (static_cast<int>(out.size()) != cfg.n)
        throw std::invalid_argument("--lengths must give one value or one per path");
    return out;
}

AccessStructure parse_structure(const CommonConfig& cfg) {
    if (cfg.scheme == "additive") return AccessStructure::additive(cfg.n);
    if (cfg.scheme == "shamir") {
        int t = cfg.threshold == 0 ? cfg.n : cfg.threshold;
        return AccessStructure::threshold(t, cfg.n);
    }
    throw std::invalid_argument("--scheme must be additive or shamir");
}

// Validates the whole configuration against module preconditions before any
// work happens.
struct Run {
    const FieldSpec* spec;
    AmdParams params;
    AccessStructure structure;
    RobustScheme scheme;
    uint64_t seed;

    explicit Run(const CommonConfig& cfg)
        : spec(&FieldSpec::parse(cfg.field)),
          params(*spec, cfg.d),
          structure(parse_structure(cfg)),
          scheme(structure, params),
          seed(resolve_seed(cfg)) {}
};

u128 parse_hex_value(const std::string& hex) {
    if (hex.empty() || hex.size() > 32) throw std::invalid_argument("hex value must be 1..32 digits");
    u128 v = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else
            throw std::invalid_argument("invalid hex digit (lowercase hex required)");
        v = (v << 4) | static_cast<unsigned>(d);
    }
    return v;
}

FieldVec parse_elements(const FieldSpec& spec, const std::vector<std::string>& hex) {
    FieldVec out;
    for (const auto& h : hex) out.push_back(FieldElement::from_hex(spec, h));
    return out;
}

void print_elements(const FieldVec& v) {
    for (size_t i = 0; i < v.size(); ++i) std::cout << (i == 0 ? "" : " ") << v[i].to_hex();
    std::cout << "\n";
}

// --- game ------------------------------------------------------------------

void print_report(const GameReport& r, const std::string& format) {
    if (format == "json") {
        std::cout << report_to_json(r).dump() << "\n";
    } else if (format == "csv") {
        std::cout << "game,adversary,trials,wins,flagged,rate,wilson_lo,wilson_hi,bound,bound_exact,seed\n";
        std::cout << r.game << ',' << r.adversary << ',' << r.trials << ',' << r.wins << ','
                  << r.flagged << ',' << r.rate << ',' << r.wilson_lo << ',' << r.wilson_hi << ','
                  << r.bound << ',' << (r.bound_exact ? 1 : 0) << ',' << r.seed << "\n";
    } else {
        std::cout << "game       " << r.game << "\n";
        std::cout << "adversary  " << r.adversary << "\n";
        std::cout << "trials     " << r.trials << "\n";
        std::cout << "wins       " << r.wins << " (flagged " << r.flagged << ")\n";
        std::cout << "params     " << r.params << "\n";
        std::cout << "seed       " << r.seed << "\n";
    }
    std::cout << r.human_line() << "\n";
}

int cmd_game(const CommonConfig& cfg, const std::string& game, const std::string& adversary) {
    Run run(cfg);
    GameOptions opts{cfg.trials, run.seed, cfg.jobs, true};
    GameReport report;
    if (game == "ind-sss") {
        report = run_ind_sss(run.scheme, make_ind_sss_adversary(adversary), adversary, opts);
    } else if (game == "shift-robust") {
        report = run_shift_robust(run.scheme, make_shift_adversary(adversary), adversary, opts);
    } else if (game == "ind-relay" || game == "forge-relay") {
        RelayNetwork net(cfg.n, parse_lengths(cfg), *run.spec, run.scheme.share_len(), cfg.epsilon);
        if (game == "ind-relay")
            report = run_ind_relay(run.scheme, net, make_ind_relay_adversary(adversary), adversary, opts);
        else
            report =
                run_forge_relay(run.scheme, net, make_forge_relay_adversary(adversary), adversary, opts);
    } else {
        throw std::invalid_argument(
            "unknown game '" + game + "'; options: ind-sss shift-robust ind-relay forge-relay");
    }
    print_report(report, cfg.format);
    return report.exceeds_bound() ? 3 : 0;
}

// --- relay-sim / replay ------------------------------------------------------

struct TamperSpec {
    int path = -1;
    int edge = -1;
    std::vector<std::string> delta_hex;
};

TamperSpec parse_tamper(const std::string& s) {
    TamperSpec t;
    size_t a = s.find(':');
    size_t b = s.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw std::invalid_argument("--tamper expects i:j:delta");
    t.path = std::stoi(s.substr(0, a));
    t.edge = std::stoi(s.substr(a + 1, b - a - 1));
    std::string deltas = s.substr(b + 1);
    size_t pos = 0;
    while (pos <= deltas.size()) {
        size_t comma = deltas.find(',', pos);
        t.delta_hex.push_back(
            deltas.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return t;
}

FieldVec tamper_delta(const TamperSpec& t, const FieldSpec& spec, size_t len) {
    if (t.delta_hex.size() == 1 && t.delta_hex[0].size() != spec.byte_size() * 2) {
        // Short form: a raw value applied at coordinate 0.
        return make_delta(spec, len, 0, parse_hex_value(t.delta_hex[0]));
    }
    if (t.delta_hex.size() == 1) {
        FieldVec v = zero_vec(spec, len);
        v[0] = FieldElement::from_hex(spec, t.delta_hex[0]);
        return v;
    }
    if (t.delta_hex.size() != len)
        throw std::invalid_argument("--tamper delta must have 1 or share-length elements");
    FieldVec v;
    for (const auto& h : t.delta_hex) v.push_back(FieldElement::from_hex(spec, h));
    return v;
}

Json sim_meta(const CommonConfig& cfg, uint64_t seed, const std::string& tamper) {
    return Json{{"meta",
                 Json{{"field", cfg.field},
                      {"d", cfg.d},
                      {"n", cfg.n},
                      {"lengths", cfg.lengths},
                      {"scheme", cfg.scheme},
                      {"threshold", cfg.threshold},
                      {"epsilon", cfg.epsilon},
                      {"trials", cfg.trials},
                      {"seed", seed},
                      {"tamper", tamper}}}};
}

// One protocol trace: share, relay every path in order (tampering the
// configured edge in transit), deliver, recover. Returns the outcome plus
// the session for trace extraction.
struct SimTrialResult {
    std::string outcome; // match / reject / forge
    std::unique_ptr<RelaySession> session;
};

SimTrialResult sim_trial(const Run& run, const RelayNetwork& net, const TamperSpec& tamper,
                         const Rng& trial_rng) {
    Rng game_rand = trial_rng.derive(kStreamGame);
    Rng keys_rand = trial_rng.derive(kStreamKeys);
    FieldVec secret = random_vec(*run.spec, run.params.d(), game_rand);
    ShareVector shares = run.scheme.share(secret, game_rand);
    auto session = std::make_unique<RelaySession>(net, keys_rand);
    std::vector<FieldVec> c0 = session->alice_send(shares);
    std::optional<FieldVec> delta;
    if (tamper.path >= 0) delta = tamper_delta(tamper, *run.spec, run.scheme.share_len());
    std::vector<std::optional<FieldVec>> final_deliveries(net.n_paths);
    for (int i = 0; i < net.n_paths; ++i) {
        FieldVec in_flight = c0[i];
        for (int edge = 0; edge < net.lengths[i]; ++edge) {
            if (delta.has_value() && i == tamper.path && edge == tamper.edge)
                in_flight = vec_add(in_flight, *delta);
            if (edge + 1 < net.lengths[i]) in_flight = *session->relay_hop(i, edge + 1, in_flight);
        }
        final_deliveries[i] = in_flight;
    }
    auto rec = session->bob_receive(final_deliveries, run.scheme);
    std::string outcome = !rec.has_value() ? "reject" : (*rec == secret ? "match" : "forge");
    return {outcome, std::move(session)};
}

int cmd_relay_sim(const CommonConfig& cfg, const std::string& tamper_str, const std::string& trace_path) {
    Run run(cfg);
    TamperSpec tamper;
    if (!tamper_str.empty()) tamper = parse_tamper(tamper_str);
    RelayNetwork net(cfg.n, parse_lengths(cfg), *run.spec, run.scheme.share_len(), cfg.epsilon);
    if (tamper.path >= 0 && (tamper.path >= net.n_paths || tamper.edge < 0 ||
                             tamper.edge >= net.lengths[tamper.path]))
        throw std::invalid_argument("--tamper names a nonexistent edge");

    Rng master(run.seed);
    Rng trials_root = master.derive(kStreamTrial);
    uint64_t match = 0, reject = 0, forge = 0;
    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path);
        if (!trace) throw std::runtime_error("cannot open trace file " + trace_path);
        trace << sim_meta(cfg, run.seed, tamper_str).dump() << "\n";
    }
    for (uint64_t t = 0; t < cfg.trials; ++t) {
        SimTrialResult r = sim_trial(run, net, tamper, trials_root.derive(t));
        if (r.outcome == "match") ++match;
        if (r.outcome == "reject") ++reject;
        if (r.outcome == "forge") ++forge;
        if (t == 0 && trace.is_open())
            for (const auto& ev : r.session->ledger().events)
                trace << trace_event_to_json(ev).dump() << "\n";
    }
    bool exact = true;
    DeltaBound db = delta_bound(run.params);
    exact = db.exact;
    double bound = db.value + net.n_paths * net.max_length() * net.epsilon;
    Json out{{"trials", cfg.trials},
             {"match", match},
             {"reject", reject},
             {"forge", forge},
             {"integrity_bound", bound},
             {"bound_exact", exact},
             {"seed", run.seed}};
    if (cfg.format == "json") {
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "trials  " << cfg.trials << "\nmatch   " << match << "\nreject  " << reject
                  << "\nforge   " << forge << "\n";
        char line[128];
        std::snprintf(line, sizeof(line), "integrity bound n*l*eps + delta = %.6g%s", bound,
                      exact ? "" : " (conjectured)");
        std::cout << line << "\n";
    }
    return 0;
}

int cmd_replay(const std::string& trace_path) {
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error("cannot open trace file " + trace_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trace file");
    Json meta_line = Json::parse(line);
    Json meta = meta_line.at("meta");
    CommonConfig cfg;
    cfg.field = meta.at("field").get<std::string>();
    cfg.d = meta.at("d").get<unsigned>();
    cfg.n = meta.at("n").get<int>();
    cfg.lengths = meta.at("lengths").get<std::string>();
    cfg.scheme = meta.at("scheme").get<std::string>();
    cfg.threshold = meta.at("threshold").get<int>();
    cfg.epsilon = meta.at("epsilon").get<double>();
    cfg.seed = meta.at("seed").get<uint64_t>();
    cfg.seed_set = true;
    std::string tamper_str = meta.at("tamper").get<std::string>();

    Run run(cfg);
    TamperSpec tamper;
    if (!tamper_str.empty()) tamper = parse_tamper(tamper_str);
    RelayNetwork net(cfg.n, parse_lengths(cfg), *run.spec, run.scheme.share_len(), cfg.epsilon);
    Rng master(run.seed);
    SimTrialResult r = sim_trial(run, net, tamper, master.derive(kStreamTrial).derive(0));

    uint64_t checked = 0;
    for (const auto& ev : r.session->ledger().events) {
        if (!std::getline(in, line)) {
            std::cout << "replay mismatch: trace shorter than regenerated events\n";
            return 1;
        }
        if (Json::parse(line) != trace_event_to_json(ev)) {
            std::cout << "replay mismatch at ordinal " << ev.ordinal << "\n";
            return 1;
        }
        ++checked;
    }
    if (std::getline(in, line) && !line.empty()) {
        std::cout << "replay mismatch: trace longer than regenerated events\n";
        return 1;
    }
    std::cout << "replay ok: " << checked << " events match\n";
    return 0;
}

// --- attack ------------------------------------------------------------------

int cmd_attack(const CommonConfig& cfg, const std::string& delta2_hex, bool honest, unsigned tag_bits,
               unsigned parity_rows, unsigned payload_bits) {
    SecoqcParams params;
    params.tag_bits = tag_bits;
    params.parity_rows = parity_rows;
    params.payload_bits = payload_bits;
    params.n_paths = cfg.n;
    uint64_t seed = resolve_seed(cfg);
    Rng master(seed);
    Rng trials_root = master.derive(kStreamTrial);

    if (honest) {
        uint64_t all_valid = 0;
        for (uint64_t t = 0; t < cfg.trials; ++t) {
            Rng trial = trials_root.derive(t);
            SecoqcRun run = secoqc_honest_run(params, trial);
            bool ok = run.accepted;
            for (const auto& v : run.verdicts) ok = ok && v.valid();
            all_valid += ok ? 1 : 0;
        }
        Json out{{"mode", "honest"}, {"trials", cfg.trials}, {"all_paths_valid", all_valid}, {"seed", seed}};
        std::cout << (cfg.format == "json" ? out.dump()
                                           : "honest runs with all paths valid: " +
                                                 std::to_string(all_valid) + "/" +
                                                 std::to_string(cfg.trials))
                  << "\n";
        return all_valid == cfg.trials ? 0 : 1;
    }

    u128 delta2 = parse_hex_value(delta2_hex);
    if (delta2 == 0) {
        std::cerr << "error: delta2 must be nonzero (a zero shift degenerates to the honest run)\n";
        return 1;
    }
    uint64_t successes = 0;
    AttackReport last{};
    for (uint64_t t = 0; t < cfg.trials; ++t) {
        Rng trial = trials_root.derive(t);
        last = secoqc_attack(params, delta2, trial);
        successes += last.success() ? 1 : 0;
    }
    if (cfg.format == "json") {
        Json out = attack_to_json(last);
        out["trials"] = cfg.trials;
        out["successes"] = successes;
        out["seed"] = seed;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "attack successes: " << successes << "/" << cfg.trials << "\n";
        std::cout << "last run: accepted=" << last.bob_accepted
                  << " corrupt_path_valid=" << last.corrupt_path_valid
                  << " honest_paths_rejected=" << last.honest_paths_rejected << "\n";
    }
    return successes == cfg.trials ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"manipulation-detecting multipath relay simulator"};
    app.require_subcommand(1);
    CommonConfig cfg;

    auto* encode = app.add_subcommand("encode", "encode message elements (hex) into a codeword");
    std::vector<std::string> encode_hex;
    add_common_flags(encode, cfg);
    encode->add_option("elements", encode_hex, "d message elements, fixed-width lowercase hex");

    auto* decode = app.add_subcommand("decode", "decode d+2 codeword elements (hex)");
    std::vector<std::string> decode_hex;
    add_common_flags(decode, cfg);
    decode->add_option("elements", decode_hex, "d+2 codeword elements");

    auto* share_cmd = app.add_subcommand("share", "robust-share a secret (encode then share)");
    std::vector<std::string> share_hex;
    add_common_flags(share_cmd, cfg);
    share_cmd->add_option("elements", share_hex, "d secret elements");

    auto* recover_cmd = app.add_subcommand("recover", "recover a secret from share JSON on stdin");
    add_common_flags(recover_cmd, cfg);

    auto* sim = app.add_subcommand("relay-sim", "run the multipath relay protocol end to end");
    std::string tamper_str, trace_path;
    add_common_flags(sim, cfg);
    sim->add_option("--tamper", tamper_str, "i:j:delta, adds delta on edge j of path i in transit");
    sim->add_option("--trace", trace_path, "write a JSON-lines trace of the first trial");

    auto* replay = app.add_subcommand("replay", "re-run a trace file and verify it reproduces");
    std::string replay_path;
    replay->add_option("--trace", replay_path, "trace file to verify")->required();

    auto* game = app.add_subcommand("game", "run a security game against a built-in adversary");
    std::string game_name, adversary_name;
    add_common_flags(game, cfg);
    game->add_option("name", game_name, "ind-sss | shift-robust | ind-relay | forge-relay")->required();
    game->add_option("adversary", adversary_name, "built-in adversary name")->required();

    auto* attack = app.add_subcommand("attack", "run the parity-check protocol manipulation demo");
    std::string delta2_hex = "01";
    bool honest = false;
    unsigned tag_bits = 64, parity_rows = 32, payload_bits = 160;
    add_common_flags(attack, cfg);
    attack->add_option("--delta2", delta2_hex, "nonzero tag shift, hex");
    attack->add_flag("--honest", honest, "control run without manipulation");
    attack->add_option("--tag-bits", tag_bits, "tag width (hash family over gf2_<tag-bits>)");
    attack->add_option("--parity-rows", parity_rows, "number of parity checks");
    attack->add_option("--payload-bits", payload_bits, "checked segment length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed()) {
            Run run(cfg);
            FieldVec s = parse_elements(*run.spec, encode_hex);
            Rng rng(run.seed);
            AmdCodeword cw = amd_encode(run.params, s, rng);
            if (cfg.format == "json")
                std::cout << codeword_to_json(cw).dump() << "\n";
            else
                print_elements(cw.flatten());
            return 0;
        }
        if (decode->parsed()) {
            Run run(cfg);
            FieldVec flat = parse_elements(*run.spec, decode_hex);
            auto rec = amd_decode(run.params, AmdCodeword::from_flat(run.params, flat));
            if (!rec.has_value()) {
                std::cout << "BOT\n";
                return 2;
            }
            print_elements(*rec);
            return 0;
        }
        if (share_cmd->parsed()) {
            Run run(cfg);
            FieldVec s = parse_elements(*run.spec, share_hex);
            Rng rng(run.seed);
            ShareVector shares = run.scheme.share(s, rng);
            std::cout << shares_to_json(shares).dump() << "\n";
            return 0;
        }
        if (recover_cmd->parsed()) {
            Run run(cfg);
            Json j = Json::parse(std::cin);
            ShareVector shares = shares_from_json(*run.spec, j);
            auto rec = run.scheme.recover(shares);
            if (!rec.has_value()) {
                std::cout << "BOT\n";
                return 2;
            }
            print_elements(*rec);
            return 0;
        }
        if (sim->parsed()) return cmd_relay_sim(cfg, tamper_str, trace_path);
        if (replay->parsed()) return cmd_replay(replay_path);
        if (game->parsed()) return cmd_game(cfg, game_name, adversary_name);
        if (attack->parsed())
            return cmd_attack(cfg, delta2_hex, honest, tag_bits, parity_rows, payload_bits);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
