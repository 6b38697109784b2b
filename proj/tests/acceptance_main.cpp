// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here; nothing is calibrated later.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "amdrelay/games/reduction.hpp"
#include "amdrelay/json_io.hpp"

using namespace amdrelay;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::string g_bin;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    char line[512];
    std::snprintf(line, sizeof(line), "%s %2d %-28s %s (%.2fs)", pass ? "PASS" : "FAIL", id,
                  name.c_str(), detail.c_str(), seconds);
    std::cout << line << std::endl;
    if (!pass) ++g_failures;
}

struct Timer {
    Clock::time_point t0 = Clock::now();
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }
};

std::string run_capture(const std::string& args, int* code) {
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen((g_bin + " " + args + " 2>/dev/null").c_str(), "r");
    if (pipe == nullptr) {
        *code = -1;
        return out;
    }
    while (fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
    int status = pclose(pipe);
    *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 1. Decoding inverts encoding for every message and every encoding
//    randomness, exhaustively at small parameters.
void criterion_completeness() {
    Timer timer;
    uint64_t checked = 0, failures = 0;
    for (const FieldSpec* spec : {&FieldSpec::prime(7), &FieldSpec::gf2m(3)}) {
        uint64_t q = static_cast<uint64_t>(spec->order());
        for (unsigned d : {1u, 2u, 3u}) {
            if ((d + 2) % spec->characteristic() == 0) continue; // excluded combination
            AmdParams p(*spec, d);
            uint64_t sspace = 1;
            for (unsigned i = 0; i < d; ++i) sspace *= q;
            for (uint64_t sidx = 0; sidx < sspace; ++sidx) {
                FieldVec s;
                uint64_t rem = sidx;
                for (unsigned i = 0; i < d; ++i) {
                    s.push_back(FieldElement(*spec, rem % q));
                    rem /= q;
                }
                for (uint64_t x = 0; x < q; ++x) {
                    AmdCodeword cw{s, FieldElement(*spec, x),
                                   tag_eval(p, FieldElement(*spec, x), s)};
                    auto dec = amd_decode(p, cw);
                    ++checked;
                    if (!dec.has_value() || *dec != s) ++failures;
                }
            }
        }
    }
    double secs = timer.seconds();
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%llu codewords, %llu failures",
                  static_cast<unsigned long long>(checked),
                  static_cast<unsigned long long>(failures));
    report(1, "amd-completeness", failures == 0 && secs < 10.0, detail, secs);
}

// 2. The exhaustive oracle pins the worst-case undetected-manipulation
//    probability; the conjectured (d+1)/q form upper-bounds it everywhere.
void criterion_delta_oracle() {
    Timer timer;
    DeltaValue v8 = delta_oracle(AmdParams(FieldSpec::gf2m(3), 1));
    DeltaValue v16 = delta_oracle(AmdParams(FieldSpec::gf2m(4), 1));
    bool golden = v8.numerator == 2 && v8.denominator == 8 && v16.numerator == 2 &&
                  v16.denominator == 16;
    bool conjecture_holds = true;
    struct Case {
        const FieldSpec* spec;
        unsigned d;
    } cases[] = {{&FieldSpec::prime(2), 1}, {&FieldSpec::prime(3), 2}, {&FieldSpec::prime(5), 1},
                 {&FieldSpec::prime(5), 2}, {&FieldSpec::prime(7), 1}, {&FieldSpec::prime(7), 2},
                 {&FieldSpec::gf2m(3), 1},  {&FieldSpec::gf2m(4), 1},  {&FieldSpec::gf2m(4), 2},
                 {&FieldSpec::gf2m(5), 1},  {&FieldSpec::gf2m(6), 1}};
    for (const auto& c : cases) {
        if ((c.d + 2) % c.spec->characteristic() == 0) continue;
        DeltaValue v = delta_oracle(AmdParams(*c.spec, c.d));
        double conjecture = static_cast<double>(c.d + 1) / static_cast<double>(v.denominator);
        if (v.value() > conjecture + 1e-12) conjecture_holds = false;
    }
    double secs = timer.seconds();
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "gf8,d1: %llu/%llu; gf16,d1: %llu/%llu; (d+1)/q bound %s",
                  static_cast<unsigned long long>(v8.numerator),
                  static_cast<unsigned long long>(v8.denominator),
                  static_cast<unsigned long long>(v16.numerator),
                  static_cast<unsigned long long>(v16.denominator),
                  conjecture_holds ? "holds" : "VIOLATED");
    report(2, "amd-delta-oracle", golden && conjecture_holds && secs < 60.0, detail, secs);
}

// 3. Every built-in shift adversary stays below the extrapolated delta.
void criterion_shift_robust() {
    Timer timer;
    RobustScheme scheme(AccessStructure::additive(3), AmdParams(FieldSpec::gf2m(16), 3));
    double delta = 4.0 / 65536.0; // (d+1)/q, oracle-validated form
    const uint64_t N = 100000;
    double sigma = std::sqrt(delta * (1 - delta) / static_cast<double>(N));
    bool ok = true;
    std::string worst;
    double worst_rate = -1;
    for (const std::string& name : shift_adversary_names()) {
        GameOptions opts{N, 1001, 2, true};
        GameReport r = run_shift_robust(scheme, make_shift_adversary(name), name, opts);
        if (r.rate > delta + 3 * sigma) ok = false;
        if (r.rate > worst_rate) {
            worst_rate = r.rate;
            worst = name;
        }
    }
    double secs = timer.seconds();
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst %s rate %.3g vs delta+3sigma %.3g", worst.c_str(),
                  worst_rate, delta + 3 * sigma);
    report(3, "shift-robust-bound", ok && secs < 120.0, detail, secs);
}

// 4. Forge-Relay with ideal keys: the suite stays below delta; the CLI
//    tripwire (exit 3 on violation) answers 0 here.
void criterion_forge_relay() {
    Timer timer;
    RobustScheme scheme(AccessStructure::additive(3), AmdParams(FieldSpec::gf2m(16), 3));
    RelayNetwork net(3, {2, 2, 2}, FieldSpec::gf2m(16), scheme.share_len(), 0.0);
    double delta = 4.0 / 65536.0;
    const uint64_t N = 100000;
    double sigma = std::sqrt(delta * (1 - delta) / static_cast<double>(N));
    bool ok = true;
    std::string worst;
    double worst_rate = -1;
    for (const std::string& name : forge_relay_adversary_names()) {
        GameOptions opts{N, 1002, 2, true};
        GameReport r = run_forge_relay(scheme, net, make_forge_relay_adversary(name), name, opts);
        if (r.rate > delta + 3 * sigma) ok = false;
        if (r.rate > worst_rate) {
            worst_rate = r.rate;
            worst = name;
        }
    }
    int code = -1;
    run_capture("game forge-relay blind-shift --field gf2_16 --trials 20000 --seed 1002", &code);
    bool tripwire_ok = code == 0;
    double secs = timer.seconds();
    char detail[200];
    std::snprintf(detail, sizeof(detail), "worst %s rate %.3g vs %.3g; cli tripwire exit %d",
                  worst.c_str(), worst_rate, delta + 3 * sigma, code);
    report(4, "forge-relay-bound", ok && tripwire_ok, detail, secs);
}

// 5. Ind-Relay with ideal keys: unqualified adversaries sit at 1/2; the
//    gate-free control shows the harness would notice a qualified win.
void criterion_ind_relay() {
    Timer timer;
    RobustScheme scheme(AccessStructure::additive(3), AmdParams(FieldSpec::gf2m(16), 3));
    RelayNetwork net(3, {2, 2, 2}, FieldSpec::gf2m(16), scheme.share_len(), 0.0);
    const uint64_t N = 100000;
    double sigma = std::sqrt(0.25 / static_cast<double>(N));
    bool ok = true;
    double worst_dev = 0;
    std::string worst;
    for (const std::string& name : ind_relay_adversary_names()) {
        if (name == "full-corrupt") continue; // the qualified control below
        GameOptions opts{N, 1003, 2, true};
        GameReport r = run_ind_relay(scheme, net, make_ind_relay_adversary(name), name, opts);
        double dev = std::fabs(r.rate - 0.5);
        if (dev > 3 * sigma) ok = false;
        if (dev > worst_dev) {
            worst_dev = dev;
            worst = name;
        }
    }
    GameOptions gated{20000, 1003, 2, true};
    GameReport qualified = run_ind_relay(scheme, net, make_ind_relay_adversary("full-corrupt"),
                                         "full-corrupt", gated);
    GameOptions open_gate{20000, 1003, 2, false};
    GameReport control = run_ind_relay(scheme, net, make_ind_relay_adversary("full-corrupt"),
                                       "full-corrupt", open_gate);
    bool control_ok = qualified.wins == 0 && control.rate >= 0.99;
    double secs = timer.seconds();
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "worst |rate-1/2| %.3g (%s) vs 3sigma %.3g; gate-free control %.3f",
                  worst_dev, worst.c_str(), 3 * sigma, control.rate);
    report(5, "ind-relay-bound", ok && control_ok, detail, secs);
}

// 6. Both reductions agree with the direct games trial by trial under
//    shared per-trial seeds.
void criterion_reduction_coupling() {
    Timer timer;
    RobustScheme scheme(AccessStructure::additive(3), AmdParams(FieldSpec::gf2m(3), 1));
    RelayNetwork net(3, {2, 2, 2}, FieldSpec::gf2m(3), scheme.share_len(), 0.0);
    uint64_t mismatches = 0, trials = 0;
    for (const std::string& name : forge_relay_adversary_names()) {
        GameOptions opts{1000, 1004, 1, true};
        CoupledReport rep = run_coupled_forge(scheme, net, make_forge_relay_adversary(name), opts);
        mismatches += rep.mismatches;
        trials += rep.trials;
    }
    for (const std::string& name : ind_relay_adversary_names()) {
        GameOptions opts{1000, 1005, 1, true};
        CoupledReport rep = run_coupled_ind(scheme, net, make_ind_relay_adversary(name), opts);
        mismatches += rep.mismatches;
        trials += rep.trials;
    }
    double secs = timer.seconds();
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%llu coupled trials, %llu mismatches",
                  static_cast<unsigned long long>(trials),
                  static_cast<unsigned long long>(mismatches));
    report(6, "reduction-coupling", mismatches == 0, detail, secs);
}

// 7. The per-path telescoping identity holds exactly on randomized tamper
//    traces of every supported length.
void criterion_telescoping() {
    Timer timer;
    Rng rng(1006);
    const FieldSpec& f = FieldSpec::gf2m(16);
    uint64_t checked = 0, failures = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        int l = 1 + static_cast<int>(rng.next_u64() % 4);
        RelayNetwork net(1, {l}, f, 2);
        RelaySession session(net, rng);
        FieldVec share0 = random_vec(f, 2, rng);
        ShareVector sv;
        sv.entries.push_back(share0);
        auto c = session.alice_send(sv);
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
        FieldVec acc = share0;
        for (int e = 0; e < l; ++e) acc = vec_add(acc, vec_sub(delivered[e], sent[e]));
        ++checked;
        if (!(acc == *decrypted.entries[0])) ++failures;
    }
    double secs = timer.seconds();
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%llu traces, %llu identity failures",
                  static_cast<unsigned long long>(checked),
                  static_cast<unsigned long long>(failures));
    report(7, "telescoping-identity", failures == 0, detail, secs);
}

// 8. The tag-shift attack succeeds on every seeded run; the honest control
//    accepts all paths.
void criterion_secoqc() {
    Timer timer;
    SecoqcParams params; // 64-bit tags, 32 parity rows, 160-bit payload
    Rng master(1007);
    Rng trials = master.derive(kStreamTrial);
    uint64_t successes = 0;
    const uint64_t N = 1000;
    for (uint64_t t = 0; t < N; ++t) {
        Rng trial = trials.derive(t);
        u128 delta2 = (trial.next_u64() | 1); // nonzero
        AttackReport rep = secoqc_attack(params, delta2, trial);
        successes += rep.success() ? 1 : 0;
    }
    bool honest_ok = true;
    for (int t = 0; t < 100; ++t) {
        Rng trial = trials.derive(100000 + t);
        SecoqcRun run = secoqc_honest_run(params, trial);
        honest_ok = honest_ok && run.accepted;
        for (const auto& v : run.verdicts) honest_ok = honest_ok && v.valid();
    }
    double secs = timer.seconds();
    char detail[128];
    std::snprintf(detail, sizeof(detail), "attack %llu/%llu, honest control %s",
                  static_cast<unsigned long long>(successes), static_cast<unsigned long long>(N),
                  honest_ok ? "accepts" : "BROKEN");
    report(8, "misidentification-attack", successes == N && honest_ok, detail, secs);
}

// 9. Robust sharing costs exactly two extra field elements on every preset.
void criterion_overhead() {
    Timer timer;
    struct Case {
        const FieldSpec* spec;
        unsigned d;
    } cases[] = {{&FieldSpec::gf2m(86), 3}, {&FieldSpec::prime(7), 1}, {&FieldSpec::prime(7), 2},
                 {&FieldSpec::prime(7), 3}, {&FieldSpec::gf2m(3), 1},  {&FieldSpec::gf2m(16), 3},
                 {&FieldSpec::gf2m(64), 3}};
    bool ok = true;
    Rng rng(1008);
    for (const auto& c : cases) {
        AmdParams p(*c.spec, c.d);
        if (p.codeword_len() != c.d + 2) ok = false;
        ShareVector sv = share_star(AccessStructure::additive(3), p,
                                    random_vec(*c.spec, c.d, rng), rng);
        for (const auto& e : sv.entries)
            if (!e.has_value() || e->size() != c.d + 2) ok = false;
    }
    // The flagship preset: 3-element secrets over the 86-bit field ride in
    // 5-element shares.
    AmdParams flagship(FieldSpec::gf2m(86), 3);
    ok = ok && flagship.codeword_len() == 5;
    double secs = timer.seconds();
    report(9, "share-overhead", ok, "overhead = 2 elements on every preset", secs);
}

// 10. Identical seeds give byte-identical command-line output, including
//     trace files.
void criterion_determinism() {
    Timer timer;
    bool ok = true;
    std::string detail = "all invocations byte-identical";
    const char* cmds[] = {
        "encode --seed 77 0000000000000000000001 0000000000000000000002 0000000000000000000003",
        "game forge-relay random-tamper --field gf2_16 --trials 3000 --seed 77 --jobs 2 --format json",
        "game ind-relay passive --trials 3000 --seed 77 --format csv",
        "relay-sim --trials 20 --seed 77 --tamper 0:1:0001 --format json",
        "attack --trials 50 --seed 77 --format json",
    };
    for (const char* cmd : cmds) {
        int c1 = -1, c2 = -1;
        std::string a = run_capture(cmd, &c1);
        std::string b = run_capture(cmd, &c2);
        if (a != b || c1 != c2 || a.empty()) {
            ok = false;
            detail = std::string("mismatch for: ") + cmd;
        }
    }
    int c1 = -1, c2 = -1;
    run_capture("relay-sim --trials 2 --seed 78 --trace /tmp/amdrelay_acc1.jsonl", &c1);
    run_capture("relay-sim --trials 2 --seed 78 --trace /tmp/amdrelay_acc2.jsonl", &c2);
    if (slurp("/tmp/amdrelay_acc1.jsonl") != slurp("/tmp/amdrelay_acc2.jsonl") ||
        slurp("/tmp/amdrelay_acc1.jsonl").empty()) {
        ok = false;
        detail = "trace files differ";
    }
    report(10, "cli-determinism", ok, detail, timer.seconds());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance_tests <path-to-amdrelay>\n";
        return 2;
    }
    g_bin = argv[1];
    criterion_completeness();
    criterion_delta_oracle();
    criterion_shift_robust();
    criterion_forge_relay();
    criterion_ind_relay();
    criterion_reduction_coupling();
    criterion_telescoping();
    criterion_secoqc();
    criterion_overhead();
    criterion_determinism();
    if (g_failures != 0) std::cerr << g_failures << " criteria failed\n";
    return g_failures;
}
