#include <doctest.h>

#include "amdrelay/json_io.hpp"

using namespace amdrelay;

TEST_CASE("codeword json round trip") {
    const FieldSpec& f = FieldSpec::gf2m(86);
    AmdParams params(f, 3);
    Rng rng(1);
    AmdCodeword cw = amd_encode(params, random_vec(f, 3, rng), rng);
    Json j = codeword_to_json(cw);
    CHECK(j.at("s").size() == 3);
    CHECK(j.at("x").get<std::string>().size() == 22); // 11 bytes, fixed width
    AmdCodeword back = codeword_from_json(params, j);
    CHECK(back.flatten() == cw.flatten());
}

TEST_CASE("share vector json keeps absent entries as null") {
    const FieldSpec& f = FieldSpec::prime(7);
    ShareVector sv;
    sv.entries = {FieldVec{FieldElement(f, 3)}, std::nullopt, FieldVec{FieldElement(f, 5)}};
    Json j = shares_to_json(sv);
    CHECK(j.at("entries")[1].is_null());
    ShareVector back = shares_from_json(f, j);
    REQUIRE(back.size() == 3);
    CHECK(back.entries[0] == sv.entries[0]);
    CHECK_FALSE(back.entries[1].has_value());
    CHECK(back.entries[2] == sv.entries[2]);
}

TEST_CASE("report json carries the fixed field names") {
    GameReport r;
    r.game = "forge-relay";
    r.adversary = "blind-shift";
    r.trials = 10;
    r.wins = 1;
    r.rate = 0.1;
    Json j = report_to_json(r);
    for (const char* k : {"game", "adversary", "trials", "wins", "flagged", "rate", "wilson_lo",
                          "wilson_hi", "bound", "two_sided", "bound_exact", "params", "seed"})
        CHECK(j.contains(k));
}

TEST_CASE("attack json shape") {
    SecoqcParams p;
    p.tag_bits = 16;
    p.parity_rows = 8;
    p.payload_bits = 40;
    Rng rng(2);
    AttackReport rep = secoqc_attack(p, 0x0abc, rng);
    Json j = attack_to_json(rep);
    CHECK(j.at("delta2").get<std::string>() == "0abc");
    CHECK(j.at("success").get<bool>());
    CHECK(j.at("paths").size() == 3);
    CHECK(j.at("paths")[0].contains("tag"));
}

TEST_CASE("trace events serialize with nullable ciphertexts") {
    TraceEvent e{7, "send", 1, 0, std::string("aabb")};
    Json j = trace_event_to_json(e);
    CHECK(j.at("ord") == 7);
    CHECK(j.at("c").get<std::string>() == "aabb");
    TraceEvent bot{8, "relay_bot", 1, 2, std::nullopt};
    CHECK(trace_event_to_json(bot).at("c").is_null());
}

TEST_CASE("hex vectors concatenate at fixed width") {
    const FieldSpec& f = FieldSpec::gf2m(16);
    FieldVec v{FieldElement(f, 0x1), FieldElement(f, 0xabcd)};
    CHECK(vec_to_hex(v) == "0001abcd");
    CHECK(vec_from_hex(f, 2, "0001abcd") == v);
    CHECK_THROWS_AS(vec_from_hex(f, 2, "0001abc"), FieldParseError);
}
