#include "amdrelay/json_io.hpp"

namespace amdrelay {

static Json vec_to_json(const FieldVec& v) {
    Json arr = Json::array();
    for (const auto& e : v) arr.push_back(e.to_hex());
    return arr;
}

static FieldVec vec_from_json(const FieldSpec& spec, const Json& arr) {
    FieldVec out;
    for (const auto& h : arr) out.push_back(FieldElement::from_hex(spec, h.get<std::string>()));
    return out;
}

Json codeword_to_json(const AmdCodeword& c) {
    return Json{{"s", vec_to_json(c.s)}, {"x", c.x.to_hex()}, {"tag", c.tag.to_hex()}};
}

AmdCodeword codeword_from_json(const AmdParams& params, const Json& j) {
    const FieldSpec& spec = params.spec();
    FieldVec s = vec_from_json(spec, j.at("s"));
    if (s.size() != params.d()) throw FieldParseError("codeword message must have d elements");
    return AmdCodeword{std::move(s), FieldElement::from_hex(spec, j.at("x").get<std::string>()),
                       FieldElement::from_hex(spec, j.at("tag").get<std::string>())};
}

Json shares_to_json(const ShareVector& s) {
    Json arr = Json::array();
    for (const auto& e : s.entries) {
        if (e.has_value())
            arr.push_back(vec_to_json(*e));
        else
            arr.push_back(nullptr);
    }
    return Json{{"entries", arr}};
}

ShareVector shares_from_json(const FieldSpec& spec, const Json& j) {
    ShareVector out;
    for (const auto& e : j.at("entries")) {
        if (e.is_null())
            out.entries.push_back(std::nullopt);
        else
            out.entries.push_back(vec_from_json(spec, e));
    }
    return out;
}

Json report_to_json(const GameReport& r) {
    return Json{{"game", r.game},
                {"adversary", r.adversary},
                {"trials", r.trials},
                {"wins", r.wins},
                {"flagged", r.flagged},
                {"rate", r.rate},
                {"wilson_lo", r.wilson_lo},
                {"wilson_hi", r.wilson_hi},
                {"bound", r.bound},
                {"two_sided", r.two_sided},
                {"bound_exact", r.bound_exact},
                {"params", r.params},
                {"seed", r.seed}};
}

Json attack_to_json(const AttackReport& r) {
    Json verdicts = Json::array();
    for (size_t i = 0; i < r.verdicts.size(); ++i)
        verdicts.push_back(Json{{"path", i},
                                {"parity_ok", r.verdicts[i].parity_ok},
                                {"tag_ok", r.verdicts[i].tag_ok},
                                {"tag", r.delivered_tags[i].to_hex()}});
    return Json{{"delta2", u128_to_hex(r.delta2, r.params.tag_bits / 8)},
                {"accepted", r.bob_accepted},
                {"corrupt_path_valid", r.corrupt_path_valid},
                {"honest_paths_rejected", r.honest_paths_rejected},
                {"mac_shift_identity", r.mac_shift_identity},
                {"tag_xor_identity", r.tag_xor_identity},
                {"success", r.success()},
                {"paths", verdicts}};
}

Json trace_event_to_json(const TraceEvent& e) {
    Json j{{"ord", e.ordinal}, {"event", e.event}, {"i", e.path}, {"j", e.index}};
    if (e.ciphertext_hex.has_value())
        j["c"] = *e.ciphertext_hex;
    else
        j["c"] = nullptr;
    return j;
}

} // namespace amdrelay
