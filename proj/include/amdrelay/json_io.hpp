#pragma once

#include <string>

#include "amdrelay/games/report.hpp"
#include "amdrelay/relay.hpp"
#include "amdrelay/secoqc.hpp"

#include <json.hpp>

namespace amdrelay {

using Json = nlohmann::ordered_json;

// Codeword form: {"s": [hex...], "x": hex, "tag": hex}.
Json codeword_to_json(const AmdCodeword& c);
AmdCodeword codeword_from_json(const AmdParams& params, const Json& j);

// Share vector form: {"entries": [[hex...] | null, ...]}.
Json shares_to_json(const ShareVector& s);
ShareVector shares_from_json(const FieldSpec& spec, const Json& j);

Json report_to_json(const GameReport& r);

Json attack_to_json(const AttackReport& r);

// One trace record per line: {"ord", "event", "i", "j", "c"}.
Json trace_event_to_json(const TraceEvent& e);

} // namespace amdrelay
