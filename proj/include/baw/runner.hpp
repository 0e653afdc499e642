#pragma once

#include <string>

#include "baw/serialize.hpp"

namespace baw {

// Outcome of one batch job. json is the canonical report, exactly the bytes
// the CLI writes. ok separates findings from failures: a run whose
// mathematical outcome is negative (a cut escapes, a family has no
// transversal) still succeeds; only internal disagreements, dual routes
// splitting or certificates failing their re-check, count as failures.
struct Report {
    bool ok = false;
    std::string json;
};

// Dispatches the spec to its module, verifies whatever the module returns,
// and assembles the report. Deterministic: the same spec and seed produce
// byte-identical json. Module preconditions surface as the module's own
// exceptions; malformed fixtures referenced by the spec as parse_error.
Report run(const RunSpec& spec);

// Text rendering derived from the canonical JSON; every certificate id
// appears. Accepts exactly the strings run() produces.
std::string render_text(const std::string& report_json);

} // namespace baw
