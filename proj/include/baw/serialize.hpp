#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "baw/cp_plus.hpp"
#include "baw/lambda_system.hpp"
#include "baw/ordinal.hpp"

namespace baw {

// Strict JSON input layer. Documents are objects; unknown fields are
// rejected, and every diagnostic names the offending spot as a path like
// "$.nodes[3].set". Type mismatches and missing required fields surface as
// parse_error, out-of-capacity budgets as capacity_error.

// Based-family fixture documents, kind "lambda-fixture". Node objects carry
// "path" and "rank"; "children", "marked" and "base" default to empty or
// false; leaves (rank 0) carry their ground "set" and nothing else may.
BasedFamily family_from_json_text(const std::string& text,
                                  const std::string& origin = "<fixture>");
BasedFamily family_from_json_file(const std::string& path);

// Canonical rendering: nodes in path order, defaults omitted, two-space
// indentation, trailing newline. Loading the output reproduces the family.
std::string family_to_json(const BasedFamily& f);

// One batch job. The kind picks the payload; everything else is shared
// plumbing. Seeds default to 0, output to stdout.
enum class RunKind {
    tight_coding,
    cp_plus,
    lambda_system,
    as_construction,
    transversal,
    selftest,
};

std::string run_kind_name(RunKind k);

struct TightCodingRun {
    std::uint32_t k_max = 2;
    std::size_t budget = 6;
    std::vector<Ordinal> s_set;
    // Second designated set: when present the run builds both codings and
    // certifies that the fingerprints separate them.
    std::optional<std::vector<Ordinal>> s_alt;
    // Limits the fingerprint ranges over; empty means every active limit.
    std::vector<Ordinal> scope;
};

struct CpPlusRun {
    CpPlusParams grid;
    std::size_t samples = 2;
    // Row selection for the tail study; empty means skip it.
    std::vector<RowSpec> selection;
};

struct LambdaSystemRun {
    BasedFamily family;
    std::size_t overlap = 0;
};

struct AsConstructionRun {
    BasedFamily family;
    // Root child to probe; unset means every root child in turn.
    std::optional<std::uint32_t> branch;
    std::size_t samples = 3;
};

struct TransversalRun {
    // Explicit mode: the family itself.
    std::vector<std::vector<std::uint64_t>> sets;
    // Suite mode: seeded random families, both modes may be combined.
    std::size_t cases = 0;
    std::size_t max_sets = 6;
    std::size_t max_size = 5;
};

struct SelftestRun {};

struct RunSpec {
    RunKind kind = RunKind::selftest;
    std::uint64_t seed = 0;
    std::string output;

    // Exactly the member matching kind is engaged.
    std::optional<TightCodingRun> tight_coding;
    std::optional<CpPlusRun> cp_plus;
    std::optional<LambdaSystemRun> lambda_system;
    std::optional<AsConstructionRun> as_construction;
    std::optional<TransversalRun> transversal;
    std::optional<SelftestRun> selftest;
};

// Strict spec parse. Fixture references ("fixture": path) are resolved here,
// so the resulting spec is self-contained.
RunSpec parse_spec_text(const std::string& text, const std::string& origin = "<spec>");
RunSpec parse_spec_file(const std::string& path);

// Canonical spec rendering; families appear inline. parse(spec_to_json(s))
// engages the same payload with the same values.
std::string spec_to_json(const RunSpec& spec);

} // namespace baw
