#pragma once

#include <stdexcept>
#include <string>

namespace baw {

// Base for everything thrown on purpose by the workbench.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Caller mixed elements of different algebras, passed an out-of-range
// index, or otherwise violated a precondition.
struct usage_error : error {
    explicit usage_error(const std::string& what) : error(what) {}
};

// An operation would produce an algebra beyond the configured atom cap.
struct capacity_error : error {
    explicit capacity_error(const std::string& what) : error(what) {}
};

// quotient_by_element(b, 1) and friends: the quotient collapses to the
// one-element structure, which has no atom representation.
struct degenerate_quotient_error : error {
    explicit degenerate_quotient_error(const std::string& what) : error(what) {}
};

// adjoin_element with overlapping ideal generators.
struct inconsistent_extension_error : error {
    explicit inconsistent_extension_error(const std::string& what) : error(what) {}
};

// A presentation whose stage-to-stage map fails to be injective, or whose
// relations reference unknown generators.
struct presentation_error : error {
    explicit presentation_error(const std::string& what) : error(what) {}
};

// Malformed fixture or run-spec input.
struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

} // namespace baw
