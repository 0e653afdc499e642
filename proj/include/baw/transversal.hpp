#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "baw/lambda_system.hpp"

namespace baw {

// Indexed family of finite sets; the index set is the position range.
struct SetFamily {
    std::vector<std::vector<std::uint64_t>> sets;
};

// A one-one choice function: choice[i] is drawn from sets[i], all values
// pairwise distinct.
struct Transversal {
    std::vector<std::uint64_t> choice;
};

// Indices whose combined neighborhood is strictly smaller than the index
// set itself, certifying that no transversal exists.
struct HallViolator {
    std::vector<std::size_t> indices;
    std::vector<std::uint64_t> neighborhood;
};

using TransversalResult = std::variant<Transversal, HallViolator>;

// Maximum bipartite matching by augmenting paths, indices and set entries
// tried in order, so the result is reproducible. Returns the choice function
// when the matching covers every index, otherwise the violating index set
// harvested from the first failed augmentation; its neighborhood is
// recomputed from the sets before returning.
TransversalResult find_transversal(const SetFamily& f);

struct AlmostFreeReport {
    bool free = false;
    bool almost_free = false;
    // Indices whose omit-one subfamily has no transversal.
    std::vector<std::size_t> failing_omissions;
};

// Tests the whole family and each subfamily omitting a single index. Proper
// subfamilies are monotone in the subset order, so the omit-one sweep decides
// almost-freeness. Requires a nonempty family.
AlmostFreeReport almost_free_sweep(const SetFamily& f);

// The leaf sets of a validated based family, in leaf container order.
SetFamily family_from_lambda_system(const BasedFamily& f);

} // namespace baw
