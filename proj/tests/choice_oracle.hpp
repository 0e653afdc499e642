#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "baw/transversal.hpp"

namespace baw::oracle {

// Exhaustive search over all choice functions. Exponential; meant for
// families of at most ~8 sets of size at most ~6.
inline bool choice_search(const SetFamily& f, std::size_t i, std::set<std::uint64_t>& used) {
    if (i == f.sets.size()) return true;
    for (auto e : f.sets[i]) {
        if (!used.insert(e).second) continue;
        if (choice_search(f, i + 1, used)) return true;
        used.erase(e);
    }
    return false;
}

inline bool has_transversal(const SetFamily& f) {
    std::set<std::uint64_t> used;
    return choice_search(f, 0, used);
}

} // namespace baw::oracle
