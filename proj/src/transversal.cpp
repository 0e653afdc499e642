#include "baw/transversal.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace baw {

namespace {

struct Matcher {
    const SetFamily& f;
    std::map<std::uint64_t, std::size_t> owner; // element -> index matched to it
    std::set<std::uint64_t> visited;            // elements touched by the current augmentation

    explicit Matcher(const SetFamily& fam) : f(fam) {}

    bool augment(std::size_t i) {
        for (auto e : f.sets[i]) {
            if (!visited.insert(e).second) continue;
            auto it = owner.find(e);
            if (it == owner.end() || augment(it->second)) {
                owner[e] = i;
                return true;
            }
        }
        return false;
    }
};

} // namespace

TransversalResult find_transversal(const SetFamily& f) {
    Matcher m(f);
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        m.visited.clear();
        if (m.augment(i)) continue;

        // The failed alternating search saw exactly the neighborhood of the
        // blocked index set: i itself plus the owners of every visited
        // element. Recompute the neighborhood from the sets as a cross-check.
        HallViolator v;
        std::set<std::size_t> js{i};
        for (auto e : m.visited) js.insert(m.owner.at(e));
        v.indices.assign(js.begin(), js.end());
        std::set<std::uint64_t> hood;
        for (auto j : v.indices) hood.insert(f.sets[j].begin(), f.sets[j].end());
        v.neighborhood.assign(hood.begin(), hood.end());
        if (v.neighborhood.size() >= v.indices.size())
            throw error("matching produced a spurious violator");
        return v;
    }

    Transversal t;
    t.choice.resize(f.sets.size());
    std::vector<bool> placed(f.sets.size(), false);
    for (const auto& [e, i] : m.owner) {
        t.choice[i] = e;
        placed[i] = true;
    }
    for (std::size_t i = 0; i < placed.size(); ++i)
        if (!placed[i]) throw error("matching lost an index");
    return t;
}

AlmostFreeReport almost_free_sweep(const SetFamily& f) {
    if (f.sets.empty()) throw usage_error("almost-freeness needs a nonempty family");
    AlmostFreeReport rep;
    rep.free = std::holds_alternative<Transversal>(find_transversal(f));
    for (std::size_t omit = 0; omit < f.sets.size(); ++omit) {
        SetFamily sub;
        for (std::size_t i = 0; i < f.sets.size(); ++i)
            if (i != omit) sub.sets.push_back(f.sets[i]);
        if (!std::holds_alternative<Transversal>(find_transversal(sub)))
            rep.failing_omissions.push_back(omit);
    }
    rep.almost_free = rep.failing_omissions.empty();
    return rep;
}

SetFamily family_from_lambda_system(const BasedFamily& f) {
    if (auto bad = f.validate(); !bad.empty())
        throw usage_error("based family fails validation: " + bad.front());
    SetFamily out;
    for (const auto& p : f.system.finals()) out.sets.push_back(f.set_of(p));
    return out;
}

} // namespace baw
