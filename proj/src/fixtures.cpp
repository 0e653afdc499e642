#include "baw/fixtures.hpp"

#include <algorithm>

namespace baw::fixtures {

std::vector<SystemNode> height2_nodes(bool shared) {
    std::vector<SystemNode> nodes;
    nodes.push_back({TreePath{}, 10, {2, 5}, shared, {}});
    nodes.push_back({TreePath{2}, 1, {0, 1}, false, {0, 1, 2, 3}});
    nodes.push_back({TreePath{5}, 1, {0, 1}, false, {0, 1, 2, 3, 4, 5, 6, 7}});
    nodes.push_back({TreePath{2, 0}, 0, {}, false, {}});
    nodes.push_back({TreePath{2, 1}, 0, {}, false, {}});
    nodes.push_back({TreePath{5, 0}, 0, {}, false, {}});
    nodes.push_back({TreePath{5, 1}, 0, {}, false, {}});
    return nodes;
}

BasedFamily height2_family(bool shared) {
    BasedFamily f{LambdaSystem(height2_nodes(shared)), 2, 1, 1, {}, {}};
    f.sets[TreePath{2, 0}] = {0, 1};
    f.sets[TreePath{2, 1}] = {2, 3};
    f.sets[TreePath{5, 0}] =
        shared ? std::vector<std::uint64_t>{3, 4} : std::vector<std::uint64_t>{4, 5};
    f.sets[TreePath{5, 1}] = {6, 7};
    if (shared) f.expected_gamma = {2, 5};
    return f;
}

BasedFamily flat_family(std::vector<std::vector<std::uint64_t>> leaf_sets,
                        std::vector<std::uint32_t> indices) {
    std::vector<SystemNode> nodes;
    nodes.push_back({TreePath{}, 10, indices, false, {}});
    std::vector<std::uint64_t> acc;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        for (auto e : leaf_sets[i]) acc.push_back(e);
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        nodes.push_back({TreePath{indices[i]}, 0, {}, false, acc});
    }
    BasedFamily f{LambdaSystem(std::move(nodes)), 2, 1, 0, {}, {}};
    for (std::size_t i = 0; i < indices.size(); ++i) f.sets[TreePath{indices[i]}] = leaf_sets[i];
    return f;
}

BasedFamily backtrack_family() {
    return flat_family({{1, 2}, {5, 6}, {6, 2}, {8, 9}}, {0, 1, 2, 9});
}

BasedFamily triangle_family() {
    return flat_family({{1, 2}, {1, 3}, {2, 3}}, {0, 1, 2});
}

BasedFamily twin_family() { return flat_family({{1, 2}, {1, 2}}, {0, 1}); }

} // namespace baw::fixtures
