#pragma once

#include <cstdint>
#include <vector>

#include "baw/lambda_system.hpp"

namespace baw::fixtures {

// Height-two family over a two-branch tree: root children 2 and 5, two
// leaves under each. Every leaf carries a 2x1 block grid plus one free
// generator. The shared variant lets leaf (5,0) reuse element 3 from leaf
// (2,1); the disjoint variant keeps all leaf sets apart.
std::vector<SystemNode> height2_nodes(bool shared);
BasedFamily height2_family(bool shared);

// Flat families for ordering exercises: leaves directly under the root, base
// sets accumulated so that sibling sets increase with the child index.
BasedFamily flat_family(std::vector<std::vector<std::uint64_t>> leaf_sets,
                        std::vector<std::uint32_t> indices);

// Greedy placement from (9) dead-ends after (0),(1) and must back up: leaf
// (2) shares 6 with (1) and 2 with (0), but placing (2) before (1) works.
BasedFamily backtrack_family();

// Pairwise single overlaps hitting both blocks of whichever leaf comes last.
BasedFamily triangle_family();

BasedFamily twin_family();

} // namespace baw::fixtures
