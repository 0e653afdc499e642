#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "baw/errors.hpp"

namespace baw {

// Tree addresses. The root is the empty path; a child extends its parent by
// one index. Paths print as "()", "(2)", "(2,0)".
using TreePath = std::vector<std::uint32_t>;

std::string path_str(const TreePath& p);

// Strict lexicographic order on paths. A proper prefix is *incomparable*
// with its extensions: lex_less((2), (2,0)) and lex_less((2,0), (2)) are
// both false. Branch-order constraints handle extensions separately.
bool lex_less(const TreePath& a, const TreePath& b);

// p is a (not necessarily proper) prefix of q.
bool is_prefix(const TreePath& p, const TreePath& q);

// One node of a ranked tree. rank 0 marks a leaf ("final" node); ranks
// strictly decrease along edges. children lists the declared child indices,
// base the node's ground-set contribution. marked is a declared flag on the
// child set, consumed by the diagnostic layer; validation only records it.
struct SystemNode {
    TreePath path;
    std::uint32_t rank = 0;
    std::vector<std::uint32_t> children;
    bool marked = false;
    std::vector<std::uint64_t> base;
};

class LambdaSystem {
public:
    // Throws usage_error on duplicate paths. Shape problems are reported by
    // validate(), not the constructor.
    explicit LambdaSystem(std::vector<SystemNode> nodes);

    bool has(const TreePath& p) const;
    const SystemNode& node(const TreePath& p) const;
    const std::map<TreePath, SystemNode>& nodes() const { return nodes_; }

    // Leaves (rank 0), in container order.
    std::vector<TreePath> finals() const;

    // Every violated shape clause, one message each. Empty means well formed:
    //  - root present, tree closed under prefixes
    //  - each node's child-index list equals its materialized children
    //  - rank 0 exactly at childless nodes, nonempty child list elsewhere
    //  - ranks strictly decrease along edges
    //  - the root's base set is empty
    //  - for a non-root node v with parent u: rank(v) <= |base(v)| < rank(u)
    //  - sibling base sets increase with the child index
    std::vector<std::string> validate() const;

    // Common leaf depth, or nullopt when leaves sit at mixed depths.
    std::optional<std::size_t> height() const;

    // Union of base sets along the path from the root to p, inclusive.
    std::vector<std::uint64_t> base_closure(const TreePath& p) const;

private:
    std::map<TreePath, SystemNode> nodes_;
};

// A ground-set family hung on the leaves of a LambdaSystem. Each leaf gets an
// enumerated set of n_blocks * block_width distinct elements drawn from its
// base closure; position m belongs to block m / block_width. n_free rides
// along for the assembly layer (free summand width per leaf).
struct BasedFamily {
    LambdaSystem system;
    std::size_t n_blocks = 1;
    std::size_t block_width = 1;
    std::size_t n_free = 0;
    std::map<TreePath, std::vector<std::uint64_t>> sets;
    // Declared expectation for the top-stage freeness diagnostic: the root
    // child indices where the scan is expected to flag a failure.
    std::vector<std::uint32_t> expected_gamma;

    std::vector<std::string> validate() const;
    const std::vector<std::uint64_t>& set_of(const TreePath& p) const;
    std::vector<std::uint64_t> block(const TreePath& p, std::size_t k) const;
};

struct ReshuffleParams {
    // A placed node must have some block meeting the union of its
    // predecessors' sets in at most this many elements.
    std::size_t overlap_bound = 0;
    // Search nodes (placements tried) before giving up.
    std::size_t node_budget = 100000;
};

struct ReshuffleResult {
    bool ok = false;
    std::vector<TreePath> order;
    std::size_t visited = 0;
    std::string failure;
};

// Orders index_set starting at first so that every node has a block whose
// overlap with the union of all earlier sets stays within the bound.
// Deterministic: candidates are tried lexicographically, with backtracking.
ReshuffleResult reshuffle_order(const BasedFamily& f,
                                const std::vector<TreePath>& index_set,
                                const TreePath& first,
                                const ReshuffleParams& params = {});

// Branch-respecting variant. Orders the leaves lexicographically below mu
// together with index_set (leaves extending mu), under the same block
// clause plus the precedence rule: a leaf extending mu is preceded by every
// member that is lex-less than mu, and by every member extending mu whose
// child index at |mu| is <= alpha when its own index there is > alpha.
ReshuffleResult reshuffle_order_2(const BasedFamily& f, const TreePath& mu,
                                  std::int64_t alpha,
                                  const std::vector<TreePath>& index_set,
                                  const ReshuffleParams& params = {});

// Independent validators. Return a message describing the first violation,
// or nullopt when the order satisfies the clause.
std::optional<std::string> check_order_blocks(const BasedFamily& f,
                                              const std::vector<TreePath>& order,
                                              std::size_t overlap_bound);
std::optional<std::string> check_order_precedence(const BasedFamily& f,
                                                  const TreePath& mu,
                                                  std::int64_t alpha,
                                                  const std::vector<TreePath>& order);

}  // namespace baw
