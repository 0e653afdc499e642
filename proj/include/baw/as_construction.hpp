#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "baw/cp_plus.hpp"
#include "baw/lambda_system.hpp"

namespace baw {

// Two leaf positions sharing a ground element; the assembly identifies
// their grid cells.
struct GluePair {
    std::size_t leaf_a = 0;
    std::size_t pos_a = 0;
    std::size_t leaf_b = 0;
    std::size_t pos_b = 0;
    std::uint64_t ground = 0;
};

// One leaf joining the running span during a decomposition walk.
struct SpanStep {
    TreePath path;
    std::vector<std::size_t> shared_positions;
    std::size_t complement_blocks = 0;
    bool ok = false;
    std::string note;
};

// Certificate that the target stage decomposes over the base stage leaf by
// leaf: a placement order obeying the reshuffle rules, a uniform splitting
// of the base blocks inside the target, and per leaf a complementary slice
// independent from the span walked so far. The walk stops at the first
// failing leaf; span carries the final partition on success.
struct SpanWitness {
    bool ok = false;
    bool uniform_split = false;
    std::vector<TreePath> order;
    std::vector<SpanStep> steps;
    std::string note;
    std::optional<Subalgebra> span;
};

struct GammaReport {
    std::vector<std::uint32_t> flagged;
    bool matches_declared = false;
    // The scan sees only the materialized top stage, not limit behaviour.
    std::string scope_note;
};

struct StageProbe {
    std::string what;
    std::size_t least_cut = 0;
    bool found = false;
    bool dual_route = false;
    bool routes_agree = true;
};

// Projection certificate at one branch: every probed element of the next
// stage enters some second-level stage, its maximal restriction onto the
// branch stage exists, and where a decomposition witness is available the
// slice-wise projection formula agrees with the direct one.
struct StageReport {
    std::uint32_t branch = 0;
    bool marked = false;
    std::vector<std::size_t> cuts;
    std::vector<bool> cut_witnessed;
    std::vector<StageProbe> probes;
    bool ok = false;
    std::string note;
};

// The assembled algebra of a validated based family. Every leaf carries a
// grid triple with n_blocks rows, block_width columns and n_free tail
// generators; the triples are joined freely in leaf order, and ground
// collisions between leaf enumerations glue the matching cells via the
// smallest congruence identifying them.
class Assembly {
public:
    explicit Assembly(BasedFamily family);

    const BasedFamily& family() const { return family_; }
    const FiniteBA& joint() const { return joint_->ba; }   // before gluing
    const FiniteBA& algebra() const { return glued_->ba; } // after gluing
    const Morphism& gluing() const { return glued_->proj; }
    const std::vector<TreePath>& leaves() const { return leaves_; }
    const std::vector<GluePair>& glue() const { return glue_; }

    std::size_t leaf_index(const TreePath& p) const;
    const GridTriple& triple(std::size_t leaf) const { return triples_[leaf]; }
    // Injection of one leaf's algebra into the joint algebra.
    const Morphism& inject(std::size_t leaf) const;

    // Images in the assembled algebra. Positions number the grid cells row
    // by row, matching the leaf's ground enumeration.
    Elem cell_image(std::size_t leaf, std::size_t pos) const;
    Elem x_image(std::size_t leaf) const;
    const std::vector<Elem>& leaf_images(std::size_t leaf) const;

    // One past the largest root child index: the cut where the stages
    // exhaust the algebra.
    std::size_t top_cut() const;
    std::size_t branch_top(std::uint32_t branch) const;

    // Span of every leaf whose first index lies below the cut.
    Subalgebra stage(std::size_t cut) const;
    // Span of stage(branch) plus the branch leaves with second index below
    // sub.
    Subalgebra branch_stage(std::uint32_t branch, std::size_t sub) const;

    SpanWitness stage_decomposition(std::size_t from, std::size_t to) const;
    SpanWitness branch_decomposition(std::uint32_t branch, std::size_t sub) const;

    // Flags every root child whose tail fails to decompose over its stage.
    GammaReport gamma_scan() const;

    StageReport stage_report(std::uint32_t branch, std::uint64_t seed,
                             std::size_t samples) const;

private:
    SpanWitness decompose(const Subalgebra& base, const Subalgebra& target,
                          std::size_t base_cut, const ReshuffleResult& ord) const;
    void require_height2() const;

    BasedFamily family_;
    std::vector<TreePath> leaves_;
    std::vector<GridTriple> triples_;
    std::optional<CoproductResult> joint_;
    std::optional<QuotientResult> glued_;
    std::vector<GluePair> glue_;
    std::vector<std::vector<Elem>> images_;
};

} // namespace baw
