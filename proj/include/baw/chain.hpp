#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "baw/finite_ba.hpp"

namespace baw {

// One defining inequality: the product of the lhs generators lies below the
// rhs generator. An empty lhs is the unit, forcing rhs to be 1.
struct Relation {
    std::vector<std::uint32_t> lhs;
    std::uint32_t rhs = 0;
    std::string label;
};

// Generators activated together, tagged with the activation cycle they
// belong to. Batches are atomic: intermediate states between members of one
// batch are never materialized.
struct StageBatch {
    std::vector<std::uint32_t> gens;
    std::size_t cycle = 0;
};

struct Presentation {
    std::size_t n_gens = 0;
    std::vector<std::string> gen_names; // optional; defaults to g<i>
    std::vector<Relation> relations;
    std::vector<StageBatch> stages;

    const std::string& name_of(std::uint32_t gen) const;
    // Throws presentation_error on inconsistencies (bad indices, a
    // generator activated twice, oversized batches).
    void validate() const;
};

// Algebra generated by the generators active after some number of batches.
// Atoms are the surviving sign patterns over the active generators, sorted
// ascending; bit i of a pattern is the sign of active[i], clear meaning
// positive, matching the free-algebra atom coding.
struct StageModel {
    FiniteBA ba;
    std::vector<std::uint64_t> minterms;
    std::vector<std::uint32_t> active;
    std::vector<std::int32_t> position; // gen id -> index in active, -1 if absent

    bool is_active(std::uint32_t gen) const {
        return gen < position.size() && position[gen] >= 0;
    }
    Elem gen(std::uint32_t gen_id) const;
    // Product of the given generators; the empty product is 1.
    Elem monomial(const std::vector<std::uint32_t>& gens) const;
};

// Escape data for one stage with an incomplete schedule: the index m such
// that the m-th partial sum of the schedule is not below that stage's best
// approximation of the target from inside the cut.
struct EscapeStep {
    std::size_t stage = 0;
    std::size_t witness = 0;
};

// Outcome of the non-principality check for a cut. When ok, escapes holds
// one witness per checked stage; otherwise refutation says which condition
// failed first.
struct CutCertificate {
    bool ok = false;
    std::string refutation;
    std::vector<EscapeStep> escapes;
};

// A finite chain of algebras presented by staged generators and monomial
// inequalities. Model t is the algebra after t batches; model 0 is the
// two-element algebra. Models and step embeddings are built lazily and
// cached; the cache is safe to share across threads.
class Chain {
public:
    explicit Chain(Presentation p);

    const Presentation& presentation() const { return pres_; }
    std::size_t stage_count() const { return pres_.stages.size() + 1; }
    std::size_t final_stage() const { return pres_.stages.size(); }
    // Stage at whose end the generator first appears.
    std::size_t arrival_stage(std::uint32_t gen) const;

    const StageModel& model(std::size_t t) const;
    const StageModel& final_model() const { return model(final_stage()); }
    // Embedding of model t into model t+1.
    const Morphism& step(std::size_t t) const;
    Morphism embed(std::size_t s, std::size_t t) const;

    // Image of model s inside model t as a subalgebra, computed by sign
    // pattern restriction rather than by composing embeddings.
    Subalgebra subalgebra_at(std::size_t s, std::size_t t) const;

    // Subalgebra of model t spanned by the active generators selected by
    // the mask (indexed by generator id).
    Subalgebra span(std::size_t t, const std::vector<bool>& select) const;

    // Whether the lower projection into the cut changes between stages t
    // and t+1, where the cut at a stage is spanned by its active selected
    // generators. Exact: true iff some element of model t+1 projects onto
    // strictly more of the cut than its stage-t counterpart did.
    bool cut_growth(std::size_t t, const std::vector<bool>& in_cut) const;

    // Certify that inside the final model the trace of the cut below the
    // target generator has no largest element at any truncation: for every
    // stage at which the schedule is still incomplete, some partial sum of
    // the schedule escapes the stage's cut approximation of the target.
    CutCertificate non_principality(const std::vector<bool>& in_cut,
                                    std::uint32_t target,
                                    const std::vector<std::uint32_t>& schedule) const;

    // Earliest stage already containing the element, together with its
    // preimage there. The element must belong to model t.
    std::pair<std::size_t, Elem> canonical_stage(std::size_t t, const Elem& x) const;

private:
    struct PreparedRelation {
        std::uint64_t lhs_mask = 0;
        std::uint64_t rhs_mask = 0;
        std::size_t index = 0;
    };

    void ensure_built(std::size_t t) const;
    void build_next() const;

    Presentation pres_;
    std::vector<std::size_t> arrival_;
    // Relations grouped by the stage at which they first apply.
    std::vector<std::vector<std::size_t>> rels_at_;

    mutable std::mutex mu_;
    mutable std::vector<std::unique_ptr<StageModel>> models_;
    mutable std::vector<std::unique_ptr<Morphism>> steps_;
    mutable std::size_t built_ = 0;
};

} // namespace baw
