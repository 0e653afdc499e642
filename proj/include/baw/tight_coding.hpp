#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "baw/chain.hpp"
#include "baw/ordinal.hpp"

namespace baw {

// Staged generator system indexed by ordinals below w*k_max. The limits
// w, w*2, ... arrive first; afterwards each activation cycle hands every
// limit the next point of its ladder. Ladder points of the designated
// limits are bound below their limit; everything else is free.
struct TightCodingParams {
    std::uint32_t k_max = 1;       // limits are w*k for 1 <= k < k_max
    std::size_t budget = 0;        // total generators activated
    std::vector<Ordinal> s_set;    // designated limits
    // Ladder overrides per limit; the default ladder of w*k walks the
    // successors w*(k-1)+1, w*(k-1)+2, ...
    std::vector<std::pair<Ordinal, std::vector<Ordinal>>> ladders;
};

class TightCoding {
public:
    explicit TightCoding(TightCodingParams params);

    const TightCodingParams& params() const { return params_; }
    const Chain& chain() const { return *chain_; }

    Ordinal ordinal_of(std::uint32_t gen) const;
    std::optional<std::uint32_t> gen_of(const Ordinal& o) const;
    std::vector<Ordinal> active_limits() const;
    bool designated(const Ordinal& o) const;
    // Activated ladder points of the limit, in ladder order.
    std::vector<std::uint32_t> ladder_prefix(const Ordinal& limit) const;
    // Last activation cycle that every limit completed, if any.
    std::optional<std::size_t> last_full_cycle() const { return last_full_cycle_; }

    // Stability of the cut below each activated limit. A growth stage t
    // means the projection table into the cut changed when batch t-1
    // arrived; stable means the last full cycle saw no growth.
    struct StabilityRow {
        Ordinal limit;
        std::vector<std::size_t> growth_stages;
        std::optional<std::size_t> stamp;
        bool stable = false;
    };
    std::vector<StabilityRow> rc_check() const;

    // Exhaustive check of the projection closed form: at every stage, the
    // projection of a limit generator into the cut below an active limit
    // equals the join of its active bound ladder points under that cut.
    struct LprCheck {
        std::size_t pairs = 0;
        std::size_t failures = 0;
        std::string first_failure;
    };
    LprCheck verify_rc() const;

    // Non-principality certificate for the cut below alpha targeting the
    // limit generator, scheduled along alpha's ladder.
    CutCertificate verify_non_rc(const Ordinal& alpha) const;

    // Limits in the scope whose cut certificate succeeds. Recovers the
    // designated set without looking at the construction parameters.
    std::vector<Ordinal> fingerprint(const std::vector<Ordinal>& scope) const;

    // Every sign pattern over the active generators of the stage, with the
    // kernel's product compared against the relation-based zero test.
    struct ZeroScan {
        std::size_t checked = 0;
        std::size_t zeros = 0;
        std::size_t mismatches = 0;
    };
    ZeroScan zero_product_scan(std::size_t stage) const;

private:
    std::vector<bool> cut_below(std::uint64_t rank) const;

    TightCodingParams params_;
    std::vector<Ordinal> ord_;
    std::map<std::uint64_t, std::uint32_t> gen_by_rank_;
    std::map<std::uint64_t, std::vector<std::uint32_t>> ladder_gens_;
    // Bound ladder points per designated limit generator.
    std::map<std::uint32_t, std::vector<std::uint32_t>> bound_gens_;
    std::optional<std::size_t> last_full_cycle_;
    std::unique_ptr<Chain> chain_;
};

} // namespace baw
