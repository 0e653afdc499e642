#include "baw/tight_coding.hpp"

#include <algorithm>
#include <set>

namespace baw {

namespace {

std::string gen_name(const Ordinal& o) { return "x(" + o.str() + ")"; }

} // namespace

TightCoding::TightCoding(TightCodingParams params) : params_(std::move(params)) {
    if (params_.k_max == 0) throw usage_error("k_max must be at least 1");
    if (params_.k_max == 1 && !(params_.s_set.empty() && params_.ladders.empty()))
        throw usage_error("no limits exist below w");

    std::set<std::uint64_t> s_ranks;
    for (const auto& s : params_.s_set) {
        if (!s.is_limit() || s.k >= params_.k_max)
            throw usage_error("designated ordinal " + s.str() + " is not a limit in range");
        s_ranks.insert(s.rank());
    }

    std::map<std::uint64_t, std::vector<Ordinal>> overrides;
    for (const auto& [limit, pts] : params_.ladders) {
        if (!limit.is_limit() || limit.k >= params_.k_max)
            throw usage_error("ladder attached to " + limit.str());
        std::uint64_t prev = 0;
        bool first = true;
        for (const auto& p : pts) {
            if (p.rank() >= limit.rank())
                throw usage_error("ladder point " + p.str() + " not below " + limit.str());
            if (s_ranks.count(p.rank()))
                throw usage_error("ladder point " + p.str() + " lies in the designated set");
            if (!first && p.rank() <= prev)
                throw usage_error("ladder of " + limit.str() + " is not increasing");
            prev = p.rank();
            first = false;
        }
        if (!overrides.emplace(limit.rank(), pts).second)
            throw usage_error("two ladders for " + limit.str());
    }

    std::vector<StageBatch> stages;
    std::vector<Relation> relations;
    auto activate = [&](const Ordinal& o, std::size_t cycle) {
        std::uint32_t id = static_cast<std::uint32_t>(ord_.size());
        ord_.push_back(o);
        gen_by_rank_[o.rank()] = id;
        stages.push_back(StageBatch{{id}, cycle});
        return id;
    };

    std::vector<bool> cycle_full;
    if (params_.k_max == 1) {
        for (std::size_t i = 0; i < params_.budget; ++i)
            activate(Ordinal{0, static_cast<std::uint32_t>(i)}, i);
    } else {
        std::vector<Ordinal> limits;
        for (std::uint32_t k = 1; k < params_.k_max; ++k)
            limits.push_back(Ordinal{k, 0});

        // The limit entry of the ladder cycle c is its (c-1)-th point.
        auto ladder_entry = [&](const Ordinal& l, std::size_t idx) -> std::optional<Ordinal> {
            auto it = overrides.find(l.rank());
            if (it != overrides.end()) {
                if (idx >= it->second.size()) return std::nullopt;
                return it->second[idx];
            }
            if (idx >= 0x7fffffff) return std::nullopt;
            return Ordinal{l.k - 1, static_cast<std::uint32_t>(idx + 1)};
        };

        std::size_t emitted = 0;
        for (const auto& l : limits)
            if (ord_.size() < params_.budget) {
                activate(l, 0);
                ++emitted;
            }
        cycle_full.push_back(emitted == limits.size());

        bool out_of_budget = ord_.size() >= params_.budget;
        for (std::size_t c = 1; !out_of_budget; ++c) {
            std::size_t planned = 0, got = 0;
            for (const auto& l : limits) {
                auto entry = ladder_entry(l, c - 1);
                if (!entry) continue;
                ++planned;
                std::uint32_t eid;
                auto known = gen_by_rank_.find(entry->rank());
                if (known != gen_by_rank_.end()) {
                    eid = known->second;
                } else if (ord_.size() < params_.budget) {
                    eid = activate(*entry, c);
                } else {
                    out_of_budget = true;
                    continue;
                }
                ++got;
                ladder_gens_[l.rank()].push_back(eid);
                if (s_ranks.count(l.rank())) {
                    std::uint32_t lid = gen_by_rank_.at(l.rank());
                    relations.push_back(Relation{
                        {eid}, lid, gen_name(*entry) + " <= " + gen_name(l)});
                    bound_gens_[lid].push_back(eid);
                }
            }
            if (planned == 0) break;
            cycle_full.push_back(planned == got);
            if (ord_.size() >= params_.budget) out_of_budget = true;
        }
    }

    for (std::size_t c = cycle_full.size(); c-- > 1;)
        if (cycle_full[c]) {
            last_full_cycle_ = c;
            break;
        }

    Presentation pres;
    pres.n_gens = ord_.size();
    for (const auto& o : ord_) pres.gen_names.push_back(gen_name(o));
    pres.relations = std::move(relations);
    pres.stages = std::move(stages);
    chain_ = std::make_unique<Chain>(std::move(pres));
}

Ordinal TightCoding::ordinal_of(std::uint32_t gen) const {
    if (gen >= ord_.size()) throw usage_error("generator id out of range");
    return ord_[gen];
}

std::optional<std::uint32_t> TightCoding::gen_of(const Ordinal& o) const {
    auto it = gen_by_rank_.find(o.rank());
    if (it == gen_by_rank_.end()) return std::nullopt;
    return it->second;
}

std::vector<Ordinal> TightCoding::active_limits() const {
    std::vector<Ordinal> out;
    for (const auto& o : ord_)
        if (o.is_limit()) out.push_back(o);
    std::sort(out.begin(), out.end());
    return out;
}

bool TightCoding::designated(const Ordinal& o) const {
    for (const auto& s : params_.s_set)
        if (s == o) return true;
    return false;
}

std::vector<std::uint32_t> TightCoding::ladder_prefix(const Ordinal& limit) const {
    auto it = ladder_gens_.find(limit.rank());
    if (it == ladder_gens_.end()) return {};
    return it->second;
}

std::vector<bool> TightCoding::cut_below(std::uint64_t rank) const {
    std::vector<bool> cut(ord_.size(), false);
    for (std::size_t g = 0; g < ord_.size(); ++g) cut[g] = ord_[g].rank() < rank;
    return cut;
}

std::vector<TightCoding::StabilityRow> TightCoding::rc_check() const {
    std::vector<StabilityRow> rows;
    auto lims = active_limits();
    if (lims.empty()) return rows;
    if (!last_full_cycle_)
        throw usage_error("budget does not complete a ladder cycle");
    std::size_t window = *last_full_cycle_;

    for (const auto& alpha : lims) {
        StabilityRow row;
        row.limit = alpha;
        auto cut = cut_below(alpha.rank());
        bool window_growth = false;
        for (std::size_t t = 0; t + 1 < chain_->stage_count(); ++t) {
            if (!chain_->cut_growth(t, cut)) continue;
            row.growth_stages.push_back(t + 1);
            if (chain_->presentation().stages[t].cycle == window) window_growth = true;
        }
        if (!row.growth_stages.empty()) row.stamp = row.growth_stages.back();
        row.stable = !window_growth;
        rows.push_back(std::move(row));
    }
    return rows;
}

TightCoding::LprCheck TightCoding::verify_rc() const {
    LprCheck res;
    auto lims = active_limits();
    for (std::size_t t = 1; t < chain_->stage_count(); ++t) {
        const StageModel& m = chain_->model(t);
        for (const auto& delta : lims) {
            std::uint32_t dgen = *gen_of(delta);
            if (!m.is_active(dgen)) continue;
            Subalgebra cut = chain_->span(t, cut_below(delta.rank()));
            for (const auto& beta : lims) {
                if (delta.rank() > beta.rank()) continue;
                std::uint32_t bgen = *gen_of(beta);
                if (!m.is_active(bgen)) continue;
                Elem expect = m.ba.zero();
                auto it = bound_gens_.find(bgen);
                if (it != bound_gens_.end())
                    for (auto e : it->second)
                        if (m.is_active(e) && ord_[e].rank() < delta.rank())
                            expect = expect + m.gen(e);
                ++res.pairs;
                if (cut.lpr(m.gen(bgen)) != expect) {
                    if (res.failures == 0)
                        res.first_failure = "stage " + std::to_string(t) + ": " +
                                            beta.str() + " under the cut at " + delta.str();
                    ++res.failures;
                }
            }
        }
    }
    return res;
}

CutCertificate TightCoding::verify_non_rc(const Ordinal& alpha) const {
    auto gen = gen_of(alpha);
    if (!alpha.is_limit() || !gen)
        throw usage_error("no activated limit " + alpha.str());
    return chain_->non_principality(cut_below(alpha.rank()), *gen, ladder_prefix(alpha));
}

std::vector<Ordinal> TightCoding::fingerprint(const std::vector<Ordinal>& scope) const {
    std::vector<Ordinal> out;
    for (const auto& o : scope)
        if (verify_non_rc(o).ok) out.push_back(o);
    std::sort(out.begin(), out.end());
    return out;
}

TightCoding::ZeroScan TightCoding::zero_product_scan(std::size_t stage) const {
    const StageModel& m = chain_->model(stage);
    std::size_t k = m.active.size();
    std::vector<std::size_t> pow3(k + 1, 1);
    for (std::size_t i = 1; i <= k; ++i) {
        if (pow3[i - 1] > 2000000 / 3) throw capacity_error("sign pattern scan too large");
        pow3[i] = pow3[i - 1] * 3;
    }

    // Bounds with both ends active, as (lower position, limit position),
    // grouped by the later of the two for incremental bookkeeping.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_depth(k);
    for (const auto& r : chain_->presentation().relations) {
        if (r.lhs.size() != 1) continue;
        if (!m.is_active(r.lhs[0]) || !m.is_active(r.rhs)) continue;
        std::size_t lp = static_cast<std::size_t>(m.position[r.lhs[0]]);
        std::size_t rp = static_cast<std::size_t>(m.position[r.rhs]);
        by_depth[std::max(lp, rp)].push_back({lp, rp});
    }

    std::vector<Elem> pos, neg;
    for (std::size_t d = 0; d < k; ++d) {
        pos.push_back(m.gen(m.active[d]));
        neg.push_back(-pos.back());
    }

    ZeroScan out;
    std::vector<int> digit(k, 0);
    std::vector<Elem> prod(k + 1, m.ba.one());
    std::vector<int> met(k + 1, 0);

    auto rec = [&](auto&& self, std::size_t d) -> void {
        if (d == k) {
            ++out.checked;
            bool zero = prod[k].is_zero();
            if (zero) ++out.zeros;
            if (zero != (met[k] > 0)) ++out.mismatches;
            return;
        }
        for (int v = 0; v < 3; ++v) {
            digit[d] = v;
            prod[d + 1] = v == 0 ? prod[d] : v == 1 ? prod[d] * pos[d] : prod[d] * neg[d];
            int add = 0;
            for (const auto& [lp, rp] : by_depth[d])
                if (digit[lp] == 1 && digit[rp] == 2) ++add;
            met[d + 1] = met[d] + add;
            // A zero product already explained stays explained under any
            // extension; count the subtree wholesale.
            if (met[d + 1] > 0 && prod[d + 1].is_zero()) {
                out.checked += pow3[k - d - 1];
                out.zeros += pow3[k - d - 1];
                continue;
            }
            self(self, d + 1);
        }
        digit[d] = 0;
    };
    rec(rec, 0);
    return out;
}

} // namespace baw
