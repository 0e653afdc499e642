#include "baw/chain.hpp"

#include <algorithm>
#include <limits>

namespace baw {

namespace {
constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxStageCandidates = std::size_t{1} << 28;
} // namespace

const std::string& Presentation::name_of(std::uint32_t gen) const {
    if (gen >= gen_names.size()) throw usage_error("generator id out of range");
    return gen_names[gen];
}

void Presentation::validate() const {
    if (n_gens > (std::size_t{1} << 31)) throw presentation_error("too many generators");
    std::vector<bool> seen(n_gens, false);
    for (const auto& st : stages) {
        if (st.gens.empty()) throw presentation_error("empty generator batch");
        for (auto g : st.gens) {
            if (g >= n_gens) throw presentation_error("batch references unknown generator");
            if (seen[g])
                throw presentation_error("generator " + name_of(g) + " activated twice");
            seen[g] = true;
        }
    }
    for (const auto& r : relations) {
        if (r.rhs >= n_gens) throw presentation_error("relation bound references unknown generator");
        for (auto g : r.lhs)
            if (g >= n_gens) throw presentation_error("relation references unknown generator");
    }
}

Elem StageModel::gen(std::uint32_t gen_id) const {
    if (!is_active(gen_id)) throw usage_error("generator not active at this stage");
    std::size_t pos = static_cast<std::size_t>(position[gen_id]);
    AtomSet s(minterms.size());
    for (std::size_t a = 0; a < minterms.size(); ++a)
        if (((minterms[a] >> pos) & 1) == 0) s.set(a);
    return ba.elem(std::move(s));
}

Elem StageModel::monomial(const std::vector<std::uint32_t>& gens) const {
    Elem acc = ba.one();
    for (auto g : gens) acc = acc * gen(g);
    return acc;
}

Chain::Chain(Presentation p) : pres_(std::move(p)) {
    pres_.gen_names.resize(pres_.n_gens);
    for (std::size_t g = 0; g < pres_.n_gens; ++g)
        if (pres_.gen_names[g].empty()) pres_.gen_names[g] = "g" + std::to_string(g);
    pres_.validate();

    arrival_.assign(pres_.n_gens, kNever);
    for (std::size_t t = 0; t < pres_.stages.size(); ++t)
        for (auto g : pres_.stages[t].gens) arrival_[g] = t;

    rels_at_.assign(stage_count(), {});
    for (std::size_t i = 0; i < pres_.relations.size(); ++i) {
        const Relation& r = pres_.relations[i];
        std::size_t latest = arrival_[r.rhs];
        for (auto g : r.lhs)
            if (latest != kNever)
                latest = arrival_[g] == kNever ? kNever : std::max(latest, arrival_[g]);
        if (latest != kNever) rels_at_[latest + 1].push_back(i);
    }

    models_.resize(stage_count());
    steps_.resize(pres_.stages.size());

    auto m0 = std::make_unique<StageModel>(StageModel{
        FiniteBA(1), {0}, {}, std::vector<std::int32_t>(pres_.n_gens, -1)});
    models_[0] = std::move(m0);
    built_ = 1;
}

std::size_t Chain::arrival_stage(std::uint32_t gen) const {
    if (gen >= pres_.n_gens || arrival_[gen] == kNever)
        throw usage_error("generator never activated");
    return arrival_[gen];
}

const StageModel& Chain::model(std::size_t t) const {
    if (t >= stage_count()) throw usage_error("stage index out of range");
    ensure_built(t);
    return *models_[t];
}

const Morphism& Chain::step(std::size_t t) const {
    if (t + 1 >= stage_count()) throw usage_error("step index out of range");
    ensure_built(t + 1);
    return *steps_[t];
}

void Chain::ensure_built(std::size_t t) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (built_ <= t) build_next();
}

void Chain::build_next() const {
    std::size_t t = built_; // model being built
    const StageModel& prev = *models_[t - 1];
    const StageBatch& batch = pres_.stages[t - 1];
    std::size_t n_old = prev.active.size();
    std::size_t k = batch.gens.size();
    if (n_old + k > 63) throw capacity_error("more than 63 active generators");
    if (k >= 40 || (prev.minterms.size() << k) > kMaxStageCandidates)
        throw capacity_error("stage expansion too large");

    std::vector<std::int32_t> position = prev.position;
    std::vector<std::uint32_t> active = prev.active;
    for (auto g : batch.gens) {
        position[g] = static_cast<std::int32_t>(active.size());
        active.push_back(g);
    }

    // Masks for the relations that become fully active with this batch.
    struct Prepared {
        std::uint64_t lhs = 0, rhs = 0;
        std::size_t index = 0;
    };
    std::vector<Prepared> rels;
    for (auto ri : rels_at_[t]) {
        const Relation& r = pres_.relations[ri];
        Prepared pr;
        pr.index = ri;
        pr.rhs = std::uint64_t{1} << position[r.rhs];
        for (auto g : r.lhs) pr.lhs |= std::uint64_t{1} << position[g];
        rels.push_back(pr);
    }
    auto violated = [&](std::uint64_t mask) -> const Prepared* {
        for (const auto& pr : rels)
            if ((mask & pr.lhs) == 0 && (mask & pr.rhs) != 0) return &pr;
        return nullptr;
    };

    std::vector<std::uint64_t> minterms;
    std::vector<std::uint32_t> fiber;
    std::vector<std::uint32_t> children(prev.minterms.size(), 0);
    for (std::uint64_t sigma = 0; sigma < (std::uint64_t{1} << k); ++sigma) {
        std::uint64_t high = sigma << n_old;
        for (std::size_t pi = 0; pi < prev.minterms.size(); ++pi) {
            std::uint64_t mask = prev.minterms[pi] | high;
            if (violated(mask)) continue;
            minterms.push_back(mask);
            fiber.push_back(static_cast<std::uint32_t>(pi));
            ++children[pi];
        }
    }

    for (std::size_t pi = 0; pi < children.size(); ++pi) {
        if (children[pi] != 0) continue;
        // Every sign pattern over the batch died on this atom; report one
        // of the relations responsible.
        const Prepared* pr = violated(prev.minterms[pi]);
        for (std::uint64_t sigma = 0; !pr && sigma < (std::uint64_t{1} << k); ++sigma)
            pr = violated(prev.minterms[pi] | (sigma << n_old));
        const Relation& r = pres_.relations[pr->index];
        std::string label = r.label.empty()
                                ? pres_.name_of(r.rhs) + " bound"
                                : r.label;
        throw presentation_error("stage " + std::to_string(t) +
                                 " embedding fails: relation " + label +
                                 " removes every extension of an atom");
    }

    auto sm = std::make_unique<StageModel>(StageModel{
        FiniteBA(minterms.size()), std::move(minterms), std::move(active),
        std::move(position)});
    steps_[t - 1] = std::make_unique<Morphism>(prev.ba, sm->ba, std::move(fiber));
    models_[t] = std::move(sm);
    ++built_;
}

Morphism Chain::embed(std::size_t s, std::size_t t) const {
    if (s > t || t >= stage_count()) throw usage_error("bad stage range");
    if (s == t) return Morphism::identity(model(s).ba);
    Morphism m = step(s);
    for (std::size_t u = s + 1; u < t; ++u) m = Morphism::compose(step(u), m);
    return m;
}

Subalgebra Chain::subalgebra_at(std::size_t s, std::size_t t) const {
    if (s > t || t >= stage_count()) throw usage_error("bad stage range");
    const StageModel& ms = model(s);
    const StageModel& mt = model(t);
    std::uint64_t prefix = ms.active.empty()
                               ? 0
                               : (std::uint64_t{1} << ms.active.size()) - 1;
    std::vector<std::uint32_t> labels(mt.minterms.size());
    for (std::size_t a = 0; a < mt.minterms.size(); ++a) {
        std::uint64_t cut = mt.minterms[a] & prefix;
        auto it = std::lower_bound(ms.minterms.begin(), ms.minterms.end(), cut);
        if (it == ms.minterms.end() || *it != cut)
            throw usage_error("stage restriction missing an atom");
        labels[a] = static_cast<std::uint32_t>(it - ms.minterms.begin());
    }
    return from_atom_blocks(mt.ba.id(), std::move(labels));
}

Subalgebra Chain::span(std::size_t t, const std::vector<bool>& select) const {
    if (select.size() != pres_.n_gens) throw usage_error("selection mask size mismatch");
    const StageModel& m = model(t);
    std::vector<Elem> gens;
    for (auto g : m.active)
        if (select[g]) gens.push_back(m.gen(g));
    return Subalgebra::generated(m.ba, gens);
}

bool Chain::cut_growth(std::size_t t, const std::vector<bool>& in_cut) const {
    Subalgebra before = span(t, in_cut);
    Subalgebra after = span(t + 1, in_cut);
    const auto& fiber = step(t).fiber();

    std::vector<std::size_t> stamp(model(t).ba.atom_count(),
                                   std::numeric_limits<std::size_t>::max());
    for (std::size_t d = 0; d < after.block_count(); ++d) {
        std::size_t seen = 0;
        std::uint32_t home = before.block_of(fiber[*after.block_begin(d)]);
        for (auto p = after.block_begin(d); p != after.block_end(d); ++p) {
            std::uint32_t s = fiber[*p];
            if (stamp[s] != d) {
                stamp[s] = d;
                ++seen;
            }
            if (before.block_of(s) != home)
                throw usage_error("cut blocks straddle a stage embedding");
        }
        if (seen < before.block_size(home)) return true;
    }
    return false;
}

CutCertificate Chain::non_principality(const std::vector<bool>& in_cut,
                                       std::uint32_t target,
                                       const std::vector<std::uint32_t>& schedule) const {
    if (in_cut.size() != pres_.n_gens) throw usage_error("selection mask size mismatch");
    const StageModel& fm = final_model();
    if (!fm.is_active(target)) throw usage_error("target generator never activated");

    CutCertificate cert;
    for (auto g : schedule) {
        if (g >= pres_.n_gens) throw usage_error("schedule references unknown generator");
        if (!in_cut[g]) {
            cert.refutation = "schedule step " + pres_.name_of(g) + " lies outside the cut";
            return cert;
        }
    }

    // Materialized prefix of the schedule.
    std::size_t m_count = 0;
    while (m_count < schedule.size() && fm.is_active(schedule[m_count])) ++m_count;
    if (m_count == 0) {
        cert.refutation = "no stage leaves the schedule incomplete";
        return cert;
    }

    Elem x = fm.gen(target);
    std::vector<Elem> sums; // sums[m] is the m-th partial sum, m >= 1
    sums.push_back(fm.ba.zero());
    for (std::size_t m = 0; m < m_count; ++m) {
        Elem next = sums.back() + fm.gen(schedule[m]);
        if (next == sums.back()) {
            cert.refutation = "schedule stalls at step " + std::to_string(m + 1);
            return cert;
        }
        if (!(next <= x)) {
            cert.refutation = "schedule step " + std::to_string(m + 1) +
                              " is not below " + pres_.name_of(target);
            return cert;
        }
        sums.push_back(next);
    }

    for (std::size_t t = 0; t <= final_stage(); ++t) {
        bool incomplete = false;
        for (std::size_t m = 0; m < m_count && !incomplete; ++m)
            incomplete = arrival_[schedule[m]] >= t;
        if (!incomplete) continue;

        std::vector<bool> select(pres_.n_gens, false);
        for (std::size_t g = 0; g < pres_.n_gens; ++g)
            select[g] = in_cut[g] && arrival_[g] != kNever && arrival_[g] < t;
        Elem approx = span(final_stage(), select).lpr(x);

        std::size_t witness = 0;
        for (std::size_t m = 1; m <= m_count && witness == 0; ++m)
            if (!(sums[m] <= approx)) witness = m;
        if (witness == 0) {
            cert.refutation = "stage " + std::to_string(t) +
                              " approximation absorbs the whole schedule";
            return cert;
        }
        cert.escapes.push_back(EscapeStep{t, witness});
    }

    if (cert.escapes.empty()) {
        cert.refutation = "no stage leaves the schedule incomplete";
        return cert;
    }
    cert.ok = true;
    return cert;
}

std::pair<std::size_t, Elem> Chain::canonical_stage(std::size_t t, const Elem& x) const {
    model(t).ba.check_owns(x);
    std::size_t s = t;
    Elem cur = x;
    while (s > 0) {
        const Morphism& st = step(s - 1);
        Elem pre = st.preimage_lower(cur, model(s - 1).ba);
        if (st.map(pre) != cur) break;
        cur = pre;
        --s;
    }
    return {s, cur};
}

} // namespace baw
