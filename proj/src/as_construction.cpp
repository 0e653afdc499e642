#include "baw/as_construction.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace baw {

Assembly::Assembly(BasedFamily family) : family_(std::move(family)) {
    auto problems = family_.validate();
    if (!problems.empty())
        throw usage_error("based family fails validation: " + problems.front());
    leaves_ = family_.system.finals();

    CpPlusParams p{family_.n_blocks, family_.block_width, family_.n_free};
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        triples_.push_back(build_grid_triple(p));

    std::vector<const FiniteBA*> parts;
    for (const GridTriple& t : triples_) parts.push_back(&t.ba_l());
    joint_.emplace(coproduct(parts));

    auto cell_of = [&](std::size_t leaf, std::size_t pos) {
        const GridTriple& t = triples_[leaf];
        return joint_->inject[leaf].map(t.h_in_l(t.h.gens[pos]));
    };

    // Ground element -> occurrences (leaf, position), in leaf order. Every
    // later occurrence is glued to the first one.
    std::map<std::uint64_t, std::vector<std::pair<std::size_t, std::size_t>>> where;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        const auto& s = family_.set_of(leaves_[i]);
        for (std::size_t m = 0; m < s.size(); ++m) where[s[m]].push_back({i, m});
    }
    Elem r = joint_->ba.zero();
    for (const auto& [ground, occ] : where)
        for (std::size_t j = 1; j < occ.size(); ++j) {
            glue_.push_back({occ[0].first, occ[0].second,
                             occ[j].first, occ[j].second, ground});
            Elem u = cell_of(occ[0].first, occ[0].second);
            Elem v = cell_of(occ[j].first, occ[j].second);
            r = r + (u * -v) + (v * -u);
        }
    glued_.emplace(quotient_by_element(joint_->ba, r));

    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        std::vector<Elem> img;
        for (const Elem& g : triples_[i].gens_in_l())
            img.push_back(glued_->proj.map(joint_->inject[i].map(g)));
        images_.push_back(std::move(img));
    }
}

std::size_t Assembly::leaf_index(const TreePath& p) const {
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        if (leaves_[i] == p) return i;
    throw usage_error("unknown leaf " + path_str(p));
}

const Morphism& Assembly::inject(std::size_t leaf) const {
    if (leaf >= leaves_.size()) throw usage_error("leaf index out of range");
    return joint_->inject[leaf];
}

Elem Assembly::cell_image(std::size_t leaf, std::size_t pos) const {
    if (leaf >= leaves_.size()) throw usage_error("leaf index out of range");
    if (pos >= family_.n_blocks * family_.block_width)
        throw usage_error("cell position out of range");
    return images_[leaf][pos];
}

Elem Assembly::x_image(std::size_t leaf) const {
    if (leaf >= leaves_.size()) throw usage_error("leaf index out of range");
    return images_[leaf][family_.n_blocks * family_.block_width];
}

const std::vector<Elem>& Assembly::leaf_images(std::size_t leaf) const {
    if (leaf >= leaves_.size()) throw usage_error("leaf index out of range");
    return images_[leaf];
}

std::size_t Assembly::top_cut() const {
    const auto& kids = family_.system.node(TreePath{}).children;
    return static_cast<std::size_t>(*std::max_element(kids.begin(), kids.end())) + 1;
}

std::size_t Assembly::branch_top(std::uint32_t branch) const {
    TreePath mu{branch};
    if (!family_.system.has(mu)) throw usage_error("no branch node at that index");
    const auto& kids = family_.system.node(mu).children;
    if (kids.empty()) throw usage_error("branch node has no children");
    return static_cast<std::size_t>(*std::max_element(kids.begin(), kids.end())) + 1;
}

void Assembly::require_height2() const {
    auto h = family_.system.height();
    if (!h || *h < 2)
        throw usage_error("second level stages need height at least 2");
}

Subalgebra Assembly::stage(std::size_t cut) const {
    if (cut > top_cut()) throw usage_error("stage cut out of range");
    std::vector<Elem> gens;
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        if (leaves_[i][0] < cut)
            gens.insert(gens.end(), images_[i].begin(), images_[i].end());
    if (gens.empty()) return Subalgebra::trivial(glued_->ba);
    return Subalgebra::generated(glued_->ba, gens);
}

Subalgebra Assembly::branch_stage(std::uint32_t branch, std::size_t sub) const {
    require_height2();
    if (sub > branch_top(branch)) throw usage_error("second level cut out of range");
    std::vector<Elem> gens;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        const TreePath& p = leaves_[i];
        if (p[0] < branch || (p[0] == branch && p[1] < sub))
            gens.insert(gens.end(), images_[i].begin(), images_[i].end());
    }
    if (gens.empty()) return Subalgebra::trivial(glued_->ba);
    return Subalgebra::generated(glued_->ba, gens);
}

SpanWitness Assembly::decompose(const Subalgebra& base, const Subalgebra& target,
                                std::size_t base_cut,
                                const ReshuffleResult& ord) const {
    SpanWitness w;
    if (!ord.ok) {
        w.note = "no admissible placement order: " + ord.failure;
        return w;
    }
    w.order = ord.order;

    // Pair screen: the base blocks must split evenly inside the target.
    {
        std::vector<std::size_t> split(base.block_count(), 0);
        for (std::size_t b = 0; b < target.block_count(); ++b)
            ++split[base.block_of(*target.block_begin(b))];
        w.uniform_split =
            std::all_of(split.begin(), split.end(),
                        [&](std::size_t c) { return c == split[0]; });
        if (!w.uniform_split)
            w.note = "base blocks split unevenly in the target stage";
    }

    const FiniteBA& a = glued_->ba;
    Subalgebra cur = base;
    std::set<std::uint64_t> seen;
    bool walked = true;
    for (const TreePath& v : ord.order) {
        std::size_t li = leaf_index(v);
        const auto& s = family_.set_of(v);
        if (v[0] < base_cut) {
            seen.insert(s.begin(), s.end());
            continue;
        }
        SpanStep st;
        st.path = v;
        for (std::size_t m = 0; m < s.size(); ++m)
            if (seen.count(s[m])) st.shared_positions.push_back(m);

        // The leaf must meet the span exactly in its shared cells.
        Subalgebra nspan = Subalgebra::generated(a, images_[li]);
        Subalgebra inter = subalgebra_meet(nspan, cur);
        std::vector<Elem> shared_elems;
        for (std::size_t m : st.shared_positions)
            shared_elems.push_back(images_[li][m]);
        Subalgebra predicted =
            shared_elems.empty() ? Subalgebra::trivial(a)
                                 : Subalgebra::generated(a, shared_elems);
        if (inter != predicted) {
            st.note = "the leaf meets the span beyond its shared cells";
            w.steps.push_back(std::move(st));
            walked = false;
            break;
        }

        // Complementary slice inside the leaf's own algebra: the shared
        // cells' blocks must all have the same size, and the slice pairs
        // off the j-th atom of every block.
        const GridTriple& t = triples_[li];
        std::vector<Elem> local_shared;
        for (std::size_t m : st.shared_positions)
            local_shared.push_back(t.h_in_l(t.h.gens[m]));
        Subalgebra shared_loc =
            local_shared.empty() ? Subalgebra::trivial(t.ba_l())
                                 : Subalgebra::generated(t.ba_l(), local_shared);
        const std::size_t atoms = t.ba_l().atom_count();
        bool uniform = atoms % shared_loc.block_count() == 0;
        const std::size_t q = atoms / shared_loc.block_count();
        for (std::size_t b = 0; uniform && b < shared_loc.block_count(); ++b)
            uniform = shared_loc.block_size(b) == q;
        if (!uniform) {
            st.note = "the shared cells leave no uniform complement in the leaf";
            w.steps.push_back(std::move(st));
            walked = false;
            break;
        }
        std::vector<std::uint32_t> rank(atoms, 0);
        for (std::size_t b = 0; b < shared_loc.block_count(); ++b) {
            const std::uint32_t* beg = shared_loc.block_begin(b);
            for (std::size_t i = 0; i < q; ++i)
                rank[beg[i]] = static_cast<std::uint32_t>(i);
        }
        Subalgebra slice_loc = from_atom_blocks(t.ba_l().id(), std::move(rank));

        // Push the slice through the leaf coordinate of every atom.
        const auto& pr = glued_->proj.fiber();
        const auto& in = joint_->inject[li].fiber();
        std::vector<std::uint32_t> labels(a.atom_count());
        for (std::size_t atom = 0; atom < a.atom_count(); ++atom)
            labels[atom] = slice_loc.block_of(in[pr[atom]]);
        Subalgebra slice = from_atom_blocks(a.id(), std::move(labels));

        std::vector<Elem> slice_elems;
        for (std::size_t b = 0; b < slice.block_count(); ++b)
            slice_elems.push_back(a.elem(slice.block_set(b)));
        Subalgebra joined = cur.extended(a, slice_elems);
        if (joined.block_count() != cur.block_count() * slice.block_count()) {
            st.note = "the slice is not independent from the span";
            w.steps.push_back(std::move(st));
            walked = false;
            break;
        }
        st.complement_blocks = slice.block_count();
        st.ok = true;
        w.steps.push_back(std::move(st));
        cur = std::move(joined);
        seen.insert(s.begin(), s.end());
    }
    if (walked && cur != target) {
        w.note = "the walk does not reach the target stage";
        walked = false;
    }
    w.ok = walked && w.uniform_split;
    if (w.ok) w.span = std::move(cur);
    return w;
}

SpanWitness Assembly::stage_decomposition(std::size_t from, std::size_t to) const {
    if (from > to || to > top_cut()) throw usage_error("stage range out of order");
    std::vector<TreePath> idx;
    for (const TreePath& p : leaves_)
        if (p[0] < to) idx.push_back(p);
    ReshuffleResult ord = reshuffle_order_2(
        family_, TreePath{}, static_cast<std::int64_t>(from) - 1, idx);
    return decompose(stage(from), stage(to), from, ord);
}

SpanWitness Assembly::branch_decomposition(std::uint32_t branch,
                                           std::size_t sub) const {
    require_height2();
    TreePath mu{branch};
    if (!family_.system.has(mu)) throw usage_error("no branch node at that index");
    if (sub > branch_top(branch)) throw usage_error("second level cut out of range");
    std::vector<TreePath> idx;
    for (const TreePath& p : leaves_)
        if (p[0] == branch && p[1] < sub) idx.push_back(p);
    ReshuffleResult ord = reshuffle_order_2(family_, mu, -1, idx);
    return decompose(stage(branch), branch_stage(branch, sub), branch, ord);
}

GammaReport Assembly::gamma_scan() const {
    GammaReport g;
    g.scope_note = "freeness is judged at the top materialized stage only";
    std::vector<std::uint32_t> kids = family_.system.node(TreePath{}).children;
    std::sort(kids.begin(), kids.end());
    for (std::uint32_t c : kids)
        if (!stage_decomposition(c, top_cut()).ok) g.flagged.push_back(c);
    g.matches_declared = g.flagged == family_.expected_gamma;
    return g;
}

StageReport Assembly::stage_report(std::uint32_t branch, std::uint64_t seed,
                                   std::size_t samples) const {
    require_height2();
    TreePath mu{branch};
    if (!family_.system.has(mu)) throw usage_error("no branch node at that index");

    StageReport rep;
    rep.branch = branch;
    rep.marked = std::find(family_.expected_gamma.begin(),
                           family_.expected_gamma.end(),
                           branch) != family_.expected_gamma.end();
    rep.note = "maximal restrictions exist at every finite scale; "
               "markings only separate limit behaviour";

    rep.cuts.push_back(0);
    std::vector<std::uint32_t> kids = family_.system.node(mu).children;
    std::sort(kids.begin(), kids.end());
    for (std::uint32_t c : kids) rep.cuts.push_back(static_cast<std::size_t>(c) + 1);

    std::vector<std::optional<SpanWitness>> wits;
    std::vector<Subalgebra> stages;
    for (std::size_t cut : rep.cuts) {
        SpanWitness w = branch_decomposition(branch, cut);
        rep.cut_witnessed.push_back(w.ok);
        wits.push_back(w.ok ? std::optional<SpanWitness>(std::move(w)) : std::nullopt);
        stages.push_back(branch_stage(branch, cut));
    }

    const FiniteBA& a = glued_->ba;
    Subalgebra base = stage(branch);

    std::vector<std::pair<std::string, Elem>> probes;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        if (leaves_[i][0] > branch) continue;
        for (std::size_t k = 0; k < images_[i].size(); ++k)
            probes.push_back({"generator " + std::to_string(k) + " of " +
                                  path_str(leaves_[i]),
                              images_[i][k]});
    }
    std::mt19937_64 rng(seed);
    const Subalgebra& next = stages.back();
    for (std::size_t i = 0; i < samples; ++i) {
        AtomSet u(a.atom_count());
        for (std::size_t b = 0; b < next.block_count(); ++b)
            if (rng() & 1)
                for (auto p = next.block_begin(b); p != next.block_end(b); ++p)
                    u.set(*p);
        probes.push_back({"sampled union " + std::to_string(i),
                          a.elem(std::move(u))});
    }

    bool all_ok = true;
    for (auto& [what, e] : probes) {
        StageProbe pr;
        pr.what = what;
        for (std::size_t ci = 0; ci < rep.cuts.size() && !pr.found; ++ci) {
            if (!stages[ci].contains(e)) continue;
            pr.found = true;
            pr.least_cut = rep.cuts[ci];
            Elem direct = base.lpr(e);
            if (base.contains(e) && direct != e) pr.routes_agree = false;
            if (wits[ci]) {
                pr.dual_route = true;
                // Slice route: a base block survives exactly when all of
                // its refined blocks sit below the element.
                const Subalgebra& joined = *wits[ci]->span;
                std::vector<char> excluded(base.block_count(), 0);
                for (std::size_t b = 0; b < joined.block_count(); ++b) {
                    bool below = true;
                    for (auto p = joined.block_begin(b);
                         below && p != joined.block_end(b); ++p)
                        below = e.atoms.test(*p);
                    if (!below) excluded[base.block_of(*joined.block_begin(b))] = 1;
                }
                AtomSet keep(a.atom_count());
                for (std::size_t b = 0; b < base.block_count(); ++b)
                    if (!excluded[b])
                        for (auto p = base.block_begin(b); p != base.block_end(b); ++p)
                            keep.set(*p);
                if (a.elem(std::move(keep)) != direct) pr.routes_agree = false;
            }
        }
        if (!pr.found || !pr.routes_agree) all_ok = false;
        rep.probes.push_back(std::move(pr));
    }
    rep.ok = all_ok;
    return rep;
}

} // namespace baw
