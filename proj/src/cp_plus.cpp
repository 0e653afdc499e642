#include "baw/cp_plus.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace baw {

namespace {

std::string grid_name(std::size_t row, std::size_t col) {
    return "a(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

} // namespace

CpPlus::CpPlus(CpPlusParams params) : params_(params) {
    const std::size_t n = params_.n_rows;
    const std::size_t L = params_.n_cols;
    const std::size_t w = params_.n_free;
    if (n == 0 || L == 0) throw usage_error("grid needs at least one row and column");

    Presentation p;
    p.n_gens = n * L + 1 + w;
    p.gen_names.resize(p.n_gens);
    for (std::size_t h = 0; h < L; ++h)
        for (std::size_t k = 0; k < n; ++k)
            p.gen_names[h * n + k] = grid_name(k, h);
    p.gen_names[n * L] = "x";
    for (std::size_t i = 0; i < w; ++i)
        p.gen_names[n * L + 1 + i] = "y" + std::to_string(i);

    for (std::size_t h = 0; h < L; ++h) {
        Relation r;
        for (std::size_t k = 0; k < n; ++k)
            r.lhs.push_back(static_cast<std::uint32_t>(h * n + k));
        r.rhs = static_cast<std::uint32_t>(n * L);
        r.label = "p" + std::to_string(h) + " <= x";
        p.relations.push_back(std::move(r));
    }

    auto column_batch = [&](std::size_t h, std::size_t cycle) {
        StageBatch b;
        for (std::size_t k = 0; k < n; ++k)
            b.gens.push_back(static_cast<std::uint32_t>(h * n + k));
        b.cycle = cycle;
        return b;
    };
    p.stages.push_back(column_batch(0, 0));
    p.stages.push_back(StageBatch{{static_cast<std::uint32_t>(n * L)}, 0});
    if (w > 0) {
        StageBatch b;
        for (std::size_t i = 0; i < w; ++i)
            b.gens.push_back(static_cast<std::uint32_t>(n * L + 1 + i));
        b.cycle = 0;
        p.stages.push_back(std::move(b));
    }
    for (std::size_t h = 1; h < L; ++h)
        p.stages.push_back(column_batch(h, h));

    chain_ = std::make_unique<Chain>(std::move(p));
}

std::uint32_t CpPlus::grid_gen(std::size_t row, std::size_t col) const {
    if (row >= params_.n_rows || col >= params_.n_cols)
        throw usage_error("grid position out of range");
    return static_cast<std::uint32_t>(col * params_.n_rows + row);
}

std::uint32_t CpPlus::x_gen() const {
    return static_cast<std::uint32_t>(params_.n_rows * params_.n_cols);
}

std::vector<std::uint32_t> CpPlus::free_gens() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < params_.n_free; ++i)
        out.push_back(static_cast<std::uint32_t>(params_.n_rows * params_.n_cols + 1 + i));
    return out;
}

std::size_t CpPlus::stage_with_columns(std::size_t c) const {
    if (c == 0 || c > params_.n_cols) throw usage_error("column count out of range");
    if (c == 1) return 2;
    return 2 + (params_.n_free > 0 ? 1 : 0) + (c - 1);
}

std::size_t CpPlus::grid_index(std::size_t row, std::size_t col) const {
    return grid_gen(row, col);
}

bool CpPlus::admissible(const GridSet& j) const {
    return witness_row(j).has_value();
}

std::optional<std::size_t> CpPlus::witness_row(const GridSet& j) const {
    if (j.size() != params_.n_rows * params_.n_cols)
        throw usage_error("grid subset size mismatch");
    for (std::size_t k = 0; k < params_.n_rows; ++k)
        if (!j[grid_index(k, params_.n_cols - 1)]) return k;
    return std::nullopt;
}

CpPlus::CutScan CpPlus::scan_cut(const GridSet& j) const {
    if (j.size() != params_.n_rows * params_.n_cols)
        throw usage_error("grid subset size mismatch");
    std::vector<bool> in_cut(chain_->presentation().n_gens, false);
    for (std::size_t i = 0; i < j.size(); ++i) in_cut[i] = j[i];

    CutScan out;
    out.stable = true;
    const std::size_t last_cycle = params_.n_cols - 1;
    for (std::size_t t = 0; t + 1 <= chain_->final_stage(); ++t) {
        if (!chain_->cut_growth(t, in_cut)) continue;
        out.growth_stages.push_back(t + 1);
        if (chain_->presentation().stages[t].cycle == last_cycle) out.stable = false;
    }
    return out;
}

Elem CpPlus::column_product(const StageModel& m, std::size_t col) const {
    Elem p = m.ba.one();
    for (std::size_t k = 0; k < params_.n_rows; ++k)
        p = p * m.gen(grid_gen(k, col));
    return p;
}

CpPlus::IdealLaw CpPlus::verify_ideal_law() const {
    IdealLaw out;
    std::vector<bool> grid_sel(chain_->presentation().n_gens, false);
    for (std::size_t i = 0; i < params_.n_rows * params_.n_cols; ++i) grid_sel[i] = true;

    for (std::size_t t = chain_->arrival_stage(x_gen()) + 1; t <= chain_->final_stage(); ++t) {
        const StageModel& m = chain_->model(t);
        Subalgebra grid = chain_->span(t, grid_sel);
        Elem expect = m.ba.zero();
        for (std::size_t h = 0; h < params_.n_cols; ++h)
            if (m.is_active(grid_gen(0, h))) expect = expect + column_product(m, h);
        Elem x = m.gen(x_gen());
        ++out.stages;
        bool ok = grid.lpr(x) == expect && grid.lpr(-x).is_zero();
        if (!ok) {
            ++out.failures;
            if (out.first_failure.empty())
                out.first_failure = "stage " + std::to_string(t);
        }
    }
    return out;
}

bool CpPlus::kernel_route_matches(std::size_t stage) const {
    const StageModel& sm = chain_->model(stage);
    const std::size_t n = params_.n_rows;
    const std::size_t L = params_.n_cols;

    std::size_t c = 0;
    for (std::size_t h = 0; h < L; ++h) {
        bool on = sm.is_active(grid_gen(0, h));
        for (std::size_t k = 1; k < n; ++k)
            if (sm.is_active(grid_gen(k, h)) != on) return false;
        if (on) {
            if (c != h) return false;
            ++c;
        }
    }
    const bool has_x = sm.is_active(x_gen());
    std::vector<std::uint32_t> w_active;
    for (auto g : free_gens())
        if (sm.is_active(g)) w_active.push_back(g);
    const std::size_t w = w_active.size();

    FreeAlgebra base = make_free(n * c);
    Elem below = base.ba.zero();
    for (std::size_t h = 0; h < c; ++h) {
        Elem p = base.ba.one();
        for (std::size_t k = 0; k < n; ++k) p = p * base.gens[h * n + k];
        below = below + p;
    }

    // Kernel level: adjoin x over the join of the column products.
    std::optional<AdjoinResult> adj;
    const FiniteBA* kernel = &base.ba;
    std::vector<Elem> k_grid;
    std::optional<Elem> k_x;
    if (has_x) {
        adj.emplace(adjoin_element(base.ba, below, base.ba.zero()));
        kernel = &adj->ba;
        for (const auto& g : base.gens) k_grid.push_back(adj->embed.map(g));
        k_x = adj->x;
    } else {
        k_grid = base.gens;
    }

    std::optional<FreeAlgebra> frw;
    std::optional<CoproductResult> cp;
    const FiniteBA* top = kernel;
    std::vector<Elem> t_grid = k_grid;
    std::optional<Elem> t_x = k_x;
    std::vector<Elem> t_w;
    if (w > 0) {
        frw.emplace(make_free(w));
        cp.emplace(coproduct(*kernel, frw->ba));
        top = &cp->ba;
        t_grid.clear();
        for (const auto& g : k_grid) t_grid.push_back(cp->inject[0].map(g));
        if (t_x) t_x = cp->inject[0].map(*t_x);
        for (const auto& g : frw->gens) t_w.push_back(cp->inject[1].map(g));
    }

    if (top->atom_count() != sm.ba.atom_count()) return false;

    // Route every stage minterm to its kernel atom through the shared sign
    // coding, then require a bijection respecting each generator.
    const std::size_t n_left = base.ba.atom_count();
    std::vector<std::size_t> right_rank(base.ba.atom_count(), 0);
    if (has_x) {
        std::size_t r = 0;
        for (std::size_t a = 0; a < base.ba.atom_count(); ++a)
            if (!below.atoms.test(a)) right_rank[a] = n_left + r++;
    }

    const std::size_t w_count = std::size_t(1) << w;
    std::vector<std::size_t> map_idx(sm.ba.atom_count());
    std::vector<char> hit(top->atom_count(), 0);
    for (std::size_t jatom = 0; jatom < sm.minterms.size(); ++jatom) {
        const std::uint64_t m = sm.minterms[jatom];
        std::uint64_t a = 0;
        for (std::size_t g = 0; g < n * c; ++g)
            a |= ((m >> sm.position[g]) & 1) << g;
        std::size_t katom;
        if (has_x) {
            bool x_neg = (m >> sm.position[x_gen()]) & 1;
            if (!x_neg) {
                katom = a;
            } else {
                if (below.atoms.test(a)) return false;
                katom = right_rank[a];
            }
        } else {
            katom = a;
        }
        std::uint64_t wa = 0;
        for (std::size_t i = 0; i < w; ++i)
            wa |= ((m >> sm.position[w_active[i]]) & 1) << i;
        std::size_t idx = katom * w_count + wa;
        if (hit[idx]) return false;
        hit[idx] = 1;
        map_idx[jatom] = idx;
    }

    auto images_match = [&](const Elem& mine, const Elem& theirs) {
        for (std::size_t jatom = 0; jatom < map_idx.size(); ++jatom)
            if (mine.atoms.test(jatom) != theirs.atoms.test(map_idx[jatom])) return false;
        return true;
    };
    for (std::size_t g = 0; g < n * c; ++g)
        if (!images_match(sm.gen(static_cast<std::uint32_t>(g)), t_grid[g])) return false;
    if (has_x && !images_match(sm.gen(x_gen()), *t_x)) return false;
    for (std::size_t i = 0; i < w; ++i)
        if (!images_match(sm.gen(w_active[i]), t_w[i])) return false;
    return true;
}

CpPlus::RowTailReport CpPlus::row_tail_report(std::size_t k0, std::size_t m) const {
    const std::size_t n = params_.n_rows;
    const std::size_t L = params_.n_cols;
    if (k0 >= n) throw usage_error("row index out of range");
    if (m > L) throw usage_error("tail start out of range");

    const StageModel& fm = chain_->final_model();
    std::vector<bool> sel(chain_->presentation().n_gens, false);
    for (std::size_t h = 0; h < L; ++h)
        for (std::size_t k = 0; k < n; ++k)
            if (k != k0 || h < m) sel[grid_gen(k, h)] = true;
    Subalgebra trimmed = chain_->span(chain_->final_stage(), sel);

    Elem head = fm.ba.zero();
    Elem tail = fm.ba.zero();
    Elem whole = fm.ba.zero();
    for (std::size_t h = 0; h < L; ++h) {
        Elem p = column_product(fm, h);
        whole = whole + p;
        if (h < m)
            head = head + p;
        else
            tail = tail + p;
    }

    RowTailReport out;
    out.tail_projects_to_zero = trimmed.lpr(tail).is_zero();
    out.ideal_matches_head = trimmed.lpr(whole) == head;
    out.x_independent = is_independent_over(fm.ba, trimmed, {fm.gen(x_gen())});
    return out;
}

std::vector<CpPlus::WitnessReport> CpPlus::extend_independent_witness() const {
    std::vector<WitnessReport> out;
    const auto& stages = chain_->presentation().stages;
    for (std::size_t t = 0; t < stages.size(); ++t) {
        const StageModel& next = chain_->model(t + 1);
        Subalgebra held = chain_->subalgebra_at(t, t + 1);
        std::vector<Elem> found;

        WitnessReport rep;
        rep.stage = t + 1;
        rep.requested = stages[t].gens.size();

        auto try_extend = [&](const Elem& cand, bool from_split,
                              std::uint32_t gen_id) {
            std::vector<Elem> family = found;
            family.push_back(cand);
            if (!is_independent_over(next.ba, held, family)) return false;
            found.push_back(cand);
            if (from_split) {
                ++rep.splits;
            } else {
                rep.used_gens.push_back(gen_id);
            }
            return true;
        };

        std::vector<bool> used(stages[t].gens.size(), false);
        for (std::size_t round = 0; round < rep.requested; ++round) {
            bool ok = false;
            for (std::size_t i = 0; i < stages[t].gens.size() && !ok; ++i) {
                if (used[i]) continue;
                if (try_extend(next.gen(stages[t].gens[i]), false, stages[t].gens[i]))
                    used[i] = ok = true;
            }
            if (!ok) {
                // Canonical half-split: lower half of every block of the
                // algebra spanned by the base and the witnesses so far.
                Subalgebra spanned = held.extended(next.ba, found);
                AtomSet half(next.ba.atom_count());
                std::size_t singletons = 0;
                for (std::size_t b = 0; b < spanned.block_count(); ++b) {
                    std::size_t sz = spanned.block_size(b);
                    if (sz < 2) ++singletons;
                    const std::uint32_t* beg = spanned.block_begin(b);
                    for (std::size_t i = 0; i < sz / 2; ++i) half.set(beg[i]);
                }
                ok = try_extend(next.ba.elem(std::move(half)), true, 0);
                if (!ok) {
                    rep.singleton_blocks = singletons;
                    break;
                }
            }
        }
        rep.extended = found.size();
        out.push_back(std::move(rep));
    }
    return out;
}

std::size_t GridTriple::cell(std::size_t row, std::size_t col) const {
    if (row >= params.n_rows || col >= params.n_cols)
        throw usage_error("grid position out of range");
    return row * params.n_cols + col;
}

Elem GridTriple::h_gen(std::size_t row, std::size_t col) const {
    return h.gens[cell(row, col)];
}

Elem GridTriple::column_product(std::size_t col) const {
    Elem p = h.ba.one();
    for (std::size_t k = 0; k < params.n_rows; ++k) p = p * h_gen(k, col);
    return p;
}

Elem GridTriple::schedule(std::size_t m) const {
    if (m > params.n_cols) throw usage_error("schedule step out of range");
    Elem s = h.ba.zero();
    for (std::size_t c = 0; c < m; ++c) s = s + column_product(c);
    return s;
}

Elem GridTriple::k_in_l(const Elem& e) const {
    return lw ? lw->inject[0].map(e) : e;
}

Elem GridTriple::h_in_l(const Elem& e) const { return k_in_l(k.embed.map(e)); }

std::vector<Elem> GridTriple::tail_in_l() const {
    std::vector<Elem> out;
    if (!lw) return out;
    for (const Elem& g : tail->gens) out.push_back(lw->inject[1].map(g));
    return out;
}

std::vector<Elem> GridTriple::gens_in_l() const {
    std::vector<Elem> out;
    for (const Elem& g : h.gens) out.push_back(h_in_l(g));
    out.push_back(x_in_l());
    for (Elem& g : tail_in_l()) out.push_back(std::move(g));
    return out;
}

GridTriple build_grid_triple(const CpPlusParams& params) {
    if (params.n_rows == 0 || params.n_cols == 0)
        throw usage_error("grid needs at least one row and column");
    FreeAlgebra h = make_free(params.n_rows * params.n_cols);
    Elem below = h.ba.zero();
    for (std::size_t c = 0; c < params.n_cols; ++c) {
        Elem p = h.ba.one();
        for (std::size_t k = 0; k < params.n_rows; ++k)
            p = p * h.gens[k * params.n_cols + c];
        below = below + p;
    }
    AdjoinResult adj = adjoin_element(h.ba, below, h.ba.zero());
    GridTriple out{params, std::move(h), std::move(adj), std::nullopt, std::nullopt};
    if (params.n_free > 0) {
        out.tail.emplace(make_free(params.n_free));
        out.lw.emplace(coproduct(out.k.ba, out.tail->ba));
    }
    return out;
}

Morphism widen_h(const GridTriple& from, const GridTriple& into) {
    if (from.params.n_rows != into.params.n_rows)
        throw usage_error("widening needs matching row counts");
    if (from.params.n_cols > into.params.n_cols)
        throw usage_error("widening cannot drop columns");
    const std::size_t n = from.params.n_rows;
    const std::size_t lf = from.params.n_cols;
    const std::size_t lt = into.params.n_cols;
    std::vector<std::uint32_t> fiber(into.ba_h().atom_count());
    for (std::size_t t = 0; t < fiber.size(); ++t) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t c = 0; c < lf; ++c)
                s |= ((static_cast<std::uint64_t>(t) >> (k * lt + c)) & 1)
                     << (k * lf + c);
        fiber[t] = static_cast<std::uint32_t>(s);
    }
    return Morphism(from.ba_h(), into.ba_h(), std::move(fiber));
}

ScheduleSweep schedule_sweep(std::size_t n_rows, std::size_t n_free,
                             std::size_t level_cap, std::uint64_t seed,
                             std::size_t samples_per_level) {
    if (level_cap == 0) throw usage_error("level cap must be positive");
    ScheduleSweep out;
    std::mt19937_64 rng(seed);
    std::optional<GridTriple> prev;
    auto fail = [&](std::size_t level, const std::string& what) {
        out.failures.push_back("level " + std::to_string(level) + ": " + what);
    };
    for (std::size_t l = 1; l <= level_cap; ++l) {
        GridTriple t = build_grid_triple({n_rows, l, n_free});
        ++out.levels;

        Elem s = t.h.ba.zero();
        for (std::size_t m = 0; m < l; ++m) {
            Elem p = t.column_product(m);
            if (p <= s)
                fail(l, "schedule stalls at step " + std::to_string(m));
            else
                ++out.strict_steps;
            s = s + p;
        }

        Subalgebra himg = t.k.embed.image();
        if (himg.lpr(t.k.x) != t.k.embed.map(s))
            fail(l, "x does not project onto the schedule");
        if (!himg.lpr(-t.k.x).is_zero())
            fail(l, "the complement of x meets the grid algebra");

        Subalgebra kimg = t.lw ? t.lw->inject[0].image()
                               : Subalgebra::discrete(t.ba_k());
        auto wit = free_witness(t.ba_l(), Subalgebra::discrete(t.ba_l()), kimg);
        ++out.witness_checks;
        if (!wit || wit->size() != n_free)
            fail(l, "free tail witness is missing or wrongly sized");

        if (prev) {
            Morphism e = widen_h(*prev, t);
            for (std::size_t m = 0; m < l; ++m)
                if (e.map(prev->schedule(m)) != t.schedule(m))
                    fail(l, "widening moves the schedule at step " + std::to_string(m));

            std::vector<Elem> old;
            for (std::size_t m = 1; m < l; ++m) old.push_back(prev->schedule(m));
            for (std::size_t c = 0; c + 1 < l; ++c) old.push_back(prev->column_product(c));
            Elem top = prev->schedule(l - 1);
            for (std::size_t i = 0; i < samples_per_level; ++i) {
                AtomSet a(prev->h.ba.atom_count());
                for (std::size_t j = 0; j < prev->h.ba.atom_count(); ++j)
                    if (top.atoms.test(j) && (rng() & 1)) a.set(j);
                old.push_back(prev->h.ba.elem(std::move(a)));
            }

            Elem fresh = t.column_product(l - 1);
            Elem snew = t.schedule(l);
            for (const Elem& a : old) {
                Elem im = e.map(a);
                if (fresh <= im) {
                    fail(l, "fresh column fails to escape an old ideal element");
                    continue;
                }
                if (!(im + fresh <= snew)) {
                    fail(l, "escape leaves the schedule");
                    continue;
                }
                ++out.escapes;
            }
        }
        prev.emplace(std::move(t));
    }
    out.ok = out.failures.empty();
    return out;
}

SelectionSweep selection_sweep(std::size_t n_rows, std::size_t n_free,
                               const std::vector<RowSpec>& rows,
                               std::size_t level_cap) {
    if (level_cap == 0) throw usage_error("level cap must be positive");
    if (rows.size() != n_rows) throw usage_error("row selection size mismatch");
    SelectionSweep out;
    std::optional<std::size_t> wr;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].full) continue;
        if (rows[k].prefix >= level_cap)
            throw usage_error("row prefix must sit below the level cap");
        if (!wr) wr = k;
    }
    if (!wr) throw usage_error("selection is not admissible: every row is whole");
    out.witness_row = *wr;
    out.witness_prefix = rows[*wr].prefix;

    CpPlus cp({n_rows, level_cap, n_free});
    CpPlus::GridSet j(n_rows * level_cap, false);
    for (std::size_t k = 0; k < n_rows; ++k)
        for (std::size_t c = 0; c < level_cap; ++c)
            if (rows[k].full || c < rows[k].prefix) j[cp.grid_index(k, c)] = true;

    out.scan = cp.scan_cut(j);
    if (!out.scan.stable) out.failures.push_back("cut grows at the last column");
    for (std::size_t c = 1; c < level_cap; ++c) {
        bool covered = true;
        for (std::size_t k = 0; k < n_rows && covered; ++k)
            covered = rows[k].full || rows[k].prefix > c;
        if (covered) out.expected_growth.push_back(cp.stage_with_columns(c + 1));
    }
    if (out.expected_growth != out.scan.growth_stages)
        out.failures.push_back("growth stages differ from the covered columns");

    out.tail = cp.row_tail_report(out.witness_row, out.witness_prefix);
    if (!out.tail.tail_projects_to_zero)
        out.failures.push_back("the witness tail does not project to zero");
    if (!out.tail.ideal_matches_head)
        out.failures.push_back("the ideal does not project onto the head columns");
    if (out.tail.x_independent != (out.witness_prefix == 0))
        out.failures.push_back("independence of x disagrees with the witness prefix");

    out.ok = out.failures.empty();
    return out;
}

} // namespace baw
