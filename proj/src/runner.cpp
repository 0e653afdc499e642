#include "baw/runner.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "baw/as_construction.hpp"
#include "baw/cp_plus.hpp"
#include "baw/finite_ba.hpp"
#include "baw/fixtures.hpp"
#include "baw/tight_coding.hpp"
#include "baw/transversal.hpp"
#include "json.hpp"

namespace baw {

namespace {

using json = nlohmann::ordered_json;

struct ReportBuilder {
    json certs = json::array();
    json findings = json::array();
    json failures = json::array();

    void cert(json c) { certs.push_back(std::move(c)); }
    void find(const std::string& s) { findings.push_back(s); }
    void fail(const std::string& s) { failures.push_back(s); }
};

json make_cert(const std::string& id, bool ok) { return json{{"id", id}, {"ok", ok}}; }

std::vector<Ordinal> sorted_by_rank(std::vector<Ordinal> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool holds_ordinal(const std::vector<Ordinal>& v, const Ordinal& o) {
    return std::find(v.begin(), v.end(), o) != v.end();
}

json ordinal_names(const std::vector<Ordinal>& v) {
    json a = json::array();
    for (const auto& o : v) a.push_back(o.str());
    return a;
}

AtomSet random_atoms(std::size_t n, std::mt19937_64& rng) {
    AtomSet s(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng() & 1) s.set(i);
    return s;
}

AtomSet atoms_from_mask(std::size_t n, std::size_t mask) {
    AtomSet s(n);
    for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1) s.set(i);
    return s;
}

// ---------------------------------------------------------------- matching

// Re-derive the certificate from the family alone. Empty string: verified.
std::string verify_matching(const SetFamily& f, const TransversalResult& r) {
    if (const auto* t = std::get_if<Transversal>(&r)) {
        if (t->choice.size() != f.sets.size()) return "choice length mismatch";
        std::set<std::uint64_t> used;
        for (std::size_t i = 0; i < t->choice.size(); ++i) {
            const auto& s = f.sets[i];
            if (std::find(s.begin(), s.end(), t->choice[i]) == s.end())
                return "choice " + std::to_string(i) + " falls outside its set";
            if (!used.insert(t->choice[i]).second)
                return "choice repeats value " + std::to_string(t->choice[i]);
        }
        return "";
    }
    const auto& v = std::get<HallViolator>(r);
    if (v.indices.empty()) return "empty violator";
    std::set<std::uint64_t> hood;
    for (auto i : v.indices) {
        if (i >= f.sets.size()) return "violator index out of range";
        hood.insert(f.sets[i].begin(), f.sets[i].end());
    }
    std::vector<std::uint64_t> expect(hood.begin(), hood.end());
    if (expect != v.neighborhood) return "violator neighborhood differs from the union";
    if (v.neighborhood.size() >= v.indices.size())
        return "violator neighborhood is not smaller than its index set";
    return "";
}

SetFamily random_family(std::mt19937_64& rng, std::size_t max_sets, std::size_t max_size) {
    std::size_t universe = max_sets + 1;
    std::size_t n = 1 + rng() % max_sets;
    SetFamily f;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t size = 1 + rng() % std::min(max_size, universe);
        std::set<std::uint64_t> s;
        while (s.size() < size) s.insert(rng() % universe);
        f.sets.emplace_back(s.begin(), s.end());
    }
    return f;
}

struct SuiteTally {
    std::size_t cases = 0;
    std::size_t transversals = 0;
    std::size_t violators = 0;
    std::vector<std::string> bad;
};

SuiteTally matching_suite(std::size_t cases, std::size_t max_sets, std::size_t max_size,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SuiteTally tally;
    tally.cases = cases;
    for (std::size_t t = 0; t < cases; ++t) {
        SetFamily f = random_family(rng, max_sets, max_size);
        TransversalResult r = find_transversal(f);
        std::string err = verify_matching(f, r);
        if (!err.empty())
            tally.bad.push_back("case " + std::to_string(t) + ": " + err);
        else if (std::holds_alternative<Transversal>(r))
            ++tally.transversals;
        else
            ++tally.violators;
    }
    return tally;
}

// ------------------------------------------------------------ tight coding

void tight_coding_report(const TightCodingRun& t, json& doc, ReportBuilder& rb) {
    TightCoding tc(TightCodingParams{t.k_max, t.budget, t.s_set, {}});

    auto lc = tc.verify_rc();
    json c1 = make_cert("projection-closed-form", lc.failures == 0);
    c1["pairs"] = lc.pairs;
    rb.cert(std::move(c1));
    if (lc.failures != 0)
        rb.fail("projection closed form disagrees: " + lc.first_failure);

    auto zs = tc.zero_product_scan(t.budget);
    json c2 = make_cert("zero-product-scan", zs.mismatches == 0);
    c2["checked"] = zs.checked;
    c2["zeros"] = zs.zeros;
    rb.cert(std::move(c2));
    if (zs.mismatches != 0)
        rb.fail("zero-product scan: " + std::to_string(zs.mismatches) +
                " sign maps disagree with the relation test");

    auto rows = tc.rc_check();
    if (tc.last_full_cycle()) {
        bool ok = true;
        for (const auto& row : rows) {
            if (row.stable == tc.designated(row.limit)) {
                ok = false;
                rb.find("cut below " + row.limit.str() +
                        (row.stable ? " stabilizes" : " keeps growing") +
                        " against its designation");
            }
        }
        json c3 = make_cert("stability-dichotomy", ok);
        c3["limits"] = rows.size();
        rb.cert(std::move(c3));
    } else {
        rb.find("budget completes no full activation cycle; stability not judged");
    }
    for (const auto& row : rows) {
        if (row.stable)
            rb.find("cut below " + row.limit.str() + " stabilizes with stamp " +
                    std::to_string(row.stamp ? *row.stamp : 0));
        else
            rb.find("cut below " + row.limit.str() + " grows at " +
                    std::to_string(row.growth_stages.size()) + " stages");
    }

    for (const auto& o : sorted_by_rank(t.s_set)) {
        auto esc = tc.verify_non_rc(o);
        json c = make_cert("cut-escape " + o.str(), esc.ok);
        c["steps"] = esc.escapes.size();
        rb.cert(std::move(c));
        if (!esc.ok)
            rb.find("no escape certificate below " + o.str() + ": " + esc.refutation);
    }

    std::vector<Ordinal> scope = t.scope.empty() ? tc.active_limits() : t.scope;
    std::vector<Ordinal> fp = sorted_by_rank(tc.fingerprint(scope));
    doc["fingerprint"] = ordinal_names(fp);

    std::vector<Ordinal> expect;
    for (const auto& o : sorted_by_rank(scope))
        if (holds_ordinal(t.s_set, o)) expect.push_back(o);
    json c4 = make_cert("fingerprint-recovers-designation", fp == expect);
    c4["scope"] = ordinal_names(sorted_by_rank(scope));
    rb.cert(std::move(c4));
    if (fp != expect)
        rb.find("fingerprint differs from the designated set at this budget");

    if (t.s_alt) {
        TightCoding alt(TightCodingParams{t.k_max, t.budget, *t.s_alt, {}});
        std::vector<Ordinal> fp2 = sorted_by_rank(alt.fingerprint(scope));
        doc["fingerprint_alt"] = ordinal_names(fp2);
        std::vector<Ordinal> expect2;
        for (const auto& o : sorted_by_rank(scope))
            if (holds_ordinal(*t.s_alt, o)) expect2.push_back(o);
        json c5 = make_cert("fingerprints-differ", (fp != fp2) == (expect != expect2));
        c5["distinct"] = fp != fp2;
        rb.cert(std::move(c5));
        if (fp != fp2)
            rb.find("the two designations are separated inside the scope");
        else
            rb.find("the two designations agree inside the scope");
    }
}

// ----------------------------------------------------------------- cp plus

void cp_plus_report(const CpPlusRun& c, std::uint64_t seed, ReportBuilder& rb) {
    CpPlus cp(c.grid);

    auto il = cp.verify_ideal_law();
    json c1 = make_cert("ideal-law", il.failures == 0);
    c1["stages"] = il.stages;
    rb.cert(std::move(c1));
    if (il.failures != 0) rb.fail("ideal law: " + il.first_failure);

    std::size_t final_stage = cp.stage_with_columns(c.grid.n_cols);
    bool route_ok = cp.kernel_route_matches(final_stage);
    json c2 = make_cert("kernel-route", route_ok);
    c2["stage"] = final_stage;
    rb.cert(std::move(c2));
    if (!route_ok)
        rb.fail("kernel reconstruction disagrees with the final stage model");

    std::size_t cells = c.grid.n_rows * c.grid.n_cols;
    if (cells <= 12) {
        std::size_t admissible = 0, wrong = 0;
        std::string first;
        for (std::size_t mask = 0; mask < (std::size_t{1} << cells); ++mask) {
            CpPlus::GridSet j(cells, false);
            for (std::size_t i = 0; i < cells; ++i) j[i] = (mask >> i) & 1;
            bool adm = cp.admissible(j);
            if (adm) ++admissible;
            if (cp.scan_cut(j).stable != adm) {
                if (wrong == 0) first = "subset mask " + std::to_string(mask);
                ++wrong;
            }
        }
        json c3 = make_cert("selection-dichotomy", wrong == 0);
        c3["subsets"] = std::size_t{1} << cells;
        c3["admissible"] = admissible;
        rb.cert(std::move(c3));
        if (wrong != 0)
            rb.fail("cut stability splits from admissibility, first at " + first);
    } else {
        rb.find("grid too large for the exhaustive selection dichotomy; skipped");
    }

    auto sw = schedule_sweep(c.grid.n_rows, c.grid.n_free, c.grid.n_cols, seed, c.samples);
    json c4 = make_cert("schedule-growth", sw.ok);
    c4["levels"] = sw.levels;
    c4["strict_steps"] = sw.strict_steps;
    c4["escapes"] = sw.escapes;
    c4["witness_checks"] = sw.witness_checks;
    rb.cert(std::move(c4));
    for (const auto& f : sw.failures) rb.fail("schedule sweep: " + f);

    auto ws = cp.extend_independent_witness();
    std::size_t splits = 0;
    bool stalled = false;
    for (const auto& w : ws) {
        splits += w.splits;
        if (w.extended < w.requested) {
            stalled = true;
            rb.find("witness extension stalls at stage " + std::to_string(w.stage) + " with " +
                    std::to_string(w.singleton_blocks) + " singleton blocks");
        }
    }
    if (!stalled)
        rb.find("independent witness family extends at every stage, " +
                std::to_string(splits) + " half-splits used");

    if (!c.selection.empty()) {
        auto sel = selection_sweep(c.grid.n_rows, c.grid.n_free, c.selection, c.grid.n_cols);
        json c5 = make_cert("row-selection", sel.ok);
        c5["witness_row"] = sel.witness_row;
        c5["witness_prefix"] = sel.witness_prefix;
        c5["growth_stages"] = sel.scan.growth_stages;
        c5["expected_growth"] = sel.expected_growth;
        c5["x_independent"] = sel.tail.x_independent;
        rb.cert(std::move(c5));
        for (const auto& f : sel.failures) rb.fail("row selection: " + f);
        rb.find(sel.tail.x_independent
                    ? "the cut element is independent over the selection"
                    : "the cut element depends on the selected prefix of row " +
                          std::to_string(sel.witness_row));
    }
}

// ----------------------------------------------------------- lambda system

void lambda_system_report(const LambdaSystemRun& l, ReportBuilder& rb) {
    auto msgs = l.family.validate();
    json c1 = make_cert("shape", msgs.empty());
    c1["leaves"] = l.family.system.finals().size();
    if (auto h = l.family.system.height()) c1["height"] = *h;
    else c1["height"] = nullptr;
    rb.cert(std::move(c1));
    for (const auto& m : msgs) rb.fail("family shape: " + m);
    if (!msgs.empty()) return;

    auto finals = l.family.system.finals();
    auto ord = reshuffle_order_2(l.family, {}, -1, finals, {l.overlap, 100000});
    json c2 = make_cert("placement-order", ord.ok);
    c2["visited"] = ord.visited;
    if (ord.ok) {
        json names = json::array();
        for (const auto& p : ord.order) names.push_back(path_str(p));
        c2["order"] = std::move(names);
    }
    rb.cert(std::move(c2));
    if (ord.ok) {
        if (auto bad = check_order_blocks(l.family, ord.order, l.overlap))
            rb.fail("placement order fails its block clause: " + *bad);
        if (auto bad = check_order_precedence(l.family, {}, -1, ord.order))
            rb.fail("placement order fails precedence: " + *bad);
    } else {
        rb.find("no admissible placement order: " + ord.failure);
    }

    SetFamily sf = family_from_lambda_system(l.family);
    auto res = find_transversal(sf);
    std::string err = verify_matching(sf, res);
    json c3 = make_cert("leaf-transversal", err.empty());
    c3["found"] = std::holds_alternative<Transversal>(res);
    rb.cert(std::move(c3));
    if (!err.empty()) rb.fail("leaf transversal certificate: " + err);
    if (const auto* v = std::get_if<HallViolator>(&res))
        rb.find("the leaf sets have a Hall violator across " +
                std::to_string(v->indices.size()) + " leaves");
    else
        rb.find("the leaf sets admit a transversal");

    auto af = almost_free_sweep(sf);
    json c4 = make_cert("almost-free-sweep", !(af.free && !af.almost_free));
    c4["free"] = af.free;
    c4["almost_free"] = af.almost_free;
    c4["failing_omissions"] = af.failing_omissions;
    rb.cert(std::move(c4));
    if (af.free && !af.almost_free)
        rb.fail("a free family came back not almost free");
}

// ---------------------------------------------------------------- assembly

void as_construction_report(const AsConstructionRun& a, std::uint64_t seed,
                            ReportBuilder& rb) {
    std::optional<Assembly> as;
    try {
        as.emplace(a.family);
    } catch (const usage_error& e) {
        rb.fail(std::string("family rejected: ") + e.what());
        return;
    }

    rb.find("joint algebra has " + std::to_string(as->joint().atom_count()) +
            " atoms over " + std::to_string(as->leaves().size()) + " leaves");
    if (as->glue().empty())
        rb.find("no ground elements are shared; the gluing is trivial");
    else
        rb.find(std::to_string(as->glue().size()) +
                " ground cell pairs glued; the algebra drops to " +
                std::to_string(as->algebra().atom_count()) + " atoms");

    auto g = as->gamma_scan();
    json c1 = make_cert("gamma-scan", g.matches_declared);
    c1["flagged"] = g.flagged;
    c1["declared"] = a.family.expected_gamma;
    c1["note"] = g.scope_note;
    rb.cert(std::move(c1));
    if (!g.matches_declared)
        rb.fail("top-stage scan disagrees with the declared markers");

    auto top = as->stage_decomposition(0, as->top_cut());
    json c2 = make_cert("top-decomposition", top.ok);
    c2["steps"] = top.steps.size();
    c2["uniform_split"] = top.uniform_split;
    rb.cert(std::move(c2));
    if (!top.ok)
        rb.find("the top stage does not decompose over the base: " + top.note);

    if (a.family.system.height() != std::optional<std::size_t>{2}) {
        rb.find("stage reports need a two-level family; skipped");
        return;
    }
    std::vector<std::uint32_t> branches;
    if (a.branch) branches.push_back(*a.branch);
    else branches = a.family.system.node(TreePath{}).children;
    for (std::uint32_t b : branches) {
        StageReport r = as->stage_report(b, seed, a.samples);
        std::size_t witnessed = 0;
        for (bool w : r.cut_witnessed)
            if (w) ++witnessed;
        json c = make_cert("stage-report-" + path_str(TreePath{b}), r.ok);
        c["marked"] = r.marked;
        c["cuts"] = r.cuts;
        c["cut_witnessed"] = r.cut_witnessed;
        c["probes"] = r.probes.size();
        rb.cert(std::move(c));
        if (!r.ok)
            rb.fail("branch " + path_str(TreePath{b}) + ": projection routes disagree");
        rb.find("branch " + path_str(TreePath{b}) + (r.marked ? " (marked)" : "") + ": " +
                std::to_string(r.probes.size()) + " probes, " + std::to_string(witnessed) +
                " of " + std::to_string(r.cuts.size()) + " cuts witnessed");
    }
}

// ------------------------------------------------------------- transversal

void transversal_report(const TransversalRun& t, std::uint64_t seed, ReportBuilder& rb) {
    if (!t.sets.empty()) {
        SetFamily f{t.sets};
        auto res = find_transversal(f);
        std::string err = verify_matching(f, res);
        json c1 = make_cert("matching", err.empty());
        c1["sets"] = f.sets.size();
        c1["found"] = std::holds_alternative<Transversal>(res);
        rb.cert(std::move(c1));
        if (!err.empty()) rb.fail("matching certificate: " + err);
        if (const auto* v = std::get_if<HallViolator>(&res)) {
            std::string ix;
            for (auto i : v->indices) ix += (ix.empty() ? "" : ", ") + std::to_string(i);
            rb.find("Hall violator {" + ix + "} covers only " +
                    std::to_string(v->neighborhood.size()) + " values");
        } else {
            rb.find("a transversal exists");
        }

        auto af = almost_free_sweep(f);
        json c2 = make_cert("almost-free-sweep", !(af.free && !af.almost_free));
        c2["free"] = af.free;
        c2["almost_free"] = af.almost_free;
        c2["failing_omissions"] = af.failing_omissions;
        rb.cert(std::move(c2));
        if (af.free && !af.almost_free)
            rb.fail("a free family came back not almost free");
        if (!af.free && af.almost_free)
            rb.find("the family is almost free but not free");
    }

    if (t.cases != 0) {
        SuiteTally tally = matching_suite(t.cases, t.max_sets, t.max_size, seed);
        json c3 = make_cert("matching-suite", tally.bad.empty());
        c3["cases"] = tally.cases;
        c3["transversals"] = tally.transversals;
        c3["violators"] = tally.violators;
        rb.cert(std::move(c3));
        for (const auto& b : tally.bad) rb.fail("matching suite: " + b);
        rb.find("suite: " + std::to_string(tally.transversals) + " transversals, " +
                std::to_string(tally.violators) + " violators over " +
                std::to_string(tally.cases) + " cases");
    }
}

// ---------------------------------------------------------------- selftest

struct ItemResult {
    json cert;
    std::vector<std::string> failures;
};

ItemResult selftest_kernel(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
    ItemResult out;
    const std::size_t cases = 60;
    std::size_t checks = 0;
    for (std::size_t t = 0; t < cases; ++t) {
        std::size_t n = 1 + rng() % 8;
        FiniteBA ba(n);
        std::vector<Elem> gens;
        std::size_t g = 1 + rng() % 3;
        for (std::size_t i = 0; i < g; ++i) gens.push_back(ba.elem(random_atoms(n, rng)));
        Subalgebra sub = Subalgebra::generated(ba, gens);
        Subalgebra inner = Subalgebra::generated(ba, {gens[0]});
        Elem x = ba.elem(random_atoms(n, rng));
        Elem y = ba.elem(random_atoms(n, rng));

        // Maximum below and minimum above by walking every member.
        AtomSet lo(n);
        AtomSet hi = AtomSet::full(n);
        std::size_t blocks = sub.block_count();
        for (std::size_t mask = 0; mask < (std::size_t{1} << blocks); ++mask) {
            AtomSet m(n);
            for (std::size_t b = 0; b < blocks; ++b)
                if ((mask >> b) & 1) m |= sub.block_set(b);
            if (m.subset_of(x.atoms)) lo |= m;
            if (x.atoms.subset_of(m)) hi &= m;
            ++checks;
        }
        bool ok = sub.lpr(x).atoms == lo && sub.upr(x).atoms == hi &&
                  sub.upr(x) == -sub.lpr(-x) &&
                  sub.lpr(x * y) == sub.lpr(x) * sub.lpr(y) &&
                  inner.lpr(sub.lpr(x)) == inner.lpr(x);
        if (!ok) out.failures.push_back("kernel projections disagree on case " + std::to_string(t));
    }
    out.cert = make_cert("kernel-projections", out.failures.empty());
    out.cert["cases"] = cases;
    out.cert["checks"] = checks;
    return out;
}

ItemResult selftest_extension(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 2);
    ItemResult out;
    const std::size_t cases = 40;
    std::size_t checks = 0;
    for (std::size_t t = 0; t < cases; ++t) {
        std::size_t n = 2 + rng() % 5;
        FiniteBA ba(n);
        AtomSet ia = random_atoms(n, rng);
        AtomSet ja = random_atoms(n, rng) & ia.complement();
        Elem i = ba.elem(ia), j = ba.elem(ja);
        AdjoinResult r = adjoin_element(ba, i, j);
        std::size_t ic = ia.count(), jc = ja.count();

        bool ok = r.embed.injective() && r.embed.map(i) <= r.x &&
                  (r.embed.map(j) * r.x).is_zero() &&
                  r.ba.atom_count() == (n - jc) + (n - ic);
        // The two restrictions are exactly the quotients by the opposite
        // ideal: kernels match the principal ideals, image sizes the
        // quotient element counts.
        std::set<AtomSet> im_x, im_nx;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Elem a = ba.elem(atoms_from_mask(n, mask));
            Elem px = r.embed.map(a) * r.x;
            Elem pn = r.embed.map(a) * -r.x;
            ok = ok && px.is_zero() == a.atoms.subset_of(ja);
            ok = ok && pn.is_zero() == a.atoms.subset_of(ia);
            im_x.insert(px.atoms);
            im_nx.insert(pn.atoms);
            ++checks;
        }
        ok = ok && im_x.size() == (std::size_t{1} << (n - jc)) &&
             im_nx.size() == (std::size_t{1} << (n - ic));
        if (!ok) out.failures.push_back("extension exactness fails on case " + std::to_string(t));
    }
    FiniteBA tiny(2);
    bool threw = false;
    try {
        adjoin_element(tiny, tiny.atom(0), tiny.atom(0));
    } catch (const inconsistent_extension_error&) {
        threw = true;
    }
    if (!threw) out.failures.push_back("overlapping ideal generators were accepted");
    out.cert = make_cert("extension-exactness", out.failures.empty());
    out.cert["cases"] = cases;
    out.cert["checks"] = checks;
    return out;
}

ItemResult selftest_coding() {
    ItemResult out;
    TightCoding tc(TightCodingParams{3, 8, {Ordinal{1, 0}}, {}});
    if (tc.verify_rc().failures != 0)
        out.failures.push_back("coding: projection closed form disagrees");
    if (tc.zero_product_scan(8).mismatches != 0)
        out.failures.push_back("coding: zero-product routes disagree");
    auto fp = sorted_by_rank(tc.fingerprint(tc.active_limits()));
    if (fp != std::vector<Ordinal>{Ordinal{1, 0}})
        out.failures.push_back("coding: fingerprint misses the designated set");
    if (!tc.verify_non_rc(Ordinal{1, 0}).ok)
        out.failures.push_back("coding: designated cut has no escape certificate");
    for (const auto& row : tc.rc_check())
        if (row.stable == tc.designated(row.limit))
            out.failures.push_back("coding: stability contradicts designation below " +
                                   row.limit.str());
    out.cert = make_cert("staged-coding", out.failures.empty());
    out.cert["limits"] = tc.active_limits().size();
    return out;
}

ItemResult selftest_grid(std::uint64_t seed) {
    ItemResult out;
    CpPlus cp(CpPlusParams{2, 2, 1});
    if (cp.verify_ideal_law().failures != 0)
        out.failures.push_back("grid: ideal law fails");
    if (!cp.kernel_route_matches(cp.stage_with_columns(2)))
        out.failures.push_back("grid: kernel reconstruction disagrees");
    for (std::size_t mask = 0; mask < 16; ++mask) {
        CpPlus::GridSet j(4, false);
        for (std::size_t i = 0; i < 4; ++i) j[i] = (mask >> i) & 1;
        if (cp.scan_cut(j).stable != cp.admissible(j)) {
            out.failures.push_back("grid: dichotomy breaks at mask " + std::to_string(mask));
            break;
        }
    }
    if (!schedule_sweep(2, 1, 2, seed, 2).ok)
        out.failures.push_back("grid: schedule sweep fails");
    out.cert = make_cert("grid-cut", out.failures.empty());
    out.cert["subsets"] = 16;
    return out;
}

ItemResult selftest_assembly(std::uint64_t seed) {
    ItemResult out;
    for (bool shared : {false, true}) {
        std::string tag = shared ? "shared" : "disjoint";
        BasedFamily f = fixtures::height2_family(shared);
        if (!f.validate().empty()) {
            out.failures.push_back("assembly: the " + tag + " fixture fails validation");
            continue;
        }
        Assembly as(f);
        if (as.joint().atom_count() != 38416)
            out.failures.push_back("assembly: " + tag + " joint atom count moved");
        if (as.algebra().atom_count() != (shared ? 19600u : 38416u))
            out.failures.push_back("assembly: " + tag + " glued atom count moved");
        if (!as.gamma_scan().matches_declared)
            out.failures.push_back("assembly: " + tag + " scan misses the declared markers");
        if (as.stage_decomposition(0, as.top_cut()).ok == shared)
            out.failures.push_back("assembly: " + tag + " top decomposition flips");
        for (std::uint32_t b : {2u, 5u}) {
            auto r = as.stage_report(b, seed, 2);
            if (!r.ok || r.marked != shared)
                out.failures.push_back("assembly: " + tag + " stage report at branch " +
                                       std::to_string(b) + " fails");
        }
    }
    out.cert = make_cert("assembly-fixtures", out.failures.empty());
    out.cert["fixtures"] = 2;
    return out;
}

ItemResult selftest_choice(std::uint64_t seed) {
    ItemResult out;
    SuiteTally tally = matching_suite(150, 6, 4, seed * 0x9e3779b97f4a7c15ull + 3);
    out.failures = tally.bad;
    out.cert = make_cert("choice-functions", tally.bad.empty());
    out.cert["cases"] = tally.cases;
    out.cert["transversals"] = tally.transversals;
    out.cert["violators"] = tally.violators;
    return out;
}

void selftest_report(std::uint64_t seed, ReportBuilder& rb) {
    // Independent suites run concurrently; the report keeps a fixed order.
    std::vector<std::future<ItemResult>> jobs;
    jobs.push_back(std::async(std::launch::async, selftest_kernel, seed));
    jobs.push_back(std::async(std::launch::async, selftest_extension, seed));
    jobs.push_back(std::async(std::launch::async, selftest_coding));
    jobs.push_back(std::async(std::launch::async, selftest_grid, seed));
    jobs.push_back(std::async(std::launch::async, selftest_assembly, seed));
    jobs.push_back(std::async(std::launch::async, selftest_choice, seed));
    for (auto& job : jobs) {
        ItemResult r = job.get();
        rb.cert(std::move(r.cert));
        for (const auto& f : r.failures) rb.fail(f);
    }
}

} // namespace

Report run(const RunSpec& spec) {
    json doc;
    doc["tool"] = "baw";
    doc["kind"] = run_kind_name(spec.kind);
    doc["seed"] = spec.seed;
    doc["spec"] = json::parse(spec_to_json(spec));

    ReportBuilder rb;
    switch (spec.kind) {
    case RunKind::tight_coding: tight_coding_report(*spec.tight_coding, doc, rb); break;
    case RunKind::cp_plus: cp_plus_report(*spec.cp_plus, spec.seed, rb); break;
    case RunKind::lambda_system: lambda_system_report(*spec.lambda_system, rb); break;
    case RunKind::as_construction:
        as_construction_report(*spec.as_construction, spec.seed, rb);
        break;
    case RunKind::transversal: transversal_report(*spec.transversal, spec.seed, rb); break;
    case RunKind::selftest: selftest_report(spec.seed, rb); break;
    }

    doc["certificates"] = std::move(rb.certs);
    doc["findings"] = std::move(rb.findings);
    doc["failures"] = std::move(rb.failures);

    Report rep;
    rep.ok = doc["failures"].empty();
    rep.json = doc.dump(2) + "\n";
    return rep;
}

std::string render_text(const std::string& report_json) {
    json doc;
    try {
        doc = json::parse(report_json);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("report: ") + e.what());
    }
    std::ostringstream out;
    out << "baw " << doc.value("kind", std::string("?")) << " report, seed "
        << doc.value("seed", std::uint64_t{0}) << "\n";
    out << "certificates:\n";
    for (const auto& c : doc.value("certificates", json::array())) {
        out << "  " << (c.value("ok", false) ? "PASS" : "FAIL") << "  "
            << c.value("id", std::string("?"));
        for (const auto& [key, value] : c.items()) {
            if (key == "id" || key == "ok") continue;
            out << "  " << key << "=" << (value.is_string() ? value.get<std::string>()
                                                            : value.dump());
        }
        out << "\n";
    }
    for (const char* section : {"fingerprint", "fingerprint_alt"}) {
        if (!doc.contains(section)) continue;
        out << section << ":";
        bool first = true;
        for (const auto& o : doc[section]) {
            out << (first ? " " : ", ") << o.get<std::string>();
            first = false;
        }
        if (doc[section].empty()) out << " (empty)";
        out << "\n";
    }
    if (!doc.value("findings", json::array()).empty()) {
        out << "findings:\n";
        for (const auto& f : doc["findings"]) out << "  - " << f.get<std::string>() << "\n";
    }
    json fails = doc.value("failures", json::array());
    if (!fails.empty()) {
        out << "failures:\n";
        for (const auto& f : fails) out << "  - " << f.get<std::string>() << "\n";
    }
    out << "summary: " << (fails.empty() ? "clean" : std::to_string(fails.size()) + " failure(s)")
        << "\n";
    return out.str();
}

} // namespace baw
