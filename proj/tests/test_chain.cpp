#include "doctest.h"

#include <vector>

#include "baw/chain.hpp"
#include "oracle.hpp"

using namespace baw;

namespace {

Presentation free_presentation(std::size_t n) {
    Presentation p;
    p.n_gens = n;
    for (std::size_t i = 0; i < n; ++i)
        p.stages.push_back(StageBatch{{static_cast<std::uint32_t>(i)}, i});
    return p;
}

// All elements of a stage model, for exhaustive checks on tiny chains.
std::vector<Elem> all_elems(const StageModel& m) {
    std::vector<Elem> out;
    std::size_t n = m.ba.atom_count();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        AtomSet s(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) s.set(i);
        out.push_back(m.ba.elem(std::move(s)));
    }
    return out;
}

} // namespace

TEST_CASE("a relation-free chain builds free algebras") {
    Chain chain(free_presentation(3));
    CHECK(chain.stage_count() == 4);
    CHECK(chain.model(0).ba.atom_count() == 1);
    CHECK(chain.model(1).ba.atom_count() == 2);
    CHECK(chain.model(2).ba.atom_count() == 4);
    CHECK(chain.model(3).ba.atom_count() == 8);
    for (std::size_t t = 0; t + 1 < chain.stage_count(); ++t)
        CHECK(chain.step(t).injective());

    const StageModel& fin = chain.final_model();
    std::vector<Elem> gens = {fin.gen(0), fin.gen(1), fin.gen(2)};
    CHECK(is_independent_over(fin.ba, Subalgebra::trivial(fin.ba), gens));
    CHECK(fin.monomial({0, 1, 2}) == gens[0] * gens[1] * gens[2]);
}

TEST_CASE("a bound generator splits only one side") {
    // x1 below x0.
    Presentation p;
    p.n_gens = 2;
    p.relations.push_back(Relation{{1}, 0, "x1 <= x0"});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{1}, 1});
    Chain chain(p);

    const StageModel& fin = chain.model(2);
    CHECK(fin.ba.atom_count() == 3);
    CHECK(fin.gen(1) <= fin.gen(0));
    CHECK(chain.step(1).injective());

    // The bound is exact at the previous stage: nothing there sits inside
    // x1, and x0 is the least thing above it.
    Subalgebra prev = chain.subalgebra_at(1, 2);
    CHECK(prev.lpr(fin.gen(1)).is_zero());
    CHECK(prev.upr(fin.gen(1)) == fin.gen(0));
}

TEST_CASE("stage restriction agrees with composed embeddings") {
    Presentation p;
    p.n_gens = 4;
    p.relations.push_back(Relation{{1}, 0, ""});
    p.relations.push_back(Relation{{3}, 2, ""});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{1, 2}, 1});
    p.stages.push_back(StageBatch{{3}, 2});
    Chain chain(p);

    for (std::size_t s = 0; s <= 3; ++s)
        for (std::size_t t = s; t <= 3; ++t) {
            Subalgebra direct = chain.subalgebra_at(s, t);
            Subalgebra via = chain.embed(s, t).image();
            CHECK(direct == via);
        }
}

TEST_CASE("collapsing presentations are rejected with the culprit named") {
    Presentation p;
    p.n_gens = 2;
    p.relations.push_back(Relation{{1}, 0, "x1 <= x0"});
    p.relations.push_back(Relation{{}, 1, "1 <= x1"});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{1}, 1});
    CHECK_THROWS_AS(Chain(p).model(2), presentation_error);

    Presentation twice = free_presentation(2);
    twice.stages.push_back(StageBatch{{0}, 2});
    CHECK_THROWS_AS(Chain{twice}, presentation_error);
}

TEST_CASE("cut growth fires exactly when a bound lands outside the cut") {
    Presentation p;
    p.n_gens = 2;
    p.relations.push_back(Relation{{1}, 0, ""});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{1}, 1});
    Chain chain(p);

    // Cut holding only the arriving bounded generator: its bound x0 lies
    // outside, so the projection table changes.
    CHECK(chain.cut_growth(1, {false, true}));
    // Cut holding both: the bound is inside, nothing changes.
    CHECK(!chain.cut_growth(1, {true, true}));
    // Free arrival into the cut never moves projections.
    CHECK(!chain.cut_growth(0, {true, true}));
}

TEST_CASE("cut growth matches the exhaustive projection comparison") {
    // Three generators, the last bound below the first; check every cut
    // against the definition: some element's projection into the cut gains
    // atoms across a stage.
    Presentation p;
    p.n_gens = 3;
    p.relations.push_back(Relation{{2}, 0, ""});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{1}, 1});
    p.stages.push_back(StageBatch{{2}, 2});
    Chain chain(p);

    for (std::size_t cut_bits = 0; cut_bits < 8; ++cut_bits) {
        std::vector<bool> in_cut = {(cut_bits & 1) != 0, (cut_bits & 2) != 0,
                                    (cut_bits & 4) != 0};
        for (std::size_t t = 0; t + 1 < chain.stage_count(); ++t) {
            Subalgebra before = chain.span(t, in_cut);
            Subalgebra after = chain.span(t + 1, in_cut);
            const Morphism& phi = chain.step(t);
            bool brute = false;
            for (const Elem& x : all_elems(chain.model(t)))
                if (phi.map(before.lpr(x)) != after.lpr(phi.map(x))) {
                    brute = true;
                    break;
                }
            CHECK(chain.cut_growth(t, in_cut) == brute);
        }
    }
}

TEST_CASE("stage models match an independent minterm filter") {
    // Same presentation, checked against a direct enumeration over sign
    // patterns of all generators at once.
    Presentation p;
    p.n_gens = 3;
    p.relations.push_back(Relation{{1, 2}, 0, ""});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{1, 2}, 1});
    Chain chain(p);

    const StageModel& fin = chain.model(2);
    std::size_t expected = 0;
    for (std::size_t mask = 0; mask < 8; ++mask) {
        bool lhs_pos = ((mask >> 1) & 1) == 0 && ((mask >> 2) & 1) == 0;
        bool rhs_neg = (mask & 1) != 0;
        if (!(lhs_pos && rhs_neg)) ++expected;
    }
    CHECK(fin.ba.atom_count() == expected);
    CHECK(fin.monomial({1, 2}) <= fin.gen(0));
}

TEST_CASE("non-principality certificates separate bound cuts from free ones") {
    // x0 is approached by x1, x2, x3 from below; x4 is independent of its
    // own would-be ladder.
    Presentation p;
    p.n_gens = 5;
    for (std::uint32_t g : {1, 2, 3})
        p.relations.push_back(Relation{{g}, 0, ""});
    p.stages.push_back(StageBatch{{0}, 0});
    p.stages.push_back(StageBatch{{4}, 0});
    p.stages.push_back(StageBatch{{1}, 1});
    p.stages.push_back(StageBatch{{2}, 2});
    p.stages.push_back(StageBatch{{3}, 3});
    Chain chain(p);

    std::vector<bool> cut = {false, true, true, true, false};
    CutCertificate good = chain.non_principality(cut, 0, {1, 2, 3});
    CHECK(good.ok);
    CHECK(!good.escapes.empty());
    for (const auto& e : good.escapes) CHECK(e.witness >= 1);

    // The same schedule cannot certify the free generator: its steps are
    // not below it.
    CutCertificate bad = chain.non_principality(cut, 4, {1, 2, 3});
    CHECK(!bad.ok);
    CHECK(bad.refutation.find("not below") != std::string::npos);

    // A schedule member outside the cut is refused outright.
    std::vector<bool> small_cut = {false, true, true, false, false};
    CutCertificate outside = chain.non_principality(small_cut, 0, {1, 2, 3});
    CHECK(!outside.ok);
    CHECK(outside.refutation.find("outside the cut") != std::string::npos);
}

TEST_CASE("elements canonicalize to their earliest stage") {
    Presentation p = free_presentation(3);
    Chain chain(p);
    const StageModel& fin = chain.final_model();

    auto [s0, e0] = chain.canonical_stage(3, fin.gen(0));
    CHECK(s0 == 1);
    CHECK(e0 == chain.model(1).gen(0));

    auto [s1, e1] = chain.canonical_stage(3, fin.gen(2));
    CHECK(s1 == 3);

    auto [s2, e2] = chain.canonical_stage(3, fin.ba.one());
    CHECK(s2 == 0);
    CHECK(e2.is_one());
}
