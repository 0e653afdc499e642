#include "doctest.h"

#include <random>
#include <set>
#include <variant>
#include <vector>

#include "baw/transversal.hpp"
#include "choice_oracle.hpp"
#include "baw/fixtures.hpp"

using namespace baw;

namespace {

bool valid_transversal(const SetFamily& f, const Transversal& t) {
    if (t.choice.size() != f.sets.size()) return false;
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        const auto& s = f.sets[i];
        if (std::find(s.begin(), s.end(), t.choice[i]) == s.end()) return false;
        if (!seen.insert(t.choice[i]).second) return false;
    }
    return true;
}

bool valid_violator(const SetFamily& f, const HallViolator& v) {
    std::set<std::uint64_t> hood;
    std::set<std::size_t> idx(v.indices.begin(), v.indices.end());
    if (idx.size() != v.indices.size()) return false;
    for (auto i : v.indices) {
        if (i >= f.sets.size()) return false;
        hood.insert(f.sets[i].begin(), f.sets[i].end());
    }
    return hood == std::set<std::uint64_t>(v.neighborhood.begin(), v.neighborhood.end()) &&
           hood.size() < v.indices.size();
}

SetFamily random_family(std::mt19937_64& rng, std::size_t max_sets, std::size_t max_size,
                        std::uint64_t universe) {
    SetFamily f;
    std::size_t n = 1 + rng() % max_sets;
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::uint64_t> s;
        std::size_t sz = 1 + rng() % max_size;
        while (s.size() < sz) s.insert(rng() % universe);
        f.sets.emplace_back(s.begin(), s.end());
    }
    return f;
}

} // namespace

TEST_CASE("distinct representatives are found through augmentation") {
    SetFamily f{{{1, 2}, {2, 3}, {1, 3}}};
    auto r = find_transversal(f);
    REQUIRE(std::holds_alternative<Transversal>(r));
    auto t = std::get<Transversal>(r);
    CHECK(valid_transversal(f, t));
    // Index 2 steals element 1, pushing index 0 to 2 and index 1 to 3.
    CHECK(t.choice == std::vector<std::uint64_t>{2, 3, 1});
}

TEST_CASE("pigeonhole failures come back as violating index sets") {
    SetFamily twins{{{1}, {1}}};
    auto r = find_transversal(twins);
    REQUIRE(std::holds_alternative<HallViolator>(r));
    auto v = std::get<HallViolator>(r);
    CHECK(v.indices == std::vector<std::size_t>{0, 1});
    CHECK(v.neighborhood == std::vector<std::uint64_t>{1});
    CHECK(valid_violator(twins, v));

    SetFamily triple{{{1, 2}, {1, 2}, {1, 2}}};
    r = find_transversal(triple);
    REQUIRE(std::holds_alternative<HallViolator>(r));
    v = std::get<HallViolator>(r);
    CHECK(v.indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(v.neighborhood == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("edge families") {
    SetFamily empty_family{};
    auto r = find_transversal(empty_family);
    REQUIRE(std::holds_alternative<Transversal>(r));
    CHECK(std::get<Transversal>(r).choice.empty());

    SetFamily with_empty_set{{{5}, {}}};
    r = find_transversal(with_empty_set);
    REQUIRE(std::holds_alternative<HallViolator>(r));
    auto v = std::get<HallViolator>(r);
    CHECK(v.indices == std::vector<std::size_t>{1});
    CHECK(v.neighborhood.empty());
}

TEST_CASE("omit-one sweep separates free from almost free") {
    auto rep = almost_free_sweep(SetFamily{{{1}, {1}}});
    CHECK_FALSE(rep.free);
    CHECK(rep.almost_free);
    CHECK(rep.failing_omissions.empty());

    rep = almost_free_sweep(SetFamily{{{1, 2}, {3, 4}}});
    CHECK(rep.free);
    CHECK(rep.almost_free);

    rep = almost_free_sweep(SetFamily{{{1}, {1}, {1}}});
    CHECK_FALSE(rep.free);
    CHECK_FALSE(rep.almost_free);
    CHECK(rep.failing_omissions == std::vector<std::size_t>{0, 1, 2});

    CHECK_THROWS_AS(almost_free_sweep(SetFamily{}), usage_error);
}

TEST_CASE("matching agrees with exhaustive choice search") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 300; ++round) {
        // Tight universe so violations actually occur.
        auto f = random_family(rng, 6, 5, 7);
        auto r = find_transversal(f);
        bool found = std::holds_alternative<Transversal>(r);
        CHECK(found == oracle::has_transversal(f));
        if (found) {
            CHECK(valid_transversal(f, std::get<Transversal>(r)));
        } else {
            CHECK(valid_violator(f, std::get<HallViolator>(r)));
        }
    }
}

TEST_CASE("subfamilies of free families stay free") {
    std::mt19937_64 rng(271828);
    int free_seen = 0;
    for (int round = 0; round < 200; ++round) {
        auto f = random_family(rng, 6, 5, 32);
        if (!std::holds_alternative<Transversal>(find_transversal(f))) continue;
        ++free_seen;
        SetFamily sub;
        for (const auto& s : f.sets)
            if (rng() % 2) sub.sets.push_back(s);
        CHECK(std::holds_alternative<Transversal>(find_transversal(sub)));
    }
    CHECK(free_seen > 50);
}

TEST_CASE("leaf sets of a based family form a set family") {
    auto shared = family_from_lambda_system(fixtures::height2_family(true));
    REQUIRE(shared.sets.size() == 4);
    CHECK(shared.sets[1] == std::vector<std::uint64_t>{2, 3});
    CHECK(shared.sets[2] == std::vector<std::uint64_t>{3, 4});
    auto r = find_transversal(shared);
    REQUIRE(std::holds_alternative<Transversal>(r));
    CHECK(std::get<Transversal>(r).choice == std::vector<std::uint64_t>{0, 2, 3, 6});

    auto disjoint = family_from_lambda_system(fixtures::height2_family(false));
    r = find_transversal(disjoint);
    REQUIRE(std::holds_alternative<Transversal>(r));
    CHECK(std::get<Transversal>(r).choice == std::vector<std::uint64_t>{0, 2, 4, 6});

    auto broken = fixtures::height2_family(false);
    broken.sets[{2, 0}] = {0};
    CHECK_THROWS_AS(family_from_lambda_system(broken), usage_error);
}
