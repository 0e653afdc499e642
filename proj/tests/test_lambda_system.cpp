#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "baw/lambda_system.hpp"
#include "baw/fixtures.hpp"

using namespace baw;

namespace {

bool mentions(const std::vector<std::string>& msgs, const std::string& part) {
    return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) {
        return m.find(part) != std::string::npos;
    });
}

} // namespace

TEST_CASE("path printing and ordering helpers") {
    CHECK(path_str({}) == "()");
    CHECK(path_str({2}) == "(2)");
    CHECK(path_str({2, 0}) == "(2,0)");

    CHECK(lex_less({1}, {2}));
    CHECK(lex_less({1, 5}, {2, 0}));
    CHECK(lex_less({2, 0}, {2, 1}));
    CHECK_FALSE(lex_less({2}, {2}));
    // A prefix is incomparable with its extensions.
    CHECK_FALSE(lex_less({2}, {2, 0}));
    CHECK_FALSE(lex_less({2, 0}, {2}));

    CHECK(is_prefix({}, {2}));
    CHECK(is_prefix({2}, {2, 0}));
    CHECK(is_prefix({2, 0}, {2, 0}));
    CHECK_FALSE(is_prefix({2, 0}, {2}));
    CHECK_FALSE(is_prefix({3}, {2, 0}));
}

TEST_CASE("well formed height two families validate cleanly") {
    for (bool shared : {false, true}) {
        auto f = fixtures::height2_family(shared);
        CHECK(f.validate().empty());
        CHECK(f.system.height() == std::size_t{2});
        auto leaves = f.system.finals();
        REQUIRE(leaves.size() == 4);
        CHECK(leaves[0] == TreePath{2, 0});
        CHECK(leaves[3] == TreePath{5, 1});
        CHECK(f.system.base_closure({5, 0}) ==
              std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7});
        CHECK(f.system.base_closure({2, 1}) == std::vector<std::uint64_t>{0, 1, 2, 3});
        CHECK(f.block({2, 1}, 0) == std::vector<std::uint64_t>{2});
        CHECK(f.block({2, 1}, 1) == std::vector<std::uint64_t>{3});
        CHECK_THROWS_AS(f.block({2, 1}, 2), usage_error);
    }
}

TEST_CASE("tree shape violations are reported by name") {
    SUBCASE("missing interior node") {
        auto nodes = fixtures::height2_nodes(false);
        nodes.erase(nodes.begin() + 1); // drop (2)
        auto bad = LambdaSystem(std::move(nodes)).validate();
        CHECK(mentions(bad, "(2,0) has no parent node"));
        CHECK(mentions(bad, "declared child 2 of () is not materialized"));
    }
    SUBCASE("nonempty root base") {
        auto nodes = fixtures::height2_nodes(false);
        nodes[0].base = {0};
        CHECK(mentions(LambdaSystem(std::move(nodes)).validate(), "root base set is not empty"));
    }
    SUBCASE("rank fails to decrease") {
        auto nodes = fixtures::height2_nodes(false);
        nodes[3].rank = 1; // (2,0), same rank as its parent
        auto bad = LambdaSystem(std::move(nodes)).validate();
        CHECK(mentions(bad, "rank does not decrease from (2) to (2,0)"));
        CHECK(mentions(bad, "base set of (2,0) is smaller than its rank"));
        // rank 1 with an empty child list now also trips the interior check
        CHECK(mentions(bad, "interior node (2,0) has an empty child list"));
    }
    SUBCASE("base set reaches the parent rank") {
        auto nodes = fixtures::height2_nodes(false);
        nodes[1].base = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}; // |base| = rank of root
        auto bad = LambdaSystem(std::move(nodes)).validate();
        CHECK(mentions(bad, "base set of (2) is not below the rank of ()"));
        CHECK(mentions(bad, "base sets of the children of () do not increase at (5)"));
    }
    SUBCASE("leaf with declared children") {
        auto nodes = fixtures::height2_nodes(false);
        nodes[3].children = {0};
        auto bad = LambdaSystem(std::move(nodes)).validate();
        CHECK(mentions(bad, "leaf (2,0) declares children"));
        CHECK(mentions(bad, "declared child 0 of (2,0) is not materialized"));
    }
    SUBCASE("interior node with empty child list") {
        auto nodes = fixtures::height2_nodes(false);
        nodes[0].children = {};
        auto bad = LambdaSystem(std::move(nodes)).validate();
        CHECK(mentions(bad, "interior node () has an empty child list"));
        CHECK(mentions(bad, "node () is missing child index 2"));
    }
    SUBCASE("unsorted base set") {
        auto nodes = fixtures::height2_nodes(false);
        nodes[2].base = {7, 6, 5, 4, 3, 2, 1, 0};
        CHECK(mentions(LambdaSystem(std::move(nodes)).validate(),
                       "base set of (5) is not strictly ascending"));
    }
    SUBCASE("duplicate paths are rejected outright") {
        auto nodes = fixtures::height2_nodes(false);
        nodes.push_back(nodes[1]);
        CHECK_THROWS_AS(LambdaSystem(std::move(nodes)), usage_error);
    }
}

TEST_CASE("ground set validation") {
    SUBCASE("wrong size") {
        auto f = fixtures::height2_family(false);
        f.sets[{2, 0}] = {0};
        CHECK(mentions(f.validate(), "ground set of (2,0) has size 1, expected 2"));
    }
    SUBCASE("escapes the base closure") {
        auto f = fixtures::height2_family(false);
        f.sets[{2, 0}] = {0, 9};
        CHECK(mentions(f.validate(), "ground set of (2,0) leaves its base closure at element 9"));
    }
    SUBCASE("repeated entries") {
        auto f = fixtures::height2_family(false);
        f.sets[{2, 0}] = {1, 1};
        CHECK(mentions(f.validate(), "ground set of (2,0) has repeated entries"));
    }
    SUBCASE("set on a non-leaf, missing leaf set") {
        auto f = fixtures::height2_family(false);
        f.sets[{2}] = {0, 1};
        f.sets.erase({5, 1});
        auto bad = f.validate();
        CHECK(mentions(bad, "ground set attached to non-leaf (2)"));
        CHECK(mentions(bad, "leaf (5,1) has no ground set"));
    }
    SUBCASE("marker outside the root children") {
        auto f = fixtures::height2_family(false);
        f.expected_gamma = {7};
        CHECK(mentions(f.validate(), "diagnostic marker 7 is not a root child index"));
    }
    SUBCASE("degenerate geometry") {
        auto f = fixtures::height2_family(false);
        f.block_width = 0;
        CHECK(mentions(f.validate(), "block geometry is degenerate"));
    }
}

TEST_CASE("height distinguishes uniform and mixed leaf depths") {
    std::vector<SystemNode> nodes;
    nodes.push_back({TreePath{}, 10, {0, 1}, false, {}});
    nodes.push_back({TreePath{0}, 0, {}, false, {7}});
    nodes.push_back({TreePath{1}, 1, {0}, false, {7, 8}});
    nodes.push_back({TreePath{1, 0}, 0, {}, false, {}});
    LambdaSystem s(std::move(nodes));
    CHECK(s.validate().empty());
    CHECK_FALSE(s.height().has_value());
}

TEST_CASE("greedy order over disjoint leaf sets") {
    auto f = fixtures::height2_family(false);
    auto all = f.system.finals();

    auto r = reshuffle_order(f, all, {2, 0});
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{2, 0}, {2, 1}, {5, 0}, {5, 1}});
    CHECK(r.visited == 4);
    CHECK_FALSE(check_order_blocks(f, r.order, 0).has_value());

    r = reshuffle_order(f, all, {5, 1});
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{5, 1}, {2, 0}, {2, 1}, {5, 0}});
    CHECK(r.visited == 4);
}

TEST_CASE("a poisoned block is dodged through the clean one") {
    auto f = fixtures::height2_family(true);
    auto r = reshuffle_order(f, f.system.finals(), {2, 0});
    REQUIRE(r.ok);
    // (5,0) shares element 3 with (2,1); its second block {4} stays clean.
    CHECK(r.order == std::vector<TreePath>{{2, 0}, {2, 1}, {5, 0}, {5, 1}});
    CHECK(r.visited == 4);
    CHECK_FALSE(check_order_blocks(f, r.order, 0).has_value());
}

TEST_CASE("backtracking recovers from a greedy dead end") {
    auto f = fixtures::backtrack_family();
    auto r = reshuffle_order(f, f.system.finals(), {9});
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{9}, {0}, {2}, {1}});
    // One placement was undone: five visits for four slots.
    CHECK(r.visited == 5);
    CHECK_FALSE(check_order_blocks(f, r.order, 0).has_value());
}

TEST_CASE("mutually overlapping blocks admit no order at bound zero") {
    auto f = fixtures::triangle_family();
    auto r = reshuffle_order(f, f.system.finals(), {0});
    CHECK_FALSE(r.ok);
    CHECK(r.failure.find("overlap bound 0") != std::string::npos);
    CHECK(r.failure.find("deepest prefix 2 of 3") != std::string::npos);

    r = reshuffle_order(f, f.system.finals(), {0}, {.overlap_bound = 1});
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{0}, {1}, {2}});
    CHECK_FALSE(check_order_blocks(f, r.order, 1).has_value());
    CHECK(check_order_blocks(f, r.order, 0).has_value());
}

TEST_CASE("identical twin sets fail at bound zero and pass at one") {
    auto f = fixtures::twin_family();
    auto r = reshuffle_order(f, f.system.finals(), {0});
    CHECK_FALSE(r.ok);
    CHECK(r.failure.find("deepest prefix 1 of 2") != std::string::npos);

    r = reshuffle_order(f, f.system.finals(), {0}, {.overlap_bound = 1});
    REQUIRE(r.ok);
    auto bad = check_order_blocks(f, {{0}, {0}}, 1);
    REQUIRE(bad.has_value());
    CHECK(bad->find("appears twice") != std::string::npos);
}

TEST_CASE("search budget exhaustion is reported") {
    auto f = fixtures::triangle_family();
    auto r = reshuffle_order(f, f.system.finals(), {0}, {.overlap_bound = 0, .node_budget = 2});
    CHECK_FALSE(r.ok);
    CHECK(r.failure.find("budget exhausted") != std::string::npos);
}

TEST_CASE("block clause violations are caught by the validator") {
    auto f = fixtures::twin_family();
    auto bad = check_order_blocks(f, {{0}, {1}}, 0);
    REQUIRE(bad.has_value());
    CHECK(*bad == "node (1) at position 1 has no block within overlap bound 0");
}

TEST_CASE("branch respecting order places low child indices first") {
    auto f = fixtures::height2_family(true);

    auto r = reshuffle_order_2(f, {5}, 0, {{5, 0}, {5, 1}});
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{2, 0}, {2, 1}, {5, 0}, {5, 1}});
    CHECK_FALSE(check_order_precedence(f, {5}, 0, r.order).has_value());
    CHECK_FALSE(check_order_blocks(f, r.order, 0).has_value());

    auto bad = check_order_precedence(f, {5}, 0, {{5, 1}, {5, 0}, {2, 0}, {2, 1}});
    REQUIRE(bad.has_value());
    CHECK(bad->find("(5,0) must precede (5,1)") != std::string::npos);

    r = reshuffle_order_2(f, {2}, 0, {{2, 0}, {2, 1}});
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{2, 0}, {2, 1}});
    bad = check_order_precedence(f, {2}, 0, {{2, 1}, {2, 0}});
    REQUIRE(bad.has_value());
    CHECK(bad->find("(2,0) must precede (2,1)") != std::string::npos);
}

TEST_CASE("root branch order groups leaves by the child threshold") {
    auto f = fixtures::height2_family(false);
    auto all = f.system.finals();

    auto r = reshuffle_order_2(f, {}, 2, all);
    REQUIRE(r.ok);
    CHECK(r.order == std::vector<TreePath>{{2, 0}, {2, 1}, {5, 0}, {5, 1}});

    // With the threshold at 2, every (2,*) leaf must precede every (5,*) leaf.
    auto bad = check_order_precedence(f, {}, 2, {{5, 0}, {5, 1}, {2, 0}, {2, 1}});
    REQUIRE(bad.has_value());
    CHECK(bad->find("(2,0) must precede (5,0)") != std::string::npos);
    // Below the threshold no pair is constrained.
    CHECK_FALSE(check_order_precedence(f, {}, 1, {{5, 0}, {5, 1}, {2, 0}, {2, 1}}).has_value());
}

TEST_CASE("order construction rejects malformed arguments") {
    auto f = fixtures::height2_family(false);
    CHECK_THROWS_AS(reshuffle_order(f, f.system.finals(), {3}), usage_error);
    CHECK_THROWS_AS(reshuffle_order(f, {{2, 0}, {2, 0}}, {2, 0}), usage_error);
    CHECK_THROWS_AS(reshuffle_order_2(f, {2, 0}, 0, {}), usage_error);
    CHECK_THROWS_AS(reshuffle_order_2(f, {5}, 0, {{2, 0}}), usage_error);
    CHECK_THROWS_AS(reshuffle_order_2(f, {3}, 0, {}), usage_error);
}
