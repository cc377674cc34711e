#include "doctest.h"
#include "gen.hpp"
#include "jetcalc/strat.hpp"
#include "jetcalc/tree_json.hpp"

using namespace jetcalc;

namespace {

StratTree two_leaf_tree() {
    Node root;
    root.children.push_back(edge({2}, leaf(1)));
    root.children.push_back(edge({-1}, leaf(1)));
    return StratTree(1, {{"L", 1}}, root);
}

StratTree chain_tree() {
    Node mid;
    mid.children.push_back(edge({-1}, leaf(2)));
    Node root;
    root.children.push_back(edge({3}, mid));
    return StratTree(2, {{"L", 1}}, root);
}

} // namespace

TEST_CASE("degree_by_index examples") {
    auto t = two_leaf_tree();
    CHECK(degree_by_index(t, "L", 0) == 2);
    CHECK(degree_by_index(t, "L", 1) == -1);
    auto c = chain_tree();
    CHECK(degree_by_index(c, "L", 1) == -6);
    CHECK(degree_by_index(c, "L", 0) == 0);
    auto pos = ample_tree(3, {{1, 2}, {3}, {1, 1}}, 2);
    for (unsigned l = 1; l <= 3; ++l) CHECK(degree_by_index(pos, "A", l) == 0);
    CHECK_THROWS_AS(degree_by_index(t, "M", 0), UnknownLabel);
}

TEST_CASE("degree_truncated examples") {
    auto t = two_leaf_tree();
    CHECK(degree_truncated(t, "L", 1) == 1);
    CHECK(degree_truncated(t, "L", 0) == 2);
    CHECK(degree_truncated(chain_tree(), "L", 1) == -6);
    CHECK(degree_truncated(chain_tree(), "L", 0) == 0);
}

TEST_CASE("degree_recursive examples") {
    for (unsigned l = 0; l <= 2; ++l) {
        CHECK(degree_recursive(two_leaf_tree(), "L", l) == degree_truncated(two_leaf_tree(), "L", l));
        CHECK(degree_recursive(chain_tree(), "L", l) == degree_truncated(chain_tree(), "L", l));
    }
    StratTree point(0, {{"L", 1}}, leaf(5));
    CHECK(degree_recursive(point, "L", 0) == 5);
    CHECK(degree_truncated(point, "L", 0) == 5);
    Node root;
    root.children.push_back(edge({0}, leaf(7)));
    CHECK(degree_recursive(StratTree(1, {{"L", 1}}, root), "L", 1) == 0);
}

TEST_CASE("tree validation") {
    Node root;
    root.children.push_back(edge({1}, leaf(1)));
    root.children.push_back(edge({1}, root)); // depth 2 next to depth 1
    CHECK_THROWS_AS(StratTree(2, {{"L", 1}}, root), DepthViolation);
    CHECK_THROWS_AS(StratTree(0, {{"L", 1}}, leaf(0)), InvalidTree);
    CHECK_THROWS_AS(StratTree(0, {{"L", 0}}, leaf(1)), InvalidTree);
}

TEST_CASE("property: recursive and truncated degrees agree on random trees") {
    for (int it = 0; it < 300; ++it) {
        auto t = gen::random_tree(static_cast<unsigned>(gen::uniform(0, 4)), {"L"});
        for (unsigned l = 0; l <= t.dimension(); ++l)
            CHECK(degree_recursive(t, "L", l) == degree_truncated(t, "L", l));
    }
}

TEST_CASE("refine examples and invariance") {
    auto t = two_leaf_tree();
    auto r1 = refine(t, {{{}, leaf(3)}});
    for (unsigned l = 0; l <= 1; ++l) CHECK(degree_by_index(r1, "L", l) == degree_by_index(t, "L", l));
    CHECK(refine(t, {}) == t);
    auto c = chain_tree();
    Node sub;
    Node inner;
    inner.children.push_back(edge({4}, leaf(1)));
    sub.children.push_back(edge({9}, inner)); // markings are forced to 0
    auto r2 = refine(c, {{{}, sub.children[0].node}});
    for (unsigned l = 0; l <= 2; ++l) CHECK(degree_by_index(r2, "L", l) == degree_by_index(c, "L", l));
    CHECK(r2.edge_count() == c.edge_count() + 2);
    CHECK_THROWS_AS(refine(c, {{{}, leaf(1)}}), DepthViolation);
    CHECK_THROWS_AS(refine(c, {{{0, 0}, leaf(1)}}), DepthViolation);
}

TEST_CASE("property: refinement keeps every index degree") {
    for (int it = 0; it < 150; ++it) {
        const unsigned n = static_cast<unsigned>(gen::uniform(1, 4));
        auto t = gen::random_tree(n, {"L", "M"});
        std::vector<Insertion> ins;
        std::vector<std::size_t> path;
        gen::random_insertions(t.root(), path, n, ins);
        auto refined = refine(t, ins);
        CHECK(refined.edge_count() >= t.edge_count());
        for (unsigned l = 0; l <= n; ++l) {
            CHECK(degree_by_index(refined, "L", l) == degree_by_index(t, "L", l));
            CHECK(degree_by_index(refined, "M", l) == degree_by_index(t, "M", l));
        }
    }
}

TEST_CASE("power_trivialization") {
    for (int it = 0; it < 100; ++it) {
        const unsigned n = static_cast<unsigned>(gen::uniform(0, 4));
        auto t = gen::random_tree(n, {"L"});
        const long f = gen::uniform(1, 4);
        auto same = power_trivialization(t, "L", f, false);
        auto scaled = power_trivialization(t, "L", f, true);
        const Rational fn = pow(Rational(f), n);
        for (unsigned l = 0; l <= n; ++l) {
            CHECK(degree_truncated(same, "L", l) == degree_truncated(t, "L", l));
            CHECK(degree_truncated(scaled, "L", l) == fn * degree_truncated(t, "L", l));
        }
        CHECK(power_trivialization(t, "L", 1, true) == t);
        CHECK(power_trivialization(t, "L", 1, false) == t);
    }
}

TEST_CASE("cover examples") {
    auto t = two_leaf_tree();
    auto id = cover(t, "L", identity_cover_plan(t, "L"));
    CHECK(id.delta == 1);
    CHECK(id.tree == t);

    // Duplicate every child: δ = 2.
    std::vector<std::vector<CoverPiece>> dup;
    for (const auto& e : t.root().children)
        dup.push_back({{e.numerators[0], 1, {}}, {e.numerators[0], 1, {}}});
    auto d = cover(t, "L", dup);
    CHECK(d.delta == 2);
    for (unsigned l = 0; l <= 1; ++l) CHECK(degree_truncated(d.tree, "L", l) == 2 * degree_truncated(t, "L", l));

    // Split +2 into (2, 2) with degrees (1, 1); keep −1 as one piece of relative degree 2.
    std::vector<std::vector<CoverPiece>> split{{{2, 1, {}}, {2, 1, {}}}, {{-1, 2, {}}}};
    auto s = cover(t, "L", split);
    CHECK(s.delta == 2);
    CHECK(degree_truncated(s.tree, "L", 1) == 2);

    std::vector<std::vector<CoverPiece>> mixed{{{5, 1, {}}, {-1, 1, {}}}, {{-2, 1, {}}}};
    CHECK_THROWS_AS(cover(t, "L", mixed), InvalidCover);
    std::vector<std::vector<CoverPiece>> wrong_sum{{{2, 1, {}}, {2, 1, {}}}, {{-1, 1, {}}}};
    CHECK_THROWS_AS(cover(t, "L", wrong_sum), InvalidCover);
}

TEST_CASE("property: random covers scale truncated degrees by delta") {
    int done = 0;
    for (int it = 0; it < 400 && done < 200; ++it) {
        const unsigned n = static_cast<unsigned>(gen::uniform(1, 3));
        auto t = gen::random_tree(n, {"L"});
        const long delta = gen::uniform(1, 3);
        auto plan = gen::random_plan(t.root(), delta, 0);
        bool any_nonzero = false;
        for (const auto& e : t.root().children) any_nonzero |= e.numerators[0] != 0;
        if (!any_nonzero) {
            CHECK_THROWS_AS(cover(t, "L", plan), InvalidCover);
            continue;
        }
        auto res = cover(t, "L", plan);
        CHECK(res.delta == delta);
        for (unsigned l = 0; l <= n; ++l)
            CHECK(degree_truncated(res.tree, "L", l) == delta * degree_truncated(t, "L", l));
        ++done;
    }
    CHECK(done == 200);
}

TEST_CASE("ample_tree") {
    auto t = ample_tree(2, {{1}, {1}});
    for (unsigned i = 0; i <= 2; ++i) CHECK(degree_truncated(t, "A", i) == 1);
    auto a = ample_tree(2, {{5}, {5}});
    CHECK(degree_truncated(a, "A", 2) == 25);
    CHECK_THROWS_AS(ample_tree(1, {{0}}), InvalidArgument);
    CHECK_THROWS_AS(ample_tree(1, {{2, -1}}), InvalidArgument);
}

TEST_CASE("nef_difference_tree") {
    auto t = nef_difference_tree(2, 1, 1);
    CHECK(degree_by_index(t, "L", 0) == 1);
    CHECK(degree_by_index(t, "L", 1) == -2);
    CHECK(degree_by_index(t, "L", 2) == 1);
    auto g0 = nef_difference_tree(3, make_rational(3, 2), 0);
    for (unsigned j = 1; j <= 3; ++j) CHECK(degree_by_index(g0, "L", j) == 0);
    CHECK(degree_by_index(g0, "L", 0) == make_rational(27, 8));
    CHECK(validate_product_trivialization(nef_difference_tree(3, 2, make_rational(1, 3)), {"F"}, "L", "G") == false);
}

TEST_CASE("c_max examples") {
    Node root;
    root.children.push_back(edge({1, -2}, leaf(1)));
    StratTree t(1, {{"L1", 1}, {"L2", 1}}, root);
    for (auto alg : {CMaxAlgorithm::brute, CMaxAlgorithm::dp}) {
        CHECK(c_max(t, {"L1", "L2"}, 0, alg) == 1);
        CHECK(c_max(t, {"L1", "L2"}, 1, alg) == 2);
    }
    CHECK_THROWS_AS(c_max(t, {}, 0), InvalidArgument);
}

TEST_CASE("property: c_max brute equals dp and collapses for one label") {
    gen::TreeShape shape;
    shape.max_branch = 2;
    int checked = 0;
    while (checked < 150) {
        auto t = gen::random_tree(static_cast<unsigned>(gen::uniform(1, 3)), {"A", "B", "C"}, shape);
        if (t.edge_count() > 8) continue;
        ++checked;
        const std::vector<std::string> labels{"A", "B", "C"};
        for (unsigned i = 0; i <= t.dimension(); ++i) {
            CHECK(c_max(t, labels, i, CMaxAlgorithm::brute) == c_max(t, labels, i, CMaxAlgorithm::dp));
            const Rational sign = i % 2 ? -1 : 1;
            CHECK(c_max(t, {"B"}, i, CMaxAlgorithm::dp) == sign * degree_truncated(t, "B", i));
            CHECK(c_max(t, {"B"}, i, CMaxAlgorithm::brute) == sign * degree_truncated(t, "B", i));
        }
    }
}

TEST_CASE("validate_product_trivialization") {
    Node root;
    // labels: E1, E2, N, W with W = E1 + E2 + N on each edge.
    root.children.push_back(edge({1, 2, -1, 2}, leaf(1)));
    root.children.push_back(edge({0, -3, 1, -2}, leaf(1)));
    StratTree t(1, {{"E1", 1}, {"E2", 1}, {"N", 1}, {"W", 1}}, root);
    CHECK(validate_product_trivialization(t, {"E1", "E2"}, "W", "N"));
    Node bad = root;
    bad.children[0].numerators[0] += 1;
    CHECK_FALSE(validate_product_trivialization(StratTree(1, t.bundles(), bad), {"E1", "E2"}, "W", "N"));
    Node single;
    single.children.push_back(edge({4, 0, 4}, leaf(1)));
    CHECK(validate_product_trivialization(StratTree(1, {{"E", 1}, {"Z", 1}, {"W", 1}}, single), {"E"}, "W", "Z"));
    // Effective markings compare as rationals across different denominators.
    Node frac;
    frac.children.push_back(edge({1, 0, 2}, leaf(1)));
    CHECK(validate_product_trivialization(StratTree(1, {{"E", 2}, {"Z", 1}, {"W", 4}}, frac), {"E"}, "W", "Z"));
}

TEST_CASE("JSON round trip and parse errors") {
    for (int it = 0; it < 100; ++it) {
        auto t = gen::random_tree(static_cast<unsigned>(gen::uniform(0, 3)), {"L", "M"});
        CHECK(tree_from_json(tree_to_json(t)) == t);
        CHECK(tree_from_json_text(tree_to_json(t).dump()) == t);
    }
    const std::string ok = R"({"dimension":1,"bundles":[{"label":"L","denominator":1},{"label":"M"}],
        "root":{"children":[{"markings":{"L":2},"node":{"degree":1}}]}})";
    auto t = tree_from_json_text(ok);
    CHECK(t.root().children[0].numerators[1] == 0);

    auto field_of = [](const std::string& text) {
        try {
            tree_from_json_text(text);
        } catch (const TreeParseError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(R"({"dimension":1,"bundles":[{"label":"L"}],"root":{"children":[{"markings":{"X":1},"node":{"degree":1}}]}})") ==
          "root.children[0].markings.X");
    CHECK(field_of(R"({"dimension":2,"bundles":[{"label":"L"}],"root":{"children":[{"markings":{"L":1},"node":{"degree":1}}]}})") ==
          "root.children[0].node");
    CHECK(field_of(R"({"bundles":[],"root":{"degree":1}})") == "dimension");
    CHECK(field_of(R"({"dimension":0,"bundles":[{"label":"L","denominator":0}],"root":{"degree":1}})") ==
          "bundles[0].denominator");
    CHECK(field_of("{not json") == "$");
}
