#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "jetcalc/upsilon.hpp"

using namespace jetcalc;

namespace {

StratTree split_tree() {
    Node root;
    root.children.push_back(edge({1, 0}, leaf(1)));
    root.children.push_back(edge({0, -1}, leaf(1)));
    return StratTree(1, {{"L1", 1}, {"L2", 1}}, root);
}

// Independent oracle: Σ over paths of deg·Π marks, bucketed by the number of negative marks.
void by_index(const StratTree& t, const Node& node, const std::vector<std::size_t>& labels,
              const std::vector<Rational>& x, const Rational& acc, unsigned neg, std::vector<Rational>& out) {
    if (node.is_leaf()) {
        if (neg < out.size()) out[neg] += acc * node.degree;
        return;
    }
    for (const auto& e : node.children) {
        Rational m = 0;
        for (std::size_t c = 0; c < labels.size(); ++c) m += x[c] * t.marking(e, labels[c]);
        by_index(t, e.node, labels, x, acc * m, neg + (m < 0), out);
    }
}

std::vector<Rational> random_point(std::size_t r) {
    std::vector<Rational> t;
    for (std::size_t c = 0; c < r; ++c) t.push_back(make_rational(gen::uniform(0, 6), gen::uniform(1, 4)));
    return t;
}

// Random tree whose edges carry one sign across all labels.
StratTree sign_constant_tree(unsigned n, const std::vector<std::string>& labels) {
    auto t = gen::random_tree(n, labels);
    std::function<void(Node&)> fix = [&](Node& node) {
        for (auto& e : node.children) {
            const long s = gen::uniform(0, 1) ? 1 : -1;
            for (auto& m : e.numerators) m = s * abs(m);
            fix(e.node);
        }
    };
    Node root = t.root();
    fix(root);
    return StratTree(n, t.bundles(), root);
}

} // namespace

TEST_CASE("upsilon_eval examples") {
    auto prob = make_problem(split_tree(), {"L1", "L2"}, SimplexSpec({1, 1}));
    const std::vector<Rational> t{make_rational(1, 2), make_rational(1, 2)};
    CHECK(upsilon_eval(prob, t, 0) == make_rational(1, 2));
    CHECK(upsilon_eval(prob, t, 1) == 0);
    CHECK_THROWS_AS(upsilon_eval(prob, {Rational(1)}, 0), ArityMismatch);
    CHECK_THROWS_AS(make_problem(split_tree(), {"L1"}, SimplexSpec({1, 1})), ArityMismatch);

    auto pos = make_problem(ample_tree(2, {{1, 2}, {3}}), {"A"}, SimplexSpec({1}));
    for (unsigned i = 0; i <= 2; ++i) CHECK(upsilon_eval(pos, {Rational(2)}, i) == 36);
}

TEST_CASE("upsilon_N_eval examples") {
    Node root;
    root.children.push_back(edge({1, -1}, leaf(1)));
    StratTree t(1, {{"L", 1}, {"P", 1}}, root);
    auto prob = make_problem(t, {"L"}, SimplexSpec({1}), std::string("P"));
    CHECK(upsilon_N_eval(prob, {make_rational(1, 2)}, 0) == 0);
    CHECK(upsilon_N_eval(prob, {make_rational(1, 2)}, 1) == make_rational(-1, 2));
    CHECK(upsilon_N_eval(prob, {Rational(2)}, 0) == 1);
    CHECK_THROWS_AS(upsilon_N_eval(make_problem(t, {"L"}, SimplexSpec({1})), {Rational(1)}, 0), AuxMissing);

    Node zero;
    zero.children.push_back(edge({3, 0}, leaf(2)));
    zero.children.push_back(edge({-1, 0}, leaf(1)));
    auto pz = make_problem(StratTree(1, {{"L", 1}, {"P", 1}}, zero), {"L"}, SimplexSpec({1}), std::string("P"));
    for (unsigned i = 0; i <= 1; ++i)
        CHECK(upsilon_N_eval(pz, {make_rational(2, 3)}, i) == upsilon_eval(pz, {make_rational(2, 3)}, i));
}

TEST_CASE("phi_eval examples") {
    Node root;
    root.children.push_back(edge({1, -2}, leaf(1)));
    StratTree t(1, {{"L1", 1}, {"L2", 1}}, root);
    auto prob = make_problem(t, {"L1", "L2"}, SimplexSpec({1, 1}));
    const std::vector<std::vector<Rational>> u{{1, 0}, {0, 1}};
    CHECK(phi_eval(prob, u, 1) == 2);
    CHECK(phi_eval(prob, u, 0) == 1);
    CHECK_THROWS_AS(phi_eval(prob, {}, 0), InvalidArgument);
}

TEST_CASE("property: diagonal identity, homogeneity and index monotonicity") {
    for (int it = 0; it < 200; ++it) {
        const unsigned n = static_cast<unsigned>(gen::uniform(1, 3));
        auto t = gen::random_tree(n, {"A", "B"});
        auto prob = make_problem(t, {"A", "B"}, SimplexSpec({1, 2}));
        const auto x = random_point(2);
        std::vector<Rational> oracle(n + 1, 0);
        by_index(t, t.root(), {0, 1}, x, Rational(1), 0, oracle);
        Rational running = 0;
        const Rational lambda = make_rational(gen::uniform(1, 5), gen::uniform(1, 3));
        std::vector<Rational> xs;
        for (const auto& v : x) xs.push_back(lambda * v);
        for (unsigned i = 0; i <= n; ++i) {
            running += oracle[i];
            const Rational u = upsilon_eval(prob, x, i);
            CHECK(u == running);
            if (i > 0) CHECK(u - upsilon_eval(prob, x, i - 1) == oracle[i]);
            const Rational sign = i % 2 ? -1 : 1;
            const auto p = static_cast<std::size_t>(gen::uniform(1, 3));
            CHECK(phi_eval(prob, std::vector<std::vector<Rational>>(p, x), i) == sign * u);
            CHECK(upsilon_eval(prob, xs, i) == pow(lambda, n) * u);
            std::vector<std::vector<Rational>> pts{random_point(2), random_point(2)}, scaled = pts;
            for (auto& q : scaled)
                for (auto& v : q) v *= lambda;
            CHECK(phi_eval(prob, scaled, i) == pow(lambda, n) * phi_eval(prob, pts, i));
        }
    }
}

TEST_CASE("integrate_exact examples") {
    auto prob = make_problem(split_tree(), {"L1", "L2"}, SimplexSpec({1, 1}));
    CHECK(integrate_exact(prob, 1, false) == 0);
    CHECK(integrate_exact(prob, 0, false) == make_rational(1, 2));

    Node mid;
    mid.children.push_back(edge({1}, leaf(1)));
    Node root;
    root.children.push_back(edge({1}, mid));
    auto chain = make_problem(StratTree(2, {{"L1", 1}}, root), {"L1"}, SimplexSpec({1}));
    CHECK(integrate_exact(chain, 2, false) == 1);

    auto pos = make_problem(ample_tree(2, {{1, 3}, {2}}), {"A", "A"}, SimplexSpec({1, 2}));
    CHECK(integrate_exact(pos, 0, false) == integrate_exact(pos, 2, false));
    // E[(t₁ + t₂)²] on Δ_(1,2) by monomial moments.
    const SimplexSpec a({1, 2});
    const Rational e2 = monomial_moment(a, {2, 0}) + 2 * monomial_moment(a, {1, 1}) + monomial_moment(a, {0, 2});
    CHECK(integrate_exact(pos, 2, false) == 8 * e2);
}

TEST_CASE("mixed sign edge: exact refuses, MC finds E[(t1 - t2)+] = 1/4") {
    Node root;
    root.children.push_back(edge({1, -1}, leaf(1)));
    auto prob = make_problem(StratTree(1, {{"L1", 1}, {"L2", 1}}, root), {"L1", "L2"}, SimplexSpec({1, 1}));
    CHECK_THROWS_AS(integrate_exact(prob, 0, false), NotSignConstant);
    CHECK(integrate_exact(prob, 1, false) == 0);
    // t₁ = s uniform on [0,1], t₁ − t₂ = 2s − 1: ∫_{1/2}^{1} (2s − 1) ds = 1/4.
    auto s = integrate_mc(prob, 0, MCConfig{kDefaultSeed, 400000, 2}, false);
    CHECK(std::fabs(s.mean - 0.25) <= 4 * s.stderr_);
}

TEST_CASE("integrate_mc on a constant integrand") {
    auto point = make_problem(StratTree(0, {{"L", 1}}, leaf(3)), {"L", "L"}, SimplexSpec({1, 1}));
    auto c = integrate_mc(point, 0, MCConfig{7, 50000, 3}, false);
    CHECK(c.stderr_ == 0);
    CHECK(c.mean == 3);

    // t₁ + t₂ = 1 on Δ_(1,1): constant up to rounding.
    Node root;
    root.children.push_back(edge({1}, leaf(3)));
    auto prob = make_problem(StratTree(1, {{"L", 1}}, root), {"L", "L"}, SimplexSpec({1, 1}));
    auto s = integrate_mc(prob, 0, MCConfig{7, 50000, 3}, false);
    CHECK(s.stderr_ < 1e-15);
    CHECK(s.mean == doctest::Approx(3).epsilon(1e-12));
    CHECK_THROWS_AS(integrate_mc(prob, 0, MCConfig{7, 0, 1}, false), InvalidArgument);
}

TEST_CASE("property: exact and MC integration agree on sign-constant trees") {
    int outside = 0;
    const int trials = 40;
    for (int it = 0; it < trials; ++it) {
        const unsigned n = static_cast<unsigned>(gen::uniform(1, 3));
        auto t = sign_constant_tree(n, {"A", "B", "P"});
        const SimplexSpec a({gen::uniform(1, 3), gen::uniform(1, 3)});
        auto prob = make_problem(t, {"A", "B"}, a);
        const unsigned i = static_cast<unsigned>(gen::uniform(0, n));
        const Rational exact = integrate_exact(prob, i, false);
        auto s = integrate_mc(prob, i, MCConfig{kDefaultSeed + it, 100000, 2}, false);
        if (std::fabs(s.mean - exact.get_d()) > 4 * s.stderr_ + 1e-12) ++outside;
    }
    // 4σ misses are rare; one is tolerated out of the batch.
    CHECK(outside <= 1);
}

TEST_CASE("harmonic_twist") {
    Node root;
    root.children.push_back(edge({1, 2, 4}, leaf(1)));
    StratTree t(1, {{"A", 1}, {"B", 1}, {"F", 1}}, root);
    auto p1 = harmonic_twist(t, {"A", "B"}, "F", 1);
    CHECK(p1.aux->scale == make_rational(1, 2));
    CHECK(p1.simplex.weights == std::vector<long>{1, 1});
    auto p2 = harmonic_twist(t, {"A"}, "F", 2);
    CHECK(p2.aux->scale == make_rational(3, 4));
    CHECK(p2.simplex.weights == std::vector<long>{1, 2});
    auto p3 = harmonic_twist(t, {"A", "B"}, "F", 3);
    CHECK(p3.simplex.weights == std::vector<long>{1, 1, 2, 2, 3, 3});
    CHECK(p3.coord_labels == std::vector<std::size_t>{0, 1, 0, 1, 0, 1});
    CHECK(p3.aux->scale == make_rational(11, 36));
    CHECK_THROWS_AS(harmonic_twist(t, {"A"}, "F", 0), InvalidArgument);

    Node z;
    z.children.push_back(edge({1, 2, 0}, leaf(1)));
    auto pz = harmonic_twist(StratTree(1, t.bundles(), z), {"A", "B"}, "F", 2);
    const std::vector<Rational> x{1, 2, 3, 4};
    CHECK(upsilon_N_eval(pz, x, 1) == upsilon_eval(pz, x, 1));
}

TEST_CASE("jet_chi1_bound_coeff for n = 1") {
    for (int it = 0; it < 30; ++it) {
        auto t = gen::random_tree(1, {"A", "B", "F"});
        const unsigned k = static_cast<unsigned>(gen::uniform(1, 5));
        const unsigned r = 2, kr = k * r;
        auto c = jet_chi1_bound_coeff(t, {"A", "B"}, "F", k, std::nullopt);
        REQUIRE(c.exact);
        Rational c1 = 0;
        for (const auto& e : t.root().children)
            c1 += (t.marking(e, 0) + t.marking(e, 1) + t.marking(e, 2)) * e.node.degree;
        const Rational pref = make_rational(Integer(kr), pow(Rational(factorial(k)), r).get_num());
        CHECK(c.prefactor == pref);
        CHECK(c.value == harmonic_number(k) / Rational(kr) * c1 * pref);
    }
}

TEST_CASE("jet_chi1_bound_coeff on an ample model") {
    auto t = ample_tree(2, {{1, 2}, {1}});
    Node root = t.root();
    std::function<void(Node&)> add_aux = [&](Node& n) {
        for (auto& e : n.children) {
            e.numerators.push_back(e.numerators[0]);
            add_aux(e.node);
        }
    };
    add_aux(root);
    StratTree tf(2, {{"A", 1}, {"F", 1}}, root);
    auto c = jet_chi1_bound_coeff(tf, {"A"}, "F", 2, std::nullopt);
    REQUIRE(c.exact);
    auto prob = harmonic_twist(tf, {"A"}, "F", 2);
    CHECK(c.value == c.prefactor * integrate_exact(prob, 2, true));
    // binom(2+2−1, 1)/(2!)¹ = 3/2
    CHECK(c.prefactor == make_rational(3, 2));
}
