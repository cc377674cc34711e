#include "doctest.h"
#include "gen.hpp"
#include "jetcalc/lattice.hpp"
#include "jetcalc/segre.hpp"

#include <cmath>

using namespace jetcalc;

namespace {

GradedPoly var(const RingPtr& R, int i) { return GradedPoly::variable(R, "alpha" + std::to_string(i)); }

// Σ_p α^p truncated at the ring bound.
GradedPoly geometric(const RingPtr& R, std::size_t i) {
    GradedPoly s(R);
    Exponent e(R->size(), 0);
    for (unsigned d = 0; d <= R->bound(); ++d) {
        e[i] = d;
        s.add_term(e, 1);
    }
    return s;
}

} // namespace

TEST_CASE("segre_single examples") {
    auto R = alpha_ring(1, 2);
    auto s = geometric(R, 0);
    CHECK(segre_single(s, 1, 1) == s);
    CHECK(segre_single(s, 1, 2) ==
          GradedPoly::constant(R, 1) + var(R, 1) * make_rational(1, 2) + var(R, 1) * var(R, 1) * make_rational(1, 4));
    CHECK(segre_single(s, 1, 2) == poly_scale_vars(s, {{"alpha1", make_rational(1, 2)}}));
    CHECK(segre_single(GradedPoly::constant(R, 1), 2, 3) == GradedPoly::constant(R, make_rational(1, 3)));
}

TEST_CASE("whitney_weighted examples") {
    auto R1 = alpha_ring(1, 1);
    auto s = GradedPoly::constant(R1, 1) + var(R1, 1);
    CHECK(whitney_weighted({{s, 1, 1}}) == s);

    auto R = alpha_ring(2, 1);
    auto one = GradedPoly::constant(R, 1);
    auto w11 = whitney_weighted({{geometric(R, 0), 1, 1}, {geometric(R, 1), 1, 1}});
    CHECK(poly_component(w11, 1) == var(R, 1) + var(R, 2));
    auto w12 = whitney_weighted({{one + var(R, 1), 1, 1}, {one + var(R, 2), 1, 2}});
    CHECK(w12 == one * make_rational(1, 2) + var(R, 1) * make_rational(1, 2) + var(R, 2) * make_rational(1, 4));
    CHECK_THROWS_AS(whitney_weighted({}), EmptyBundle);
}

TEST_CASE("chi_leading_exact examples") {
    auto R = alpha_ring(2, 1);
    CHECK(chi_leading_exact(SimplexSpec({1, 1}), 1, 4, R) == var(R, 1) * Rational(10) + var(R, 2) * Rational(10));
    CHECK(chi_leading_exact(SimplexSpec({1, 1}), 1, 0, R).is_zero());
    CHECK(chi_leading_exact(SimplexSpec({1, 2}), 1, 4, R) == var(R, 1) * Rational(6) + var(R, 2) * Rational(3));
}

TEST_CASE("chi_leading_asymptotic examples") {
    auto R = alpha_ring(2, 1);
    CHECK(chi_leading_asymptotic(SimplexSpec({1, 1}), 1, R) == var(R, 1) + var(R, 2));
    CHECK(chi_leading_asymptotic(SimplexSpec({1, 2}), 1, R) ==
          (var(R, 1) + var(R, 2) * make_rational(1, 2)) * make_rational(1, 2));
    CHECK(chi_leading_asymptotic(SimplexSpec({2, 4}), 0, R) == GradedPoly::constant(R, make_rational(2, 8)));
    // Ratio check against the exact sum at m = 40, 80: error shrinks.
    double prev = INFINITY;
    for (long m : {40, 80}) {
        auto exact = chi_leading_exact(SimplexSpec({1, 2}), 1, m, R) * make_rational(2, m * m);
        auto diff = exact - chi_leading_asymptotic(SimplexSpec({1, 2}), 1, R);
        double err = 0;
        for (const auto& [e, c] : diff.terms()) err = std::max(err, std::fabs(c.get_d()));
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("property: Whitney degree-n part equals the chi asymptotic coefficient") {
    for (std::size_t r = 1; r <= 3; ++r)
        for (int it = 0; it < 15; ++it) {
            std::vector<long> a;
            for (std::size_t i = 0; i < r; ++i) a.push_back(gen::uniform(1, 3));
            const unsigned n = static_cast<unsigned>(gen::uniform(0, 3));
            auto R = alpha_ring(r, n);
            std::vector<WeightedPart> parts;
            for (std::size_t i = 0; i < r; ++i) parts.push_back({geometric(R, i), 1, a[i]});
            CHECK(poly_component(whitney_weighted(parts), n) == chi_leading_asymptotic(SimplexSpec(a), n, R));
        }
}

TEST_CASE("property: chi convergence error decreases over M, 2M, 4M") {
    for (const auto& a : std::vector<std::vector<long>>{{1, 1}, {1, 2}, {2, 3}, {1, 1, 2}}) {
        SimplexSpec s(a);
        for (unsigned n = 1; n <= 2; ++n) {
            auto R = alpha_ring(a.size(), n);
            const unsigned e = n + unsigned(a.size()) - 1;
            const auto asym = chi_leading_asymptotic(s, n, R);
            double prev = INFINITY;
            for (long m : {20 * s.gcd(), 40 * s.gcd(), 80 * s.gcd()}) {
                auto norm = chi_leading_exact(s, n, m, R) * (Rational(factorial(e)) / pow(Rational(m), e));
                const auto diff = norm - asym;
                double err = 0;
                for (const auto& [x, c] : diff.terms()) err = std::max(err, std::fabs(c.get_d()));
                CHECK(err < prev);
                prev = err;
            }
        }
    }
}

TEST_CASE("gg_surface_coeffs and class") {
    auto c2 = gg_surface_coeffs(2), c3 = gg_surface_coeffs(3), c1 = gg_surface_coeffs(1);
    CHECK(c2.alpha == make_rational(7, 4));
    CHECK(c2.beta == make_rational(5, 4));
    CHECK(c3.alpha == make_rational(85, 36));
    CHECK(c3.beta == make_rational(49, 36));
    CHECK(c1.alpha == 1);
    CHECK(c1.beta == 1);
    CHECK(gg_surface_class(2).to_factored_string() == "(7*c1^2 - 5*c2)/8");
    CHECK(gg_surface_class(3).to_factored_string() == "(85*c1^2 - 49*c2)/216");
    CHECK(gg_surface_class(1).to_string() == "c1^2 - c2");
    for (unsigned k = 1; k <= 12; ++k) CHECK(gg_surface_class(k) == gg_surface_class_closed(k));
}

TEST_CASE("gg class matches the weighted Whitney product of T_X in weights 1..k") {
    // Whitney carries an extra gcd/Πa · Π 1/a^{rk−1} = 1/(k!)² normalization.
    auto R = surface_ring();
    auto c1 = GradedPoly::variable(R, "c1"), c2 = GradedPoly::variable(R, "c2");
    const GradedPoly s = GradedPoly::constant(R, 1) - c1 + (c1 * c1 - c2);
    for (unsigned k = 1; k <= 6; ++k) {
        std::vector<WeightedPart> parts;
        for (unsigned i = 1; i <= k; ++i) parts.push_back({s, 2, long(i)});
        CHECK(poly_component(whitney_weighted(parts), 2) * Rational(factorial(k)) == gg_surface_class(k));
    }
}

TEST_CASE("jet_rank examples") {
    for (unsigned m = 0; m < 10; ++m) CHECK(jet_rank(1, 1, m) == 1);
    CHECK(jet_rank(2, 1, 2) == 3);
    CHECK(jet_rank(1, 2, 3) == 2);
}

TEST_CASE("property: jet_rank equals nested exponent enumeration") {
    for (unsigned n = 1; n <= 4; ++n)
        for (unsigned k = 1; k <= 4; ++k)
            for (unsigned m = 0; m <= 6; ++m) {
                // Exponents of x_i^{(j)}, i < n, j ≤ k, with Σ j·e = m.
                const unsigned vars = n * k;
                long count = 0;
                std::vector<unsigned> e(vars, 0);
                std::function<void(unsigned, unsigned)> rec = [&](unsigned v, unsigned rem) {
                    if (v == vars) {
                        count += rem == 0;
                        return;
                    }
                    const unsigned w = v % k + 1;
                    for (unsigned x = 0; x * w <= rem; ++x) rec(v + 1, rem - x * w);
                };
                rec(0, m);
                CHECK(jet_rank(n, k, m) == count);
            }
}
