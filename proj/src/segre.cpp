#include "jetcalc/segre.hpp"

#include <numeric>

#include "jetcalc/lattice.hpp"

namespace jetcalc {

GradedPoly segre_single(const GradedPoly& s_total, unsigned rank, long a) {
    if (a < 1) throw InvalidArgument("weight must be >= 1");
    if (rank < 1) throw InvalidArgument("rank must be >= 1");
    const Rational inv_a = make_rational(1, a);
    GradedPoly out(s_total.ring());
    for (const auto& [e, c] : s_total.terms())
        out.add_term(e, c * pow(inv_a, s_total.weighted_degree(e)));
    return out * pow(inv_a, rank - 1);
}

GradedPoly whitney_weighted(const std::vector<WeightedPart>& parts) {
    if (parts.empty()) throw EmptyBundle("whitney_weighted needs at least one summand");
    const RingPtr& ring = parts.front().segre.ring();
    GradedPoly prod = GradedPoly::constant(ring, 1);
    long g = 0;
    Integer weight_product = 1;
    for (const auto& part : parts) {
        prod = prod * segre_single(part.segre, part.rank, part.weight);
        g = std::gcd(g, part.weight);
        weight_product *= part.weight;
    }
    return prod * make_rational(Integer(g), weight_product);
}

GradedPoly chi_leading_exact(const SimplexSpec& weights, unsigned n, long m, const RingPtr& ring) {
    return weighted_power_poly_sum(weights, n, m, ring);
}

GradedPoly chi_leading_asymptotic(const SimplexSpec& weights, unsigned n, const RingPtr& ring) {
    const std::size_t r = weights.arity();
    if (ring->size() != r) throw IncompatibleRing("ring must have one variable per weight");
    if (ring->bound() < n) throw OutOfRange("ring bound below requested degree");
    Integer prod = 1;
    for (long w : weights.weights) prod *= w;
    const Rational lead = make_rational(Integer(weights.gcd()), prod);
    // Σ_{|p|=n} Π (αᵢ/aᵢ)^{pᵢ}: the degree-n part of Π 1/(1 − αᵢ/aᵢ).
    GradedPoly acc = GradedPoly::constant(ring, 1);
    for (std::size_t i = 0; i < r; ++i) {
        GradedPoly geo(ring);
        Exponent e(r, 0);
        for (unsigned d = 0; d <= n; ++d) {
            e[i] = d;
            geo.add_term(e, pow(make_rational(1, weights.weights[i]), d));
        }
        acc = acc * geo;
    }
    return poly_component(acc, n) * lead;
}

RingPtr surface_ring() { return make_ring(2, {{"c1", 1}, {"c2", 2}}); }

GGCoeffs gg_surface_coeffs(unsigned k) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    GGCoeffs out{0, 0};
    for (unsigned i = 1; i <= k; ++i) {
        out.beta += make_rational(1, long(i) * i);
        for (unsigned j = i; j <= k; ++j) out.alpha += make_rational(1, long(i) * j);
    }
    return out;
}

GradedPoly gg_surface_class(unsigned k) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    RingPtr ring = surface_ring();
    const auto c1 = GradedPoly::variable(ring, "c1");
    const auto c2 = GradedPoly::variable(ring, "c2");
    const auto one = GradedPoly::constant(ring, 1);
    // Segre series of T_X for a surface: 1 − c1 + (c1² − c2).
    const GradedPoly s = one - c1 + (c1 * c1 - c2);
    GradedPoly prod = one;
    for (unsigned i = 1; i <= k; ++i) {
        const Rational inv = make_rational(1, i);
        prod = prod * poly_scale_vars(s, {{"c1", inv}, {"c2", inv * inv}});
    }
    return poly_component(prod, 2) * (Rational(1) / Rational(factorial(k)));
}

GradedPoly gg_surface_class_closed(unsigned k) {
    RingPtr ring = surface_ring();
    const auto c = gg_surface_coeffs(k);
    const auto c1 = GradedPoly::variable(ring, "c1");
    const auto c2 = GradedPoly::variable(ring, "c2");
    return (c1 * c1 * c.alpha - c2 * c.beta) * (Rational(1) / Rational(factorial(k)));
}

Integer jet_rank(unsigned n, unsigned k, unsigned m) {
    // Multiply by 1/(1−q^j) n times for each j, truncating at q^m.
    std::vector<Integer> series(m + 1, 0);
    series[0] = 1;
    for (unsigned j = 1; j <= k; ++j)
        for (unsigned rep = 0; rep < n; ++rep)
            for (unsigned d = j; d <= m; ++d) series[d] += series[d - j];
    return series[m];
}

} // namespace jetcalc
