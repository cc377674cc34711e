#pragma once

#include <vector>

#include "jetcalc/ring.hpp"

namespace jetcalc {

// Δ_a = {t ∈ ℝ₊^r : Σ aᵢtᵢ = 1}.
struct SimplexSpec {
    std::vector<long> weights;

    SimplexSpec() = default;
    explicit SimplexSpec(std::vector<long> a);
    std::size_t arity() const { return weights.size(); }
    long gcd() const;
    // Δ_{(1,…,1,2,…,2,…,k,…,k)} with each weight repeated r times.
    static SimplexSpec jets(unsigned k, unsigned r);
    static SimplexSpec standard(unsigned r) { return SimplexSpec(std::vector<long>(r, 1)); }
};

// coeff·√radicand with radicand squarefree.
struct QuadraticSurd {
    Rational coeff;
    Integer radicand = 1;

    static QuadraticSurd make(const Rational& coeff, const Integer& radicand);
    double to_double() const;
    bool operator==(const QuadraticSurd& o) const {
        return coeff == o.coeff && (coeff == 0 || radicand == o.radicand);
    }
};

// Exact quotient of two surds with equal radicand.
Rational surd_ratio(const QuadraticSurd& num, const QuadraticSurd& den);

struct AffineForm {
    Rational constant;
    std::vector<Rational> coeffs;

    Rational eval(const std::vector<Rational>& t) const;
};

Integer factorial(unsigned n);

QuadraticSurd volume(const SimplexSpec& a);
Rational standard_volume(unsigned r);
QuadraticSurd fundamental_domain_volume(const SimplexSpec& a);
Rational cell_ratio(const SimplexSpec& a);
Rational monomial_moment(const SimplexSpec& a, const std::vector<unsigned>& p);
Rational beta_integral(unsigned u, unsigned v);
Rational gram_det(const std::vector<Rational>& alpha);
// The (r−1)×(r−1) Gram matrix whose determinant gram_det evaluates in closed form.
std::vector<std::vector<Rational>> gram_matrix(const std::vector<Rational>& alpha);
Rational determinant(std::vector<std::vector<Rational>> m);
Rational affine_product_expectation(const SimplexSpec& a, const std::vector<AffineForm>& forms);

} // namespace jetcalc
