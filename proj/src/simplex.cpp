#include "jetcalc/simplex.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

namespace jetcalc {

SimplexSpec::SimplexSpec(std::vector<long> a) : weights(std::move(a)) {
    if (weights.empty()) throw InvalidArgument("simplex needs at least one weight");
    for (long w : weights)
        if (w < 1) throw InvalidArgument("simplex weights must be >= 1");
}

long SimplexSpec::gcd() const {
    long g = 0;
    for (long w : weights) g = std::gcd(g, w);
    return g;
}

SimplexSpec SimplexSpec::jets(unsigned k, unsigned r) {
    if (k == 0 || r == 0) throw InvalidArgument("jet simplex needs k, r >= 1");
    std::vector<long> a;
    for (unsigned j = 1; j <= k; ++j)
        for (unsigned l = 0; l < r; ++l) a.push_back(j);
    return SimplexSpec(std::move(a));
}

QuadraticSurd QuadraticSurd::make(const Rational& coeff, const Integer& radicand) {
    if (radicand < 0) throw InvalidArgument("negative radicand");
    QuadraticSurd s;
    s.coeff = coeff;
    if (radicand == 0) {
        s.coeff = 0;
        return s;
    }
    // Pull square factors out by trial division; radicands here are tiny.
    Integer rest = radicand, out = 1;
    for (Integer f = 2; f * f <= rest; ++f) {
        while (rest % (f * f) == 0) {
            rest /= f * f;
            out *= f;
        }
    }
    s.coeff *= out;
    s.radicand = rest;
    return s;
}

double QuadraticSurd::to_double() const { return coeff.get_d() * std::sqrt(radicand.get_d()); }

Rational surd_ratio(const QuadraticSurd& num, const QuadraticSurd& den) {
    if (den.coeff == 0) throw SingularInput("division by a zero surd");
    if (num.coeff == 0) return 0;
    if (num.radicand != den.radicand) throw InvalidArgument("surd ratio is irrational");
    return num.coeff / den.coeff;
}

Rational AffineForm::eval(const std::vector<Rational>& t) const {
    if (t.size() != coeffs.size()) throw ArityMismatch("affine form arity mismatch");
    Rational v = constant;
    for (std::size_t i = 0; i < t.size(); ++i) v += coeffs[i] * t[i];
    return v;
}

Integer factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

namespace {
Integer sum_squares(const SimplexSpec& a) {
    Integer s = 0;
    for (long w : a.weights) s += Integer(w) * w;
    return s;
}
Integer product(const SimplexSpec& a) {
    Integer p = 1;
    for (long w : a.weights) p *= w;
    return p;
}
} // namespace

QuadraticSurd volume(const SimplexSpec& a) {
    const unsigned r = static_cast<unsigned>(a.arity());
    return QuadraticSurd::make(Rational(1) / Rational(factorial(r - 1) * product(a)), sum_squares(a));
}

Rational standard_volume(unsigned r) {
    if (r < 1) throw InvalidArgument("standard_volume needs r >= 1");
    return Rational(1) / Rational(factorial(r));
}

QuadraticSurd fundamental_domain_volume(const SimplexSpec& a) {
    if (a.arity() < 2) throw DegenerateLattice("H is trivial for r = 1");
    return QuadraticSurd::make(make_rational(1, a.gcd()), sum_squares(a));
}

Rational cell_ratio(const SimplexSpec& a) {
    if (a.arity() < 2) throw DegenerateLattice("H is trivial for r = 1");
    return make_rational(Integer(a.gcd()), factorial(static_cast<unsigned>(a.arity() - 1)) * product(a));
}

Rational monomial_moment(const SimplexSpec& a, const std::vector<unsigned>& p) {
    if (p.size() != a.arity()) throw ArityMismatch("exponent vector length differs from simplex arity");
    const unsigned r = static_cast<unsigned>(a.arity());
    unsigned total = 0;
    Integer num = factorial(r - 1), den = 1;
    for (std::size_t i = 0; i < r; ++i) {
        total += p[i];
        num *= factorial(p[i]);
        Integer ap;
        mpz_ui_pow_ui(ap.get_mpz_t(), static_cast<unsigned long>(a.weights[i]), p[i]);
        den *= ap;
    }
    den *= factorial(total + r - 1);
    return make_rational(num, den);
}

Rational beta_integral(unsigned u, unsigned v) {
    return make_rational(factorial(u) * factorial(v), factorial(u + v + 1));
}

std::vector<std::vector<Rational>> gram_matrix(const std::vector<Rational>& alpha) {
    if (alpha.size() < 2) throw InvalidArgument("gram matrix needs r >= 2");
    const std::size_t n = alpha.size() - 1;
    const Rational last = alpha.back() * alpha.back();
    std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n, last));
    for (std::size_t i = 0; i < n; ++i) g[i][i] += alpha[i] * alpha[i];
    return g;
}

Rational gram_det(const std::vector<Rational>& alpha) {
    if (alpha.size() < 2) throw InvalidArgument("gram_det needs r >= 2");
    Rational prod = 1, inv = 0;
    for (const auto& x : alpha) {
        if (x == 0) throw SingularInput("gram_det: zero entry");
        prod *= x * x;
        inv += 1 / (x * x);
    }
    return prod * inv;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

namespace {
struct ExpHash {
    std::size_t operator()(const std::vector<unsigned>& v) const {
        std::size_t h = 1469598103934665603ULL;
        for (unsigned x : v) h = (h ^ x) * 1099511628211ULL;
        return h;
    }
};
} // namespace

Rational affine_product_expectation(const SimplexSpec& a, const std::vector<AffineForm>& forms) {
    const std::size_t r = a.arity();
    for (const auto& f : forms)
        if (f.coeffs.size() != r) throw ArityMismatch("affine form arity differs from simplex arity");
    // Expand Π forms as a sparse polynomial in t, then integrate monomial by monomial.
    std::unordered_map<std::vector<unsigned>, Rational, ExpHash> poly;
    poly.emplace(std::vector<unsigned>(r, 0), Rational(1));
    for (const auto& f : forms) {
        std::unordered_map<std::vector<unsigned>, Rational, ExpHash> next;
        for (const auto& [e, c] : poly) {
            if (f.constant != 0) next[e] += c * f.constant;
            for (std::size_t i = 0; i < r; ++i) {
                if (f.coeffs[i] == 0) continue;
                auto e2 = e;
                ++e2[i];
                next[e2] += c * f.coeffs[i];
            }
        }
        poly = std::move(next);
    }
    Rational total = 0;
    for (const auto& [e, c] : poly)
        if (c != 0) total += c * monomial_moment(a, e);
    return total;
}

} // namespace jetcalc
