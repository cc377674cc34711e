#include "jetcalc/lattice.hpp"

#include <cstdlib>
#include <numeric>

namespace jetcalc {

namespace {

void compositions_rec(const SimplexSpec& a, std::size_t i, long rem, Composition& cur, long g_tail_next,
                      const std::vector<long>& tail_gcd,
                      const std::function<void(const Composition&)>& visit) {
    const std::size_t r = a.arity();
    const long ai = a.weights[i];
    if (i + 1 == r) {
        if (rem % ai == 0) {
            cur[i] = rem / ai;
            visit(cur);
        }
        return;
    }
    for (long l = rem / ai; l >= 0; --l) {
        long next = rem - ai * l;
        // Prune when the remaining budget is not reachable by the tail weights.
        if (next % tail_gcd[i + 1] != 0) continue;
        cur[i] = l;
        compositions_rec(a, i + 1, next, cur, g_tail_next, tail_gcd, visit);
    }
}

} // namespace

void for_each_composition(const SimplexSpec& a, long m,
                          const std::function<void(const Composition&)>& visit) {
    if (m < 0) return;
    const std::size_t r = a.arity();
    std::vector<long> tail_gcd(r + 1, 0);
    for (std::size_t i = r; i-- > 0;) tail_gcd[i] = std::gcd(tail_gcd[i + 1], a.weights[i]);
    if (m % tail_gcd[0] != 0) return;
    Composition cur(r, 0);
    compositions_rec(a, 0, m, cur, 0, tail_gcd, visit);
}

std::vector<Composition> enumerate_compositions(const SimplexSpec& a, long m) {
    std::vector<Composition> out;
    for_each_composition(a, m, [&](const Composition& l) { out.push_back(l); });
    return out;
}

Integer count_compositions(const SimplexSpec& a, long m) {
    Integer n = 0;
    for_each_composition(a, m, [&](const Composition&) { ++n; });
    return n;
}

Rational power_sum(const SimplexSpec& a, const std::vector<unsigned>& p, long m) {
    if (p.size() != a.arity()) throw ArityMismatch("exponent vector length differs from simplex arity");
    Integer sum = 0, term;
    for_each_composition(a, m, [&](const Composition& l) {
        term = 1;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (p[i] == 0) continue;
            Integer x;
            mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(l[i]), p[i]);
            term *= x;
        }
        sum += term;
    });
    Integer den = 1;
    for (unsigned pi : p) den *= factorial(pi);
    return make_rational(sum, den);
}

Rational power_sum_asymptotic(const SimplexSpec& a, const std::vector<unsigned>& p) {
    if (p.size() != a.arity()) throw ArityMismatch("exponent vector length differs from simplex arity");
    Integer den = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Integer x;
        mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(a.weights[i]), p[i] + 1);
        den *= x;
    }
    return make_rational(Integer(a.gcd()), den);
}

RingPtr alpha_ring(std::size_t r, unsigned bound) {
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < r; ++i) vars.push_back({"alpha" + std::to_string(i + 1), 1});
    return make_ring(bound, std::move(vars));
}

namespace {
void for_each_exponent(std::size_t r, unsigned n, const std::function<void(const std::vector<unsigned>&)>& f) {
    std::vector<unsigned> e(r, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned rem) {
        if (i + 1 == r) {
            e[i] = rem;
            f(e);
            return;
        }
        for (unsigned x = rem + 1; x-- > 0;) {
            e[i] = x;
            rec(i + 1, rem - x);
        }
    };
    if (r == 0) return;
    rec(0, n);
}
} // namespace

GradedPoly weighted_power_poly_sum(const SimplexSpec& a, unsigned n, long m, const RingPtr& ring) {
    const std::size_t r = a.arity();
    if (ring->size() != r) throw IncompatibleRing("ring must have one variable per weight");
    for (const auto& v : ring->vars())
        if (v.weight != 1) throw IncompatibleRing("alpha variables must have weight 1");
    if (ring->bound() < n) throw OutOfRange("ring bound below requested degree");
    // Multinomial expansion: (Σ αᵢlᵢ)^n/n! = Σ_{|p|=n} Π αᵢ^{pᵢ} lᵢ^{pᵢ}/pᵢ!.
    GradedPoly out(ring);
    for_each_exponent(r, n, [&](const std::vector<unsigned>& p) {
        out.add_term(p, power_sum(a, p, m));
    });
    return out;
}

LatticeBasis lattice_basis(const SimplexSpec& a) {
    const std::size_t r = a.arity();
    if (r < 2) throw DegenerateLattice("H is trivial for r = 1");
    // Column reduction of the 1×r row [a]: track unimodular column operations in U
    // until a single nonzero entry (= gcd) remains. Columns of U at zero positions
    // then span ker(a). Pivoting on the smallest entry means that whenever some
    // weight already equals gcd(a) the basis is e_j − (a_j/g)·e_p.
    std::vector<long> row = a.weights;
    std::vector<std::vector<long>> U(r, std::vector<long>(r, 0)); // U[col][coord]
    for (std::size_t i = 0; i < r; ++i) U[i][i] = 1;
    for (;;) {
        std::size_t piv = r;
        for (std::size_t i = 0; i < r; ++i)
            if (row[i] != 0 && (piv == r || std::labs(row[i]) < std::labs(row[piv]))) piv = i;
        bool done = true;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == piv || row[i] == 0) continue;
            long q = row[i] / row[piv];
            row[i] -= q * row[piv];
            for (std::size_t c = 0; c < r; ++c) U[i][c] -= q * U[piv][c];
            if (row[i] != 0) done = false;
        }
        if (done) break;
    }
    LatticeBasis b;
    for (std::size_t i = 0; i < r; ++i)
        if (row[i] == 0) b.vectors.push_back(U[i]);
    return b;
}

bool is_primitive_basis(const SimplexSpec& a, const LatticeBasis& basis) {
    const std::size_t r = a.arity();
    if (basis.vectors.size() + 1 != r) return false;
    for (const auto& v : basis.vectors) {
        if (v.size() != r) return false;
        Integer s = 0;
        for (std::size_t i = 0; i < r; ++i) s += Integer(a.weights[i]) * v[i];
        if (s != 0) return false;
    }
    // Signed maximal minors (generalized cross product) of the basis.
    const long g = a.gcd();
    int sign = 0;
    for (std::size_t drop = 0; drop < r; ++drop) {
        std::vector<std::vector<Rational>> m;
        for (const auto& v : basis.vectors) {
            std::vector<Rational> row;
            for (std::size_t i = 0; i < r; ++i)
                if (i != drop) row.emplace_back(v[i]);
            m.push_back(row);
        }
        Rational minor = determinant(m);
        if (drop % 2) minor = -minor;
        Rational expected = make_rational(a.weights[drop], g);
        int s = minor == expected ? 1 : (minor == -expected ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) return false;
        sign = s;
    }
    return true;
}

Integer count_cone_points(const SimplexSpec& a, long m0, const Composition& u, long m) {
    return count_cone_points(a, m0, u, m, lattice_basis(a));
}

Integer count_cone_points(const SimplexSpec& a, long m0, const Composition& u, long m,
                          const LatticeBasis& basis) {
    const std::size_t r = a.arity();
    if (r < 2) throw DegenerateLattice("H is trivial for r = 1");
    if (u.size() != r) throw InvalidCell("cell base point has wrong arity");
    long s = 0;
    for (std::size_t i = 0; i < r; ++i) {
        if (u[i] < 0) throw InvalidCell("cell base point has a negative coordinate");
        s += a.weights[i] * u[i];
    }
    if (s != m0) throw InvalidCell("cell base point is not in H_m0");
    if (m < m0 || m0 <= 0) throw InvalidArgument("count_cone_points needs 0 < m0 <= m");

    // Pick r−1 coordinates on which the basis is invertible; solve c there.
    const std::size_t k = r - 1;
    std::vector<std::vector<Rational>> B(r, std::vector<Rational>(k));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < r; ++i) B[i][j] = basis.vectors[j][i];
    std::vector<std::size_t> rows;
    std::vector<std::vector<Rational>> inv;
    for (std::size_t drop = 0; drop < r && rows.empty(); ++drop) {
        std::vector<std::vector<Rational>> sq;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < r; ++i)
            if (i != drop) {
                sq.push_back(B[i]);
                idx.push_back(i);
            }
        if (determinant(sq) == 0) continue;
        // Gauss–Jordan inverse.
        std::vector<std::vector<Rational>> aug(k, std::vector<Rational>(2 * k));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) aug[i][j] = sq[i][j];
            aug[i][k + i] = 1;
        }
        for (std::size_t c = 0; c < k; ++c) {
            std::size_t p = c;
            while (aug[p][c] == 0) ++p;
            std::swap(aug[p], aug[c]);
            Rational d = aug[c][c];
            for (auto& x : aug[c]) x /= d;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == c || aug[i][c] == 0) continue;
                Rational f = aug[i][c];
                for (std::size_t j = 0; j < 2 * k; ++j) aug[i][j] -= f * aug[c][j];
            }
        }
        inv.assign(k, std::vector<Rational>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) inv[i][j] = aug[i][k + j];
        rows = idx;
    }
    if (rows.empty()) throw DegenerateLattice("basis vectors are linearly dependent");

    const Rational scale = make_rational(m0, m);
    Integer count = 0;
    std::vector<Rational> rhs(k);
    for_each_composition(a, m, [&](const Composition& l) {
        // x = l·m0/m lies on m0·Δ_a; membership in u + Σ[0,1)vⱼ.
        for (std::size_t i = 0; i < k; ++i) rhs[i] = scale * l[rows[i]] - u[rows[i]];
        for (std::size_t j = 0; j < k; ++j) {
            Rational c = 0;
            for (std::size_t i = 0; i < k; ++i) c += inv[j][i] * rhs[i];
            if (c < 0 || c >= 1) return;
        }
        ++count;
    });
    return count;
}

} // namespace jetcalc
