#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "jetcalc/error.hpp"

namespace jetcalc {

// mpq_class keeps values canonical after every arithmetic operation; only
// construction from a raw numerator/denominator pair needs canonicalize().
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);
// "p/q" in lowest terms, or "p" when q = 1.
std::string to_string(const Rational& q);
// Accepts "p", "-p", "p/q".
Rational parse_rational(const std::string& text);
Rational pow(const Rational& base, unsigned exp);

struct Variable {
    std::string name;
    unsigned weight = 1;
};

// Truncation bound plus the ordered variable list. Shared by every polynomial
// built over it; two rings are compatible when they compare equal.
class Ring {
public:
    Ring(unsigned bound, std::vector<Variable> vars);

    unsigned bound() const { return bound_; }
    const std::vector<Variable>& vars() const { return vars_; }
    std::size_t size() const { return vars_.size(); }
    std::size_t index_of(const std::string& name) const;

    bool operator==(const Ring& other) const;

private:
    unsigned bound_;
    std::vector<Variable> vars_;
};

using RingPtr = std::shared_ptr<const Ring>;
RingPtr make_ring(unsigned bound, std::vector<Variable> vars);

using Exponent = std::vector<unsigned>;

class GradedPoly {
public:
    explicit GradedPoly(RingPtr ring);

    static GradedPoly constant(RingPtr ring, const Rational& c);
    static GradedPoly variable(RingPtr ring, const std::string& name,
                               const Rational& coeff = 1);
    static GradedPoly monomial(RingPtr ring, const Exponent& e, const Rational& coeff);

    const RingPtr& ring() const { return ring_; }
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(const Exponent& e) const;
    unsigned weighted_degree(const Exponent& e) const;

    // Adds c·x^e, silently dropping the term if its weighted degree exceeds the bound.
    void add_term(const Exponent& e, const Rational& c);

    GradedPoly operator+(const GradedPoly& other) const;
    GradedPoly operator-(const GradedPoly& other) const;
    GradedPoly operator-() const;
    GradedPoly operator*(const GradedPoly& other) const;
    GradedPoly operator*(const Rational& c) const;
    bool operator==(const GradedPoly& other) const;
    bool operator!=(const GradedPoly& other) const { return !(*this == other); }

    // Terms sorted by weighted degree ascending, then exponent vector
    // lexicographically descending (so c1^2 precedes c2 in degree 2).
    std::string to_string() const;
    // Integer numerator over a common denominator: "(85*c1^2 - 49*c2)/216".
    std::string to_factored_string() const;

private:
    void check_compatible(const GradedPoly& other) const;

    RingPtr ring_;
    std::map<Exponent, Rational> terms_;
};

GradedPoly poly_add(const GradedPoly& p, const GradedPoly& q);
GradedPoly poly_mul(const GradedPoly& p, const GradedPoly& q);
GradedPoly poly_component(const GradedPoly& p, unsigned d);
GradedPoly poly_scale_vars(const GradedPoly& p, const std::map<std::string, Rational>& factors);

} // namespace jetcalc
