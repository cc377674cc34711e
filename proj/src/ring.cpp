#include "jetcalc/ring.hpp"

#include <algorithm>
#include <sstream>

namespace jetcalc {

Rational make_rational(long num, long den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size()) return false;
        return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    auto strip_plus = [](std::string s) {
        if (!s.empty() && s[0] == '+') s.erase(0, 1);
        return s;
    };
    if (slash == std::string::npos) {
        if (!is_int(text)) throw InvalidArgument("not a rational: '" + text + "'");
        return Rational(Integer(strip_plus(text)));
    }
    std::string n = text.substr(0, slash), d = text.substr(slash + 1);
    if (!is_int(n) || !is_int(d)) throw InvalidArgument("not a rational: '" + text + "'");
    return make_rational(Integer(strip_plus(n)), Integer(strip_plus(d)));
}

Rational pow(const Rational& base, unsigned exp) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exp);
    return Rational(num, den); // already coprime
}

Ring::Ring(unsigned bound, std::vector<Variable> vars) : bound_(bound), vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].weight == 0) throw InvalidArgument("variable weight must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (vars_[i].name == vars_[j].name)
                throw InvalidArgument("duplicate variable '" + vars_[i].name + "'");
    }
}

std::size_t Ring::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return i;
    throw InvalidArgument("unknown variable '" + name + "'");
}

bool Ring::operator==(const Ring& other) const {
    if (bound_ != other.bound_ || vars_.size() != other.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != other.vars_[i].name || vars_[i].weight != other.vars_[i].weight)
            return false;
    return true;
}

RingPtr make_ring(unsigned bound, std::vector<Variable> vars) {
    return std::make_shared<const Ring>(bound, std::move(vars));
}

GradedPoly::GradedPoly(RingPtr ring) : ring_(std::move(ring)) {
    if (!ring_) throw InvalidArgument("null ring");
}

GradedPoly GradedPoly::constant(RingPtr ring, const Rational& c) {
    GradedPoly p(ring);
    p.add_term(Exponent(p.ring_->size(), 0), c);
    return p;
}

GradedPoly GradedPoly::variable(RingPtr ring, const std::string& name, const Rational& coeff) {
    GradedPoly p(ring);
    Exponent e(p.ring_->size(), 0);
    e[p.ring_->index_of(name)] = 1;
    p.add_term(e, coeff);
    return p;
}

GradedPoly GradedPoly::monomial(RingPtr ring, const Exponent& e, const Rational& coeff) {
    GradedPoly p(ring);
    p.add_term(e, coeff);
    return p;
}

Rational GradedPoly::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned GradedPoly::weighted_degree(const Exponent& e) const {
    unsigned d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * ring_->vars()[i].weight;
    return d;
}

void GradedPoly::add_term(const Exponent& e, const Rational& c) {
    if (e.size() != ring_->size()) throw IncompatibleRing("exponent length does not match ring");
    if (c == 0 || weighted_degree(e) > ring_->bound()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void GradedPoly::check_compatible(const GradedPoly& other) const {
    if (ring_ != other.ring_ && !(*ring_ == *other.ring_))
        throw IncompatibleRing("polynomials live in different rings");
}

GradedPoly GradedPoly::operator+(const GradedPoly& other) const {
    check_compatible(other);
    GradedPoly r = *this;
    for (const auto& [e, c] : other.terms_) r.add_term(e, c);
    return r;
}

GradedPoly GradedPoly::operator-() const {
    GradedPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

GradedPoly GradedPoly::operator-(const GradedPoly& other) const { return *this + (-other); }

GradedPoly GradedPoly::operator*(const GradedPoly& other) const {
    check_compatible(other);
    GradedPoly r(ring_);
    const unsigned bound = ring_->bound();
    Exponent e(ring_->size());
    for (const auto& [e1, c1] : terms_) {
        const unsigned d1 = weighted_degree(e1);
        for (const auto& [e2, c2] : other.terms_) {
            if (d1 + weighted_degree(e2) > bound) continue;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
            r.add_term(e, c1 * c2);
        }
    }
    return r;
}

GradedPoly GradedPoly::operator*(const Rational& c) const {
    GradedPoly r(ring_);
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

bool GradedPoly::operator==(const GradedPoly& other) const {
    return (ring_ == other.ring_ || *ring_ == *other.ring_) && terms_ == other.terms_;
}

namespace {

std::vector<std::pair<Exponent, Rational>> canonical_order(const GradedPoly& p) {
    std::vector<std::pair<Exponent, Rational>> v(p.terms().begin(), p.terms().end());
    std::stable_sort(v.begin(), v.end(), [&](const auto& x, const auto& y) {
        unsigned dx = p.weighted_degree(x.first), dy = p.weighted_degree(y.first);
        if (dx != dy) return dx < dy;
        return x.first > y.first;
    });
    return v;
}

std::string monomial_text(const Ring& ring, const Exponent& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += ring.vars()[i].name;
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s;
}

template <class Coeff>
std::string render(const Ring& ring, const std::vector<std::pair<Exponent, Coeff>>& terms) {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        const bool neg = sgn(c) < 0;
        Coeff mag = neg ? Coeff(-c) : c;
        if (first) out << (neg ? "-" : "");
        else out << (neg ? " - " : " + ");
        first = false;
        std::string mono = monomial_text(ring, e);
        if (mono.empty()) out << mag.get_str();
        else if (mag == 1) out << mono;
        else out << mag.get_str() << "*" << mono;
    }
    return out.str();
}

} // namespace

std::string GradedPoly::to_string() const { return render(*ring_, canonical_order(*this)); }

std::string GradedPoly::to_factored_string() const {
    auto terms = canonical_order(*this);
    Integer den = 1;
    for (const auto& [e, c] : terms) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    if (den == 1) return to_string();
    std::vector<std::pair<Exponent, Integer>> scaled;
    for (const auto& [e, c] : terms) scaled.emplace_back(e, Integer(c.get_num() * (den / c.get_den())));
    std::string body = render(*ring_, scaled);
    if (scaled.size() == 1 && monomial_text(*ring_, scaled[0].first).empty())
        return to_string();
    return "(" + body + ")/" + den.get_str();
}

GradedPoly poly_add(const GradedPoly& p, const GradedPoly& q) { return p + q; }
GradedPoly poly_mul(const GradedPoly& p, const GradedPoly& q) { return p * q; }

GradedPoly poly_component(const GradedPoly& p, unsigned d) {
    if (d > p.ring()->bound())
        throw OutOfRange("component degree " + std::to_string(d) + " exceeds bound " +
                         std::to_string(p.ring()->bound()));
    GradedPoly r(p.ring());
    for (const auto& [e, c] : p.terms())
        if (p.weighted_degree(e) == d) r.add_term(e, c);
    return r;
}

GradedPoly poly_scale_vars(const GradedPoly& p, const std::map<std::string, Rational>& factors) {
    const auto& vars = p.ring()->vars();
    std::vector<Rational> f;
    for (const auto& v : vars) {
        auto it = factors.find(v.name);
        if (it == factors.end())
            throw IncompleteSubstitution("no factor given for variable '" + v.name + "'");
        f.push_back(it->second);
    }
    GradedPoly r(p.ring());
    for (const auto& [e, c] : p.terms()) {
        Rational x = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) x *= pow(f[i], e[i]);
        r.add_term(e, x);
    }
    return r;
}

} // namespace jetcalc
