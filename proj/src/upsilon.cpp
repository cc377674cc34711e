#include "jetcalc/upsilon.hpp"

#include <functional>

namespace jetcalc {

MarkedSimplexProblem make_problem(const StratTree& tree, const std::vector<std::string>& labels,
                                  const SimplexSpec& simplex, const std::optional<std::string>& aux_label) {
    if (labels.size() != simplex.arity())
        throw ArityMismatch("need one label per simplex coordinate");
    MarkedSimplexProblem p{tree, {}, simplex, std::nullopt};
    for (const auto& l : labels) p.coord_labels.push_back(tree.label_index(l));
    if (aux_label) p.aux = AuxSpec{tree.label_index(*aux_label), 1};
    return p;
}

CompiledPaths compile_paths(const MarkedSimplexProblem& prob, bool with_aux) {
    if (with_aux && !prob.aux) throw AuxMissing("problem has no aux label configured");
    const auto& tree = prob.tree;
    const std::size_t r = prob.coord_labels.size();
    CompiledPaths out;
    std::vector<std::size_t> stack;
    std::function<void(const Node&)> walk = [&](const Node& node) {
        if (node.is_leaf()) {
            out.paths.push_back(stack);
            out.degrees.push_back(node.degree);
            return;
        }
        for (const auto& e : node.children) {
            AffineForm f{0, std::vector<Rational>(r)};
            for (std::size_t c = 0; c < r; ++c) f.coeffs[c] = tree.marking(e, prob.coord_labels[c]);
            if (with_aux) f.constant = prob.aux->scale * tree.marking(e, prob.aux->label);
            out.forms.push_back(std::move(f));
            stack.push_back(out.forms.size() - 1);
            walk(e.node);
            stack.pop_back();
        }
    };
    walk(tree.root());
    return out;
}

namespace {

Rational eval_compiled(const CompiledPaths& cp, const std::vector<Rational>& t, unsigned i) {
    std::vector<Rational> vals;
    for (const auto& f : cp.forms) vals.push_back(f.eval(t));
    Rational sum = 0;
    for (std::size_t p = 0; p < cp.paths.size(); ++p) {
        Rational prod = cp.degrees[p];
        unsigned neg = 0;
        for (std::size_t e : cp.paths[p]) {
            prod *= vals[e];
            if (vals[e] < 0) ++neg;
        }
        if (neg <= i) sum += prod;
    }
    return sum;
}

} // namespace

Rational upsilon_eval(const MarkedSimplexProblem& prob, const std::vector<Rational>& t, unsigned i) {
    if (t.size() != prob.coord_labels.size()) throw ArityMismatch("t has the wrong arity");
    return eval_compiled(compile_paths(prob, false), t, i);
}

Rational upsilon_N_eval(const MarkedSimplexProblem& prob, const std::vector<Rational>& t, unsigned i) {
    if (t.size() != prob.coord_labels.size()) throw ArityMismatch("t has the wrong arity");
    return eval_compiled(compile_paths(prob, true), t, i);
}

Rational phi_eval(const MarkedSimplexProblem& prob, const std::vector<std::vector<Rational>>& points,
                  unsigned i) {
    if (points.empty()) throw InvalidArgument("phi_eval needs at least one point");
    const std::size_t r = prob.coord_labels.size();
    for (const auto& u : points)
        if (u.size() != r) throw ArityMismatch("point has the wrong arity");
    const auto& tree = prob.tree;

    // Rational markings of the tensor bundles M_j, then a common denominator.
    Integer den = 1;
    auto mark = [&](const Edge& e, const std::vector<Rational>& u) {
        Rational s = 0;
        for (std::size_t c = 0; c < r; ++c) s += u[c] * tree.marking(e, prob.coord_labels[c]);
        return s;
    };
    std::function<void(const Node&)> lcm_walk = [&](const Node& n) {
        for (const auto& e : n.children) {
            for (const auto& u : points) {
                Rational m = mark(e, u);
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m.get_den_mpz_t());
            }
            lcm_walk(e.node);
        }
    };
    lcm_walk(tree.root());
    std::function<Node(const Node&)> build = [&](const Node& n) {
        if (n.is_leaf()) return leaf(n.degree);
        Node out;
        for (const auto& e : n.children) {
            std::vector<Integer> nums;
            for (const auto& u : points) {
                Rational m = mark(e, u) * den;
                nums.push_back(m.get_num());
            }
            out.children.push_back(Edge{std::move(nums), build(e.node)});
        }
        return out;
    };
    std::vector<Bundle> bundles;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < points.size(); ++j) {
        labels.push_back("M" + std::to_string(j + 1));
        bundles.push_back({labels.back(), den});
    }
    StratTree mt(tree.dimension(), bundles, build(tree.root()));
    return c_max(mt, labels, i, CMaxAlgorithm::dp);
}

Rational integrate_exact(const MarkedSimplexProblem& prob, unsigned i, bool with_aux) {
    const CompiledPaths cp = compile_paths(prob, with_aux);
    const auto& a = prob.simplex;
    const std::size_t r = a.arity();
    // Sign class per edge form from the vertex values (1/a_l)·e_l.
    enum class Sign { zero, pos, neg, mixed };
    std::vector<Sign> sign;
    for (const auto& f : cp.forms) {
        bool pos = false, neg = false;
        for (std::size_t l = 0; l < r; ++l) {
            Rational v = f.coeffs[l] / a.weights[l] + f.constant;
            if (v > 0) pos = true;
            if (v < 0) neg = true;
        }
        sign.push_back(pos && neg ? Sign::mixed : pos ? Sign::pos : neg ? Sign::neg : Sign::zero);
    }
    Rational total = 0;
    for (std::size_t p = 0; p < cp.paths.size(); ++p) {
        unsigned sure_neg = 0, maybe_neg = 0;
        bool zero = false;
        std::vector<AffineForm> forms;
        for (std::size_t e : cp.paths[p]) {
            if (sign[e] == Sign::zero) zero = true;
            if (sign[e] == Sign::neg) ++sure_neg;
            if (sign[e] == Sign::neg || sign[e] == Sign::mixed) ++maybe_neg;
            forms.push_back(cp.forms[e]);
        }
        if (zero || sure_neg > i) continue;
        // A mixed edge matters only if it can push the path over the budget.
        if (maybe_neg > i)
            throw NotSignConstant("an edge form changes sign on the simplex; exact integration unavailable");
        total += cp.degrees[p] * affine_product_expectation(a, forms);
    }
    return total;
}

MCStat integrate_mc(const MarkedSimplexProblem& prob, unsigned i, const MCConfig& cfg, bool with_aux) {
    const CompiledPaths cp = compile_paths(prob, with_aux);
    const std::size_t r = prob.simplex.arity();
    std::vector<double> coeffs, constants;
    for (const auto& f : cp.forms) {
        constants.push_back(f.constant.get_d());
        for (const auto& c : f.coeffs) coeffs.push_back(c.get_d());
    }
    const std::size_t nforms = cp.forms.size();
    auto stats = mc_expectations(prob.simplex, cfg, 1, [&](const double* t, double* out) {
        thread_local std::vector<double> vals;
        vals.resize(nforms);
        for (std::size_t e = 0; e < nforms; ++e) {
            double v = constants[e];
            const double* c = &coeffs[e * r];
            for (std::size_t l = 0; l < r; ++l) v += c[l] * t[l];
            vals[e] = v;
        }
        double sum = 0;
        for (std::size_t p = 0; p < cp.paths.size(); ++p) {
            double prod = static_cast<double>(cp.degrees[p]);
            unsigned neg = 0;
            for (std::size_t e : cp.paths[p]) {
                prod *= vals[e];
                neg += vals[e] < 0;
            }
            if (neg <= i) sum += prod;
        }
        out[0] = sum;
    });
    return stats[0];
}

MarkedSimplexProblem harmonic_twist(const StratTree& tree, const std::vector<std::string>& base_labels,
                                    const std::string& aux_label, unsigned k) {
    if (k < 1) throw InvalidArgument("k must be >= 1");
    const unsigned r = static_cast<unsigned>(base_labels.size());
    if (r < 1) throw InvalidArgument("harmonic_twist needs at least one base label");
    std::vector<std::string> coords;
    for (unsigned j = 1; j <= k; ++j)
        for (const auto& l : base_labels) coords.push_back(l);
    MarkedSimplexProblem p = make_problem(tree, coords, SimplexSpec::jets(k, r), aux_label);
    p.aux->scale = harmonic_number(k) / Rational(Integer(k) * r);
    return p;
}

BoundCoefficient jet_chi1_bound_coeff(const StratTree& tree, const std::vector<std::string>& base_labels,
                                      const std::string& aux_label, unsigned k,
                                      const std::optional<MCConfig>& cfg) {
    const auto prob = harmonic_twist(tree, base_labels, aux_label, k);
    const unsigned r = static_cast<unsigned>(base_labels.size());
    const unsigned kr = k * r, n = tree.dimension();
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), n + kr - 1, kr - 1);
    Integer kf = factorial(k), kfr;
    mpz_pow_ui(kfr.get_mpz_t(), kf.get_mpz_t(), r);
    BoundCoefficient out;
    out.prefactor = make_rational(binom, kfr);
    try {
        out.value = out.prefactor * integrate_exact(prob, 1, true);
        out.exact = true;
        out.estimate = out.value.get_d();
    } catch (const NotSignConstant&) {
        if (!cfg) throw;
        MCStat s = integrate_mc(prob, 1, *cfg, true);
        const double pf = out.prefactor.get_d();
        out.estimate = pf * s.mean;
        out.stderr_ = pf * s.stderr_;
    }
    return out;
}

} // namespace jetcalc
