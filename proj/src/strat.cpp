#include "jetcalc/strat.hpp"

#include <functional>
#include <numeric>

namespace jetcalc {

namespace {

void validate_node(const Node& node, unsigned remaining, std::size_t labels) {
    if (node.is_leaf()) {
        if (remaining != 0) throw DepthViolation("leaf above full depth; tree depth must be uniform");
        if (node.degree < 1) throw InvalidTree("leaf degree must be >= 1");
        return;
    }
    if (remaining == 0) throw DepthViolation("path longer than the tree dimension");
    for (const auto& e : node.children) {
        if (e.numerators.size() != labels)
            throw InvalidTree("edge marking count differs from declared bundle count");
        validate_node(e.node, remaining - 1, labels);
    }
}

bool same_node(const Node& a, const Node& b) {
    if (a.is_leaf() != b.is_leaf()) return false;
    if (a.is_leaf()) return a.degree == b.degree;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (a.children[i].numerators != b.children[i].numerators) return false;
        if (!same_node(a.children[i].node, b.children[i].node)) return false;
    }
    return true;
}

std::size_t count_edges(const Node& n) {
    std::size_t c = n.children.size();
    for (const auto& e : n.children) c += count_edges(e.node);
    return c;
}

} // namespace

StratTree::StratTree(unsigned dimension, std::vector<Bundle> bundles, Node root)
    : dimension_(dimension), bundles_(std::move(bundles)), root_(std::move(root)) {
    for (std::size_t i = 0; i < bundles_.size(); ++i) {
        if (bundles_[i].denominator < 1) throw InvalidTree("bundle denominator must be >= 1");
        for (std::size_t j = 0; j < i; ++j)
            if (bundles_[i].label == bundles_[j].label)
                throw InvalidTree("duplicate bundle label '" + bundles_[i].label + "'");
    }
    validate_node(root_, dimension_, bundles_.size());
}

std::size_t StratTree::label_index(const std::string& label) const {
    for (std::size_t i = 0; i < bundles_.size(); ++i)
        if (bundles_[i].label == label) return i;
    throw UnknownLabel("unknown bundle label '" + label + "'");
}

std::size_t StratTree::edge_count() const { return count_edges(root_); }

bool StratTree::operator==(const StratTree& other) const {
    if (dimension_ != other.dimension_ || bundles_.size() != other.bundles_.size()) return false;
    for (std::size_t i = 0; i < bundles_.size(); ++i)
        if (bundles_[i].label != other.bundles_[i].label ||
            bundles_[i].denominator != other.bundles_[i].denominator)
            return false;
    return same_node(root_, other.root_);
}

Node leaf(long degree) {
    Node n;
    n.degree = degree;
    return n;
}

Edge edge(std::vector<Integer> numerators, Node child) { return Edge{std::move(numerators), std::move(child)}; }

namespace {

// Σ over paths of C_σ·deg, bucketed by index.
void paths_by_index(const StratTree& t, const Node& node, std::size_t label, const Rational& acc,
                    unsigned neg, std::vector<Rational>& out) {
    if (node.is_leaf()) {
        out[neg] += acc * node.degree;
        return;
    }
    for (const auto& e : node.children) {
        Rational mu = t.marking(e, label);
        if (mu == 0) continue; // the whole subtree contributes 0
        paths_by_index(t, e.node, label, acc * mu, neg + (mu < 0 ? 1 : 0), out);
    }
}

std::vector<Rational> index_profile(const StratTree& tree, const std::string& label) {
    const std::size_t li = tree.label_index(label);
    std::vector<Rational> out(tree.dimension() + 1, 0);
    paths_by_index(tree, tree.root(), li, Rational(1), 0, out);
    return out;
}

Rational recursive_value(const StratTree& t, const Node& node, std::size_t label, long budget) {
    if (budget < 0) return 0;
    if (node.is_leaf()) return node.degree;
    Rational sum = 0;
    for (const auto& e : node.children) {
        Rational mu = t.marking(e, label);
        if (mu > 0) sum += mu * recursive_value(t, e.node, label, budget);
        else if (mu < 0) sum += mu * recursive_value(t, e.node, label, budget - 1);
    }
    return sum;
}

} // namespace

Rational degree_by_index(const StratTree& tree, const std::string& label, unsigned l) {
    auto prof = index_profile(tree, label);
    return l < prof.size() ? prof[l] : Rational(0);
}

Rational degree_truncated(const StratTree& tree, const std::string& label, unsigned l) {
    auto prof = index_profile(tree, label);
    Rational s = 0;
    for (std::size_t j = 0; j < prof.size() && j <= l; ++j) s += prof[j];
    return s;
}

Rational degree_recursive(const StratTree& tree, const std::string& label, unsigned l) {
    return recursive_value(tree, tree.root(), tree.label_index(label), static_cast<long>(l));
}

namespace {
void zero_markings(Node& node, std::size_t labels) {
    for (auto& e : node.children) {
        e.numerators.assign(labels, 0);
        zero_markings(e.node, labels);
    }
}
} // namespace

StratTree refine(const StratTree& tree, const std::vector<Insertion>& insertions) {
    Node root = tree.root();
    const std::size_t labels = tree.bundles().size();
    for (const auto& ins : insertions) {
        Node* at = &root;
        for (std::size_t idx : ins.path) {
            if (idx >= at->children.size()) throw DepthViolation("insertion path leaves the tree");
            at = &at->children[idx].node;
        }
        if (ins.path.size() >= tree.dimension())
            throw DepthViolation("cannot insert below a leaf");
        Node sub = ins.subtree;
        zero_markings(sub, labels);
        validate_node(sub, tree.dimension() - static_cast<unsigned>(ins.path.size()) - 1, labels);
        at->children.push_back(Edge{std::vector<Integer>(labels, 0), std::move(sub)});
    }
    return StratTree(tree.dimension(), tree.bundles(), std::move(root));
}

namespace {
void scale_numerators(Node& node, std::size_t label, long f) {
    for (auto& e : node.children) {
        e.numerators[label] *= f;
        scale_numerators(e.node, label, f);
    }
}
} // namespace

StratTree power_trivialization(const StratTree& tree, const std::string& label, long f,
                               bool keep_denominator) {
    if (f < 1) throw InvalidArgument("power must be >= 1");
    const std::size_t li = tree.label_index(label);
    Node root = tree.root();
    scale_numerators(root, li, f);
    auto bundles = tree.bundles();
    if (!keep_denominator) bundles[li].denominator *= f;
    return StratTree(tree.dimension(), std::move(bundles), std::move(root));
}

namespace {

Node cover_node(const Node& orig, std::size_t label, const std::vector<std::vector<CoverPiece>>& plan,
                long rel_degree) {
    Node out;
    if (orig.is_leaf()) {
        out.degree = orig.degree * rel_degree;
        return out;
    }
    if (!plan.empty() && plan.size() != orig.children.size())
        throw InvalidCover("cover plan child count differs from the tree");
    for (std::size_t c = 0; c < orig.children.size(); ++c) {
        const Edge& e = orig.children[c];
        const Integer& m = e.numerators[label];
        std::vector<CoverPiece> pieces;
        if (plan.empty()) pieces.push_back(CoverPiece{m, rel_degree, {}});
        else pieces = plan[c];
        if (pieces.empty()) throw InvalidCover("an edge must be covered by at least one piece");
        Integer total = 0;
        for (const auto& p : pieces) {
            if (p.rel_degree < 1) throw InvalidCover("relative degrees must be >= 1");
            if (sgn(p.numerator) != 0 && sgn(p.numerator) != sgn(m))
                throw InvalidCover("cover piece changes the sign of a marking");
            total += p.numerator * p.rel_degree;
        }
        if (total != m * rel_degree)
            throw InvalidCover("projection formula violated: sum of m'·deg is " + total.get_str() +
                               ", expected " + Integer(m * rel_degree).get_str());
        for (const auto& p : pieces)
            out.children.push_back(Edge{{p.numerator}, cover_node(e.node, label, p.below, p.rel_degree)});
    }
    return out;
}

} // namespace

CoverResult cover(const StratTree& tree, const std::string& label,
                  const std::vector<std::vector<CoverPiece>>& plan) {
    const std::size_t li = tree.label_index(label);
    const Node& root = tree.root();
    if (plan.size() != root.children.size())
        throw InvalidCover("cover plan must list pieces for every top-level edge");
    long delta = 0;
    for (std::size_t c = 0; c < root.children.size(); ++c) {
        const Integer& m = root.children[c].numerators[li];
        if (m == 0) continue;
        Integer total = 0;
        for (const auto& p : plan[c]) total += p.numerator * p.rel_degree;
        if (total % m != 0) throw InvalidCover("top-level edge does not scale by an integer degree");
        Integer d = total / m;
        if (d < 1 || !d.fits_slong_p()) throw InvalidCover("cover degree must be a positive integer");
        if (delta != 0 && d != delta) throw InvalidCover("top-level edges imply different cover degrees");
        delta = d.get_si();
    }
    if (delta == 0) throw InvalidCover("cannot infer the cover degree: all top-level markings are 0");
    Node covered = cover_node(root, li, plan, delta);
    return CoverResult{StratTree(tree.dimension(), {tree.bundles()[li]}, std::move(covered)), delta};
}

namespace {
std::vector<std::vector<CoverPiece>> identity_plan_node(const Node& n, std::size_t li) {
    std::vector<std::vector<CoverPiece>> out;
    for (const auto& e : n.children)
        out.push_back({CoverPiece{e.numerators[li], 1, identity_plan_node(e.node, li)}});
    return out;
}
} // namespace

std::vector<std::vector<CoverPiece>> identity_cover_plan(const StratTree& tree, const std::string& label) {
    return identity_plan_node(tree.root(), tree.label_index(label));
}

StratTree ample_tree(unsigned n, const std::vector<std::vector<long>>& levels, long leaf_degree) {
    if (levels.size() != n) throw DepthViolation("ample_tree needs one marking list per level");
    for (const auto& lv : levels) {
        if (lv.empty()) throw InvalidTree("every level needs at least one child");
        for (long m : lv)
            if (m <= 0) throw InvalidArgument("ample trees need strictly positive markings");
    }
    std::function<Node(unsigned)> build = [&](unsigned depth) {
        if (depth == n) return leaf(leaf_degree);
        Node node;
        for (long m : levels[depth]) node.children.push_back(Edge{{Integer(m)}, build(depth + 1)});
        return node;
    };
    return StratTree(n, {{"A", 1}}, build(0));
}

StratTree nef_difference_tree(unsigned n, const Rational& f, const Rational& g) {
    if (f < 0 || g < 0) throw InvalidArgument("nef_difference_tree needs f, g >= 0");
    Integer den;
    mpz_lcm(den.get_mpz_t(), f.get_den_mpz_t(), g.get_den_mpz_t());
    const Integer fn = f.get_num() * (den / f.get_den());
    const Integer gn = g.get_num() * (den / g.get_den());
    std::function<Node(unsigned)> build = [&](unsigned depth) {
        if (depth == n) return leaf(1);
        Node node;
        node.children.push_back(Edge{{fn, 0, fn}, build(depth + 1)});
        node.children.push_back(Edge{{0, gn, Integer(-gn)}, build(depth + 1)});
        return node;
    };
    return StratTree(n, {{"F", den}, {"G", den}, {"L", den}}, build(0));
}

namespace {

std::vector<std::size_t> label_indices(const StratTree& tree, const std::vector<std::string>& labels) {
    if (labels.empty()) throw InvalidArgument("c_max needs a non-empty label set");
    std::vector<std::size_t> idx;
    for (const auto& l : labels) idx.push_back(tree.label_index(l));
    return idx;
}

// V(node, b) for b = 0..i, already carrying the (−1)^b sign.
std::vector<Rational> cmax_dp(const StratTree& t, const Node& node, const std::vector<std::size_t>& labels,
                              unsigned i) {
    std::vector<Rational> v(i + 1, 0);
    if (node.is_leaf()) {
        for (unsigned b = 0; b <= i; ++b) v[b] = (b % 2 ? -1 : 1) * node.degree;
        return v;
    }
    for (const auto& e : node.children) {
        auto child = cmax_dp(t, e.node, labels, i);
        for (unsigned b = 0; b <= i; ++b) {
            bool first = true;
            Rational best;
            for (std::size_t l : labels) {
                Rational mu = t.marking(e, l);
                Rational val = 0;
                if (mu > 0) val = mu * child[b];
                else if (mu < 0) val = b == 0 ? Rational(0) : Rational(-mu * child[b - 1]);
                if (first || val > best) best = val;
                first = false;
            }
            v[b] += best;
        }
    }
    return v;
}

void collect_edges(const Node& n, std::vector<const Edge*>& out) {
    for (const auto& e : n.children) {
        out.push_back(&e);
        collect_edges(e.node, out);
    }
}

// c(φ)_{[≤i]} for one assignment; edges are visited in collect_edges order.
Rational assignment_value(const StratTree& t, const Node& node, const std::vector<std::size_t>& choice,
                          std::size_t& cursor, const Rational& acc, unsigned neg, unsigned i, bool live) {
    if (node.is_leaf()) return (live && neg <= i) ? Rational(acc * node.degree) : Rational(0);
    Rational sum = 0;
    for (const auto& e : node.children) {
        Rational mu = t.marking(e, choice[cursor++]);
        sum += assignment_value(t, e.node, choice, cursor, acc * mu, neg + (mu < 0 ? 1 : 0), i,
                                live && mu != 0);
    }
    return sum;
}

} // namespace

Rational c_max(const StratTree& tree, const std::vector<std::string>& labels, unsigned i,
               CMaxAlgorithm algorithm) {
    const auto idx = label_indices(tree, labels);
    if (algorithm == CMaxAlgorithm::dp) return cmax_dp(tree, tree.root(), idx, i)[i];

    std::vector<const Edge*> edges;
    collect_edges(tree.root(), edges);
    double combos = 1;
    for (std::size_t k = 0; k < edges.size(); ++k) combos *= static_cast<double>(idx.size());
    if (combos > 5e7) throw InvalidArgument("brute-force c_max would enumerate too many assignments");
    std::vector<std::size_t> pos(edges.size(), 0), choice(edges.size());
    const int sign = i % 2 ? -1 : 1;
    bool have = false;
    Rational best;
    for (;;) {
        for (std::size_t k = 0; k < edges.size(); ++k) choice[k] = idx[pos[k]];
        std::size_t cursor = 0;
        Rational v = sign * assignment_value(tree, tree.root(), choice, cursor, Rational(1), 0, i, true);
        if (!have || v > best) best = v;
        have = true;
        std::size_t k = 0;
        while (k < pos.size() && ++pos[k] == idx.size()) pos[k++] = 0;
        if (k == pos.size()) break;
    }
    return best;
}

bool validate_product_trivialization(const StratTree& tree, const std::vector<std::string>& parts,
                                     const std::string& whole, const std::string& aux) {
    std::vector<std::size_t> pi;
    for (const auto& p : parts) pi.push_back(tree.label_index(p));
    const std::size_t wi = tree.label_index(whole), ai = tree.label_index(aux);
    std::function<bool(const Node&)> check = [&](const Node& n) {
        for (const auto& e : n.children) {
            Rational s = tree.marking(e, ai);
            for (std::size_t p : pi) s += tree.marking(e, p);
            if (s != tree.marking(e, wi) || !check(e.node)) return false;
        }
        return true;
    };
    return check(tree.root());
}

} // namespace jetcalc
