#pragma once

#include <string>
#include <vector>

#include "jetcalc/ring.hpp"

namespace jetcalc {

struct Bundle {
    std::string label;
    Integer denominator = 1;
};

struct Edge;

struct Node {
    std::vector<Edge> children; // empty for leaves
    long degree = 1;            // leaf degree, meaningful only for leaves

    bool is_leaf() const { return children.empty(); }
};

struct Edge {
    std::vector<Integer> numerators; // one per declared bundle, same order
    Node node;
};

class StratTree {
public:
    StratTree() = default;
    // Validates uniform depth, leaf degrees and marking arity.
    StratTree(unsigned dimension, std::vector<Bundle> bundles, Node root);

    unsigned dimension() const { return dimension_; }
    const std::vector<Bundle>& bundles() const { return bundles_; }
    const Node& root() const { return root_; }
    std::size_t label_index(const std::string& label) const;
    Rational marking(const Edge& e, std::size_t label) const {
        return make_rational(e.numerators[label], bundles_[label].denominator);
    }
    std::size_t edge_count() const;

    bool operator==(const StratTree& other) const;

private:
    unsigned dimension_ = 0;
    std::vector<Bundle> bundles_;
    Node root_;
};

// Leaf and edge helpers for building trees in code.
Node leaf(long degree = 1);
Edge edge(std::vector<Integer> numerators, Node child);

Rational degree_by_index(const StratTree& tree, const std::string& label, unsigned l);
Rational degree_truncated(const StratTree& tree, const std::string& label, unsigned l);
Rational degree_recursive(const StratTree& tree, const std::string& label, unsigned l);

// Adds `subtree` as a new child of the node reached by following child indices
// `path` from the root. Every new edge is marked 0 for every label.
struct Insertion {
    std::vector<std::size_t> path;
    Node subtree;
};
StratTree refine(const StratTree& tree, const std::vector<Insertion>& insertions);

StratTree power_trivialization(const StratTree& tree, const std::string& label, long f,
                               bool keep_denominator);

// Covering model. The node above every original edge carries a relative degree e
// (δ at the root). The edge is replaced by pieces (m'ⱼ, eⱼ) with Σ m'ⱼ·eⱼ = e·m and
// each m'ⱼ of the sign of m (zero when m = 0); piece j's subtree is covered with
// relative degree eⱼ. Leaf degrees are multiplied by the relative degree above them.
struct CoverPiece {
    Integer numerator;
    long rel_degree = 1;
    std::vector<std::vector<CoverPiece>> below; // plan for the child's children; empty → trivial
};
struct CoverResult {
    StratTree tree;
    long delta = 1;
};
// The covered tree declares only `label`. δ is inferred from the top-level edges.
CoverResult cover(const StratTree& tree, const std::string& label,
                  const std::vector<std::vector<CoverPiece>>& plan);
// The plan that maps every edge to a single identical piece.
std::vector<std::vector<CoverPiece>> identity_cover_plan(const StratTree& tree, const std::string& label);

// Single label "A", denominator 1. levels[i] lists the child markings of every
// node at depth i; every leaf gets `leaf_degree`.
StratTree ample_tree(unsigned n, const std::vector<std::vector<long>>& levels, long leaf_degree = 1);
StratTree nef_difference_tree(unsigned n, const Rational& f, const Rational& g);

enum class CMaxAlgorithm { brute, dp };

// max over φ: edges → labels of (−1)^i·c(φ)_{[≤i]}. This is the single place
// the (−1)^i convention lives; everything else reports unsigned sums.
Rational c_max(const StratTree& tree, const std::vector<std::string>& labels, unsigned i,
               CMaxAlgorithm algorithm = CMaxAlgorithm::dp);

bool validate_product_trivialization(const StratTree& tree, const std::vector<std::string>& parts,
                                     const std::string& whole, const std::string& aux);

} // namespace jetcalc
