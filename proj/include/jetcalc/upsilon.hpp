#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jetcalc/mc.hpp"
#include "jetcalc/simplex.hpp"
#include "jetcalc/strat.hpp"

namespace jetcalc {

// Edge mark for υᴺ is Σ_c t_c·m_{label(c)}/d + scale·m_aux/d_aux.
struct AuxSpec {
    std::size_t label = 0;
    Rational scale = 1;
};

struct MarkedSimplexProblem {
    StratTree tree;
    std::vector<std::size_t> coord_labels; // bundle index feeding each simplex coordinate
    SimplexSpec simplex;
    std::optional<AuxSpec> aux;
};

MarkedSimplexProblem make_problem(const StratTree& tree, const std::vector<std::string>& labels,
                                  const SimplexSpec& simplex,
                                  const std::optional<std::string>& aux_label = std::nullopt);

// Root-to-leaf paths with one affine form per edge.
struct CompiledPaths {
    std::vector<AffineForm> forms;
    std::vector<std::vector<std::size_t>> paths;
    std::vector<long> degrees;
};
CompiledPaths compile_paths(const MarkedSimplexProblem& prob, bool with_aux);

Rational upsilon_eval(const MarkedSimplexProblem& prob, const std::vector<Rational>& t, unsigned i);
Rational upsilon_N_eval(const MarkedSimplexProblem& prob, const std::vector<Rational>& t, unsigned i);
Rational phi_eval(const MarkedSimplexProblem& prob, const std::vector<std::vector<Rational>>& points,
                  unsigned i);

// Exact ∫_{Δ_a} υ_{[≤i]} dP (υᴺ when with_aux). Needs every path's membership in
// the index filter to be constant on Δ_a, decided from the vertex values of the
// edge forms; otherwise throws NotSignConstant.
Rational integrate_exact(const MarkedSimplexProblem& prob, unsigned i, bool with_aux);
MCStat integrate_mc(const MarkedSimplexProblem& prob, unsigned i, const MCConfig& cfg, bool with_aux);

// Δ_k over the base labels, aux = H_k/(kr)·F.
MarkedSimplexProblem harmonic_twist(const StratTree& tree, const std::vector<std::string>& base_labels,
                                    const std::string& aux_label, unsigned k);

struct BoundCoefficient {
    bool exact = false;
    Rational value;       // when exact
    double estimate = 0;  // always filled
    double stderr_ = 0;
    Rational prefactor;   // binom(n+kr−1, kr−1)/(k!)^r
};
// Exact when the integral is decidable exactly; MC with cfg otherwise.
BoundCoefficient jet_chi1_bound_coeff(const StratTree& tree, const std::vector<std::string>& base_labels,
                                      const std::string& aux_label, unsigned k,
                                      const std::optional<MCConfig>& cfg);

} // namespace jetcalc
