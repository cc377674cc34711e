#pragma once

#include <vector>

#include "jetcalc/ring.hpp"
#include "jetcalc/simplex.hpp"

namespace jetcalc {

// One summand E^(a) of a weighted direct sum, given by its total Segre series.
struct WeightedPart {
    GradedPoly segre;
    unsigned rank = 1;
    long weight = 1;
};

GradedPoly segre_single(const GradedPoly& s_total, unsigned rank, long a);
GradedPoly whitney_weighted(const std::vector<WeightedPart>& parts);

// A split bundle of line bundles with Chern roots alpha1..alphar, placed in
// weights a. Polynomials live in alpha_ring(r, bound).
GradedPoly chi_leading_exact(const SimplexSpec& weights, unsigned n, long m, const RingPtr& ring);
GradedPoly chi_leading_asymptotic(const SimplexSpec& weights, unsigned n, const RingPtr& ring);

struct GGCoeffs {
    Rational alpha;
    Rational beta;
};

// Ring {c1:1, c2:2} truncated at 2.
RingPtr surface_ring();
GGCoeffs gg_surface_coeffs(unsigned k);
// Degree-2 part of Π_{i≤k}[1 − c1/i + (c1²−c2)/i²] / k!.
GradedPoly gg_surface_class(unsigned k);
// (α_k·c1² − β_k·c2)/k! built from the closed-form coefficients.
GradedPoly gg_surface_class_closed(unsigned k);

Integer jet_rank(unsigned n, unsigned k, unsigned m);

} // namespace jetcalc
