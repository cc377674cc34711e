#pragma once

#include <functional>
#include <vector>

#include "jetcalc/ring.hpp"
#include "jetcalc/simplex.hpp"

namespace jetcalc {

using Composition = std::vector<long>;

// Visits every l ∈ ℕ^r with Σ aᵢlᵢ = m, in lexicographically decreasing order
// of l (largest first coordinate first).
void for_each_composition(const SimplexSpec& a, long m,
                          const std::function<void(const Composition&)>& visit);
std::vector<Composition> enumerate_compositions(const SimplexSpec& a, long m);
Integer count_compositions(const SimplexSpec& a, long m);

Rational power_sum(const SimplexSpec& a, const std::vector<unsigned>& p, long m);
Rational power_sum_asymptotic(const SimplexSpec& a, const std::vector<unsigned>& p);

// Ring with r degree-1 variables alpha1..alphar.
RingPtr alpha_ring(std::size_t r, unsigned bound);
// Σ_{l ∈ H_m} (Σ αᵢlᵢ)^n / n! over `ring` (r degree-1 variables, bound ≥ n).
GradedPoly weighted_power_poly_sum(const SimplexSpec& a, unsigned n, long m, const RingPtr& ring);

struct LatticeBasis {
    std::vector<std::vector<long>> vectors; // r−1 vectors spanning H = ker(a) ∩ ℤ^r
};

LatticeBasis lattice_basis(const SimplexSpec& a);
// Checks Σ aᵢvᵢ = 0 for every vector and that the maximal minors of the basis
// equal ±a/gcd(a), which holds exactly when the vectors generate H.
bool is_primitive_basis(const SimplexSpec& a, const LatticeBasis& basis);

// |(ℝ₊·C_u) ∩ H_m| with C_u = (u + Σ[0,1)·vⱼ) ∩ m0·Δ_a.
Integer count_cone_points(const SimplexSpec& a, long m0, const Composition& u, long m,
                          const LatticeBasis& basis);
Integer count_cone_points(const SimplexSpec& a, long m0, const Composition& u, long m);

} // namespace jetcalc
