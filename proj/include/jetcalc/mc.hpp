#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "jetcalc/ring.hpp"
#include "jetcalc/simplex.hpp"
#include "jetcalc/strat.hpp"

namespace jetcalc {

// Default seed for every MC entry point and the CLI.
inline constexpr std::uint64_t kDefaultSeed = 20241018;

struct MCConfig {
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t samples = 1000000;
    unsigned workers = 1;
};

// Counter-based generator. Samples are grouped into fixed blocks of
// kBlockSize; block b draws from the SplitMix64 sequence keyed by
// mix(seed ^ mix(b + γ)), so output depends only on (seed, samples) and never
// on how blocks are distributed over workers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    // Uniform in the open interval (0, 1).
    double uniform();
    // Exp(1) variate, strictly positive.
    double exponential();

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline constexpr std::uint64_t kBlockSize = 8192;

struct MCStat {
    std::uint64_t count = 0;
    double mean = 0;
    double stderr_ = 0;
};

// Estimates E[f_o(T)] for each output o with T uniform on Δ_a.
// f receives the point t (length r) and writes `outputs` values.
std::vector<MCStat> mc_expectations(const SimplexSpec& a, const MCConfig& cfg, std::size_t outputs,
                                    const std::function<void(const double* t, double* out)>& f);

// Uniform point of Δ_a: normalized exponentials z, then tᵢ = zᵢ/aᵢ.
void draw_simplex_point(const SimplexSpec& a, CounterRng& rng, double* t);
std::vector<std::vector<double>> sample_simplex(const SimplexSpec& a, const MCConfig& cfg);

struct JetsDecomposition {
    std::vector<double> y_prime;        // Y'_j = j·Y_j
    std::vector<std::vector<double>> z; // z[j][l] = X_{j,l}/Y_j
};
// Coordinates of Δ_k ordered (j=1,l=1..r), (j=2,l=1..r), …
JetsDecomposition jets_decomposition(const std::vector<double>& sample, unsigned k, unsigned r);

struct CheckRow {
    std::string name;
    double estimate = 0;
    double stderr_ = 0;
    bool has_exact = false;
    Rational exact;
    double zscore = 0;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::json params;
    std::vector<CheckRow> rows;
    bool exact_ok = true; // exact identities checked alongside the MC rows
    double max_abs_z() const;
    nlohmann::json to_json() const; // array of {experiment, params, estimate, stderr, exact?, zscore}
};

ExperimentReport dirichlet_density_check(unsigned k, unsigned r, const MCConfig& cfg);
ExperimentReport negative_correlation_check(unsigned k, unsigned r, const MCConfig& cfg);
// Empirical E[Y_j], E[Y_j²] against their closed forms.
ExperimentReport jets_moment_check(unsigned k, unsigned r, const MCConfig& cfg);
// Empirical monomial moments with Σp ≤ max_degree against monomial_moment.
ExperimentReport sampler_moment_check(const SimplexSpec& a, unsigned max_degree, const MCConfig& cfg);

struct VarianceBound {
    Rational variance;  // Var[A] on Δ_k
    Rational mean_s2;   // E[S²] on the standard simplex
    Rational bound;     // 2·(Σ_{j≤k} 1/j²)·E[S²]/k²
    bool holds = false;
};
VarianceBound variance_bound_check(unsigned k, unsigned r, const std::vector<Rational>& d);

Rational harmonic_number(unsigned k);

struct AveragingRow {
    unsigned k = 0;
    Rational harmonic;
    bool exact = false;
    Rational integral_exact;
    double integral = 0;
    double stderr_ = 0;
    double scaled = 0;     // (kr)^n·∫/H_k^n
    double scaled_log = 0; // (kr)^n·∫/(log k)^n, NaN for k = 1
    Rational target;       // deg c₁(whole)_{[≤j]}
    double gap = 0;        // |scaled − target|
    Rational main_term;    // Σ_σ 1{j_σ ≤ j}·Π E[A_i]·deg
    double diff_bound = 0; // Σ_σ deg·(j+1)·R_σ, R_σ the path-wise difference bound
    bool bound_ok = false; // |∫ − main| ≤ diff_bound + 4·stderr
};

struct AveragingSetup {
    std::vector<std::string> parts;
    std::string aux;
    std::string whole;
};

std::vector<AveragingRow> averaging_experiment(const StratTree& tree, const AveragingSetup& setup, unsigned j,
                                               const std::vector<unsigned>& k_values, const MCConfig& cfg);
nlohmann::json averaging_to_json(const std::vector<AveragingRow>& rows, unsigned j);

} // namespace jetcalc
