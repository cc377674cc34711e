#include "jetcalc/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "jetcalc/upsilon.hpp"

namespace jetcalc {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kGamma))) {}

std::uint64_t CounterRng::next() { return mix(key_ + (++counter_) * kGamma); }

double CounterRng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::exponential() { return -std::log(uniform()); }

void draw_simplex_point(const SimplexSpec& a, CounterRng& rng, double* t) {
    const std::size_t r = a.arity();
    double s = 0;
    for (std::size_t i = 0; i < r; ++i) {
        t[i] = rng.exponential();
        s += t[i];
    }
    for (std::size_t i = 0; i < r; ++i) t[i] = t[i] / s / static_cast<double>(a.weights[i]);
}

std::vector<MCStat> mc_expectations(const SimplexSpec& a, const MCConfig& cfg, std::size_t outputs,
                                    const std::function<void(const double* t, double* out)>& f) {
    if (cfg.samples == 0) throw InvalidArgument("samples must be > 0");
    if (cfg.workers == 0) throw InvalidArgument("workers must be > 0");
    const std::size_t r = a.arity();
    const std::uint64_t blocks = (cfg.samples + kBlockSize - 1) / kBlockSize;

    // Shift by the value at a fixed point so constant integrands give stderr exactly 0
    // and sums of squares do not cancel catastrophically.
    std::vector<double> shift(outputs), t(r);
    {
        CounterRng rng(cfg.seed, 0);
        draw_simplex_point(a, rng, t.data());
        f(t.data(), shift.data());
    }

    std::vector<double> sums(blocks * outputs, 0.0), sqs(blocks * outputs, 0.0);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        std::vector<double> pt(r), out(outputs);
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            CounterRng rng(cfg.seed, b);
            const std::uint64_t begin = b * kBlockSize;
            const std::uint64_t end = std::min<std::uint64_t>(cfg.samples, begin + kBlockSize);
            double* s = &sums[b * outputs];
            double* q = &sqs[b * outputs];
            for (std::uint64_t n = begin; n < end; ++n) {
                draw_simplex_point(a, rng, pt.data());
                f(pt.data(), out.data());
                for (std::size_t o = 0; o < outputs; ++o) {
                    const double x = out[o] - shift[o];
                    s[o] += x;
                    q[o] += x * x;
                }
            }
        }
    };
    const unsigned nworkers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, blocks));
    if (nworkers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // Reduce in block order so the result is bit-identical for any worker count.
    std::vector<MCStat> stats(outputs);
    const double n = static_cast<double>(cfg.samples);
    for (std::size_t o = 0; o < outputs; ++o) {
        double s = 0, q = 0;
        for (std::uint64_t b = 0; b < blocks; ++b) {
            s += sums[b * outputs + o];
            q += sqs[b * outputs + o];
        }
        const double mean = s / n;
        double var = cfg.samples > 1 ? (q - n * mean * mean) / (n - 1) : 0.0;
        if (var < 0) var = 0;
        stats[o] = MCStat{cfg.samples, mean + shift[o], std::sqrt(var / n)};
    }
    return stats;
}

std::vector<std::vector<double>> sample_simplex(const SimplexSpec& a, const MCConfig& cfg) {
    std::vector<std::vector<double>> out(cfg.samples, std::vector<double>(a.arity()));
    const std::uint64_t blocks = (cfg.samples + kBlockSize - 1) / kBlockSize;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        CounterRng rng(cfg.seed, b);
        const std::uint64_t end = std::min<std::uint64_t>(cfg.samples, (b + 1) * kBlockSize);
        for (std::uint64_t n = b * kBlockSize; n < end; ++n) draw_simplex_point(a, rng, out[n].data());
    }
    return out;
}

JetsDecomposition jets_decomposition(const std::vector<double>& sample, unsigned k, unsigned r) {
    if (sample.size() != std::size_t(k) * r) throw ArityMismatch("sample is not a point of the jet simplex");
    JetsDecomposition d;
    d.y_prime.resize(k);
    d.z.assign(k, std::vector<double>(r));
    for (unsigned j = 0; j < k; ++j) {
        double y = 0;
        for (unsigned l = 0; l < r; ++l) y += sample[j * r + l];
        // Exponential draws are strictly positive, so Y_j > 0 on every sample.
        if (!(y > 0)) throw InvalidArgument("degenerate sample with Y_j = 0");
        d.y_prime[j] = (j + 1) * y;
        for (unsigned l = 0; l < r; ++l) d.z[j][l] = sample[j * r + l] / y;
    }
    return d;
}

double ExperimentReport::max_abs_z() const {
    double m = 0;
    for (const auto& row : rows) m = std::max(m, std::fabs(row.zscore));
    return m;
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json p = params;
        p["quantity"] = row.name;
        nlohmann::json rec{{"experiment", experiment}, {"params", p}, {"estimate", row.estimate},
                           {"stderr", row.stderr_}, {"zscore", row.zscore}};
        if (row.has_exact) rec["exact"] = to_string(row.exact);
        arr.push_back(rec);
    }
    return arr;
}

namespace {

CheckRow make_row(std::string name, const MCStat& s, const Rational& exact) {
    CheckRow row{std::move(name), s.mean, s.stderr_, true, exact, 0};
    const double diff = s.mean - exact.get_d();
    row.zscore = s.stderr_ > 0 ? diff / s.stderr_ : (diff == 0 ? 0 : INFINITY);
    return row;
}

AffineForm y_form(unsigned k, unsigned r, unsigned j, const Rational& scale) {
    AffineForm f{0, std::vector<Rational>(std::size_t(k) * r, 0)};
    for (unsigned l = 0; l < r; ++l) f.coeffs[(j - 1) * r + l] = scale;
    return f;
}

void for_each_exponent(unsigned k, unsigned maxdeg, const std::function<void(const std::vector<unsigned>&)>& f) {
    std::vector<unsigned> e(k, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned budget) {
        if (i == k) {
            f(e);
            return;
        }
        for (unsigned x = 0; x <= budget; ++x) {
            e[i] = x;
            rec(i + 1, budget - x);
        }
        e[i] = 0;
    };
    rec(0, maxdeg);
}

std::string exponent_name(const std::string& var, const std::vector<unsigned>& e) {
    std::string s = "E[";
    bool first = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (!first) s += "*";
        first = false;
        s += var + std::to_string(i + 1);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s + "]";
}

} // namespace

ExperimentReport dirichlet_density_check(unsigned k, unsigned r, const MCConfig& cfg) {
    if (k < 1 || r < 1) throw InvalidArgument("k, r must be >= 1");
    ExperimentReport rep{"dirichlet_density", {{"k", k}, {"r", r}, {"samples", cfg.samples}, {"seed", cfg.seed}}, {}};
    // Density C·(y₁…y_k)^{r−1} w.r.t. the uniform probability on Δ^{k−1}.
    Integer rf = factorial(r - 1), rfk;
    mpz_pow_ui(rfk.get_mpz_t(), rf.get_mpz_t(), k);
    const Rational C = make_rational(factorial(k * r - 1), factorial(k - 1) * rfk);
    const SimplexSpec std_k = SimplexSpec::standard(k), jets = SimplexSpec::jets(k, r);

    std::vector<std::vector<unsigned>> exps;
    for_each_exponent(k, 2, [&](const std::vector<unsigned>& e) {
        unsigned s = 0;
        for (unsigned x : e) s += x;
        if (s > 0) exps.push_back(e);
    });
    auto stats = mc_expectations(jets, cfg, exps.size(), [&](const double* t, double* out) {
        thread_local std::vector<double> yp;
        yp.assign(k, 0);
        for (unsigned j = 0; j < k; ++j) {
            for (unsigned l = 0; l < r; ++l) yp[j] += t[j * r + l];
            yp[j] *= j + 1;
        }
        for (std::size_t x = 0; x < exps.size(); ++x) {
            double v = 1;
            for (unsigned j = 0; j < k; ++j)
                for (unsigned p = 0; p < exps[x][j]; ++p) v *= yp[j];
            out[x] = v;
        }
    });
    for (std::size_t x = 0; x < exps.size(); ++x) {
        std::vector<unsigned> shifted = exps[x];
        for (auto& v : shifted) v += r - 1;
        const Rational density_moment = C * monomial_moment(std_k, shifted);
        // Same moment straight from the jet simplex: Y'_j = j·Σ_l t_{j,l}.
        std::vector<AffineForm> forms;
        for (unsigned j = 1; j <= k; ++j)
            for (unsigned p = 0; p < exps[x][j - 1]; ++p) forms.push_back(y_form(k, r, j, Rational(j)));
        if (affine_product_expectation(jets, forms) != density_moment) rep.exact_ok = false;
        rep.rows.push_back(make_row(exponent_name("Y'", exps[x]), stats[x], density_moment));
    }
    return rep;
}

ExperimentReport jets_moment_check(unsigned k, unsigned r, const MCConfig& cfg) {
    ExperimentReport rep{"jets_moments", {{"k", k}, {"r", r}, {"samples", cfg.samples}, {"seed", cfg.seed}}, {}};
    const SimplexSpec jets = SimplexSpec::jets(k, r);
    auto stats = mc_expectations(jets, cfg, 2 * k, [&](const double* t, double* out) {
        for (unsigned j = 0; j < k; ++j) {
            double y = 0;
            for (unsigned l = 0; l < r; ++l) y += t[j * r + l];
            out[2 * j] = y;
            out[2 * j + 1] = y * y;
        }
    });
    for (unsigned j = 1; j <= k; ++j) {
        const Rational e1 = make_rational(1, long(j) * k);
        const Rational e2 = make_rational(long(r) + 1, long(j) * j * k * (long(k) * r + 1));
        const AffineForm y = y_form(k, r, j, 1);
        if (affine_product_expectation(jets, {y}) != e1 || affine_product_expectation(jets, {y, y}) != e2)
            rep.exact_ok = false;
        rep.rows.push_back(make_row("E[Y" + std::to_string(j) + "]", stats[2 * (j - 1)], e1));
        rep.rows.push_back(make_row("E[Y" + std::to_string(j) + "^2]", stats[2 * (j - 1) + 1], e2));
    }
    return rep;
}

ExperimentReport negative_correlation_check(unsigned k, unsigned r, const MCConfig& cfg) {
    if (k < 2) throw InvalidArgument("negative correlation needs k >= 2");
    ExperimentReport rep{"negative_correlation", {{"k", k}, {"r", r}, {"samples", cfg.samples}, {"seed", cfg.seed}}, {}};
    const SimplexSpec jets = SimplexSpec::jets(k, r);
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned j = 1; j <= k; ++j)
        for (unsigned l = j + 1; l <= k; ++l) pairs.emplace_back(j, l);
    auto stats = mc_expectations(jets, cfg, k + pairs.size(), [&](const double* t, double* out) {
        for (unsigned j = 0; j < k; ++j) {
            double y = 0;
            for (unsigned l = 0; l < r; ++l) y += t[j * r + l];
            out[j] = y;
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) out[k + p] = out[pairs[p].first - 1] * out[pairs[p].second - 1];
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [j, l] = pairs[p];
        const Rational exact = make_rational(long(r), long(j) * l * k * (long(k) * r + 1));
        const Rational indep = make_rational(1, long(j) * k * l * k);
        if (!(exact <= indep)) rep.exact_ok = false;
        if (affine_product_expectation(jets, {y_form(k, r, j, 1), y_form(k, r, l, 1)}) != exact) rep.exact_ok = false;
        const auto& s = stats[k + p];
        const double product_of_means = stats[j - 1].mean * stats[l - 1].mean;
        if (s.mean > product_of_means + 4 * s.stderr_) rep.exact_ok = false;
        rep.rows.push_back(make_row("E[Y" + std::to_string(j) + "*Y" + std::to_string(l) + "]", s, exact));
    }
    return rep;
}

ExperimentReport sampler_moment_check(const SimplexSpec& a, unsigned max_degree, const MCConfig& cfg) {
    nlohmann::json w = a.weights;
    ExperimentReport rep{"sampler_moments", {{"a", w}, {"samples", cfg.samples}, {"seed", cfg.seed}}, {}};
    const unsigned r = static_cast<unsigned>(a.arity());
    std::vector<std::vector<unsigned>> exps;
    for_each_exponent(r, max_degree, [&](const std::vector<unsigned>& e) {
        unsigned s = 0;
        for (unsigned x : e) s += x;
        if (s > 0) exps.push_back(e);
    });
    auto stats = mc_expectations(a, cfg, exps.size(), [&](const double* t, double* out) {
        for (std::size_t x = 0; x < exps.size(); ++x) {
            double v = 1;
            for (unsigned i = 0; i < r; ++i)
                for (unsigned p = 0; p < exps[x][i]; ++p) v *= t[i];
            out[x] = v;
        }
    });
    for (std::size_t x = 0; x < exps.size(); ++x)
        rep.rows.push_back(make_row(exponent_name("t", exps[x]), stats[x], monomial_moment(a, exps[x])));
    return rep;
}

VarianceBound variance_bound_check(unsigned k, unsigned r, const std::vector<Rational>& d) {
    if (d.size() != r) throw ArityMismatch("d needs r entries");
    const SimplexSpec jets = SimplexSpec::jets(k, r);
    AffineForm A{0, std::vector<Rational>(std::size_t(k) * r)};
    for (unsigned j = 0; j < k; ++j)
        for (unsigned l = 0; l < r; ++l) A.coeffs[j * r + l] = d[l];
    const Rational mean = affine_product_expectation(jets, {A});
    VarianceBound out;
    out.variance = affine_product_expectation(jets, {A, A}) - mean * mean;
    const AffineForm S{0, d};
    out.mean_s2 = affine_product_expectation(SimplexSpec::standard(r), {S, S});
    Rational inv_sq = 0;
    for (unsigned j = 1; j <= k; ++j) inv_sq += make_rational(1, long(j) * j);
    out.bound = 2 * inv_sq * out.mean_s2 / Rational(long(k) * k);
    out.holds = out.variance <= out.bound;
    return out;
}

Rational harmonic_number(unsigned k) {
    Rational h = 0;
    for (unsigned j = 1; j <= k; ++j) h += make_rational(1, j);
    return h;
}

std::vector<AveragingRow> averaging_experiment(const StratTree& tree, const AveragingSetup& setup, unsigned j,
                                               const std::vector<unsigned>& k_values, const MCConfig& cfg) {
    for (const auto& l : setup.parts) tree.label_index(l);
    if (!validate_product_trivialization(tree, setup.parts, setup.whole, setup.aux))
        throw InvalidTrivialization("whole marking is not the sum of part and aux markings on every edge");
    const unsigned n = tree.dimension();
    const unsigned r = static_cast<unsigned>(setup.parts.size());
    const Rational target = degree_truncated(tree, setup.whole, j);
    const std::size_t whole = tree.label_index(setup.whole);

    // Index of every path for the whole bundle, in compile_paths order.
    std::vector<unsigned> path_index;
    std::function<void(const Node&, unsigned)> walk = [&](const Node& node, unsigned neg) {
        if (node.is_leaf()) {
            path_index.push_back(neg);
            return;
        }
        for (const auto& e : node.children) walk(e.node, neg + (tree.marking(e, whole) < 0));
    };
    walk(tree.root(), 0);

    std::vector<AveragingRow> rows;
    for (unsigned k : k_values) {
        AveragingRow row;
        row.k = k;
        row.harmonic = harmonic_number(k);
        row.target = target;
        const auto prob = harmonic_twist(tree, setup.parts, setup.aux, k);
        try {
            row.integral_exact = integrate_exact(prob, j, true);
            row.exact = true;
            row.integral = row.integral_exact.get_d();
        } catch (const NotSignConstant&) {
            MCStat s = integrate_mc(prob, j, cfg, true);
            row.integral = s.mean;
            row.stderr_ = s.stderr_;
        }
        const double kr = double(k) * r;
        const double h = row.harmonic.get_d();
        row.scaled = std::pow(kr, n) * row.integral / std::pow(h, n);
        row.scaled_log = k > 1 ? std::pow(kr, n) * row.integral / std::pow(std::log(double(k)), n) : NAN;
        row.gap = std::fabs(row.scaled - target.get_d());

        // Main term and the path-wise bound on |E(1{index=l}ΠA) − δ_{l,j_σ}ΠE(A)|.
        const CompiledPaths cp = compile_paths(prob, true);
        std::vector<Rational> ea, ea2, var;
        for (const auto& f : cp.forms) {
            ea.push_back(affine_product_expectation(prob.simplex, {f}));
            ea2.push_back(affine_product_expectation(prob.simplex, {f, f}));
            var.push_back(ea2.back() - ea.back() * ea.back());
        }
        row.main_term = 0;
        double bound = 0;
        for (std::size_t p = 0; p < cp.paths.size(); ++p) {
            const auto& path = cp.paths[p];
            if (path_index[p] <= j) {
                Rational prod = cp.degrees[p];
                for (std::size_t e : path) prod *= ea[e];
                row.main_term += prod;
            }
            Rational r2 = 0;
            for (std::size_t q = 0; q < path.size(); ++q) {
                Rational term = var[path[q]];
                for (std::size_t s = 0; s < q; ++s) term *= ea2[path[s]];
                for (std::size_t s = q + 1; s < path.size(); ++s) term *= ea[path[s]] * ea[path[s]];
                r2 += term;
            }
            bound += double(cp.degrees[p]) * (j + 1) * std::sqrt(r2.get_d());
        }
        row.diff_bound = bound;
        row.bound_ok = std::fabs(row.integral - row.main_term.get_d()) <= bound + 4 * row.stderr_ + 1e-12;
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json averaging_to_json(const std::vector<AveragingRow>& rows, unsigned j) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json rec{{"experiment", "averaging"},
                           {"params", {{"k", row.k}, {"j", j}, {"harmonic", to_string(row.harmonic)}}},
                           {"estimate", row.integral},
                           {"stderr", row.stderr_},
                           {"scaled", row.scaled},
                           {"scaled_log", std::isnan(row.scaled_log) ? nlohmann::json(nullptr) : nlohmann::json(row.scaled_log)},
                           {"target", to_string(row.target)},
                           {"gap", row.gap},
                           {"main_term", to_string(row.main_term)},
                           {"diff_bound", row.diff_bound},
                           {"bound_ok", row.bound_ok}};
        if (row.exact) rec["exact"] = to_string(row.integral_exact);
        rec["zscore"] = row.stderr_ > 0 ? (row.integral - row.main_term.get_d()) / row.stderr_ : 0.0;
        arr.push_back(rec);
    }
    return arr;
}

} // namespace jetcalc
