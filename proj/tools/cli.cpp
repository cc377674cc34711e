#include "cli.hpp"

#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "jetcalc/lattice.hpp"
#include "jetcalc/mc.hpp"
#include "jetcalc/segre.hpp"
#include "jetcalc/simplex.hpp"
#include "jetcalc/strat.hpp"
#include "jetcalc/tree_json.hpp"
#include "jetcalc/upsilon.hpp"

namespace jetcalc {

namespace {

using nlohmann::json;

// A malformed flag value; `field` is the flag name.
struct UsageError : std::runtime_error {
    UsageError(const std::string& field, const std::string& what) : std::runtime_error("--" + field + ": " + what) {}
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

long parse_long(const std::string& field, const std::string& s) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(field, "expected an integer, got '" + s + "'");
    }
}

std::vector<long> parse_list(const std::string& field, const std::string& s, long min_value) {
    if (s.empty()) throw UsageError(field, "missing value");
    std::vector<long> out;
    for (const auto& item : split(s)) {
        long v = parse_long(field, item);
        if (v < min_value) throw UsageError(field, "value " + item + " is below " + std::to_string(min_value));
        out.push_back(v);
    }
    return out;
}

std::vector<unsigned> to_unsigned(const std::vector<long>& v) { return {v.begin(), v.end()}; }

SimplexSpec parse_weights(const std::string& s) { return SimplexSpec(parse_list("a", s, 1)); }

std::string render_surd(const QuadraticSurd& s) {
    if (s.coeff == 0) return "0";
    if (s.radicand == 1) return to_string(s.coeff);
    std::string root = "sqrt(" + s.radicand.get_str() + ")";
    return s.coeff == 1 ? root : to_string(s.coeff) + "*" + root;
}

std::string format_double(double x) {
    std::ostringstream o;
    o << std::setprecision(17) << x;
    return o.str();
}

struct Output {
    std::ostream& out;
    bool as_json = false;

    void scalar(const std::string& value) const {
        if (as_json) out << json{{"value", value}}.dump() << "\n";
        else out << value << "\n";
    }
    void object(const json& j) const { out << j.dump() << "\n"; }
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact truncated-degree, Segre and simplex-moment calculator", "jetcalc"};
    app.require_subcommand(1);

    bool as_json = false;
    std::uint64_t seed = kDefaultSeed, samples = 1000000;
    unsigned workers = 1;
    std::string a_str, p_str, tree_path, label, k_str, aux, whole, d_str, experiment = "", method = "exact",
                                                                     algorithm = "dp";
    std::optional<long> upto, index, n_opt, m_opt, r_opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", as_json, "Emit JSON");
    };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "MC seed");
        sub->add_option("--samples", samples, "MC sample count");
        sub->add_option("--workers", workers, "MC worker threads");
    };

    auto* gg = app.add_subcommand("gg-coeff", "Green-Griffiths surface coefficients");
    gg->add_option("--k", k_str, "jet order")->required();
    add_common(gg);

    auto* jr = app.add_subcommand("jet-rank", "rank of the weighted jet bundle");
    jr->add_option("--n", n_opt)->required();
    jr->add_option("--k", k_str)->required();
    jr->add_option("--m", m_opt)->required();
    add_common(jr);

    auto* wh = app.add_subcommand("whitney", "weighted Whitney product for line bundles");
    wh->add_option("--a", a_str, "comma-separated weights")->required();
    wh->add_option("--n", n_opt, "truncation dimension")->required();
    add_common(wh);

    auto* chi = app.add_subcommand("chi-leading", "leading Euler-characteristic coefficient");
    chi->add_option("--a", a_str)->required();
    chi->add_option("--n", n_opt)->required();
    chi->add_option("--m", m_opt, "also compute the exact lattice sum at this m");
    add_common(chi);

    auto* sm = app.add_subcommand("simplex-moment", "monomial moment on the weighted simplex");
    sm->add_option("--a", a_str)->required();
    sm->add_option("--p", p_str)->required();
    add_common(sm);

    auto* sv = app.add_subcommand("simplex-volume", "volumes and lattice cell ratio");
    sv->add_option("--a", a_str)->required();
    add_common(sv);

    auto* ls = app.add_subcommand("lattice-sum", "power sum over weighted compositions");
    ls->add_option("--a", a_str)->required();
    ls->add_option("--p", p_str)->required();
    ls->add_option("--m", m_opt)->required();
    add_common(ls);

    auto* sd = app.add_subcommand("strat-degree", "truncated degree of a stratification tree");
    sd->add_option("--tree", tree_path)->required();
    sd->add_option("--label", label)->required();
    auto* sd_upto = sd->add_option("--upto", upto, "sum over indices <= l");
    auto* sd_index = sd->add_option("--index", index, "exact index l");
    sd_upto->excludes(sd_index);
    add_common(sd);

    auto* sc = app.add_subcommand("strat-cmax", "max over label assignments");
    sc->add_option("--tree", tree_path)->required();
    sc->add_option("--label", label, "comma-separated labels")->required();
    sc->add_option("--index", index)->required();
    sc->add_option("--algorithm", algorithm)->check(CLI::IsMember({"dp", "brute"}));
    add_common(sc);

    auto* ui = app.add_subcommand("upsilon-integrate", "integral of the index function over the simplex");
    ui->add_option("--tree", tree_path)->required();
    ui->add_option("--label", label, "comma-separated coordinate labels")->required();
    ui->add_option("--a", a_str)->required();
    ui->add_option("--index", index)->required();
    ui->add_option("--aux", aux, "aux label (integrates the twisted function)");
    ui->add_option("--method", method)->check(CLI::IsMember({"exact", "mc"}));
    add_mc(ui);
    add_common(ui);

    auto* jb = app.add_subcommand("jet-bound", "order-k bound coefficient with the harmonic twist");
    jb->add_option("--tree", tree_path)->required();
    jb->add_option("--label", label, "comma-separated base labels")->required();
    jb->add_option("--aux", aux)->required();
    jb->add_option("--k", k_str)->required();
    add_mc(jb);
    add_common(jb);

    auto* me = app.add_subcommand("mc-experiment", "Monte-Carlo checks on weighted simplexes");
    me->add_option("--experiment", experiment)
        ->required()
        ->check(CLI::IsMember({"dirichlet", "correlation", "jets-moments", "sampler", "variance", "averaging"}));
    me->add_option("--k", k_str, "k, or a comma list for averaging");
    me->add_option("--r", r_opt);
    me->add_option("--a", a_str);
    me->add_option("--d", d_str, "comma-separated rationals for the variance bound");
    me->add_option("--tree", tree_path);
    me->add_option("--label", label, "comma-separated part labels");
    me->add_option("--aux", aux);
    me->add_option("--whole", whole);
    me->add_option("--index", index);
    add_mc(me);
    add_common(me);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const Output o{out, as_json};
    MCConfig cfg{seed, samples, workers};
    try {
        auto need = [](const std::optional<long>& v, const std::string& field, long min_value) {
            if (!v) throw UsageError(field, "required");
            if (*v < min_value) throw UsageError(field, "must be >= " + std::to_string(min_value));
            return *v;
        };
        auto single_k = [&](long min_value) {
            auto ks = parse_list("k", k_str, min_value);
            if (ks.size() != 1) throw UsageError("k", "expected a single value");
            return ks[0];
        };
        if (cfg.samples == 0) throw UsageError("samples", "must be > 0");
        if (cfg.workers == 0) throw UsageError("workers", "must be > 0");

        if (*gg) {
            const unsigned k = static_cast<unsigned>(single_k(1));
            auto c = gg_surface_coeffs(k);
            o.object({{"alpha", to_string(c.alpha)},
                      {"beta", to_string(c.beta)},
                      {"class", gg_surface_class(k).to_factored_string()}});
        } else if (*jr) {
            o.scalar(jet_rank(unsigned(need(n_opt, "n", 0)), unsigned(single_k(0)), unsigned(need(m_opt, "m", 0))).get_str());
        } else if (*wh) {
            const SimplexSpec a = parse_weights(a_str);
            const unsigned n = unsigned(need(n_opt, "n", 0));
            RingPtr ring = alpha_ring(a.arity(), n);
            std::vector<WeightedPart> parts;
            for (std::size_t i = 0; i < a.arity(); ++i) {
                // Line bundle with root αᵢ: total Segre series Σ αᵢ^p.
                GradedPoly s(ring);
                Exponent e(a.arity(), 0);
                for (unsigned d = 0; d <= n; ++d) {
                    e[i] = d;
                    s.add_term(e, 1);
                }
                parts.push_back({s, 1, a.weights[i]});
            }
            GradedPoly w = whitney_weighted(parts);
            o.object({{"whitney", w.to_string()},
                      {"degree_n", poly_component(w, n).to_string()},
                      {"chi_asymptotic", chi_leading_asymptotic(a, n, ring).to_string()}});
        } else if (*chi) {
            const SimplexSpec a = parse_weights(a_str);
            const unsigned n = unsigned(need(n_opt, "n", 0));
            RingPtr ring = alpha_ring(a.arity(), n);
            json j{{"asymptotic", chi_leading_asymptotic(a, n, ring).to_string()}};
            if (m_opt) {
                const long m = need(m_opt, "m", 0);
                GradedPoly exact = chi_leading_exact(a, n, m, ring);
                j["m"] = m;
                j["exact"] = exact.to_string();
                if (m > 0) {
                    const unsigned e = n + unsigned(a.arity()) - 1;
                    Integer mp;
                    mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(m), e);
                    j["normalized"] = (exact * make_rational(factorial(e), mp)).to_string();
                }
            }
            o.object(j);
        } else if (*sm) {
            const SimplexSpec a = parse_weights(a_str);
            auto p = to_unsigned(parse_list("p", p_str, 0));
            if (p.size() != a.arity()) throw UsageError("p", "needs one exponent per weight");
            o.scalar(to_string(monomial_moment(a, p)));
        } else if (*sv) {
            const SimplexSpec a = parse_weights(a_str);
            json j{{"volume", render_surd(volume(a))}};
            if (a.arity() >= 2) {
                j["fundamental_domain"] = render_surd(fundamental_domain_volume(a));
                j["cell_ratio"] = to_string(cell_ratio(a));
            }
            o.object(j);
        } else if (*ls) {
            const SimplexSpec a = parse_weights(a_str);
            auto p = to_unsigned(parse_list("p", p_str, 0));
            if (p.size() != a.arity()) throw UsageError("p", "needs one exponent per weight");
            const long m = need(m_opt, "m", 0);
            o.object({{"power_sum", to_string(power_sum(a, p, m))},
                      {"asymptotic", to_string(power_sum_asymptotic(a, p))},
                      {"count", count_compositions(a, m).get_str()}});
        } else if (*sd) {
            const StratTree tree = load_tree(tree_path);
            if (index) o.scalar(to_string(degree_by_index(tree, label, unsigned(need(index, "index", 0)))));
            else {
                const long l = upto ? need(upto, "upto", 0) : long(tree.dimension());
                o.scalar(to_string(degree_truncated(tree, label, unsigned(l))));
            }
        } else if (*sc) {
            const StratTree tree = load_tree(tree_path);
            auto alg = algorithm == "brute" ? CMaxAlgorithm::brute : CMaxAlgorithm::dp;
            o.scalar(to_string(c_max(tree, split(label), unsigned(need(index, "index", 0)), alg)));
        } else if (*ui) {
            const StratTree tree = load_tree(tree_path);
            const SimplexSpec a = parse_weights(a_str);
            auto prob = make_problem(tree, split(label), a,
                                     aux.empty() ? std::nullopt : std::optional<std::string>(aux));
            const unsigned i = unsigned(need(index, "index", 0));
            if (method == "exact") o.scalar(to_string(integrate_exact(prob, i, !aux.empty())));
            else {
                MCStat s = integrate_mc(prob, i, cfg, !aux.empty());
                o.object({{"estimate", s.mean}, {"stderr", s.stderr_}, {"samples", s.count}});
            }
        } else if (*jb) {
            const StratTree tree = load_tree(tree_path);
            auto b = jet_chi1_bound_coeff(tree, split(label), aux, unsigned(single_k(1)), cfg);
            json j{{"prefactor", to_string(b.prefactor)}, {"estimate", b.estimate}, {"stderr", b.stderr_}};
            if (b.exact) j["exact"] = to_string(b.value);
            o.object(j);
        } else if (*me) {
            if (experiment == "sampler") {
                if (a_str.empty()) throw UsageError("a", "required for the sampler experiment");
                o.object(sampler_moment_check(parse_weights(a_str), 3, cfg).to_json());
            } else if (experiment == "averaging") {
                if (tree_path.empty()) throw UsageError("tree", "required for the averaging experiment");
                if (label.empty()) throw UsageError("label", "required for the averaging experiment");
                if (aux.empty()) throw UsageError("aux", "required for the averaging experiment");
                if (whole.empty()) throw UsageError("whole", "required for the averaging experiment");
                const StratTree tree = load_tree(tree_path);
                const unsigned j = index ? unsigned(need(index, "index", 0)) : 1;
                auto ks = to_unsigned(parse_list("k", k_str.empty() ? "4,8,16,32" : k_str, 1));
                o.object(averaging_to_json(averaging_experiment(tree, {split(label), aux, whole}, j, ks, cfg), j));
            } else {
                const unsigned k = unsigned(single_k(1));
                const unsigned r = unsigned(need(r_opt, "r", 1));
                if (experiment == "dirichlet") o.object(dirichlet_density_check(k, r, cfg).to_json());
                else if (experiment == "jets-moments") o.object(jets_moment_check(k, r, cfg).to_json());
                else if (experiment == "correlation") o.object(negative_correlation_check(k, r, cfg).to_json());
                else {
                    std::vector<Rational> d;
                    for (const auto& s : split(d_str)) {
                        try {
                            d.push_back(parse_rational(s));
                        } catch (const Error&) {
                            throw UsageError("d", "not a rational: '" + s + "'");
                        }
                    }
                    auto v = variance_bound_check(k, r, d);
                    o.object({{"experiment", "variance_bound"},
                              {"params", {{"k", k}, {"r", r}, {"d", d_str}}},
                              {"variance", to_string(v.variance)},
                              {"mean_s2", to_string(v.mean_s2)},
                              {"bound", to_string(v.bound)},
                              {"holds", v.holds}});
                }
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const TreeParseError& e) {
        err << "error: tree field " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace jetcalc
