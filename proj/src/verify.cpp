#include "osbounds/verify.hpp"

#include "osbounds/errors.hpp"
#include "osbounds/format.hpp"
#include "osbounds/numerics.hpp"
#include "osbounds/sharp_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace osbounds {

namespace {

struct CaseOutcome {
    long checks = 0;
    double slack = std::numeric_limits<double>::infinity();
    std::optional<nlohmann::ordered_json> violation;

    // Records rhs >= lhs (relative slack); rhs == 0 compares absolutely.
    void check(double lhs, double rhs, const std::function<nlohmann::ordered_json()>& describe) {
        ++checks;
        const double s = rhs != 0.0 ? (rhs - lhs) / std::fabs(rhs) : -lhs;
        slack = std::min(slack, s);
        if (s < -kSweepTolerance && !violation) {
            auto d = describe();
            d["lhs"] = format_real(lhs);
            d["rhs"] = format_real(rhs);
            violation = std::move(d);
        }
    }

    // Records an equality that must hold to `tol` relative.
    void require_equal(double a, double b, double tol,
                       const std::function<nlohmann::ordered_json()>& describe) {
        ++checks;
        const double scale = std::max(std::fabs(a), std::fabs(b));
        const double gap = scale > 0.0 ? std::fabs(a - b) / scale : 0.0;
        if (gap > tol && !violation) {
            auto d = describe();
            d["expected"] = format_real(b);
            d["actual"] = format_real(a);
            violation = std::move(d);
        }
    }
};

// Runs body(i) for i in [0, count) over `threads` workers; results land in
// per-index slots so the reduction order never depends on scheduling.
std::vector<CaseOutcome> parallel_cases(long count, int threads,
                                        const std::function<CaseOutcome(long)>& body) {
    std::vector<CaseOutcome> out(static_cast<std::size_t>(count));
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (long i = 0; i < count; ++i) out[i] = body(i);
        return out;
    }
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long i = w; i < count; i += workers) out[i] = body(i);
        });
    }
    pool.clear();
    return out;
}

SuiteResult reduce(std::string name, const std::vector<CaseOutcome>& outcomes) {
    SuiteResult r;
    r.name = std::move(name);
    r.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
        r.cases += o.checks;
        r.worst_slack = std::min(r.worst_slack, o.slack);
        if (o.violation) {
            ++r.violations;
            if (!r.first_violation) r.first_violation = o.violation;
        }
    }
    if (r.cases == 0) r.worst_slack = 0.0;
    return r;
}

long cases_or(const VerifyOptions& options, long fallback) {
    return options.cases > 0 ? options.cases : fallback;
}

nlohmann::ordered_json describe_law(const DiscreteDistribution& dist) {
    nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
    for (const Atom& a : dist.atoms()) atoms.push_back({format_real(a.value), format_real(a.prob)});
    return atoms;
}

struct IidCell {
    int n;
    int k;
    double alpha;
    double unit_bound;
};

std::vector<IidCell> finite_iid_grid(int max_n) {
    static constexpr double kAlphas[] = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0,
                                         2.5,  3.0, 3.5,  4.0, 4.5,  5.0, 6.0};
    std::vector<IidCell> cells;
    for (int n = 2; n <= max_n; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (double alpha : kAlphas) {
                if (alpha > n + 1 - k && !(k == 1 && alpha <= n)) continue;
                MomentQuery q{SampleModel::iid, n, k, alpha, {1.0}};
                const BoundReport r = bound_moment(q);
                if (r.finite()) cells.push_back({n, k, alpha, r.bound});
            }
        }
    }
    return cells;
}

}  // namespace

RandomStream case_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return RandomStream(seq);
}

DiscreteDistribution random_discrete(RandomStream& stream, double mean, int max_atoms) {
    std::vector<Atom> raw;
    if (uniform_open(stream) < 0.2) {
        // Zero-inflated two-point law, the extremal shape for the mid regime.
        const double zero = uniform_open(stream);
        raw = {{0.0, zero}, {1.0, 1.0 - zero}};
    } else {
        const int m = 1 + static_cast<int>(stream() % static_cast<std::uint64_t>(max_atoms));
        const bool with_zero = m > 1 && uniform_open(stream) < 0.35;
        for (int i = 0; i < m; ++i) {
            const double value = (i == 0 && with_zero) ? 0.0 : std::exp(6.0 * uniform_open(stream) - 3.0);
            raw.push_back({value, -std::log(uniform_open(stream))});
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> merged;
    for (const Atom& a : raw) {
        if (!merged.empty() && merged.back().value == a.value) {
            merged.back().prob += a.prob;
        } else {
            merged.push_back(a);
        }
    }
    double total = 0.0;
    for (const Atom& a : merged) total += a.prob;
    double current_mean = 0.0;
    for (Atom& a : merged) {
        a.prob /= total;
        current_mean += a.prob * a.value;
    }
    if (!(current_mean > 0.0)) return DiscreteDistribution({{mean, 1.0}});
    const double factor = mean / current_mean;
    for (Atom& a : merged) a.value *= factor;
    return DiscreteDistribution(std::move(merged));
}

StepFunction random_step_function(RandomStream& stream, int max_pieces) {
    const int m = 1 + static_cast<int>(stream() % static_cast<std::uint64_t>(max_pieces));
    std::vector<double> cuts;
    while (static_cast<int>(cuts.size()) < m - 1) {
        const double c = uniform_open(stream);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    StepFunction g;
    g.breakpoints.push_back(0.0);
    g.breakpoints.insert(g.breakpoints.end(), cuts.begin(), cuts.end());
    g.breakpoints.push_back(1.0);
    for (int j = 0; j < m; ++j) {
        g.increments.push_back(uniform_open(stream) < 0.3 ? 0.0 : std::exp(4.0 * uniform_open(stream) - 2.0));
    }
    return g;
}

SuiteResult run_sharpness_suite(const VerifyOptions& options) {
    struct Config {
        int k;
        int n;
        double alpha;
    };
    std::vector<Config> configs = {{2, 5, 2.0}, {2, 3, 1.0}, {3, 5, 1.5}};
    RandomStream stream = case_stream(options.seed, 0);
    for (int i = 0; i < 3; ++i) {
        const int n = 3 + static_cast<int>(stream() % 6);
        const int k = 2 + static_cast<int>(stream() % static_cast<std::uint64_t>(n - 2));
        const double span = std::max(0.0, n - k - 0.25);
        configs.push_back({k, n, 1.0 + span * uniform_open(stream)});
    }
    constexpr int kGrid = 10'000;
    constexpr double kRhoTolerance = 2e-4;
    std::vector<nlohmann::ordered_json> per_case(configs.size());
    auto outcomes = parallel_cases(static_cast<long>(configs.size()), options.threads, [&](long i) {
        const Config c = configs[i];
        CaseOutcome o;
        const double rho = solve_rho(c.k, c.n, c.alpha);
        const double bound = constant_A_mid(c.k, c.n, c.alpha);
        const SharpnessResult found = sharpness_search_two_point(c.k, c.n, c.alpha, 1.0, kGrid);
        auto describe = [&] {
            return nlohmann::ordered_json{{"k", c.k},
                                          {"n", c.n},
                                          {"alpha", format_real(c.alpha)},
                                          {"rho", format_real(rho)},
                                          {"rho_star", format_real(found.rho_star)}};
        };
        o.check(found.value_star, bound, describe);
        o.check(std::fabs(found.rho_star - rho), kRhoTolerance, describe);
        per_case[static_cast<std::size_t>(i)] = describe();
        per_case[static_cast<std::size_t>(i)]["slack"] = format_real((bound - found.value_star) / bound);
        return o;
    });
    SuiteResult r = reduce("sharpness", outcomes);
    r.details["grid_size"] = kGrid;
    r.details["configs"] = per_case;
    return r;
}

SuiteResult run_bound_validity_sweep(const VerifyOptions& options) {
    const auto cells = finite_iid_grid(6);
    const long laws = cases_or(options, 1000);
    auto outcomes = parallel_cases(laws, options.threads, [&](long i) {
        RandomStream stream = case_stream(options.seed, static_cast<std::uint64_t>(i));
        const double mu = 0.5 + 1.5 * uniform_open(stream);
        const DiscreteDistribution law = random_discrete(stream, mu);
        CaseOutcome o;
        for (const IidCell& c : cells) {
            const double value = exact_moment_iid_discrete(law, c.k, c.n, c.alpha);
            o.check(value, c.unit_bound * std::pow(mu, c.alpha), [&] {
                return nlohmann::ordered_json{{"case", i},
                                              {"n", c.n},
                                              {"k", c.k},
                                              {"alpha", format_real(c.alpha)},
                                              {"mean", format_real(mu)},
                                              {"atoms", describe_law(law)}};
            });
        }
        return o;
    });
    SuiteResult r = reduce("bound_validity", outcomes);
    r.details["laws"] = laws;
    r.details["grid_cells"] = static_cast<long>(cells.size());
    return r;
}

SuiteResult run_oracle_agreement_sweep(const VerifyOptions& options) {
    const long laws = cases_or(options, 1000);
    auto outcomes = parallel_cases(laws, options.threads, [&](long i) {
        RandomStream stream = case_stream(options.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(i));
        const DiscreteDistribution law = random_discrete(stream, 1.0);
        const int n = 1 + static_cast<int>(stream() % 6);
        const int k = 1 + static_cast<int>(stream() % static_cast<std::uint64_t>(n));
        const double alpha = 0.25 + 3.0 * uniform_open(stream);
        const std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(n), law);
        CaseOutcome o;
        o.require_equal(exact_moment_indep_discrete(copies, k, alpha),
                        exact_moment_iid_discrete(law, k, n, alpha), 1e-11, [&] {
                            return nlohmann::ordered_json{{"case", i},
                                                          {"n", n},
                                                          {"k", k},
                                                          {"alpha", format_real(alpha)},
                                                          {"atoms", describe_law(law)}};
                        });
        return o;
    });
    SuiteResult r = reduce("oracle_agreement", outcomes);
    r.worst_slack = 0.0;
    return r;
}

SuiteResult run_corollary2_sweep(const VerifyOptions& options) {
    static constexpr double kAlphas[] = {1.5, 2.0, 2.7};
    const long laws = cases_or(options, 1000);
    auto outcomes = parallel_cases(laws, options.threads, [&](long i) {
        RandomStream stream = case_stream(options.seed ^ 0xc2b2ae3d27d4eb4fULL, static_cast<std::uint64_t>(i));
        const double mu = 0.5 + 1.5 * uniform_open(stream);
        const DiscreteDistribution law = random_discrete(stream, mu);
        CaseOutcome o;
        for (double alpha : kAlphas) {
            o.check(corollary2_lhs(law, alpha), std::pow(mu, alpha), [&] {
                return nlohmann::ordered_json{{"case", i},
                                              {"alpha", format_real(alpha)},
                                              {"atoms", describe_law(law)}};
            });
        }
        return o;
    });
    return reduce("tail_power", outcomes);
}

SuiteResult run_minimum_jensen_sweep(const VerifyOptions& options) {
    const long laws = cases_or(options, 1000);
    auto outcomes = parallel_cases(laws, options.threads, [&](long i) {
        RandomStream stream = case_stream(options.seed ^ 0x165667b19e3779f9ULL, static_cast<std::uint64_t>(i));
        const DiscreteDistribution law = random_discrete(stream, 1.0);
        CaseOutcome o;
        for (int n = 1; n <= 4; ++n) {
            const double rhs = std::pow(law.moment(1.0 / n), n);
            double previous = std::numeric_limits<double>::infinity();
            for (int big_n = n; big_n <= n + 3; ++big_n) {
                const double value = exact_moment_iid_discrete(law, 1, big_n, 1.0);
                auto describe = [&] {
                    return nlohmann::ordered_json{{"case", i},
                                                  {"n", n},
                                                  {"N", big_n},
                                                  {"atoms", describe_law(law)}};
                };
                o.check(value, rhs, describe);
                if (std::isfinite(previous)) o.check(value, previous, describe);
                previous = value;
            }
        }
        if (law.size() == 1) {
            // A degenerate law attains the bound.
            o.require_equal(exact_moment_iid_discrete(law, 1, 4, 1.0), std::pow(law.moment(0.25), 4), 1e-12,
                            [&] { return nlohmann::ordered_json{{"case", i}, {"degenerate", true}}; });
        }
        return o;
    });
    return reduce("minimum_jensen", outcomes);
}

SuiteResult run_lemma3_sweep(const VerifyOptions& options) {
    static constexpr double kAlphas[] = {1.1, 2.0, 3.5};
    const long functions = cases_or(options, 10'000);
    auto outcomes = parallel_cases(functions, options.threads, [&](long i) {
        RandomStream stream = case_stream(options.seed ^ 0x27d4eb2f165667c5ULL, static_cast<std::uint64_t>(i));
        CaseOutcome o;
        const bool equality_case = i % 10 == 0;
        StepFunction g;
        if (equality_case) {
            const double theta = std::exp(4.0 * uniform_open(stream) - 2.0);
            if (i % 20 == 0) {
                g = {{0.0, 1.0}, {theta}};
            } else {
                g = {{0.0, uniform_open(stream), 1.0}, {0.0, theta}};
            }
        } else {
            g = random_step_function(stream);
        }
        for (double alpha : kAlphas) {
            const Lemma3Sides sides = lemma3_lhs_rhs(g, alpha);
            auto describe = [&] {
                return nlohmann::ordered_json{{"case", i},
                                              {"alpha", format_real(alpha)},
                                              {"breakpoints", g.breakpoints},
                                              {"increments", g.increments}};
            };
            o.check(sides.lhs, sides.rhs, describe);
            if (equality_case) o.require_equal(sides.lhs, sides.rhs, 1e-12, describe);
        }
        return o;
    });
    SuiteResult r = reduce("lemma3", outcomes);
    r.details["step_functions"] = functions;
    return r;
}

SuiteResult run_witness_suite(const VerifyOptions&) {
    SuiteResult r;
    r.name = "witness";
    r.worst_slack = 0.0;
    auto fail = [&](nlohmann::ordered_json detail) {
        ++r.violations;
        if (!r.first_violation) r.first_violation = std::move(detail);
    };

    // Partial 1.5-moments of the heavy-tail witness over [mu/2, T].
    const HeavyTailWitness heavy = heavy_tail_witness(1.0);
    auto heavy_survival = [&](double x) { return heavy.survival(x); };
    nlohmann::ordered_json heavy_rows = nlohmann::ordered_json::array();
    std::vector<double> partials;
    for (int e = 3; e <= 9; ++e) {
        const double t = std::pow(10.0, e);
        partials.push_back(tail_moment_integral(heavy_survival, 1.5, 1, 0.5, t));
        heavy_rows.push_back({format_real(t), format_real(partials.back())});
        ++r.cases;
    }
    for (std::size_t i = 1; i < partials.size(); ++i) {
        if (!(partials[i] > partials[i - 1])) fail({{"witness", "heavy_tail"}, {"non_increasing_at", i}});
    }
    const double heavy_ratio = partials.back() / partials.front();
    if (!(heavy_ratio > 10.0)) fail({{"witness", "heavy_tail"}, {"ratio", format_real(heavy_ratio)}});
    r.details["heavy_tail_partials"] = heavy_rows;
    r.details["heavy_tail_ratio"] = format_real(heavy_ratio);

    // Mean of the heavy-tail witness: 1/2 + int_{1/2}^inf R, with the tail
    // mapped to a finite range through log(2x) = s / (1 - s).
    const double heavy_tail_mass =
        integrate(
            [&](double s) {
                const double t = s / (1.0 - s);
                const double x = 0.5 * std::exp(t);
                return heavy.survival(x) * x / ((1.0 - s) * (1.0 - s));
            },
            0.0, 1.0)
            .value;
    const double heavy_mean = 0.5 + heavy_tail_mass;
    ++r.cases;
    if (std::fabs(heavy_mean - 1.0) > 1e-8) fail({{"witness", "heavy_tail_mean"}, {"value", format_real(heavy_mean)}});
    r.details["heavy_tail_mean"] = format_real(heavy_mean);

    // Partial (2.5)-moments of the minimum of two log-square-tail copies.
    const LogSquareTail logsq = log_square_witness(LogSquareTail::kUnscaledMean);
    auto logsq_survival = [&](double x) { return logsq.survival(x); };
    const double e = std::exp(1.0);
    nlohmann::ordered_json logsq_rows = nlohmann::ordered_json::array();
    std::vector<double> min_partials;
    for (int p = 3; p <= 9; ++p) {
        const double t = std::pow(10.0, p);
        min_partials.push_back(tail_moment_integral(logsq_survival, 2.5, 2, e, t));
        logsq_rows.push_back({format_real(t), format_real(min_partials.back())});
        ++r.cases;
    }
    for (std::size_t i = 1; i < min_partials.size(); ++i) {
        if (!(min_partials[i] > min_partials[i - 1])) fail({{"witness", "log_square"}, {"non_increasing_at", i}});
    }
    // The divergence is slow (sqrt(T) / log^4 T), so check its signature:
    // the gain over each decade grows, where a convergent integral's would
    // shrink toward zero.
    for (std::size_t i = 2; i < min_partials.size(); ++i) {
        const double gain = min_partials[i] - min_partials[i - 1];
        const double prev_gain = min_partials[i - 1] - min_partials[i - 2];
        if (!(gain > prev_gain)) fail({{"witness", "log_square"}, {"shrinking_gain_at", i}});
    }
    r.details["log_square_min_partials"] = logsq_rows;
    return r;
}

std::vector<SuiteResult> run_suite(std::string_view name, const VerifyOptions& options) {
    std::vector<SuiteResult> out;
    const bool all = name == "all";
    bool known = all;
    if (all || name == "sharpness") {
        known = true;
        out.push_back(run_sharpness_suite(options));
    }
    if (all || name == "sweep") {
        known = true;
        out.push_back(run_bound_validity_sweep(options));
        out.push_back(run_oracle_agreement_sweep(options));
        out.push_back(run_corollary2_sweep(options));
        out.push_back(run_minimum_jensen_sweep(options));
    }
    if (all || name == "lemma3") {
        known = true;
        out.push_back(run_lemma3_sweep(options));
    }
    if (all || name == "witness") {
        known = true;
        out.push_back(run_witness_suite(options));
    }
    if (!known) {
        throw DomainError("unknown suite '" + std::string(name) +
                          "' (expected sharpness, sweep, lemma3, witness or all)");
    }
    return out;
}

nlohmann::ordered_json to_json(const SuiteResult& result) {
    nlohmann::ordered_json j;
    j["suite"] = result.name;
    j["cases"] = result.cases;
    j["violations"] = result.violations;
    j["worst_slack"] = format_real(result.worst_slack);
    j["passed"] = result.passed();
    if (result.first_violation) j["first_violation"] = *result.first_violation;
    if (!result.details.empty()) j["details"] = result.details;
    return j;
}

}  // namespace osbounds
