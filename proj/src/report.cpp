#include "osbounds/report.hpp"

#include "osbounds/errors.hpp"
#include "osbounds/format.hpp"

#include <cmath>
#include <sstream>
#include <thread>

namespace osbounds {

namespace {

using json = nlohmann::ordered_json;

double real_at(const json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("report json: missing '") + key + "'");
    return parse_real(j.at(key).get<std::string>());
}

std::optional<double> optional_real(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return parse_real(j.at(key).get<std::string>());
}

json component_to_json(const ComponentLaw& law) {
    return std::visit([](const auto& d) { return extremal_to_json(ExtremalDistribution(d)); }, law);
}

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

json extremal_to_json(const ExtremalDistribution& dist) {
    json j;
    j["variant"] = std::string(variant_tag(dist));
    struct Visitor {
        json& j;
        void operator()(const TwoPoint& d) const {
            j["zero_prob"] = format_real(d.zero_prob);
            j["atom"] = format_real(d.atom);
            j["mean"] = format_real(d.mean_value);
        }
        void operator()(const Degenerate& d) const { j["value"] = format_real(d.value); }
        void operator()(const BetaPowerQuantile& d) const {
            j["k"] = d.params.k();
            j["n"] = d.params.n();
            j["alpha"] = format_real(d.alpha);
            j["rho_gcm"] = format_real(d.rho_gcm);
            j["scale"] = format_real(d.scale());
            j["log_scale"] = format_real(d.log_scale);
            j["mean"] = format_real(d.mean_value);
        }
        void operator()(const PowerLaw& d) const {
            j["n"] = d.n;
            j["alpha"] = format_real(d.alpha);
            j["mean"] = format_real(d.mean_value);
        }
        void operator()(const HeavyTailWitness& d) const { j["mean"] = format_real(d.mean_value); }
        void operator()(const LogSquareTail& d) const {
            j["mean"] = format_real(d.mean_value);
            j["scale"] = format_real(d.scale());
        }
        void operator()(const IndepMinConfig& d) const {
            json parts = json::array();
            for (const auto& c : d.components) parts.push_back(component_to_json(c));
            j["components"] = parts;
        }
    };
    std::visit(Visitor{j}, dist);
    return j;
}

ExtremalDistribution extremal_from_json(const json& j) {
    const auto tag = j.at("variant").get<std::string>();
    if (tag == "TwoPoint") return TwoPoint{real_at(j, "zero_prob"), real_at(j, "atom"), real_at(j, "mean")};
    if (tag == "Degenerate") return Degenerate{real_at(j, "value")};
    if (tag == "BetaPowerQuantile") {
        return BetaPowerQuantile{OrderStatParams(j.at("k").get<int>(), j.at("n").get<int>()),
                                 real_at(j, "alpha"), real_at(j, "rho_gcm"), real_at(j, "log_scale"),
                                 real_at(j, "mean")};
    }
    if (tag == "PowerLaw") return PowerLaw{j.at("n").get<int>(), real_at(j, "alpha"), real_at(j, "mean")};
    if (tag == "HeavyTailWitness") return HeavyTailWitness{real_at(j, "mean")};
    if (tag == "LogSquareTail") return LogSquareTail{real_at(j, "mean")};
    if (tag == "IndepMinConfig") {
        IndepMinConfig config;
        for (const auto& c : j.at("components")) {
            ExtremalDistribution part = extremal_from_json(c);
            if (auto* tp = std::get_if<TwoPoint>(&part)) {
                config.components.emplace_back(*tp);
            } else if (auto* dg = std::get_if<Degenerate>(&part)) {
                config.components.emplace_back(*dg);
            } else {
                throw DomainError("report json: IndepMinConfig components must be TwoPoint or Degenerate");
            }
        }
        return config;
    }
    throw DomainError("report json: unknown extremal variant '" + tag + "'");
}

json to_json(const ReportEnvelope& env) {
    const MomentQuery& q = env.query;
    const BoundReport& r = env.report;
    json j;
    j["tool"] = kToolName;
    j["version"] = env.version;
    j["seed"] = env.seed;
    j["model"] = std::string(to_string(q.model));
    j["n"] = q.n;
    j["k"] = q.k;
    j["alpha"] = format_real(q.alpha);
    json means = json::array();
    for (double m : q.means) means.push_back(format_real(m));
    j["means"] = means;
    j["bound"] = format_real(r.bound);
    if (r.constant_A) j["constant_A"] = format_real(*r.constant_A);
    if (r.rho) j["rho"] = format_real(*r.rho);
    j["regime"] = std::string(to_string(r.regime));
    j["attainability"] = std::string(to_string(r.attainability));
    j["boundary_snapped"] = r.boundary_snapped;
    if (r.approach_M) j["approach_M"] = format_real(*r.approach_M);
    if (!r.sort_permutation.empty()) j["sort_permutation"] = r.sort_permutation;
    if (r.extremal) j["extremal"] = extremal_to_json(*r.extremal);
    if (env.verification) {
        const VerificationBlock& v = *env.verification;
        json vj;
        vj["method"] = v.method;
        if (v.oracle_value) vj["oracle_value"] = format_real(*v.oracle_value);
        if (v.relative_gap) vj["relative_gap"] = format_real(*v.relative_gap);
        if (v.estimate) {
            vj["mc_mean"] = format_real(v.estimate->mean);
            vj["mc_stderr"] = format_real(v.estimate->standard_error);
            vj["mc_trials"] = v.estimate->trials;
        }
        if (!v.note.empty()) vj["note"] = v.note;
        j["verification"] = vj;
    }
    return j;
}

ReportEnvelope envelope_from_json(const json& j) {
    ReportEnvelope env;
    env.version = j.at("version").get<std::string>();
    env.seed = j.at("seed").get<std::uint64_t>();
    env.query.model = parse_model(j.at("model").get<std::string>());
    env.query.n = j.at("n").get<int>();
    env.query.k = j.at("k").get<int>();
    env.query.alpha = real_at(j, "alpha");
    env.query.means.clear();
    for (const auto& m : j.at("means")) env.query.means.push_back(parse_real(m.get<std::string>()));

    BoundReport& r = env.report;
    r.bound = real_at(j, "bound");
    r.constant_A = optional_real(j, "constant_A");
    r.rho = optional_real(j, "rho");
    r.regime = parse_regime(j.at("regime").get<std::string>());
    r.attainability = parse_attainability(j.at("attainability").get<std::string>());
    r.boundary_snapped = j.at("boundary_snapped").get<bool>();
    r.approach_M = optional_real(j, "approach_M");
    if (j.contains("sort_permutation")) r.sort_permutation = j.at("sort_permutation").get<std::vector<int>>();
    if (j.contains("extremal")) r.extremal = extremal_from_json(j.at("extremal"));
    if (j.contains("verification")) {
        const json& vj = j.at("verification");
        VerificationBlock v;
        v.method = vj.at("method").get<std::string>();
        v.oracle_value = optional_real(vj, "oracle_value");
        v.relative_gap = optional_real(vj, "relative_gap");
        if (vj.contains("mc_mean")) {
            v.estimate = MomentEstimate{real_at(vj, "mc_mean"), real_at(vj, "mc_stderr"),
                                        vj.at("mc_trials").get<long>()};
        }
        if (vj.contains("note")) v.note = vj.at("note").get<std::string>();
        env.verification = v;
    }
    return env;
}

std::string csv_header() {
    return "model,n,k,alpha,means,bound,constant_A,rho,regime,attainability,boundary_snapped,"
           "extremal,verify_method,oracle_value,relative_gap,mc_mean,mc_stderr,mc_trials,seed,version";
}

std::string to_csv_row(const ReportEnvelope& env) {
    const MomentQuery& q = env.query;
    const BoundReport& r = env.report;
    std::ostringstream out;
    std::string means;
    for (std::size_t i = 0; i < q.means.size(); ++i) {
        if (i) means += ';';
        means += format_real(q.means[i]);
    }
    out << to_string(q.model) << ',' << q.n << ',' << q.k << ',' << format_real(q.alpha) << ','
        << means << ',' << format_real(r.bound) << ',' << opt(r.constant_A) << ',' << opt(r.rho) << ','
        << to_string(r.regime) << ',' << to_string(r.attainability) << ','
        << (r.boundary_snapped ? "true" : "false") << ','
        << (r.extremal ? std::string(variant_tag(*r.extremal)) : std::string()) << ',';
    if (env.verification) {
        const VerificationBlock& v = *env.verification;
        out << v.method << ',' << opt(v.oracle_value) << ',' << opt(v.relative_gap) << ',';
        if (v.estimate) {
            out << format_real(v.estimate->mean) << ',' << format_real(v.estimate->standard_error) << ','
                << v.estimate->trials << ',';
        } else {
            out << ",,,";
        }
    } else {
        out << ",,,,,,";
    }
    out << env.seed << ',' << env.version;
    return out.str();
}

VerificationBlock verify_exact(const MomentQuery& query, const BoundReport& report) {
    VerificationBlock v;
    v.method = "exact";
    if (!report.finite() || !report.extremal) {
        v.note = "unbounded regime: no finite oracle value";
        return v;
    }
    const int k = query.k;
    const int n = query.n;
    const double alpha = query.alpha;
    struct Visitor {
        int k, n;
        double alpha;
        double operator()(const TwoPoint& d) const {
            return exact_moment_iid_discrete(DiscreteDistribution::from(d), k, n, alpha);
        }
        double operator()(const Degenerate& d) const {
            return exact_moment_iid_discrete(DiscreteDistribution::from(d), k, n, alpha);
        }
        double operator()(const BetaPowerQuantile& d) const {
            return moment_from_quantile(quantile_function_of(ExtremalDistribution(d)), k, n, alpha);
        }
        double operator()(const PowerLaw& d) const {
            return moment_from_quantile(quantile_function_of(ExtremalDistribution(d)), k, n, alpha);
        }
        double operator()(const HeavyTailWitness&) const { return kUnbounded; }
        double operator()(const LogSquareTail&) const { return kUnbounded; }
        double operator()(const IndepMinConfig& d) const {
            std::vector<DiscreteDistribution> parts;
            for (const auto& c : d.components) parts.push_back(DiscreteDistribution::from(c));
            return exact_moment_indep_discrete(parts, k, alpha);
        }
    };
    const double value = std::visit(Visitor{k, n, alpha}, *report.extremal);
    v.oracle_value = value;
    v.relative_gap = (report.bound - value) / report.bound;
    if (report.attainability == Attainability::best_possible_not_attained) {
        v.note = "bound is approached, not attained; oracle evaluates the representative family member";
    }
    return v;
}

VerificationBlock verify_mc(const MomentQuery& query, const BoundReport& report, long trials,
                            std::uint64_t seed) {
    VerificationBlock v;
    v.method = "mc";
    if (!report.finite() || !report.extremal) {
        v.note = "unbounded regime: Monte Carlo skipped";
        return v;
    }
    std::vector<Sampler> samplers;
    if (const auto* config = std::get_if<IndepMinConfig>(&*report.extremal)) {
        for (const auto& c : config->components) samplers.push_back(sampler_of(c));
    } else {
        samplers.assign(static_cast<std::size_t>(query.n), sampler_of(*report.extremal));
    }
    v.estimate = mc_estimate_moment(samplers, query.k, query.alpha, trials, seed);
    v.relative_gap = (report.bound - v.estimate->mean) / report.bound;
    return v;
}

std::vector<TableRow> build_table(int n_lo, int n_hi, int k_lo, int k_hi,
                                  const std::vector<double>& alphas, int threads) {
    std::vector<TableRow> rows;
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int k = k_lo; k <= std::min(k_hi, n); ++k) {
            if (k < 1) continue;
            for (double alpha : alphas) rows.push_back({n, k, alpha, {}});
        }
    }
    auto fill = [&](std::size_t i) {
        TableRow& row = rows[i];
        row.report = bound_moment(MomentQuery{SampleModel::iid, row.n, row.k, row.alpha, {1.0}});
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) fill(i);
        return rows;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < rows.size(); i += workers) fill(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream out;
    out << "n,k,alpha,regime,rho,A,bound_for_unit_mean\n";
    for (const TableRow& row : rows) {
        const BoundReport& r = row.report;
        const std::string a = r.finite() ? opt(r.constant_A) : std::string("inf");
        out << row.n << ',' << row.k << ',' << format_real(row.alpha) << ',' << to_string(r.regime) << ','
            << opt(r.rho) << ',' << a << ',' << format_real(r.bound) << '\n';
    }
    return out.str();
}

}  // namespace osbounds
