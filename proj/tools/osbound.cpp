// osbound: sharp moment bounds for order statistics from the command line.

#include "osbounds/errors.hpp"
#include "osbounds/format.hpp"
#include "osbounds/report.hpp"
#include "osbounds/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace osbounds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUnbounded = 3;

struct InvalidFlag : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else if (c != ' ') {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    for (const auto& part : split(text, ',')) {
        try {
            values.push_back(parse_real(part));
        } catch (const DomainError&) {
            throw InvalidFlag(std::string(flag) + ": malformed number '" + part + "'");
        }
    }
    return values;
}

std::pair<int, int> parse_int_range(const std::string& text, const char* flag) {
    const auto parts = split(text, ':');
    try {
        if (parts.size() == 1) {
            const int v = std::stoi(parts[0]);
            return {v, v};
        }
        if (parts.size() == 2) return {std::stoi(parts[0]), std::stoi(parts[1])};
    } catch (const std::exception&) {
    }
    throw InvalidFlag(std::string(flag) + ": expected 'lo:hi' or a single integer, got '" + text + "'");
}

// "a,b,c" or "lo:hi:step"
std::vector<double> parse_alpha_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text, "--alpha-grid");
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidFlag("--alpha-grid: expected 'lo:hi:step', got '" + text + "'");
    double lo, hi, step;
    try {
        lo = parse_real(parts[0]);
        hi = parse_real(parts[1]);
        step = parse_real(parts[2]);
    } catch (const DomainError&) {
        throw InvalidFlag("--alpha-grid: malformed number in '" + text + "'");
    }
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidFlag("--alpha-grid: step must be positive and endpoints finite");
    }
    std::vector<double> grid;
    if (hi < lo) return grid;
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

struct BoundFlags {
    std::string model = "iid";
    int n = 0;
    int k = 0;
    double alpha = 0.0;
    std::optional<double> mean;
    std::string means;
    std::string format = "json";
    std::string verify;
    long trials = 100000;
    std::uint64_t seed = 0;
    bool require_finite = false;
};

int cmd_bound(const BoundFlags& f) {
    MomentQuery query;
    try {
        query.model = parse_model(f.model);
    } catch (const std::exception&) {
        throw InvalidFlag("--model: expected 'iid' or 'indep', got '" + f.model + "'");
    }
    query.n = f.n;
    query.k = f.k;
    query.alpha = f.alpha;
    if (f.mean && !f.means.empty()) throw InvalidFlag("give either --mean or --means, not both");
    if (f.mean) {
        query.means = {*f.mean};
    } else if (!f.means.empty()) {
        query.means = parse_list(f.means, "--means");
    } else {
        throw InvalidFlag("one of --mean or --means is required");
    }

    ReportEnvelope env;
    env.seed = f.seed;
    env.query = query;
    env.report = bound_moment(query);
    if (f.verify == "exact") {
        env.verification = verify_exact(query, env.report);
    } else if (f.verify == "mc") {
        env.verification = verify_mc(query, env.report, f.trials, f.seed);
    }

    if (f.format == "csv") {
        std::cout << csv_header() << '\n' << to_csv_row(env) << '\n';
    } else {
        std::cout << to_json(env).dump(2) << '\n';
    }
    if (f.require_finite && !env.report.finite()) {
        std::cerr << "osbound: bound is unbounded (regime " << to_string(env.report.regime) << ")\n";
        return kExitUnbounded;
    }
    return kExitOk;
}

struct TableFlags {
    std::string n_range;
    std::string k_range;
    std::string alpha_grid;
    int threads = 1;
};

int cmd_table(const TableFlags& f) {
    const auto [n_lo, n_hi] = parse_int_range(f.n_range, "--n-range");
    const auto [k_lo, k_hi] = parse_int_range(f.k_range, "--k-range");
    const auto alphas = parse_alpha_grid(f.alpha_grid);
    const auto rows = build_table(n_lo, n_hi, k_lo, k_hi, alphas, f.threads);
    if (rows.empty()) throw InvalidFlag("empty grid: no (n, k, alpha) cell with 1 <= k <= n");
    std::cout << table_csv(rows);
    return kExitOk;
}

struct VerifyFlags {
    std::string suite = "all";
    std::uint64_t seed = 0;
    long cases = 0;
    int threads = 1;
};

int cmd_verify(const VerifyFlags& f) {
    VerifyOptions options{f.seed, f.cases, f.threads};
    const auto results = run_suite(f.suite, options);
    nlohmann::ordered_json out;
    out["tool"] = kToolName;
    out["version"] = kToolVersion;
    out["seed"] = f.seed;
    out["suite"] = f.suite;
    long violations = 0;
    nlohmann::ordered_json suites = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        violations += r.violations;
        suites.push_back(to_json(r));
    }
    out["violations"] = violations;
    out["suites"] = suites;
    std::cout << out.dump(2) << '\n';
    return violations == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp moment bounds for order statistics of nonnegative random variables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    BoundFlags bf;
    auto* bound = app.add_subcommand("bound", "Bound E(X_{k:n})^alpha given the mean(s)");
    bound->add_option("--model", bf.model, "iid or indep")->check(CLI::IsMember({"iid", "indep"}));
    bound->add_option("--n", bf.n, "Sample size")->required();
    bound->add_option("--k", bf.k, "Order statistic index, 1 <= k <= n")->required();
    bound->add_option("--alpha", bf.alpha, "Moment exponent, alpha > 0")->required();
    bound->add_option("--mean", bf.mean, "Common mean (iid)");
    bound->add_option("--means", bf.means, "Comma-separated component means");
    bound->add_option("--format", bf.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    bound->add_option("--verify", bf.verify, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    bound->add_option("--trials", bf.trials, "Monte Carlo trials");
    bound->add_option("--seed", bf.seed, "Random seed");
    bound->add_flag("--require-finite", bf.require_finite, "Exit 3 when the bound is infinite");

    TableFlags tf;
    auto* table = app.add_subcommand("table", "CSV table of sharp constants for unit mean");
    table->add_option("--n-range", tf.n_range, "lo:hi")->required();
    table->add_option("--k-range", tf.k_range, "lo:hi")->required();
    table->add_option("--alpha-grid", tf.alpha_grid, "a,b,c or lo:hi:step")->required();
    table->add_option("--threads", tf.threads, "Worker threads")->check(CLI::PositiveNumber);

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "Run oracle property suites");
    verify->add_option("--suite", vf.suite, "sharpness, sweep, lemma3, witness or all")
        ->check(CLI::IsMember({"sharpness", "sweep", "lemma3", "witness", "all"}));
    verify->add_option("--seed", vf.seed, "Random seed");
    verify->add_option("--cases", vf.cases, "Cases per sweep (0: suite default)");
    verify->add_option("--threads", vf.threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (bound->parsed()) return cmd_bound(bf);
        if (table->parsed()) return cmd_table(tf);
        return cmd_verify(vf);
    } catch (const UnsupportedRegime& e) {
        std::cerr << "osbound: unsupported regime: " << e.what() << '\n';
    } catch (const DomainError& e) {
        std::cerr << "osbound: invalid query: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        std::cerr << "osbound: invalid query: " << e.what() << '\n';
    } catch (const NumericError& e) {
        std::cerr << "osbound: numeric failure: " << e.what() << '\n';
        return kExitViolation;
    }
    return kExitInvalid;
}
