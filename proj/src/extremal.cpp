#include "osbounds/extremal.hpp"

#include "osbounds/errors.hpp"
#include "osbounds/numerics.hpp"
#include "osbounds/sharp_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace osbounds {

namespace {

constexpr double kE = 2.718281828459045235360287;

void require_positive(double mu, const char* op) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError(std::string(op) + ": mean must be positive and finite");
    }
}

// Smallest x >= start with survival(x) <= tail, for a continuous
// nonincreasing survival function equal to 1 at start.
template <typename Survival>
double invert_tail(const Survival& survival, double start, double tail) {
    if (!(tail > 0.0)) return std::numeric_limits<double>::infinity();
    if (tail >= 1.0) return start;
    double hi = 2.0 * start;
    while (survival(hi) > tail) hi *= 2.0;
    return bisect([&](double x) { return survival(x) - tail; }, start, hi).root;
}

}  // namespace

double uniform_open(RandomStream& stream) {
    return (static_cast<double>(stream() >> 11) + 0.5) * 0x1.0p-53;
}

TwoPoint TwoPoint::with_mean(double zero_prob, double mean) {
    if (!(zero_prob >= 0.0 && zero_prob < 1.0)) {
        throw DomainError("TwoPoint: zero probability must lie in [0, 1)");
    }
    require_positive(mean, "TwoPoint");
    return {zero_prob, mean / (1.0 - zero_prob), mean};
}

double TwoPoint::cdf(double x) const {
    if (x < 0.0) return 0.0;
    return x < atom ? zero_prob : 1.0;
}

double TwoPoint::quantile(double u) const { return u <= zero_prob ? 0.0 : atom; }

double BetaPowerQuantile::scale() const { return std::exp(log_scale); }

double BetaPowerQuantile::top_value() const {
    return std::exp(log_scale + exponent() * log_order_pdf(params, rho_gcm));
}

double BetaPowerQuantile::quantile(double u) const {
    if (u <= 0.0) return 0.0;
    return std::exp(log_scale + exponent() * log_order_pdf(params, std::min(u, rho_gcm)));
}

double BetaPowerQuantile::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= top_value()) return 1.0;
    const double target = std::log(x);
    const double p = exponent();
    // The quantile is increasing on (0, rho_gcm), which lies left of the mode.
    auto f = [&](double u) {
        if (u <= 0.0) return -std::numeric_limits<double>::infinity();
        return log_scale + p * log_order_pdf(params, u) - target;
    };
    return bisect(f, 0.0, rho_gcm).root;
}

double PowerLaw::top_value() const { return mean_value * (n - alpha) / (1.0 - alpha); }

double PowerLaw::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= top_value()) return 1.0;
    return std::pow(x / top_value(), (1.0 - alpha) / (n - 1.0));
}

double PowerLaw::quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return top_value();
    return top_value() * std::pow(u, (n - 1.0) / (1.0 - alpha));
}

double HeavyTailWitness::survival(double x) const {
    const double r = 2.0 * x / mean_value;
    if (r <= 1.0) return 1.0;
    const double l = 1.0 + std::log(r);
    return 1.0 / (r * l * l);
}

double HeavyTailWitness::tail_quantile(double tail) const {
    return invert_tail([this](double x) { return survival(x); }, 0.5 * mean_value, tail);
}

double LogSquareTail::unscaled_survival(double x) {
    if (x <= kE) return 1.0;
    const double l = std::log(x);
    return kE / (x * l * l);
}

double LogSquareTail::tail_quantile(double tail) const {
    return scale() * invert_tail(&LogSquareTail::unscaled_survival, kE, tail);
}

std::vector<double> IndepMinConfig::means() const {
    std::vector<double> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(component_mean(c));
    return out;
}

std::vector<double> IndepMinConfig::sample(RandomStream& stream) const {
    std::vector<double> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(component_sample(c, stream));
    return out;
}

std::string_view variant_tag(const ExtremalDistribution& dist) {
    static constexpr std::string_view kTags[] = {"TwoPoint",         "Degenerate",
                                                 "BetaPowerQuantile", "PowerLaw",
                                                 "HeavyTailWitness", "LogSquareTail",
                                                 "IndepMinConfig"};
    return kTags[dist.index()];
}

ComponentLaw make_component(double atom, double mean) {
    require_positive(mean, "make_component");
    if (mean > atom) throw DomainError("make_component: atom must be >= mean");
    if (mean == atom) return Degenerate{mean};
    return TwoPoint{1.0 - mean / atom, atom, mean};
}

double component_mean(const ComponentLaw& law) {
    return std::visit([](const auto& d) { return d.mean(); }, law);
}

double component_sample(const ComponentLaw& law, RandomStream& stream) {
    return std::visit([&](const auto& d) { return d.sample(stream); }, law);
}

TwoPoint two_point_extremal(int k, int n, double alpha, double mu) {
    require_positive(mu, "two_point_extremal");
    return TwoPoint::with_mean(solve_rho(k, n, alpha), mu);
}

ExtremalDistribution quantile_extremal_low(int k, int n, double alpha, double mu) {
    require_positive(mu, "quantile_extremal_low");
    if (n < 2 || k < 2 || k > n) throw DomainError("quantile_extremal_low: requires 2 <= k <= n");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("quantile_extremal_low: requires 0 < alpha < 1");
    }
    if (k == n) return PowerLaw{n, alpha, mu};
    const double log_norm = log_gcm_power_integral(k, n, alpha);
    return BetaPowerQuantile{OrderStatParams(k, n), alpha, *solve_rho_gcm(k, n),
                             std::log(mu) - log_norm, mu};
}

IndepMinConfig minimum_extremal_indep(std::span<const double> ascending_means, double alpha) {
    const auto n = static_cast<int>(ascending_means.size());
    if (n < 1) throw DomainError("minimum_extremal_indep: needs at least one mean");
    for (int i = 0; i < n; ++i) {
        require_positive(ascending_means[i], "minimum_extremal_indep");
        if (i > 0 && ascending_means[i] < ascending_means[i - 1]) {
            throw DomainError("minimum_extremal_indep: means must be sorted ascending");
        }
    }
    if (!(alpha > 0.0)) throw DomainError("minimum_extremal_indep: requires alpha > 0");
    if (alpha > n) throw DomainError("minimum_extremal_indep: alpha > n has no finite bound");
    const int m = std::max(1, static_cast<int>(std::ceil(alpha)));
    const double atom = ascending_means[m - 1];
    IndepMinConfig config;
    for (int i = 0; i < n; ++i) {
        if (i < m) {
            config.components.push_back(make_component(atom, ascending_means[i]));
        } else {
            config.components.push_back(Degenerate{ascending_means[i]});
        }
    }
    return config;
}

std::vector<TwoPoint> theorem1_approach_family(int k, int n, std::span<const double> means,
                                               double big_m) {
    if (means.size() != static_cast<std::size_t>(n) || k < 1 || k > n) {
        throw DomainError("theorem1_approach_family: requires n means and 1 <= k <= n");
    }
    for (double mu : means) require_positive(mu, "theorem1_approach_family");
    const double top = *std::max_element(means.begin(), means.end());
    if (!(big_m >= top)) throw DomainError("theorem1_approach_family: requires M >= max mean");
    std::vector<TwoPoint> family;
    family.reserve(means.size());
    for (double mu : means) family.push_back(TwoPoint{1.0 - mu / big_m, big_m, mu});
    return family;
}

HeavyTailWitness heavy_tail_witness(double mu) {
    require_positive(mu, "heavy_tail_witness");
    return HeavyTailWitness{mu};
}

LogSquareTail log_square_witness(double mu) {
    require_positive(mu, "log_square_witness");
    return LogSquareTail{mu};
}

}  // namespace osbounds
