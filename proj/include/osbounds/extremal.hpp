#pragma once

#include "osbounds/beta_kernel.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace osbounds {

// Seeded stream shared by every sampler; identical seeds give identical draws.
using RandomStream = std::mt19937_64;

// Uniform variate on the open interval (0, 1) built from the top 53 bits.
double uniform_open(RandomStream& stream);

// Mass zero_prob at 0 and 1 - zero_prob at atom.  zero_prob may be 0, in which
// case the law is degenerate at atom.
struct TwoPoint {
    double zero_prob;
    double atom;
    double mean_value;

    static TwoPoint with_mean(double zero_prob, double mean);

    double cdf(double x) const;
    double quantile(double u) const;
    double mean() const { return mean_value; }
    double sample(RandomStream& stream) const { return quantile(uniform_open(stream)); }
};

struct Degenerate {
    double value;

    double cdf(double x) const { return x >= value ? 1.0 : 0.0; }
    double quantile(double) const { return value; }
    double mean() const { return value; }
    double sample(RandomStream&) const { return value; }
};

// Extremal law for E(X_{k:n})^alpha with 0 < alpha < 1 and k < n.  Its
// quantile is c * gbar(u)^{1/(1-alpha)}, where gbar is the Beta density
// frozen at its value at rho_gcm for u > rho_gcm, so the law puts mass
// 1 - rho_gcm on its top value.  The scale is kept in log form because
// gbar^{1/(1-alpha)} overflows as alpha approaches 1.
struct BetaPowerQuantile {
    OrderStatParams params;
    double alpha;
    double rho_gcm;
    double log_scale;
    double mean_value;

    double exponent() const { return 1.0 / (1.0 - alpha); }
    double scale() const;
    double top_value() const;

    double cdf(double x) const;
    double quantile(double u) const;
    double mean() const { return mean_value; }
    double sample(RandomStream& stream) const { return quantile(uniform_open(stream)); }
};

// Extremal law for the sample maximum (k = n) with 0 < alpha < 1:
// F(x) = ((1-alpha) x / ((n-alpha) mu))^{(1-alpha)/(n-1)} on [0, (n-alpha) mu/(1-alpha)].
struct PowerLaw {
    int n;
    double alpha;
    double mean_value;

    double top_value() const;
    double cdf(double x) const;
    double quantile(double u) const;
    double mean() const { return mean_value; }
    double sample(RandomStream& stream) const { return quantile(uniform_open(stream)); }
};

// Reliability R(x) = 1 / ((2x/mu) (1 + log(2x/mu))^2) for x >= mu/2, with
// mean mu and E Y^alpha finite iff alpha <= 1.
struct HeavyTailWitness {
    double mean_value;

    double survival(double x) const;
    double cdf(double x) const { return 1.0 - survival(x); }
    // Smallest x with survival(x) <= tail, for tail in (0, 1].
    double tail_quantile(double tail) const;
    double quantile(double u) const { return tail_quantile(1.0 - u); }
    double median() const { return tail_quantile(0.5); }
    double mean() const { return mean_value; }
    double sample(RandomStream& stream) const { return tail_quantile(uniform_open(stream)); }
};

// F(x) = 1 - e / (x (log x)^2) for x >= e, rescaled by mu / (2e) so the mean
// is mu.  The minimum of n copies has no moment above order n.
struct LogSquareTail {
    double mean_value;

    static constexpr double kUnscaledMean = 2.0 * 2.718281828459045235360287;

    double scale() const { return mean_value / kUnscaledMean; }
    static double unscaled_survival(double x);
    double survival(double x) const { return unscaled_survival(x / scale()); }
    double cdf(double x) const { return 1.0 - survival(x); }
    double tail_quantile(double tail) const;
    double quantile(double u) const { return tail_quantile(1.0 - u); }
    double median() const { return tail_quantile(0.5); }
    double mean() const { return mean_value; }
    double sample(RandomStream& stream) const { return tail_quantile(uniform_open(stream)); }
};

using ComponentLaw = std::variant<TwoPoint, Degenerate>;

// Independent, non-identical components; each exposes its own law.
struct IndepMinConfig {
    std::vector<ComponentLaw> components;

    std::size_t size() const { return components.size(); }
    std::vector<double> means() const;
    std::vector<double> sample(RandomStream& stream) const;
};

using ExtremalDistribution = std::variant<TwoPoint, Degenerate, BetaPowerQuantile, PowerLaw,
                                          HeavyTailWitness, LogSquareTail, IndepMinConfig>;

std::string_view variant_tag(const ExtremalDistribution& dist);

// Two-valued law on {0, atom} with the given mean; collapses to Degenerate
// when mean == atom.
ComponentLaw make_component(double atom, double mean);

double component_mean(const ComponentLaw& law);
double component_sample(const ComponentLaw& law, RandomStream& stream);

// Equality case of the iid bound for 1 <= alpha < n+1-k: zero w.p. rho and
// mu / (1 - rho) otherwise.
TwoPoint two_point_extremal(int k, int n, double alpha, double mu);

// Equality case for 0 < alpha < 1, 2 <= k <= n; PowerLaw when k == n.
ExtremalDistribution quantile_extremal_low(int k, int n, double alpha, double mu);

// Equality case for E(X_{1:n})^alpha with independent components whose means
// are sorted ascending and alpha in (m-1, m], m <= n.
IndepMinConfig minimum_extremal_indep(std::span<const double> ascending_means, double alpha);

// Two-valued components {0, M} with P(X_i = M) = mu_i / M; their (n+1-k)-th
// moment of X_{k:n} approaches e_{n+1-k}(means) as M grows.
std::vector<TwoPoint> theorem1_approach_family(int k, int n, std::span<const double> means,
                                               double big_m);

HeavyTailWitness heavy_tail_witness(double mu);
LogSquareTail log_square_witness(double mu);

}  // namespace osbounds
