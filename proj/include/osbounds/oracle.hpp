#pragma once

#include "osbounds/extremal.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace osbounds {

struct Atom {
    double value;
    double prob;
};

// Finite-support law on [0, inf): values strictly increasing, probabilities
// positive and summing to 1 within 1e-12.
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<Atom> atoms);

    static DiscreteDistribution from(const TwoPoint& law);
    static DiscreteDistribution from(const Degenerate& law);
    static DiscreteDistribution from(const ComponentLaw& law);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double mean() const;
    double moment(double alpha) const;
    double cdf(double x) const;
    // P(X > x)
    double survival(double x) const;

private:
    std::vector<Atom> atoms_;
};

// Nondecreasing simple function on (0, 1): value delta_1 + ... + delta_j on
// (s_{j-1}, s_j], with 0 = s_0 < s_1 < ... < s_m = 1.
struct StepFunction {
    std::vector<double> breakpoints;  // s_0 .. s_m
    std::vector<double> increments;   // delta_1 .. delta_m

    void validate() const;
    std::size_t pieces() const { return increments.size(); }
    double value_at(double t) const;
    // int_0^1 g = sum_j (1 - s_{j-1}) delta_j
    double integral() const;
};

struct MomentEstimate {
    double mean;
    double standard_error;
    long trials;
};

// Left-continuous quantile function on (0, 1), split into pieces that are
// either constant (integrated exactly against G_{k:n} increments) or smooth
// (integrated by adaptive quadrature).
class QuantileFunction {
public:
    struct Piece {
        double lo;
        double hi;
        std::optional<double> level;
    };

    QuantileFunction(std::function<double(double)> eval, std::vector<Piece> pieces);

    static QuantileFunction continuous(std::function<double(double)> eval,
                                       std::vector<double> knots = {});
    // levels.size() == cuts.size() + 1, cuts strictly inside (0, 1).
    static QuantileFunction steps(std::vector<double> cuts, std::vector<double> levels);

    double operator()(double u) const;
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }

private:
    std::function<double(double)> eval_;
    std::vector<Piece> pieces_;
};

QuantileFunction quantile_function_of(const DiscreteDistribution& dist);
// Scalar variants only; IndepMinConfig raises DomainError.
QuantileFunction quantile_function_of(const ExtremalDistribution& dist);

using Sampler = std::function<double(RandomStream&)>;

// Scalar variants only; IndepMinConfig raises DomainError.
Sampler sampler_of(const ExtremalDistribution& dist);
Sampler sampler_of(const ComponentLaw& law);

// E(X_{k:n})^alpha for an iid sample from dist, via the df G_{k:n}(F(x)).
double exact_moment_iid_discrete(const DiscreteDistribution& dist, int k, int n, double alpha);

// E(X_{k:n})^alpha for independent components, n = dists.size(); the
// survival P(X_{k:n} > x) comes from the exceedance-count distribution.
double exact_moment_indep_discrete(std::span<const DiscreteDistribution> dists, int k,
                                   double alpha);

// int_0^1 g_{k:n}(u) Q(u)^alpha du.
double moment_from_quantile(const QuantileFunction& qf, int k, int n, double alpha);

MomentEstimate mc_estimate_moment(std::span<const Sampler> samplers, int k, double alpha,
                                  long trials, std::uint64_t seed);

struct SharpnessResult {
    double rho_star;
    double value_star;
};

// Maximizes the exact moment over TwoPoint laws with mean mu on the grid
// rho = i / grid_size, 0 < i < grid_size.
SharpnessResult sharpness_search_two_point(int k, int n, double alpha, double mu, int grid_size);

struct Lemma3Sides {
    double lhs;  // alpha int_0^1 (1-t)^{alpha-1} g(t)^alpha dt
    double rhs;  // (int_0^1 g)^alpha
};

Lemma3Sides lemma3_lhs_rhs(const StepFunction& g, double alpha);

// alpha int_0^inf x^{alpha-1} (1 - F(x))^alpha dx, summed exactly.
double corollary2_lhs(const DiscreteDistribution& dist, double alpha);

// alpha int_lo^hi x^{alpha-1} R(x)^power dx by quadrature in log x.
double tail_moment_integral(const std::function<double(double)>& survival, double alpha,
                            int power, double lo, double hi);

}  // namespace osbounds
