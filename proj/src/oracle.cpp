#include "osbounds/oracle.hpp"

#include "osbounds/beta_kernel.hpp"
#include "osbounds/errors.hpp"
#include "osbounds/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace osbounds {

namespace {

// P(F^{-1}(U_{k:n}) lands in (lo, hi]) = G(hi) - G(lo), taken from whichever
// tail keeps the difference free of cancellation.
double order_mass(const OrderStatParams& params, double lo, double hi) {
    const double upper_cdf = order_cdf(params, hi);
    const double lower_sf = order_sf(params, lo);
    if (upper_cdf <= lower_sf) return upper_cdf - order_cdf(params, lo);
    return lower_sf - order_sf(params, hi);
}

void require_alpha(double alpha, const char* op) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError(std::string(op) + ": alpha must be positive");
    }
}

// Suffix sums of the atom probabilities: tail[j] = P(X > x_j).
std::vector<double> tail_probabilities(const std::vector<Atom>& atoms) {
    std::vector<double> tail(atoms.size(), 0.0);
    double acc = 0.0;
    for (std::size_t j = atoms.size(); j-- > 0;) {
        tail[j] = acc;
        acc += atoms[j].prob;
    }
    return tail;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("DiscreteDistribution: needs at least one atom");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!(a.value >= 0.0) || !std::isfinite(a.value)) {
            throw DomainError("DiscreteDistribution: values must be finite and nonnegative");
        }
        if (!(a.prob > 0.0)) throw DomainError("DiscreteDistribution: probabilities must be positive");
        if (i > 0 && !(a.value > atoms_[i - 1].value)) {
            throw DomainError("DiscreteDistribution: values must be strictly increasing");
        }
        total += a.prob;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw DomainError("DiscreteDistribution: probabilities must sum to 1");
    }
}

DiscreteDistribution DiscreteDistribution::from(const TwoPoint& law) {
    if (law.zero_prob == 0.0) return DiscreteDistribution({{law.atom, 1.0}});
    return DiscreteDistribution({{0.0, law.zero_prob}, {law.atom, 1.0 - law.zero_prob}});
}

DiscreteDistribution DiscreteDistribution::from(const Degenerate& law) {
    return DiscreteDistribution({{law.value, 1.0}});
}

DiscreteDistribution DiscreteDistribution::from(const ComponentLaw& law) {
    return std::visit([](const auto& d) { return DiscreteDistribution::from(d); }, law);
}

double DiscreteDistribution::mean() const { return moment(1.0); }

double DiscreteDistribution::moment(double alpha) const {
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.prob * std::pow(a.value, alpha);
    return m;
}

double DiscreteDistribution::cdf(double x) const {
    double f = 0.0;
    for (const Atom& a : atoms_) {
        if (a.value > x) break;
        f += a.prob;
    }
    return std::min(f, 1.0);
}

double DiscreteDistribution::survival(double x) const {
    double s = 0.0;
    for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->value > x; ++it) s += it->prob;
    return s;
}

void StepFunction::validate() const {
    if (increments.empty() || breakpoints.size() != increments.size() + 1) {
        throw DomainError("StepFunction: needs m >= 1 increments and m + 1 breakpoints");
    }
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
        throw DomainError("StepFunction: breakpoints must start at 0 and end at 1");
    }
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
        if (!(breakpoints[j] > breakpoints[j - 1])) {
            throw DomainError("StepFunction: breakpoints must be strictly increasing");
        }
    }
    for (double d : increments) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw DomainError("StepFunction: increments must be finite and nonnegative");
        }
    }
}

double StepFunction::value_at(double t) const {
    double v = 0.0;
    for (std::size_t j = 0; j < increments.size(); ++j) {
        v += increments[j];
        if (t <= breakpoints[j + 1]) break;
    }
    return v;
}

double StepFunction::integral() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < increments.size(); ++j) sum += (1.0 - breakpoints[j]) * increments[j];
    return sum;
}

QuantileFunction::QuantileFunction(std::function<double(double)> eval, std::vector<Piece> pieces)
    : eval_(std::move(eval)), pieces_(std::move(pieces)) {
    if (pieces_.empty() || pieces_.front().lo != 0.0 || pieces_.back().hi != 1.0) {
        throw DomainError("QuantileFunction: pieces must cover (0, 1)");
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!(pieces_[i].hi > pieces_[i].lo) || (i > 0 && pieces_[i].lo != pieces_[i - 1].hi)) {
            throw DomainError("QuantileFunction: pieces must be contiguous and nonempty");
        }
    }
}

QuantileFunction QuantileFunction::continuous(std::function<double(double)> eval,
                                              std::vector<double> knots) {
    std::sort(knots.begin(), knots.end());
    std::vector<Piece> pieces;
    double lo = 0.0;
    for (double k : knots) {
        if (k > lo && k < 1.0) {
            pieces.push_back({lo, k, std::nullopt});
            lo = k;
        }
    }
    pieces.push_back({lo, 1.0, std::nullopt});
    return QuantileFunction(std::move(eval), std::move(pieces));
}

QuantileFunction QuantileFunction::steps(std::vector<double> cuts, std::vector<double> levels) {
    if (levels.size() != cuts.size() + 1) {
        throw DomainError("QuantileFunction::steps: need one more level than cuts");
    }
    std::vector<Piece> pieces;
    double lo = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        pieces.push_back({lo, cuts[i], levels[i]});
        lo = cuts[i];
    }
    pieces.push_back({lo, 1.0, levels.back()});
    auto eval = [cuts, levels](double u) {
        const auto it = std::lower_bound(cuts.begin(), cuts.end(), u);
        return levels[static_cast<std::size_t>(it - cuts.begin())];
    };
    return QuantileFunction(eval, std::move(pieces));
}

double QuantileFunction::operator()(double u) const { return eval_(u); }

QuantileFunction quantile_function_of(const DiscreteDistribution& dist) {
    std::vector<double> cuts;
    std::vector<double> levels;
    double cum = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        levels.push_back(dist.atoms()[j].value);
        cum += dist.atoms()[j].prob;
        if (j + 1 < dist.size()) cuts.push_back(cum);
    }
    return QuantileFunction::steps(std::move(cuts), std::move(levels));
}

QuantileFunction quantile_function_of(const ExtremalDistribution& dist) {
    constexpr int kPeakKnots = 48;
    struct Visitor {
        QuantileFunction operator()(const TwoPoint& d) const {
            if (d.zero_prob == 0.0) return QuantileFunction::steps({}, {d.atom});
            return QuantileFunction::steps({d.zero_prob}, {0.0, d.atom});
        }
        QuantileFunction operator()(const Degenerate& d) const {
            return QuantileFunction::steps({}, {d.value});
        }
        QuantileFunction operator()(const BetaPowerQuantile& d) const {
            // gbar^{1/(1-alpha)} piles up just left of rho_gcm within a width of
            // order 1 - alpha; geometric knots keep the quadrature from stepping
            // over the peak.
            std::vector<QuantileFunction::Piece> pieces;
            double lo = 0.0;
            for (int j = 1; j <= kPeakKnots; ++j) {
                const double knot = d.rho_gcm * (1.0 - std::ldexp(1.0, -j));
                pieces.push_back({lo, knot, std::nullopt});
                lo = knot;
            }
            pieces.push_back({lo, d.rho_gcm, std::nullopt});
            pieces.push_back({d.rho_gcm, 1.0, d.top_value()});
            return QuantileFunction([d](double u) { return d.quantile(u); }, std::move(pieces));
        }
        QuantileFunction operator()(const PowerLaw& d) const {
            return QuantileFunction::continuous([d](double u) { return d.quantile(u); });
        }
        QuantileFunction operator()(const HeavyTailWitness& d) const {
            return QuantileFunction::continuous([d](double u) { return d.quantile(u); });
        }
        QuantileFunction operator()(const LogSquareTail& d) const {
            return QuantileFunction::continuous([d](double u) { return d.quantile(u); });
        }
        QuantileFunction operator()(const IndepMinConfig&) const {
            throw DomainError("quantile_function_of: IndepMinConfig has no single quantile");
        }
    };
    return std::visit(Visitor{}, dist);
}

Sampler sampler_of(const ExtremalDistribution& dist) {
    return std::visit(
        [](const auto& d) -> Sampler {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, IndepMinConfig>) {
                throw DomainError("sampler_of: IndepMinConfig has one sampler per component");
            } else {
                return [d](RandomStream& s) { return d.sample(s); };
            }
        },
        dist);
}

Sampler sampler_of(const ComponentLaw& law) {
    return std::visit([](const auto& d) -> Sampler { return [d](RandomStream& s) { return d.sample(s); }; },
                      law);
}

double exact_moment_iid_discrete(const DiscreteDistribution& dist, int k, int n, double alpha) {
    const OrderStatParams params(k, n);
    require_alpha(alpha, "exact_moment_iid_discrete");
    const auto& atoms = dist.atoms();
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const double cum = j + 1 == atoms.size() ? 1.0 : std::min(1.0, prev + atoms[j].prob);
        if (atoms[j].value > 0.0) {
            total += std::pow(atoms[j].value, alpha) * order_mass(params, prev, cum);
        }
        prev = cum;
    }
    return total;
}

double exact_moment_indep_discrete(std::span<const DiscreteDistribution> dists, int k,
                                   double alpha) {
    const auto n = static_cast<int>(dists.size());
    if (n < 1) throw DomainError("exact_moment_indep_discrete: needs at least one component");
    if (k < 1 || k > n) throw DomainError("exact_moment_indep_discrete: requires 1 <= k <= n");
    require_alpha(alpha, "exact_moment_indep_discrete");

    std::vector<double> support;
    for (const auto& d : dists) {
        for (const Atom& a : d.atoms()) support.push_back(a.value);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    // X_{k:n} > x iff at least n+1-k components exceed x.
    const int need = n + 1 - k;
    std::vector<double> count(static_cast<std::size_t>(n) + 1);
    double total = std::pow(support.front(), alpha);
    for (std::size_t j = 0; j + 1 < support.size(); ++j) {
        std::fill(count.begin(), count.end(), 0.0);
        count[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            const double q = dists[i].survival(support[j]);
            for (int t = i + 1; t >= 1; --t) count[t] = count[t] * (1.0 - q) + count[t - 1] * q;
            count[0] *= 1.0 - q;
        }
        double exceed = 0.0;
        for (int t = need; t <= n; ++t) exceed += count[t];
        total += (std::pow(support[j + 1], alpha) - std::pow(support[j], alpha)) * exceed;
    }
    return total;
}

double moment_from_quantile(const QuantileFunction& qf, int k, int n, double alpha) {
    const OrderStatParams params(k, n);
    require_alpha(alpha, "moment_from_quantile");
    double total = 0.0;
    for (const auto& piece : qf.pieces()) {
        if (piece.level) {
            if (*piece.level > 0.0) {
                total += std::pow(*piece.level, alpha) * order_mass(params, piece.lo, piece.hi);
            }
            continue;
        }
        auto integrand = [&](double u) {
            const double q = qf(u);
            if (q <= 0.0) return 0.0;
            return std::exp(log_order_pdf(params, u) + alpha * std::log(q));
        };
        total += integrate(integrand, piece.lo, piece.hi).value;
    }
    return total;
}

MomentEstimate mc_estimate_moment(std::span<const Sampler> samplers, int k, double alpha,
                                  long trials, std::uint64_t seed) {
    const auto n = static_cast<int>(samplers.size());
    if (n < 1 || k < 1 || k > n) throw DomainError("mc_estimate_moment: requires 1 <= k <= n");
    if (trials < 1000) throw DomainError("mc_estimate_moment: requires trials >= 1000");
    require_alpha(alpha, "mc_estimate_moment");

    RandomStream stream(seed);
    std::vector<double> draws(static_cast<std::size_t>(n));
    double mean = 0.0;
    double m2 = 0.0;
    for (long t = 0; t < trials; ++t) {
        for (int i = 0; i < n; ++i) draws[i] = samplers[i](stream);
        std::nth_element(draws.begin(), draws.begin() + (k - 1), draws.end());
        const double x = std::pow(draws[k - 1], alpha);
        const double delta = x - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (x - mean);
    }
    const double variance = m2 / static_cast<double>(trials - 1);
    return {mean, std::sqrt(variance / static_cast<double>(trials)), trials};
}

SharpnessResult sharpness_search_two_point(int k, int n, double alpha, double mu, int grid_size) {
    if (n < 3 || k < 2 || k > n - 1 || !(alpha >= 1.0) || !(alpha < n + 1.0 - k)) {
        throw DomainError("sharpness_search_two_point: requires n >= 3, 2 <= k <= n-1, "
                          "1 <= alpha < n+1-k");
    }
    if (grid_size < 100) throw DomainError("sharpness_search_two_point: grid_size must be >= 100");
    SharpnessResult best{0.0, -1.0};
    for (int i = 1; i < grid_size; ++i) {
        const double rho = static_cast<double>(i) / grid_size;
        const double v = exact_moment_iid_discrete(
            DiscreteDistribution::from(TwoPoint::with_mean(rho, mu)), k, n, alpha);
        if (v > best.value_star) best = {rho, v};
    }
    return best;
}

Lemma3Sides lemma3_lhs_rhs(const StepFunction& g, double alpha) {
    if (!(alpha > 1.0)) throw DomainError("lemma3_lhs_rhs: requires alpha > 1");
    g.validate();
    const auto& s = g.breakpoints;
    const auto& delta = g.increments;
    double level = delta[0];
    double lhs = std::pow(level, alpha);
    for (std::size_t j = 1; j < delta.size(); ++j) {
        const double next = level + delta[j];
        lhs += std::pow(1.0 - s[j], alpha) * (std::pow(next, alpha) - std::pow(level, alpha));
        level = next;
    }
    return {lhs, std::pow(g.integral(), alpha)};
}

double corollary2_lhs(const DiscreteDistribution& dist, double alpha) {
    require_alpha(alpha, "corollary2_lhs");
    const auto& atoms = dist.atoms();
    const auto tail = tail_probabilities(atoms);
    double total = std::pow(atoms.front().value, alpha);
    for (std::size_t j = 0; j + 1 < atoms.size(); ++j) {
        total += (std::pow(atoms[j + 1].value, alpha) - std::pow(atoms[j].value, alpha)) *
                 std::pow(tail[j], alpha);
    }
    return total;
}

double tail_moment_integral(const std::function<double(double)>& survival, double alpha,
                            int power, double lo, double hi) {
    if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("tail_moment_integral: requires 0 < lo <= hi");
    require_alpha(alpha, "tail_moment_integral");
    auto integrand = [&](double t) {
        const double x = std::exp(t);
        return alpha * std::exp(alpha * t) * std::pow(survival(x), power);
    };
    QuadratureOptions opts;
    opts.relative_tolerance = 1e-11;
    return integrate(integrand, std::log(lo), std::log(hi), opts).value;
}

}  // namespace osbounds
