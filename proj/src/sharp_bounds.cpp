#include "osbounds/sharp_bounds.hpp"

#include "osbounds/beta_kernel.hpp"
#include "osbounds/errors.hpp"
#include "osbounds/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace osbounds {

namespace {

constexpr double kBracketFloor = 1e-15;

// alpha (1 - G(x)) - (1 - x) g(x); positive left of the root, negative right.
double tangency_residual(const OrderStatParams& params, double alpha, double x) {
    return alpha * order_sf(params, x) - (1.0 - x) * order_pdf(params, x);
}

double bisect_tangency(int k, int n, double alpha) {
    const OrderStatParams params(k, n);
    const double upper = (k - 1.0) / (n - alpha);
    return bisect([&](double x) { return tangency_residual(params, alpha, x); }, kBracketFloor,
                  upper)
        .root;
}

void require_mid_regime(int k, int n, double alpha, const char* op) {
    if (n < 3) throw DomainError(std::string(op) + ": requires n >= 3");
    if (k < 2 || k > n - 1) throw DomainError(std::string(op) + ": requires 2 <= k <= n-1");
    if (!(alpha >= 1.0) || !(alpha < n + 1.0 - k)) {
        throw DomainError(std::string(op) + ": requires 1 <= alpha < n+1-k");
    }
}

void require_positive_means(std::span<const double> means) {
    for (double m : means) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw DomainError("means must be strictly positive and finite");
        }
    }
}

bool near(double a, double b) { return std::fabs(a - b) <= kBoundarySnap; }

BoundReport unbounded_report(std::optional<ExtremalDistribution> witness) {
    BoundReport r;
    r.bound = kUnbounded;
    r.regime = Regime::unbounded;
    // The witness law realizes the infinite supremum.
    r.attainability = Attainability::attained;
    r.extremal = std::move(witness);
    return r;
}

BoundReport iid_minimum(const MomentQuery& q) {
    const double mu = q.means.front();
    if (q.alpha > q.n) return unbounded_report(log_square_witness(mu));
    BoundReport r;
    r.regime = Regime::minimum_iid;
    r.constant_A = 1.0;
    r.bound = std::pow(mu, q.alpha);
    if (q.alpha == q.n) {
        // Any two-point law on {0, mu/p} attains E(X_{1:n})^n = mu^n.
        r.attainability = Attainability::attained;
        r.extremal = TwoPoint::with_mean(0.5, mu);
    } else {
        r.attainability = Attainability::attained_by_degenerate;
        r.extremal = Degenerate{mu};
    }
    return r;
}

BoundReport iid_boundary_power(const MomentQuery& q) {
    const double mu = q.means.front();
    const int order = q.n + 1 - q.k;
    BoundReport r;
    r.regime = Regime::boundary_power;
    r.constant_A = binomial_coefficient(q.n, q.k - 1);
    r.bound = *r.constant_A * std::pow(mu, q.alpha);
    r.boundary_snapped = q.alpha != order;
    r.attainability = Attainability::best_possible_not_attained;
    r.approach_M = kApproachScale * mu;
    r.extremal = TwoPoint{1.0 - mu / *r.approach_M, *r.approach_M, mu};
    return r;
}

BoundReport iid_mid(const MomentQuery& q, double alpha) {
    const double mu = q.means.front();
    BoundReport r;
    r.regime = Regime::mid;
    r.rho = solve_rho(q.k, q.n, alpha);
    r.constant_A = std::exp(std::log(order_sf(OrderStatParams(q.k, q.n), *r.rho)) -
                            alpha * std::log1p(-*r.rho));
    r.bound = *r.constant_A * std::pow(mu, q.alpha);
    r.attainability = Attainability::attained;
    r.extremal = TwoPoint::with_mean(*r.rho, mu);
    r.boundary_snapped = alpha != q.alpha;
    return r;
}

BoundReport iid_sub_unit(const MomentQuery& q) {
    const double mu = q.means.front();
    BoundReport r;
    r.regime = Regime::sub_unit;
    r.constant_A = constant_A_low(q.k, q.n, q.alpha);
    r.rho = solve_rho_gcm(q.k, q.n);
    r.bound = *r.constant_A * std::pow(mu, q.alpha);
    r.attainability = Attainability::attained;
    r.extremal = quantile_extremal_low(q.k, q.n, q.alpha, mu);
    return r;
}

BoundReport bound_iid(const MomentQuery& q) {
    const int n = q.n;
    const int k = q.k;
    const double alpha = q.alpha;
    const double mu = q.means.front();
    if (k == 1) return iid_minimum(q);

    const int order = n + 1 - k;
    if (alpha > order) return unbounded_report(heavy_tail_witness(mu));
    if (alpha >= order - kBoundarySnap) return iid_boundary_power(q);
    if (k == n) {
        // order == 1 here, so alpha < 1 - kBoundarySnap.
        return iid_sub_unit(q);
    }
    if (near(alpha, 1.0)) return iid_mid(q, 1.0);
    if (alpha < 1.0) return iid_sub_unit(q);
    return iid_mid(q, alpha);
}

BoundReport indep_minimum(const MomentQuery& q) {
    const int n = q.n;
    if (q.alpha > n) return unbounded_report(std::nullopt);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return q.means[a] < q.means[b]; });
    std::vector<double> sorted(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sorted[i] = q.means[perm[i]];

    const int m = std::max(1, static_cast<int>(std::ceil(q.alpha)));
    double bound = std::pow(sorted[m - 1], q.alpha - m + 1);
    for (int i = 0; i < m - 1; ++i) bound *= sorted[i];

    BoundReport r;
    r.regime = Regime::minimum_indep;
    r.bound = bound;
    r.attainability = Attainability::attained;
    r.extremal = minimum_extremal_indep(sorted, q.alpha);
    r.sort_permutation = std::move(perm);
    return r;
}

BoundReport bound_indep(const MomentQuery& q) {
    if (q.k == 1) return indep_minimum(q);
    const int order = q.n + 1 - q.k;
    if (q.alpha > order) return unbounded_report(std::nullopt);
    if (q.alpha >= order - kBoundarySnap) {
        BoundReport r = bound_independent_power(q.k, q.n, q.means);
        r.boundary_snapped = q.alpha != order;
        return r;
    }
    throw UnsupportedRegime("independent model: no sharp bound for k >= 2 with alpha < n+1-k");
}

}  // namespace

std::string_view to_string(SampleModel model) {
    return model == SampleModel::iid ? "iid" : "indep";
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::sub_unit: return "sub_unit";
        case Regime::mid: return "mid";
        case Regime::boundary_power: return "boundary_power";
        case Regime::minimum_iid: return "minimum_iid";
        case Regime::minimum_indep: return "minimum_indep";
        case Regime::unbounded: return "unbounded";
    }
    return "unknown";
}

std::string_view to_string(Attainability attainability) {
    switch (attainability) {
        case Attainability::attained: return "attained";
        case Attainability::best_possible_not_attained: return "best_possible_not_attained";
        case Attainability::attained_by_degenerate: return "attained_by_degenerate";
    }
    return "unknown";
}

SampleModel parse_model(std::string_view text) {
    if (text == "iid") return SampleModel::iid;
    if (text == "indep" || text == "independent") return SampleModel::independent;
    throw DomainError("unknown model '" + std::string(text) + "' (expected iid or indep)");
}

Regime parse_regime(std::string_view text) {
    for (Regime r : {Regime::sub_unit, Regime::mid, Regime::boundary_power, Regime::minimum_iid,
                     Regime::minimum_indep, Regime::unbounded}) {
        if (to_string(r) == text) return r;
    }
    throw DomainError("unknown regime '" + std::string(text) + "'");
}

Attainability parse_attainability(std::string_view text) {
    for (Attainability a : {Attainability::attained, Attainability::best_possible_not_attained,
                            Attainability::attained_by_degenerate}) {
        if (to_string(a) == text) return a;
    }
    throw DomainError("unknown attainability '" + std::string(text) + "'");
}

void MomentQuery::validate() const {
    if (n < 1) throw DomainError("n must be >= 1");
    if (k < 1 || k > n) throw DomainError("k must satisfy 1 <= k <= n");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
    if (model == SampleModel::iid && means.size() != 1) {
        throw DomainError("iid model takes exactly one mean");
    }
    if (model == SampleModel::independent && means.size() != static_cast<std::size_t>(n)) {
        throw DomainError("independent model takes exactly n means");
    }
    require_positive_means(means);
}

double binomial_coefficient(int n, int j) {
    if (j < 0 || j > n) return 0.0;
    j = std::min(j, n - j);
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    return std::round(c);
}

double solve_rho(int k, int n, double alpha) {
    require_mid_regime(k, n, alpha, "solve_rho");
    return bisect_tangency(k, n, alpha);
}

std::optional<double> solve_rho_gcm(int k, int n) {
    if (n < 2 || k < 2 || k > n) throw DomainError("solve_rho_gcm: requires 2 <= k <= n");
    if (k == n) return std::nullopt;
    return bisect_tangency(k, n, 1.0);
}

double constant_A_mid(int k, int n, double alpha) {
    const double rho = solve_rho(k, n, alpha);
    return std::exp(std::log(order_sf(OrderStatParams(k, n), rho)) - alpha * std::log1p(-rho));
}

double constant_A_mid_tangent_form(int k, int n, double alpha) {
    const double rho = solve_rho(k, n, alpha);
    return std::exp(log_order_pdf(OrderStatParams(k, n), rho) - std::log(alpha) -
                    (alpha - 1.0) * std::log1p(-rho));
}

double log_gcm_power_integral(int k, int n, double alpha) {
    if (n < 2 || k < 2 || k > n) throw DomainError("log_gcm_power_integral: requires 2 <= k <= n");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("log_gcm_power_integral: requires 0 < alpha < 1");
    }
    const double p = 1.0 / (1.0 - alpha);
    if (k == n) return p * std::log(static_cast<double>(n)) - std::log((n - 1.0) * p + 1.0);

    const OrderStatParams params(k, n);
    const double rho = *solve_rho_gcm(k, n);
    // Flat part: gbar equals g(rho) on (rho, 1).
    const double log_flat = std::log1p(-rho) + p * log_order_pdf(params, rho);
    // Rising part: int_0^rho g^p as a real-parameter incomplete beta.
    const double log_rise = -p * params.log_beta() +
                            log_incomplete_beta((k - 1.0) * p + 1.0, (n - k) * p + 1.0, rho);
    const double top = std::max(log_flat, log_rise);
    return top + std::log(std::exp(log_flat - top) + std::exp(log_rise - top));
}

double constant_A_low(int k, int n, double alpha) {
    if (n < 2 || k < 2 || k > n) throw DomainError("constant_A_low: requires 2 <= k <= n");
    if (!(alpha > 0.0)) throw DomainError("constant_A_low: requires alpha > 0");
    if (alpha >= 1.0) throw DomainError("constant_A_low: requires alpha < 1");
    if (1.0 - alpha <= kBoundarySnap) {
        if (k == n) return n;
        return order_pdf(OrderStatParams(k, n), *solve_rho_gcm(k, n));
    }
    if (k == n) return n * std::pow((1.0 - alpha) / (n - alpha), 1.0 - alpha);
    return std::exp((1.0 - alpha) * log_gcm_power_integral(k, n, alpha));
}

BoundReport bound_independent_power(int k, int n, std::span<const double> means) {
    if (n < 1 || k < 1 || k > n) throw DomainError("bound_independent_power: requires 1 <= k <= n");
    if (means.size() != static_cast<std::size_t>(n)) {
        throw DomainError("bound_independent_power: requires exactly n means");
    }
    require_positive_means(means);
    const double top = *std::max_element(means.begin(), means.end());

    BoundReport r;
    r.regime = Regime::boundary_power;
    r.bound = elementary_symmetric(means, n + 1 - k);
    // k = 1 is attained at M = max mu; larger k is only approached as M grows.
    r.attainability = k == 1 ? Attainability::attained : Attainability::best_possible_not_attained;
    r.approach_M = k == 1 ? top : kApproachScale * top;
    IndepMinConfig config;
    for (double mu : means) config.components.push_back(make_component(*r.approach_M, mu));
    r.extremal = std::move(config);
    return r;
}

BoundReport bound_moment(const MomentQuery& query) {
    query.validate();
    return query.model == SampleModel::iid ? bound_iid(query) : bound_indep(query);
}

}  // namespace osbounds
