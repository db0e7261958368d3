// Sharp constants, roots and regime dispatch.  Frozen constants are 40-digit
// mpmath evaluations; the mid-regime oracle maximizes the two-point moment
// directly in long double.

#include <catch_amalgamated.hpp>

#include "osbounds/beta_kernel.hpp"
#include "osbounds/errors.hpp"
#include "osbounds/numerics.hpp"
#include "osbounds/sharp_bounds.hpp"

#include <cmath>
#include <vector>

using namespace osbounds;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

long double naive_sf(int k, int n, long double x) {
    long double total = 0.0L;
    for (int j = 0; j < k; ++j) {
        long double c = 1.0L;
        for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
        total += c * std::pow(x, j) * std::pow(1.0L - x, n - j);
    }
    return total;
}

// sup over rho of (1 - G(rho)) / (1 - rho)^alpha: the moment of the
// unit-mean two-point law {0 w.p. rho, 1/(1-rho)}.
double brute_two_point_sup(int k, int n, double alpha) {
    auto f = [&](long double r) { return naive_sf(k, n, r) / std::pow(1.0L - r, alpha); };
    const int grid = 20000;
    int best = 1;
    for (int i = 1; i < grid; ++i)
        if (f(static_cast<long double>(i) / grid) > f(static_cast<long double>(best) / grid)) best = i;
    long double lo = std::max(0.0L, (best - 1.0L) / grid), hi = (best + 1.0L) / grid;
    for (int it = 0; it < 200; ++it) {
        const long double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
        (f(a) < f(b) ? lo : hi) = (f(a) < f(b) ? a : b);
    }
    return static_cast<double>(f((lo + hi) / 2));
}

double example1_A(int n, double a) {
    return std::pow(1.0 + a / (n - a), n - a) * std::pow(1.0 - a / (n - 1.0), n - 1.0 - a);
}

BoundReport iid(int n, int k, double alpha, double mu = 1.0) {
    return bound_moment(MomentQuery{SampleModel::iid, n, k, alpha, {mu}});
}

}  // namespace

TEST_CASE("mid-regime constants: frozen high-precision values", "[sharp_bounds]") {
    CHECK_THAT(solve_rho(3, 4, 1.0), WithinRel(0.4624752955742643702, 1e-12));
    CHECK_THAT(constant_A_mid(3, 4, 1.0), WithinRel(1.379611330055010645, 1e-12));
    CHECK_THAT(constant_A_mid(2, 5, 2.0), WithinRel(125.0 / 108.0, 1e-13));
    CHECK_THAT(solve_rho(2, 5, 2.0), WithinRel(1.0 / 6.0, 1e-12));
    CHECK_THAT(solve_rho(3, 5, 1.5), WithinRel(0.3950806338678053447, 1e-12));
    CHECK_THAT(constant_A_mid(3, 5, 1.5), WithinRel(1.468749433257794142, 1e-12));
    CHECK_THAT(*solve_rho_gcm(3, 5), WithinRel(0.2759781409574916330, 1e-12));
}

TEST_CASE("closed forms for k = 2", "[sharp_bounds]") {
    for (int n = 3; n <= 9; ++n) {
        for (double a : {1.0, 1.25, n / 2.0, n - 1.5}) {
            if (a >= n - 1.0) continue;
            CHECK_THAT(solve_rho(2, n, a), WithinRel(a / ((n - 1.0) * (n - a)), 1e-12));
            CHECK_THAT(constant_A_mid(2, n, a), WithinRel(example1_A(n, a), 1e-11));
        }
    }
}

TEST_CASE("mid constant equals the direct two-point supremum", "[sharp_bounds]") {
    for (auto [k, n, a] : {std::tuple{2, 3, 1.0}, {3, 4, 1.0}, {3, 6, 2.2}, {4, 7, 3.1},
                           {2, 8, 5.5}, {5, 8, 1.7}}) {
        INFO("k=" << k << " n=" << n << " alpha=" << a);
        CHECK_THAT(constant_A_mid(k, n, a), WithinRel(brute_two_point_sup(k, n, a), 1e-11));
        CHECK_THAT(constant_A_mid_tangent_form(k, n, a), WithinRel(constant_A_mid(k, n, a), 1e-10));
    }
}

TEST_CASE("tangency root solves its defining equation", "[sharp_bounds]") {
    for (int n = 3; n <= 12; ++n) {
        for (int k = 2; k < n; ++k) {
            for (double frac : {0.0, 0.3, 0.8}) {
                const double a = 1.0 + frac * (n - k);
                const double rho = solve_rho(k, n, a);
                const OrderStatParams p(k, n);
                CHECK(rho > 0.0);
                CHECK(rho < (k - 1.0) / (n - a));
                CHECK_THAT(a * order_sf(p, rho), WithinRel((1.0 - rho) * order_pdf(p, rho), 1e-9));
            }
        }
    }
}

TEST_CASE("GCM root: closed form for k = 2 and absent for k = n", "[sharp_bounds]") {
    for (int n = 3; n <= 20; ++n) {
        CHECK_THAT(*solve_rho_gcm(2, n), WithinRel(1.0 / ((n - 1.0) * (n - 1.0)), 1e-12));
    }
    CHECK_FALSE(solve_rho_gcm(4, 4).has_value());
    CHECK_THAT(*solve_rho_gcm(3, 5), WithinRel(solve_rho(3, 5, 1.0), 0.0));
}

TEST_CASE("sub-unit constants: frozen values and a direct quadrature", "[sharp_bounds]") {
    CHECK_THAT(constant_A_low(2, 4, 0.5), WithinRel(1.016457652514825896, 1e-10));
    CHECK_THAT(constant_A_low(2, 3, 0.5), WithinRel(1.036068289255105037, 1e-10));
    CHECK_THAT(constant_A_low(3, 5, 0.3), WithinRel(1.036760856739557039, 1e-10));

    // int_0^1 gbar^p by quadrature with gbar frozen past rho_gcm.
    for (auto [k, n, a] : {std::tuple{2, 5, 0.4}, {3, 6, 0.7}, {4, 5, 0.2}}) {
        const OrderStatParams p(k, n);
        const double rho = *solve_rho_gcm(k, n);
        const double e = 1.0 / (1.0 - a);
        const double knots[] = {rho};
        const auto r = integrate(
            [&](double u) { return std::pow(order_pdf(p, std::min(u, rho)), e); }, 0.0, 1.0,
            QuadratureOptions{1e-12, 0.0, 1'000'000}, knots);
        CHECK_THAT(constant_A_low(k, n, a), WithinRel(std::pow(r.value, 1.0 - a), 1e-9));
    }
}

TEST_CASE("sub-unit constant: sample maximum closed form", "[sharp_bounds]") {
    for (int n = 2; n <= 10; ++n) {
        for (double a = 0.1; a < 0.95; a += 0.2) {
            CHECK_THAT(constant_A_low(n, n, a),
                       WithinRel(n * std::pow((1.0 - a) / (n - a), 1.0 - a), 1e-12));
        }
    }
}

TEST_CASE("sub-unit constant tends to the mid constant at alpha = 1", "[sharp_bounds]") {
    const double frozen[] = {1.0975083497729428, 1.1218228454368016, 1.1246769650165649,
                             1.1249676418556673, 1.1249967636375885};
    const double alphas[] = {0.9, 0.99, 0.999, 0.9999, 0.99999};
    for (int i = 0; i < 5; ++i) CHECK_THAT(constant_A_low(2, 3, alphas[i]), WithinRel(frozen[i], 1e-9));
    // increasing in alpha
    for (int i = 1; i < 5; ++i) CHECK(constant_A_low(2, 3, alphas[i]) > constant_A_low(2, 3, alphas[i - 1]));
    CHECK_THAT(constant_A_low(2, 3, 1.0 - 1e-8), WithinRel(1.125, 1e-12));
    CHECK_THAT(constant_A_mid(2, 3, 1.0), WithinRel(1.125, 1e-12));
}

TEST_CASE("asymptotic constant for the second smallest of 200", "[sharp_bounds]") {
    const double scaled = (constant_A_mid(2, 200, 1.0) - 1.0) * 2.0 * 200.0 * 200.0;
    CHECK_THAT(scaled, WithinRel(1.0084026589904511, 1e-6));
}

TEST_CASE("iid regime dispatch", "[sharp_bounds][regime]") {
    struct Case {
        int n, k;
        double alpha;
        Regime regime;
        Attainability att;
        bool snapped;
    };
    const Case cases[] = {
        {5, 2, 2.0, Regime::mid, Attainability::attained, false},
        {5, 2, 0.5, Regime::sub_unit, Attainability::attained, false},
        {5, 2, 1.0 - 1e-7, Regime::mid, Attainability::attained, true},
        {5, 2, 4.0, Regime::boundary_power, Attainability::best_possible_not_attained, false},
        {5, 2, 4.0 - 1e-7, Regime::boundary_power, Attainability::best_possible_not_attained, true},
        {5, 2, 4.0 + 1e-7, Regime::unbounded, Attainability::attained, false},
        {3, 2, 2.5, Regime::unbounded, Attainability::attained, false},
        {4, 4, 0.5, Regime::sub_unit, Attainability::attained, false},
        {4, 4, 1.0, Regime::boundary_power, Attainability::best_possible_not_attained, false},
        {4, 1, 2.0, Regime::minimum_iid, Attainability::attained_by_degenerate, false},
        {4, 1, 4.0, Regime::minimum_iid, Attainability::attained, false},
        {4, 1, 4.5, Regime::unbounded, Attainability::attained, false},
        {1, 1, 0.7, Regime::minimum_iid, Attainability::attained_by_degenerate, false},
    };
    for (const Case& c : cases) {
        INFO("n=" << c.n << " k=" << c.k << " alpha=" << c.alpha);
        const BoundReport r = iid(c.n, c.k, c.alpha);
        CHECK(r.regime == c.regime);
        CHECK(r.attainability == c.att);
        CHECK(r.boundary_snapped == c.snapped);
        CHECK(r.finite() == std::isfinite(r.bound));
        CHECK(r.extremal.has_value());
    }
}

TEST_CASE("iid bounds scale as mu^alpha", "[sharp_bounds]") {
    for (auto [n, k, a] : {std::tuple{5, 2, 2.0}, {5, 2, 0.5}, {6, 3, 4.0}, {4, 1, 3.0}}) {
        const double base = iid(n, k, a).bound;
        CHECK_THAT(iid(n, k, a, 3.7).bound, WithinRel(base * std::pow(3.7, a), 1e-12));
    }
    CHECK_THAT(iid(6, 3, 4.0).bound, WithinRel(15.0, 1e-15));
    CHECK(std::isinf(iid(3, 2, 2.5).bound));
}

TEST_CASE("independent minimum with unsorted means", "[sharp_bounds][indep]") {
    const auto r = bound_moment(MomentQuery{SampleModel::independent, 2, 1, 1.5, {1.0, 2.0}});
    CHECK_THAT(r.bound, WithinRel(std::sqrt(2.0), 1e-15));
    CHECK(r.regime == Regime::minimum_indep);

    const auto s = bound_moment(MomentQuery{SampleModel::independent, 3, 1, 2.5, {3.0, 1.0, 2.0}});
    CHECK_THAT(s.bound, WithinRel(1.0 * 2.0 * std::sqrt(3.0), 1e-15));
    CHECK(s.sort_permutation == std::vector<int>{1, 2, 0});

    // alpha <= 1: plain min mean to the alpha
    const auto t = bound_moment(MomentQuery{SampleModel::independent, 3, 1, 0.5, {3.0, 4.0, 2.0}});
    CHECK_THAT(t.bound, WithinRel(std::sqrt(2.0), 1e-15));
    // alpha = n: product of the means
    const auto u = bound_moment(MomentQuery{SampleModel::independent, 3, 1, 3.0, {3.0, 4.0, 2.0}});
    CHECK_THAT(u.bound, WithinRel(24.0, 1e-15));
    CHECK(bound_moment(MomentQuery{SampleModel::independent, 3, 1, 3.5, {3.0, 4.0, 2.0}}).regime ==
          Regime::unbounded);
}

TEST_CASE("independent power bound is the elementary symmetric polynomial", "[sharp_bounds][indep]") {
    const std::vector<double> mu{1.0, 2.0, 3.0, 0.5};
    // e_2 = 1*2 + 1*3 + 1*.5 + 2*3 + 2*.5 + 3*.5 = 14
    const auto r = bound_moment(MomentQuery{SampleModel::independent, 4, 3, 2.0, mu});
    CHECK_THAT(r.bound, WithinRel(14.0, 1e-15));
    CHECK(r.regime == Regime::boundary_power);
    CHECK(r.attainability == Attainability::best_possible_not_attained);
    CHECK_THAT(*r.approach_M, WithinRel(3000.0, 1e-15));
    CHECK(std::get<IndepMinConfig>(*r.extremal).size() == 4);
    // equal means reduce to the iid boundary constant
    const std::vector<double> ones(5, 1.0);
    CHECK_THAT(bound_independent_power(2, 5, ones).bound, WithinRel(binomial_coefficient(5, 1), 1e-15));
    CHECK_THROWS_AS(bound_moment(MomentQuery{SampleModel::independent, 4, 3, 1.5, mu}), UnsupportedRegime);
    CHECK(bound_moment(MomentQuery{SampleModel::independent, 4, 3, 2.5, mu}).regime == Regime::unbounded);
}

TEST_CASE("query validation names the violated precondition", "[sharp_bounds][errors]") {
    auto message = [](const MomentQuery& q) {
        try {
            bound_moment(q);
        } catch (const DomainError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK_THAT(message({SampleModel::iid, 0, 1, 1.0, {1.0}}), Catch::Matchers::ContainsSubstring("n must"));
    CHECK_THAT(message({SampleModel::iid, 3, 4, 1.0, {1.0}}), Catch::Matchers::ContainsSubstring("k must"));
    CHECK_THAT(message({SampleModel::iid, 3, 2, -1.0, {1.0}}), Catch::Matchers::ContainsSubstring("alpha"));
    CHECK_THAT(message({SampleModel::iid, 3, 2, NAN, {1.0}}), Catch::Matchers::ContainsSubstring("alpha"));
    CHECK_THAT(message({SampleModel::iid, 3, 2, 1.0, {0.0}}), Catch::Matchers::ContainsSubstring("means"));
    CHECK_THAT(message({SampleModel::iid, 3, 2, 1.0, {1.0, 2.0}}), Catch::Matchers::ContainsSubstring("one mean"));
    CHECK_THAT(message({SampleModel::independent, 3, 1, 1.0, {1.0, 2.0}}),
               Catch::Matchers::ContainsSubstring("n means"));
    CHECK_THROWS_AS(solve_rho(2, 5, 0.5), DomainError);
    CHECK_THROWS_AS(solve_rho(5, 5, 1.0), DomainError);
    CHECK_THROWS_AS(constant_A_low(2, 5, 1.0), DomainError);
    CHECK_THROWS_AS(constant_A_low(1, 5, 0.5), DomainError);
}

TEST_CASE("enum string round trips", "[sharp_bounds]") {
    for (Regime r : {Regime::sub_unit, Regime::mid, Regime::boundary_power, Regime::minimum_iid,
                     Regime::minimum_indep, Regime::unbounded})
        CHECK(parse_regime(to_string(r)) == r);
    for (Attainability a : {Attainability::attained, Attainability::best_possible_not_attained,
                            Attainability::attained_by_degenerate})
        CHECK(parse_attainability(to_string(a)) == a);
    CHECK(parse_model("indep") == SampleModel::independent);
    CHECK_THROWS_AS(parse_model("bogus"), DomainError);
}
