// Extremal laws: means, quantile/cdf consistency, sampling determinism.

#include <catch_amalgamated.hpp>

#include "osbounds/errors.hpp"
#include "osbounds/extremal.hpp"
#include "osbounds/numerics.hpp"
#include "osbounds/sharp_bounds.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace osbounds;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> peak_knots(double rho) {
    std::vector<double> knots;
    for (int j = 0; j <= 48; ++j) knots.push_back(rho * (1.0 - std::ldexp(1.0, -j)));
    knots.push_back(rho);
    return knots;
}

// int_0^1 Q(u) du
double quantile_mean(const auto& law, std::vector<double> knots = {}) {
    QuadratureOptions opt;
    opt.relative_tolerance = 1e-12;
    return integrate([&](double u) { return law.quantile(u); }, 0.0, 1.0, opt, knots).value;
}

}  // namespace

TEST_CASE("uniform_open stays strictly inside (0, 1)", "[extremal]") {
    RandomStream s(42);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform_open(s);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
}

TEST_CASE("two-point extremal has the prescribed mean and root", "[extremal]") {
    const TwoPoint t = two_point_extremal(2, 5, 2.0, 3.0);
    CHECK_THAT(t.zero_prob, WithinRel(1.0 / 6.0, 1e-12));
    CHECK_THAT((1.0 - t.zero_prob) * t.atom, WithinRel(3.0, 1e-15));
    CHECK(t.quantile(0.1) == 0.0);
    CHECK(t.quantile(0.9) == t.atom);
    CHECK_THAT(t.cdf(0.0), WithinRel(t.zero_prob, 1e-15));
    CHECK(t.cdf(t.atom) == 1.0);
    CHECK(t.cdf(-1.0) == 0.0);
}

TEST_CASE("BetaPowerQuantile: mean, monotone quantile, cdf inverse", "[extremal]") {
    for (auto [k, n, a] : {std::tuple{2, 5, 0.5}, {3, 4, 0.2}, {2, 3, 0.9}, {4, 8, 0.65}}) {
        INFO("k=" << k << " n=" << n << " alpha=" << a);
        const auto law = std::get<BetaPowerQuantile>(quantile_extremal_low(k, n, a, 2.0));
        CHECK_THAT(law.rho_gcm, WithinRel(*solve_rho_gcm(k, n), 0.0));
        CHECK_THAT(quantile_mean(law, peak_knots(law.rho_gcm)), WithinRel(2.0, 1e-9));
        double prev = 0.0;
        for (double u = 0.01; u < 1.0; u += 0.01) {
            const double q = law.quantile(u);
            CHECK(q >= prev);
            prev = q;
            if (u < law.rho_gcm) CHECK_THAT(law.cdf(q), WithinAbs(u, 1e-9));
        }
        CHECK_THAT(law.quantile(0.999), WithinRel(law.top_value(), 1e-14));
        CHECK_THAT(law.cdf(law.top_value()), WithinAbs(1.0, 0.0));
    }
}

TEST_CASE("BetaPowerQuantile stays finite near alpha = 1", "[extremal]") {
    const auto law = std::get<BetaPowerQuantile>(quantile_extremal_low(2, 3, 1.0 - 1e-4, 1.0));
    CHECK(std::isfinite(law.top_value()));
    CHECK(law.top_value() > 0.0);
    CHECK_THAT(quantile_mean(law, peak_knots(law.rho_gcm)), WithinRel(1.0, 1e-8));
}

TEST_CASE("PowerLaw extremal for the sample maximum", "[extremal]") {
    const ExtremalDistribution d = quantile_extremal_low(4, 4, 0.5, 1.5);
    REQUIRE(std::holds_alternative<PowerLaw>(d));
    const auto law = std::get<PowerLaw>(d);
    CHECK_THAT(law.top_value(), WithinRel((4.0 - 0.5) * 1.5 / 0.5, 1e-15));
    CHECK_THAT(quantile_mean(law), WithinRel(1.5, 1e-10));
    for (double u : {0.1, 0.5, 0.93}) CHECK_THAT(law.cdf(law.quantile(u)), WithinRel(u, 1e-12));
}

TEST_CASE("heavy-tail witness has mean mu and a closed-form tail", "[extremal]") {
    const HeavyTailWitness w = heavy_tail_witness(2.0);
    CHECK(w.survival(1.0) == 1.0);
    CHECK(w.survival(0.5) == 1.0);
    // R(x) at 2x/mu = e: 1 / (e * 4)
    CHECK_THAT(w.survival(std::numbers::e), WithinRel(1.0 / (4.0 * std::numbers::e), 1e-14));
    for (double tail : {0.5, 1e-3, 1e-9}) CHECK_THAT(w.survival(w.tail_quantile(tail)), WithinRel(tail, 1e-10));
    // mean = int_0^inf R; with x = (mu/2) e^t the tail integrand is R(x) x,
    // and beyond t = 600 it equals (mu/2) / (1+t)^2 exactly.
    const double half = 1.0;
    QuadratureOptions opt;
    opt.relative_tolerance = 1e-12;
    const auto body = integrate([&](double t) { const double x = half * std::exp(t); return w.survival(x) * x; },
                                0.0, 600.0, opt);
    CHECK_THAT(half + body.value + half / 601.0, WithinRel(2.0, 1e-9));
}

TEST_CASE("log-square witness: unscaled mean 2e", "[extremal]") {
    CHECK_THAT(LogSquareTail::kUnscaledMean, WithinRel(2.0 * std::numbers::e, 1e-15));
    // e + int_e^inf R(x) dx with x = e^t, t = 1/s; past t = 600 the integrand
    // R(e^t) e^t / s^2 is the constant e.
    QuadratureOptions opt;
    opt.relative_tolerance = 1e-13;
    const auto r = integrate(
        [](double s) {
            const double t = 1.0 / s;
            if (t > 600.0) return std::numbers::e;
            const double x = std::exp(t);
            return LogSquareTail::unscaled_survival(x) * x * t * t;
        },
        0.0, 1.0, opt);
    CHECK_THAT(std::numbers::e + r.value, WithinRel(LogSquareTail::kUnscaledMean, 1e-10));
    const LogSquareTail w = log_square_witness(3.0);
    CHECK_THAT(w.scale(), WithinRel(3.0 / (2.0 * std::numbers::e), 1e-15));
    CHECK_THAT(LogSquareTail::unscaled_survival(std::numbers::e), WithinRel(1.0, 1e-15));
    for (double tail : {0.9, 1e-4, 1e-12}) CHECK_THAT(w.survival(w.tail_quantile(tail)), WithinRel(tail, 1e-10));
}

TEST_CASE("independent minimum configuration", "[extremal]") {
    const std::vector<double> mu{1.0, 2.0, 4.0, 5.0};
    const IndepMinConfig c = minimum_extremal_indep(mu, 2.5);
    REQUIRE(c.size() == 4);
    const auto means = c.means();
    for (std::size_t i = 0; i < mu.size(); ++i) CHECK_THAT(means[i], WithinRel(mu[i], 1e-15));
    // components below m = 3 sit on {0, mu_3}; the rest are degenerate
    CHECK(std::get<TwoPoint>(c.components[0]).atom == 4.0);
    CHECK(std::get<TwoPoint>(c.components[1]).atom == 4.0);
    CHECK(std::holds_alternative<Degenerate>(c.components[2]));
    CHECK(std::holds_alternative<Degenerate>(c.components[3]));
    RandomStream s(3);
    for (int i = 0; i < 100; ++i) {
        const auto x = c.sample(s);
        CHECK(x[2] == 4.0);
        CHECK((x[0] == 0.0 || x[0] == 4.0));
    }
}

TEST_CASE("make_component collapses to a point mass", "[extremal]") {
    CHECK(std::holds_alternative<Degenerate>(make_component(2.0, 2.0)));
    const auto tp = std::get<TwoPoint>(make_component(8.0, 2.0));
    CHECK_THAT(tp.zero_prob, WithinRel(0.75, 1e-15));
    CHECK(component_mean(make_component(8.0, 2.0)) == 2.0);
}

TEST_CASE("two-valued approach family", "[extremal]") {
    const std::vector<double> mu{1.0, 2.0, 3.0};
    const auto fam = theorem1_approach_family(2, 3, mu, 100.0);
    REQUIRE(fam.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(fam[i].atom == 100.0);
        CHECK_THAT((1.0 - fam[i].zero_prob) * 100.0, WithinRel(mu[i], 1e-14));
    }
}

TEST_CASE("identical seeds give identical draws for every law", "[extremal][determinism]") {
    const std::vector<ExtremalDistribution> laws{
        two_point_extremal(2, 5, 2.0, 1.0), Degenerate{1.0}, quantile_extremal_low(2, 5, 0.5, 1.0),
        quantile_extremal_low(3, 3, 0.5, 1.0), heavy_tail_witness(1.0), log_square_witness(1.0)};
    for (const auto& law : laws) {
        RandomStream a(99), b(99);
        std::visit(
            [&](const auto& d) {
                if constexpr (requires { d.sample(a); }) {
                    for (int i = 0; i < 50; ++i) CHECK(d.sample(a) == d.sample(b));
                }
            },
            law);
    }
    CHECK(variant_tag(ExtremalDistribution{heavy_tail_witness(1.0)}) == "HeavyTailWitness");
    CHECK(variant_tag(ExtremalDistribution{IndepMinConfig{}}) == "IndepMinConfig");
}

TEST_CASE("extremal constructors reject out-of-regime input", "[extremal][errors]") {
    CHECK_THROWS_AS(two_point_extremal(2, 5, 4.5, 1.0), DomainError);
    CHECK_THROWS_AS(quantile_extremal_low(2, 5, 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(heavy_tail_witness(-1.0), DomainError);
    const std::vector<double> mu{2.0, 1.0};
    CHECK_THROWS_AS(minimum_extremal_indep(mu, 1.5), DomainError);
}
