#include "osbounds/beta_kernel.hpp"

#include "osbounds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace osbounds {

namespace {

constexpr int kMaxLogSpaceN = 1000;
constexpr int kContinuedFractionCap = 300;
constexpr double kContinuedFractionEps = 1e-14;
constexpr double kTiny = 1e-300;

double log_choose(int n, int j) {
    return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
}

// Binomial probabilities summed over j in [first, last], log-space terms.
double binomial_range_sum(int n, int first, int last, double x) {
    const double lx = std::log(x);
    const double l1x = std::log1p(-x);
    double sum = 0.0;
    for (int j = first; j <= last; ++j) {
        sum += std::exp(log_choose(n, j) + j * lx + (n - j) * l1x);
    }
    return sum;
}

void check_probability(double x, const char* op) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(op) + ": x must lie in [0, 1], got " + std::to_string(x));
    }
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b); valid
// (fast-converging) for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kContinuedFractionCap; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kContinuedFractionEps) return h;
    }
    throw NumericError("incomplete beta: continued fraction did not converge in 300 iterations",
                       kContinuedFractionEps);
}

bool use_direct_fraction(double a, double b, double x) {
    return x < (a + 1.0) / (a + b + 2.0);
}

// log of x^a (1-x)^b / a * CF, i.e. log B_x(a, b) on the direct branch.
double log_direct_branch(double a, double b, double x) {
    return a * std::log(x) + b * std::log1p(-x) - std::log(a) +
           std::log(beta_continued_fraction(a, b, x));
}

void check_shape(double a, double b, const char* op) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError(std::string(op) + ": shape parameters must be positive and finite");
    }
}

}  // namespace

OrderStatParams::OrderStatParams(int k, int n) : k_(k), n_(n) {
    if (n < 1) throw DomainError("OrderStatParams: n must be >= 1");
    if (k < 1 || k > n) throw DomainError("OrderStatParams: k must satisfy 1 <= k <= n");
    log_beta_ = log_beta_function(k, n + 1.0 - k);
}

double order_cdf(const OrderStatParams& params, double x) {
    check_probability(x, "order_cdf");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const int k = params.k();
    const int n = params.n();
    if (n > kMaxLogSpaceN) return regularized_incomplete_beta(k, n + 1.0 - k, x);
    const double upper = binomial_range_sum(n, k, n, x);
    if (upper <= 0.5) return upper;
    return 1.0 - binomial_range_sum(n, 0, k - 1, x);
}

double order_sf(const OrderStatParams& params, double x) {
    check_probability(x, "order_sf");
    if (x == 0.0) return 1.0;
    if (x == 1.0) return 0.0;
    const int k = params.k();
    const int n = params.n();
    if (n > kMaxLogSpaceN) return regularized_incomplete_beta(n + 1.0 - k, k, 1.0 - x);
    const double lower = binomial_range_sum(n, 0, k - 1, x);
    if (lower <= 0.5) return lower;
    return 1.0 - binomial_range_sum(n, k, n, x);
}

double log_order_pdf(const OrderStatParams& params, double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError("order_pdf: x must lie in (0, 1), got " + std::to_string(x));
    }
    return (params.k() - 1) * std::log(x) + (params.n() - params.k()) * std::log1p(-x) -
           params.log_beta();
}

double order_pdf(const OrderStatParams& params, double x) {
    return std::exp(log_order_pdf(params, x));
}

double log_beta_function(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_incomplete_beta(double a, double b, double x) {
    check_shape(a, b, "regularized_incomplete_beta");
    check_probability(x, "regularized_incomplete_beta");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    if (use_direct_fraction(a, b, x)) {
        return std::exp(log_direct_branch(a, b, x) - log_beta_function(a, b));
    }
    return 1.0 - std::exp(log_direct_branch(b, a, 1.0 - x) - log_beta_function(a, b));
}

double log_incomplete_beta(double a, double b, double x) {
    check_shape(a, b, "log_incomplete_beta");
    check_probability(x, "log_incomplete_beta");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    const double full = log_beta_function(a, b);
    if (x == 1.0) return full;
    if (use_direct_fraction(a, b, x)) return log_direct_branch(a, b, x);
    const double complement = std::exp(log_direct_branch(b, a, 1.0 - x) - full);
    return full + std::log1p(-complement);
}

double elementary_symmetric(std::span<const double> values, int m) {
    const auto size = static_cast<int>(values.size());
    if (m < 1 || m > size) {
        throw DomainError("elementary_symmetric: m must satisfy 1 <= m <= " +
                          std::to_string(size));
    }
    std::vector<double> e(static_cast<std::size_t>(m) + 1, 0.0);
    e[0] = 1.0;
    int seen = 0;
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("elementary_symmetric: entries must be positive and finite");
        }
        ++seen;
        for (int j = std::min(seen, m); j >= 1; --j) e[j] += v * e[j - 1];
    }
    return e[m];
}

}  // namespace osbounds
