#pragma once

#include <span>

namespace osbounds {

// Rank k and sample size n of an order statistic U_{k:n} from a standard
// uniform sample.  Holds log B(k, n+1-k) so the density never recomputes it.
class OrderStatParams {
public:
    OrderStatParams(int k, int n);

    int k() const noexcept { return k_; }
    int n() const noexcept { return n_; }
    double log_beta() const noexcept { return log_beta_; }

private:
    int k_;
    int n_;
    double log_beta_;
};

// G_{k:n}(x) = sum_{j=k}^{n} C(n,j) x^j (1-x)^{n-j}, the df of U_{k:n}.
double order_cdf(const OrderStatParams& params, double x);

// 1 - G_{k:n}(x), summed directly over j < k so small tails keep full
// relative precision.
double order_sf(const OrderStatParams& params, double x);

// g_{k:n}(x) = x^{k-1} (1-x)^{n-k} / B(k, n+1-k) for 0 < x < 1.
double order_pdf(const OrderStatParams& params, double x);

// log g_{k:n}(x); defined on the open interval like order_pdf.
double log_order_pdf(const OrderStatParams& params, double x);

// I_x(a, b), regularized incomplete beta for real a, b > 0.
double regularized_incomplete_beta(double a, double b, double x);

// log of the unregularized B_x(a, b) = int_0^x t^{a-1} (1-t)^{b-1} dt.
// Stays finite where B(a, b) itself under- or overflows.
double log_incomplete_beta(double a, double b, double x);

// log B(a, b).
double log_beta_function(double a, double b);

// e_m(values): sum of all m-fold products of distinct entries.
double elementary_symmetric(std::span<const double> values, int m);

}  // namespace osbounds
