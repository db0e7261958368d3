#pragma once

#include <functional>
#include <span>

namespace osbounds {

struct BisectionResult {
    double root;
    int iterations;
};

// Bisection on [lo, hi] for a function with f(lo) and f(hi) of opposite
// signs.  Stops once the midpoint is no longer representable between the
// endpoints, or after max_iterations halvings.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       int max_iterations = 200);

struct QuadratureResult {
    double value;
    double error_estimate;
    long intervals;
};

struct QuadratureOptions {
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 0.0;
    long max_intervals = 1'000'000;
};

// Globally adaptive Gauss-Kronrod (7/15) integration with interval halving.
// `knots` are interior breakpoints that are always kept as interval edges.
// Throws NumericError (carrying the achieved relative error) when the
// interval cap is hit first.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& options = {},
                           std::span<const double> knots = {});

}  // namespace osbounds
