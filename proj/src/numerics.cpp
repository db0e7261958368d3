#include "osbounds/numerics.hpp"

#include "osbounds/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace osbounds {

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       int max_iterations) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return {lo, 0};
    if (fhi == 0.0) return {hi, 0};
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericError("bisect: endpoints do not bracket a sign change", hi - lo);
    }
    int it = 0;
    for (; it < max_iterations; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return {mid, it + 1};
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo + 0.5 * (hi - lo), it};
}

namespace {

// Kronrod abscissae (positive half) and weights for the 15-point rule; the
// odd-indexed nodes are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& options, std::span<const double> knots) {
    if (!(hi > lo)) return {0.0, 0.0, 0};
    std::vector<double> edges{lo};
    for (double k : knots) {
        if (k > lo && k < hi) edges.push_back(k);
    }
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Segment s = gauss_kronrod(f, edges[i], edges[i + 1]);
        total += s.value;
        total_error += s.error;
        heap.push(s);
    }
    long intervals = static_cast<long>(heap.size());
    double accepted_value = 0.0;
    double accepted_error = 0.0;
    auto target = [&] {
        return std::max(options.absolute_tolerance, options.relative_tolerance * std::fabs(total));
    };
    while (total_error > target()) {
        if (intervals >= options.max_intervals) {
            const double achieved = total != 0.0 ? total_error / std::fabs(total) : total_error;
            throw NumericError("integrate: interval cap reached before convergence", achieved);
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // Segment below floating resolution; accept its contribution.
            heap.pop();
            accepted_value += worst.value;
            accepted_error += worst.error;
            total_error -= worst.error;
            continue;
        }
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.lo, mid);
        const Segment right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed drift from the incremental updates.
    double resummed = accepted_value;
    double err = accepted_error;
    while (!heap.empty()) {
        resummed += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {resummed, err, intervals};
}

}  // namespace osbounds
