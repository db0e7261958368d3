#pragma once

#include "osbounds/extremal.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace osbounds {

enum class SampleModel { iid, independent };

enum class Regime { sub_unit, mid, boundary_power, minimum_iid, minimum_indep, unbounded };

enum class Attainability { attained, best_possible_not_attained, attained_by_degenerate };

// Alpha within this distance of 1 or of n+1-k (from the finite side) is
// evaluated with the boundary formula and flagged.
inline constexpr double kBoundarySnap = 1e-6;

// M / max(mu) used for the representative member of a non-attaining family.
inline constexpr double kApproachScale = 1e3;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct MomentQuery {
    SampleModel model = SampleModel::iid;
    int n = 1;
    int k = 1;
    double alpha = 1.0;
    std::vector<double> means{1.0};

    // Throws DomainError naming the first violated precondition.
    void validate() const;
};

struct BoundReport {
    double bound = 0.0;
    std::optional<double> constant_A;
    std::optional<double> rho;
    Regime regime = Regime::unbounded;
    Attainability attainability = Attainability::attained;
    std::optional<ExtremalDistribution> extremal;
    std::optional<double> approach_M;
    bool boundary_snapped = false;
    // Original indices of the means in ascending order (independent minimum).
    std::vector<int> sort_permutation;

    bool finite() const { return regime != Regime::unbounded; }
};

std::string_view to_string(SampleModel model);
std::string_view to_string(Regime regime);
std::string_view to_string(Attainability attainability);
SampleModel parse_model(std::string_view text);
Regime parse_regime(std::string_view text);
Attainability parse_attainability(std::string_view text);

// Root of alpha (1 - G_{k:n}(x)) = (1 - x) g_{k:n}(x) on (0, (k-1)/(n-alpha)).
// Requires n >= 3, 2 <= k <= n-1, 1 <= alpha < n+1-k.
double solve_rho(int k, int n, double alpha);

// Last tangency point of the greatest convex minorant of G_{k:n}; nullopt for
// k == n, where G_{n:n} is already convex.
std::optional<double> solve_rho_gcm(int k, int n);

// (1 - G_{k:n}(rho)) / (1 - rho)^alpha with rho = solve_rho(k, n, alpha).
double constant_A_mid(int k, int n, double alpha);

// Same constant through g_{k:n}(rho) / (alpha (1 - rho)^{alpha-1}).
double constant_A_mid_tangent_form(int k, int n, double alpha);

// log int_0^1 gbar_{k:n}(u)^{1/(1-alpha)} du for 0 < alpha < 1, 2 <= k <= n.
double log_gcm_power_integral(int k, int n, double alpha);

// (int_0^1 gbar_{k:n}^{1/(1-alpha)})^{1-alpha}; alpha within kBoundarySnap of
// 1 returns the alpha -> 1 limit.
double constant_A_low(int k, int n, double alpha);

// C(n, j) as a double.
double binomial_coefficient(int n, int j);

// Sharp bound e_{n+1-k}(means) on E(X_{k:n})^{n+1-k}.
BoundReport bound_independent_power(int k, int n, std::span<const double> means);

BoundReport bound_moment(const MomentQuery& query);

}  // namespace osbounds
