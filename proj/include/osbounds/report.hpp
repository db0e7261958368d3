#pragma once

#include "osbounds/oracle.hpp"
#include "osbounds/sharp_bounds.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace osbounds {

inline constexpr const char* kToolName = "osbound";
inline constexpr const char* kToolVersion = "1.0.0";

struct VerificationBlock {
    std::string method;  // "exact" or "mc"
    std::optional<double> oracle_value;
    std::optional<double> relative_gap;  // (bound - oracle) / bound
    std::optional<MomentEstimate> estimate;
    std::string note;
};

struct ReportEnvelope {
    MomentQuery query;
    BoundReport report;
    std::optional<VerificationBlock> verification;
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
};

nlohmann::ordered_json extremal_to_json(const ExtremalDistribution& dist);
ExtremalDistribution extremal_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const ReportEnvelope& envelope);
ReportEnvelope envelope_from_json(const nlohmann::ordered_json& j);

std::string csv_header();
std::string to_csv_row(const ReportEnvelope& envelope);

// Exact oracle value of the report's extremal law at the query's (k, n, alpha).
VerificationBlock verify_exact(const MomentQuery& query, const BoundReport& report);

// Monte Carlo estimate for the report's extremal law.
VerificationBlock verify_mc(const MomentQuery& query, const BoundReport& report, long trials,
                            std::uint64_t seed);

struct TableRow {
    int n;
    int k;
    double alpha;
    BoundReport report;
};

// iid, unit mean; rows ordered by n, then k, then alpha.  Cells with k > n
// are skipped.
std::vector<TableRow> build_table(int n_lo, int n_hi, int k_lo, int k_hi,
                                  const std::vector<double>& alphas, int threads = 1);

std::string table_csv(const std::vector<TableRow>& rows);

}  // namespace osbounds
