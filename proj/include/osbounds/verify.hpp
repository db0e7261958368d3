#pragma once

#include "osbounds/extremal.hpp"
#include "osbounds/oracle.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace osbounds {

// Relative slack below which an inequality counts as violated; absorbs
// floating rounding at the equality cases.
inline constexpr double kSweepTolerance = 1e-10;

struct SuiteResult {
    std::string name;
    long cases = 0;
    long violations = 0;
    // Smallest relative slack (rhs - lhs) / rhs over all cases.
    double worst_slack = 0.0;
    std::optional<nlohmann::ordered_json> first_violation;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();

    bool passed() const { return violations == 0; }
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    long cases = 0;  // 0 selects the suite default
    int threads = 1;
};

// Stream for case `index` of a sweep; independent of the thread layout.
RandomStream case_stream(std::uint64_t seed, std::uint64_t index);

// Random finite law with the given mean; the mean is fixed by rescaling the
// atom values, never the probabilities.
DiscreteDistribution random_discrete(RandomStream& stream, double mean, int max_atoms = 6);

StepFunction random_step_function(RandomStream& stream, int max_pieces = 8);

SuiteResult run_sharpness_suite(const VerifyOptions& options);
SuiteResult run_bound_validity_sweep(const VerifyOptions& options);
SuiteResult run_oracle_agreement_sweep(const VerifyOptions& options);
SuiteResult run_corollary2_sweep(const VerifyOptions& options);
SuiteResult run_minimum_jensen_sweep(const VerifyOptions& options);
SuiteResult run_lemma3_sweep(const VerifyOptions& options);
SuiteResult run_witness_suite(const VerifyOptions& options);

// name: sharpness | sweep | lemma3 | witness | all
std::vector<SuiteResult> run_suite(std::string_view name, const VerifyOptions& options);

nlohmann::ordered_json to_json(const SuiteResult& result);

}  // namespace osbounds
