#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/vendor_sim.hpp"

namespace flvg::analysis {

class AnalysisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct MetricsReport {
    std::size_t n = 0;
    double liveness_evasion_rate = 0.0;
    double anti_deepfake_evasion_rate = 1.0;  // 1.0 when the vendor has no detector
    double face_matching_rate = 0.0;
    double overall_evasion_rate = 0.0;
    bool anti_deepfake_applicable = false;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Per-outcome stage indicators as used by the rates.
struct StageIndicators {
    std::vector<double> liveness;
    std::vector<double> anti_deepfake;
    std::vector<double> face_match;
    std::vector<double> overall;
};

/// With `require_requirement`, liveness evasion also needs the voice/action
/// requirement to be met. Throws AnalysisError on an empty list or when only
/// some outcomes carry an anti-deepfake result.
MetricsReport compute_metrics(std::span<const vendor::VerificationOutcome> outcomes, bool require_requirement = true);
StageIndicators stage_indicators(std::span<const vendor::VerificationOutcome> outcomes, bool require_requirement = true);

/// Overall rate is no larger than any applicable stage rate and all rates lie in [0, 1].
bool metrics_consistent(const MetricsReport& m);

struct TTestResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
    /// Both samples had zero variance; t and p follow the degenerate convention.
    bool degenerate = false;

    friend bool operator==(const TTestResult&, const TTestResult&) = default;
};

/// Welch's unequal-variance two-sample t-test, two-sided. Needs at least two
/// observations per sample.
TTestResult welch_t_test(std::span<const double> xs, std::span<const double> ys);

struct StageTest {
    std::string metric;
    TTestResult test;
    bool significant_05 = false;
    bool significant_01 = false;

    friend bool operator==(const StageTest&, const StageTest&) = default;
};

struct GroupComparison {
    std::string label_a;
    std::string label_b;
    MetricsReport metrics_a;
    MetricsReport metrics_b;
    /// Liveness and, when applicable, anti-deepfake; the overall rate is not tested.
    std::vector<StageTest> tests;

    friend bool operator==(const GroupComparison&, const GroupComparison&) = default;
};

GroupComparison compare_groups(std::span<const vendor::VerificationOutcome> a, std::span<const vendor::VerificationOutcome> b,
                               std::string label_a, std::string label_b, bool require_requirement = true);

nlohmann::json to_json(const MetricsReport& m);
nlohmann::json to_json(const TTestResult& t);
nlohmann::json to_json(const GroupComparison& g);

/// Percentage with one decimal, e.g. "92.5%".
std::string format_rate(double rate);
/// Scientific notation with two decimals, e.g. "1.23e-04".
std::string format_p(double p);

/// Aligned table with one row per labelled MetricsReport.
std::string metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);
std::string comparison_table(const std::vector<GroupComparison>& comparisons);

}  // namespace flvg::analysis
