#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/analysis.hpp"
#include "flvg/corpus.hpp"
#include "flvg/deepfaker.hpp"
#include "flvg/flv_client.hpp"
#include "flvg/intelligence.hpp"
#include "flvg/planner.hpp"

namespace flvg::harness {

enum class ExperimentKind {
    TypeEvaluation,
    IntelligenceOnly,
    BiasStudy,
    DigitLengthSweep,
    ActionSweep,
    TwoStageComparison,
    PresentationBaseline,
    /// Passing vs failing driving videos and target images, per method.
    InputStudy,
};

/// Either a URL of a running vendor service or a profile run in-process.
struct TargetSpec {
    std::optional<std::string> url;
    std::optional<vendor::VendorProfile> profile;
    std::uint64_t vendor_seed = 0;
};

struct SampleSizes {
    std::size_t targets = 40;
    std::size_t driving_videos = 5;
    std::size_t driving_images = 10;
    std::size_t probe_n = 20;
};

struct CampaignConfig {
    ExperimentKind kind = ExperimentKind::TypeEvaluation;
    TargetSpec target;
    std::optional<vendor::FlvType> flv_type;
    std::vector<deepfake::MethodProfile> methods;
    CorpusSpec corpus;
    SampleSizes samples;
    /// Challenge lengths for the sweeps; empty means the declared range.
    std::vector<int> lengths;
    std::uint64_t seed = 1;
    std::size_t concurrency = 4;
};

/// Parses a campaign document. `seed_override` (from FLVG_SEED) replaces the
/// campaign seed and, unless the corpus pins its own, the corpus seed.
/// Throws ConfigError.
CampaignConfig campaign_config_from_json(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = std::nullopt);
nlohmann::json to_json(const CampaignConfig& config);

/// SHA-256 (hex) of the canonical JSON form of the config.
std::string config_digest(const CampaignConfig& config);

struct MetricsRow {
    std::string label;
    std::string method;
    std::optional<analysis::MetricsReport> metrics;  // empty when the row could not be run
    std::string error;
};

struct ComparisonRow {
    std::string label;
    std::optional<analysis::GroupComparison> comparison;
    std::string error;
};

struct CampaignReport {
    std::string kind;
    std::string target;
    std::string flv_type;
    std::optional<intel::IntelligenceReport> intelligence;
    std::vector<planner::AttackPlan> plans;
    std::vector<MetricsRow> rows;
    std::vector<ComparisonRow> comparisons;
    std::vector<std::string> invariant_violations;
    /// Set when a transport failure stopped the run; finished rows are kept.
    bool partial = false;
    std::string error;
    std::uint64_t seed = 0;
    std::string config_digest;
    double elapsed_seconds = 0.0;

    const MetricsRow* row(std::string_view label) const;
};

std::unique_ptr<FlvClient> make_client(const TargetSpec& target);

/// Runs intelligence, planning, synthesis, verification and analysis for the
/// configured experiment against `api`.
CampaignReport run_campaign(const CampaignConfig& config, FlvClient& api);
CampaignReport run_campaign(const CampaignConfig& config);

const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view s);

}  // namespace flvg::harness
