#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/deepfaker.hpp"
#include "flvg/flv_client.hpp"
#include "flvg/intelligence.hpp"

namespace flvg::planner {

class PlanError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class DrivingRecipe { Stock, StitchedActions, MatchedLipsInteractive, RecordedCoherent };

struct RationaleEntry {
    std::string fact;      // report field and value, e.g. "coherence=Deployed"
    std::string decision;

    friend bool operator==(const RationaleEntry&, const RationaleEntry&) = default;
};

struct AttackPlan {
    vendor::FlvType flv_type = vendor::FlvType::Silence;
    deepfake::MethodProfile method;
    DrivingRecipe driving_recipe = DrivingRecipe::Stock;
    bool two_stage = false;
    std::optional<deepfake::MethodProfile> swap_profile;         // TwoStage only
    std::optional<deepfake::MethodProfile> reenactment_profile;  // TwoStage only
    std::vector<RationaleEntry> rationale;

    friend bool operator==(const AttackPlan&, const AttackPlan&) = default;
};

/// Deterministic plan from black-box intelligence. Inconclusive findings are
/// planned for as if the defense were deployed at its strongest level.
AttackPlan plan_attack(const intel::IntelligenceReport& report, vendor::FlvType type, std::span<const deepfake::MethodProfile> methods);

/// Stage 1 of the two-stage attack: the target face swapped onto a base image
/// that the vendor accepts.
struct StageOne {
    media::FacialMedia image;
    std::size_t base_index = 0;
    std::size_t attempts = 0;
    /// Whether the chosen image passed the vendor's image-based FLV.
    bool passed = false;
    /// The vendor has no image-based FLV; the base was chosen locally.
    bool heuristic = false;
    std::optional<vendor::VerificationOutcome> outcome;
};

/// Tries `bases` in order and stops at the first transformed image that passes
/// image-based FLV, else keeps the best-scoring one. Without `probe_vendor`
/// (or when it lacks image FLV) the first base whose transformed image looks
/// acceptable under `envelope` and `min_quality` is taken.
StageOne stage_one(const media::FacialMedia& target, std::span<const media::FacialMedia> bases, const deepfake::MethodProfile& swap,
                   FlvClient* probe_vendor, const media::IdentityVector& reference, const vendor::CaptureEnvelope& envelope = {},
                   double min_quality = 0.3);

struct TwoStageResult {
    media::FacialMedia output;
    StageOne stage1;
    std::string stage2_method;
};

TwoStageResult two_stage_attack(const media::FacialMedia& target, const media::FacialMedia& driving, const deepfake::MethodProfile& swap,
                                const deepfake::MethodProfile& reenactment, std::span<const media::FacialMedia> passing_bases,
                                FlvClient* probe_vendor, const media::IdentityVector& reference);

const char* to_string(DrivingRecipe r);
nlohmann::json to_json(const AttackPlan& plan);

}  // namespace flvg::planner
