#include "flvg/planner.hpp"

#include <algorithm>
#include <cmath>

namespace flvg::planner {

using deepfake::MethodProfile;
using intel::LipVerdict;
using intel::Verdict;
using media::FacialMedia;
using media::SynthesisCategory;
using nlohmann::json;
using vendor::FlvType;

namespace {

bool present(Verdict v) { return v == Verdict::Deployed || v == Verdict::Inconclusive; }

std::string fact(const char* field, const char* value) { return std::string(field) + "=" + value; }

/// Highest fidelity, then name. `prefer_adversarial` puts adversarial methods first.
const MethodProfile* best(std::span<const MethodProfile> methods, std::optional<SynthesisCategory> category, bool prefer_adversarial) {
    const MethodProfile* pick = nullptr;
    for (const MethodProfile& m : methods) {
        if (category && m.category != *category) continue;
        if (!pick) {
            pick = &m;
            continue;
        }
        auto key = [&](const MethodProfile& x) { return std::make_tuple(prefer_adversarial && x.adversarial, x.identity_fidelity); };
        if (key(m) > key(*pick) || (key(m) == key(*pick) && m.name < pick->name)) pick = &m;
    }
    return pick;
}

int stages_passed(const vendor::VerificationOutcome& o) {
    return static_cast<int>(o.liveness_pass) + static_cast<int>(o.anti_deepfake_pass.value_or(true)) + static_cast<int>(o.face_match_pass.value_or(false));
}

bool looks_acceptable(const media::Frame& f, const vendor::CaptureEnvelope& env, double min_quality) {
    return f.quality >= min_quality && f.env.brightness >= env.min_brightness && f.env.brightness <= env.max_brightness &&
           std::abs(f.env.posture_bias) <= env.max_abs_posture;
}

}  // namespace

AttackPlan plan_attack(const intel::IntelligenceReport& report, FlvType type, std::span<const MethodProfile> methods) {
    if (methods.empty()) throw PlanError("no deepfake methods to plan with");
    if (!report.declared.supported_types.contains(type)) {
        throw PlanError(report.declared.name + " does not offer " + vendor::to_string(type) + " FLV");
    }
    for (const auto& m : methods) deepfake::validate(m);

    AttackPlan plan;
    plan.flv_type = type;
    auto note = [&](std::string f, std::string decision) { plan.rationale.push_back({std::move(f), std::move(decision)}); };

    const bool anti_deepfake = present(report.anti_deepfake);
    const char* adf_value = intel::to_string(report.anti_deepfake);
    const bool has_swap = best(methods, SynthesisCategory::Swap, false) != nullptr;
    const bool has_reenactment = best(methods, SynthesisCategory::Reenactment, false) != nullptr;

    // Method choice.
    std::optional<SynthesisCategory> category;
    if (type == FlvType::Image && has_swap) {
        category = SynthesisCategory::Swap;
        note("flv_type=Image", "restrict to face swapping so the submitted image keeps the driving capture conditions");
    }
    const MethodProfile* method = best(methods, category, anti_deepfake);
    plan.method = *method;
    if (anti_deepfake) {
        note(fact("anti_deepfake", adf_value),
             method->adversarial ? "prefer adversarially trained method " + method->name : "no adversarial method available; use " + method->name);
    } else {
        note(fact("anti_deepfake", adf_value), "choose highest identity fidelity: " + method->name);
    }

    // Driving media.
    const bool coherence = present(report.coherence);
    const char* coh_value = intel::to_string(report.coherence);
    switch (type) {
        case FlvType::Image:
            plan.driving_recipe = DrivingRecipe::Stock;
            break;
        case FlvType::Voice: {
            const bool full_match = report.lip_language == LipVerdict::FullMatch || report.lip_language == LipVerdict::Inconclusive;
            if (full_match) {
                plan.driving_recipe = DrivingRecipe::MatchedLipsInteractive;
                note(fact("lip_language", intel::to_string(report.lip_language)), "record driving video mouthing the challenged digits");
            } else {
                plan.driving_recipe = DrivingRecipe::Stock;
                note(fact("lip_language", intel::to_string(report.lip_language)), "import synthesized audio over stock driving video");
            }
            break;
        }
        case FlvType::Action:
            if (coherence) {
                plan.driving_recipe = DrivingRecipe::RecordedCoherent;
                note(fact("coherence", coh_value), "record the challenged action sequence in one continuous take");
            } else {
                plan.driving_recipe = DrivingRecipe::StitchedActions;
                note(fact("coherence", coh_value), "stitch pre-recorded action clips");
            }
            break;
        case FlvType::Silence:
            plan.driving_recipe = DrivingRecipe::Stock;
            if (coherence) note(fact("coherence", coh_value), "use a single continuous stock recording");
            break;
    }

    // Two-stage synthesis.
    if (type != FlvType::Image && anti_deepfake && has_swap && has_reenactment) {
        plan.two_stage = true;
        plan.swap_profile = *best(methods, SynthesisCategory::Swap, true);
        plan.reenactment_profile = *best(methods, SynthesisCategory::Reenactment, true);
        note(fact("anti_deepfake", adf_value),
             "two-stage: " + plan.swap_profile->name + " onto an accepted image, then " + plan.reenactment_profile->name);
    }
    return plan;
}

StageOne stage_one(const FacialMedia& target, std::span<const FacialMedia> bases, const MethodProfile& swap, FlvClient* probe_vendor,
                   const media::IdentityVector& reference, const vendor::CaptureEnvelope& envelope, double min_quality) {
    if (bases.empty()) throw PlanError("stage one needs at least one base image");
    if (swap.category != SynthesisCategory::Swap) throw PlanError("stage one needs a face swapping method");

    auto transform = [&](const FacialMedia& base) {
        const FacialMedia driving = FacialMedia::video({base.frames().front()}, std::nullopt, base.provenance());
        return media::still_image(deepfake::synthesize(target, driving, swap), 0);
    };

    const bool query = probe_vendor && probe_vendor->declared().supported_types.contains(FlvType::Image);
    std::optional<StageOne> best_seen;
    int best_score = -1;
    double best_match = -2.0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        FacialMedia image = transform(bases[i]);
        if (!query) {
            const media::Frame& f = image.frames().front();
            if (looks_acceptable(f, envelope, min_quality)) return {std::move(image), i, i + 1, false, true, std::nullopt};
            const int score = static_cast<int>(f.quality * 1000.0);
            if (score > best_score) {
                best_score = score;
                best_seen = StageOne{std::move(image), i, 0, false, true, std::nullopt};
            }
            continue;
        }
        const vendor::VerificationOutcome o = probe_vendor->verify(FlvType::Image, image, reference, std::nullopt);
        if (o.overall_pass()) return {std::move(image), i, i + 1, true, false, o};
        const int score = stages_passed(o);
        if (score > best_score || (score == best_score && o.face_match_score > best_match)) {
            best_score = score;
            best_match = o.face_match_score;
            best_seen = StageOne{std::move(image), i, 0, false, false, o};
        }
    }
    best_seen->attempts = bases.size();
    return std::move(*best_seen);
}

TwoStageResult two_stage_attack(const FacialMedia& target, const FacialMedia& driving, const MethodProfile& swap,
                                const MethodProfile& reenactment, std::span<const FacialMedia> passing_bases, FlvClient* probe_vendor,
                                const media::IdentityVector& reference) {
    if (reenactment.category != SynthesisCategory::Reenactment) throw PlanError("stage two needs a face reenactment method");
    StageOne s1 = stage_one(target, passing_bases, swap, probe_vendor, reference);
    FacialMedia output = deepfake::synthesize(s1.image, driving, reenactment);
    return {std::move(output), std::move(s1), reenactment.name};
}

const char* to_string(DrivingRecipe r) {
    switch (r) {
        case DrivingRecipe::Stock: return "Stock";
        case DrivingRecipe::StitchedActions: return "StitchedActions";
        case DrivingRecipe::MatchedLipsInteractive: return "MatchedLipsInteractive";
        case DrivingRecipe::RecordedCoherent: return "RecordedCoherent";
    }
    return "?";
}

json to_json(const AttackPlan& p) {
    json rationale = json::array();
    for (const auto& r : p.rationale) rationale.push_back({{"fact", r.fact}, {"decision", r.decision}});
    json stages = p.two_stage ? json{{"kind", "TwoStage"}, {"swap", p.swap_profile->name}, {"reenactment", p.reenactment_profile->name}}
                              : json{{"kind", "SingleStage"}};
    return json{{"flv_type", vendor::to_string(p.flv_type)},
                {"method", p.method.name},
                {"driving_recipe", to_string(p.driving_recipe)},
                {"stages", std::move(stages)},
                {"rationale", std::move(rationale)}};
}

}  // namespace flvg::planner
