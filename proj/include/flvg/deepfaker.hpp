#pragma once

// Parametric stand-ins for face-swap and face-reenactment models. A method is
// reduced to how much target identity survives, how many artifacts it leaves
// and how those artifacts grow with head motion in the driving video.

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/media.hpp"
#include "flvg/vendor_profile.hpp"

namespace flvg::deepfake {

class MethodError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct MethodProfile {
    std::string name;
    media::SynthesisCategory category = media::SynthesisCategory::Swap;
    double identity_fidelity = 0.9;
    double base_artifact = 0.3;
    double motion_artifact_gain = 0.5;
    bool adversarial = false;
    double adversarial_discount = 0.15;

    friend bool operator==(const MethodProfile&, const MethodProfile&) = default;
};

void validate(const MethodProfile& method);

/// X2Face, ICface, FSGAN_S, FSGAN_R, FOMM, FaceShifter.
const std::vector<MethodProfile>& method_presets();
const MethodProfile& method_preset(std::string_view name);

/// Pose change between two frames: Euclidean norm of the (yaw, pitch, roll)
/// delta over 90 degrees, clamped to [0, 1].
double motion(const media::HeadPose& from, const media::HeadPose& to);

/// Artifact score of one output frame before and after clamping.
double raw_artifact(const MethodProfile& method, double motion);
double artifact(const MethodProfile& method, double motion);

/// Puts the target identity into the driving video. Output has one frame per
/// driving frame; driving audio is kept.
media::FacialMedia synthesize(const media::FacialMedia& target, const media::FacialMedia& driving, const MethodProfile& method);

/// synthesize, then the spoken digits; with `matched_lips` the lips are
/// re-animated to mouth them.
media::FacialMedia synthesize_for_voice(const media::FacialMedia& target, const media::FacialMedia& driving,
                                        const MethodProfile& method, std::span<const int> digits, bool matched_lips);

using ActionClips = std::map<vendor::Action, media::FacialMedia>;

/// Stitches the recorded clip of each challenged action, in order, and
/// synthesizes over the result.
media::FacialMedia synthesize_for_action(const media::FacialMedia& target, const ActionClips& clips,
                                         std::span<const vendor::Action> challenge, const MethodProfile& method);

nlohmann::json to_json(const MethodProfile& method);

/// `{"preset": "FOMM", "adversarial": true}` or a complete custom profile.
MethodProfile method_from_json(const nlohmann::json& j);

/// Accepts a list whose items are preset names or method objects.
std::vector<MethodProfile> methods_from_json(const nlohmann::json& j);

}  // namespace flvg::deepfake
