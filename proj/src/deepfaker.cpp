#include "flvg/deepfaker.hpp"

#include <algorithm>
#include <cmath>

#include "flvg/media_json.hpp"

namespace flvg::deepfake {

using media::FacialMedia;
using media::Frame;
using media::SynthesisCategory;
using nlohmann::json;

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

MethodProfile preset(std::string name, SynthesisCategory category, double fidelity, double base, double gain, bool adversarial,
                     double discount) {
    return {std::move(name), category, fidelity, base, gain, adversarial, discount};
}

}  // namespace

void validate(const MethodProfile& m) {
    if (m.name.empty()) throw MethodError("method needs a name");
    auto unit = [&](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) throw MethodError(m.name + ": " + field + " outside [0,1]");
    };
    unit(m.identity_fidelity, "identity_fidelity");
    unit(m.base_artifact, "base_artifact");
    if (!(m.motion_artifact_gain >= 0.0) || !std::isfinite(m.motion_artifact_gain)) throw MethodError(m.name + ": negative motion_artifact_gain");
    if (!(m.adversarial_discount >= 0.0 && m.adversarial_discount < 1.0)) throw MethodError(m.name + ": adversarial_discount outside [0,1)");
}

const std::vector<MethodProfile>& method_presets() {
    using enum SynthesisCategory;
    static const std::vector<MethodProfile> presets{
        preset("X2Face", Reenactment, 0.70, 0.60, 0.6, false, 0.15),
        preset("ICface", Reenactment, 0.55, 0.65, 0.6, false, 0.15),
        preset("FSGAN_S", Swap, 0.85, 0.45, 0.4, false, 0.15),
        preset("FSGAN_R", Reenactment, 0.80, 0.50, 0.5, false, 0.15),
        preset("FOMM", Reenactment, 0.92, 0.35, 0.5, false, 0.15),
        preset("FaceShifter", Swap, 0.90, 0.25, 0.3, true, 0.20),
    };
    return presets;
}

const MethodProfile& method_preset(std::string_view name) {
    for (const auto& m : method_presets()) {
        if (m.name == name) return m;
    }
    throw MethodError("unknown deepfake method " + std::string(name));
}

double motion(const media::HeadPose& from, const media::HeadPose& to) {
    const double dy = to.yaw - from.yaw;
    const double dp = to.pitch - from.pitch;
    const double dr = to.roll - from.roll;
    return clamp01(std::sqrt(dy * dy + dp * dp + dr * dr) / 90.0);
}

double raw_artifact(const MethodProfile& m, double motion) {
    return m.base_artifact + m.motion_artifact_gain * motion - (m.adversarial ? m.adversarial_discount : 0.0);
}

double artifact(const MethodProfile& m, double motion) { return clamp01(raw_artifact(m, motion)); }

FacialMedia synthesize(const FacialMedia& target, const FacialMedia& driving, const MethodProfile& method) {
    validate(method);
    if (target.kind() != media::MediaKind::Image) throw MethodError("synthesize: target must be an image");
    if (driving.kind() != media::MediaKind::Video || driving.size() == 0) throw MethodError("synthesize: driving must be a non-empty video");
    if (target.identity_dim() != driving.identity_dim()) throw MethodError("synthesize: identity dimension mismatch");

    const Frame& t = target.frames().front();
    const bool swap = method.category == SynthesisCategory::Swap;
    const auto& src = driving.frames();
    std::vector<Frame> out;
    out.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const Frame& d = src[i];
        Frame f = d;  // pose, lips, clip id and sequence index always follow the driving frame
        f.identity = media::blend(t.identity, d.identity, method.identity_fidelity);
        if (!swap) {
            f.env = t.env;
            f.replay_score = 0.0;
        }
        f.artifact_score = artifact(method, i == 0 ? 0.0 : motion(src[i - 1].head_pose, d.head_pose));
        f.quality = clamp01((swap ? d.quality : t.quality) - f.artifact_score / 2.0);
        out.push_back(std::move(f));
    }
    return FacialMedia::video(std::move(out), driving.audio(), media::Provenance::synthesized(method.name, method.category));
}

FacialMedia synthesize_for_voice(const FacialMedia& target, const FacialMedia& driving, const MethodProfile& method,
                                 std::span<const int> digits, bool matched_lips) {
    FacialMedia voiced = media::import_audio(synthesize(target, driving, method), digits);
    return matched_lips ? media::set_matched_lips(voiced, digits) : voiced;
}

FacialMedia synthesize_for_action(const FacialMedia& target, const ActionClips& clips, std::span<const vendor::Action> challenge,
                                  const MethodProfile& method) {
    if (challenge.empty()) throw MethodError("synthesize_for_action: empty challenge");
    std::vector<FacialMedia> ordered;
    ordered.reserve(challenge.size());
    for (vendor::Action a : challenge) {
        auto it = clips.find(a);
        if (it == clips.end()) throw MethodError(std::string("synthesize_for_action: no clip for ") + vendor::to_string(a));
        ordered.push_back(it->second);
    }
    return synthesize(target, media::stitch_clips(ordered), method);
}

json to_json(const MethodProfile& m) {
    return json{{"name", m.name},
                {"category", media::to_string(m.category)},
                {"identity_fidelity", m.identity_fidelity},
                {"base_artifact", m.base_artifact},
                {"motion_artifact_gain", m.motion_artifact_gain},
                {"adversarial", m.adversarial},
                {"adversarial_discount", m.adversarial_discount}};
}

MethodProfile method_from_json(const json& j) {
    if (j.is_string()) return method_preset(j.get<std::string>());
    if (!j.is_object()) throw MethodError("method must be a preset name or an object");
    try {
        media::reject_unknown_fields(j,
                                     {"preset", "name", "category", "identity_fidelity", "base_artifact", "motion_artifact_gain",
                                      "adversarial", "adversarial_discount"},
                                     "method");
        MethodProfile m;
        if (j.contains("preset")) {
            m = method_preset(j["preset"].get<std::string>());
        } else if (!j.contains("name") || !j.contains("category")) {
            throw MethodError("method needs either a preset or name + category");
        }
        if (j.contains("name")) m.name = j["name"].get<std::string>();
        if (j.contains("category")) m.category = media::category_from_string(j["category"].get<std::string>());
        if (j.contains("identity_fidelity")) m.identity_fidelity = j["identity_fidelity"].get<double>();
        if (j.contains("base_artifact")) m.base_artifact = j["base_artifact"].get<double>();
        if (j.contains("motion_artifact_gain")) m.motion_artifact_gain = j["motion_artifact_gain"].get<double>();
        if (j.contains("adversarial")) m.adversarial = j["adversarial"].get<bool>();
        if (j.contains("adversarial_discount")) m.adversarial_discount = j["adversarial_discount"].get<double>();
        validate(m);
        return m;
    } catch (const json::exception& e) {
        throw MethodError(std::string("method: ") + e.what());
    } catch (const media::MediaError& e) {
        throw MethodError(e.what());
    }
}

std::vector<MethodProfile> methods_from_json(const json& j) {
    if (!j.is_array()) throw MethodError("methods must be an array");
    std::vector<MethodProfile> out;
    for (const json& item : j) out.push_back(method_from_json(item));
    return out;
}

}  // namespace flvg::deepfake
