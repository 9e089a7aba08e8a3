#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace flvg::vendor {

enum class FlvType { Image, Silence, Voice, Action };
inline constexpr FlvType kAllFlvTypes[] = {FlvType::Image, FlvType::Silence, FlvType::Voice, FlvType::Action};

enum class Action { Blink, OpenMouth, TurnLeft, TurnRight, LookUp, ChinDown, TurnRightAndLeft };
inline constexpr Action kAllActions[] = {Action::Blink,  Action::OpenMouth, Action::TurnLeft,        Action::TurnRight,
                                         Action::LookUp, Action::ChinDown,  Action::TurnRightAndLeft};

enum class LipLanguage { None, MovementOnly, FullMatch };

class ProfileError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct IntRange {
    int lo = 0;
    int hi = 0;

    bool contains(int v) const { return v >= lo && v <= hi; }
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct Thresholds {
    double replay = 0.5;
    double deepfake = 0.5;
    double face_match = 0.8;
    double quality = 0.3;
    double lip_movement = 0.01;

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

/// Acceptable capture conditions of the test frame. Images shot too dark, too
/// bright or at a strong posture angle are rejected by liveness detection.
struct CaptureEnvelope {
    double min_brightness = 0.2;
    double max_brightness = 0.9;
    double max_abs_posture = 30.0;

    friend bool operator==(const CaptureEnvelope&, const CaptureEnvelope&) = default;
};

/// What a vendor publishes about its API. Coherence detection is never
/// documented, so it has no entry here.
struct DeclaredFeatures {
    std::string name;
    std::set<FlvType> supported_types;
    std::optional<IntRange> voice_code_length_range;
    std::optional<int> default_code_length;
    std::vector<Action> action_set;
    std::optional<IntRange> action_length_range;
    LipLanguage lip_language = LipLanguage::None;
    bool anti_deepfake = false;
    bool replay_detection = false;

    friend bool operator==(const DeclaredFeatures&, const DeclaredFeatures&) = default;
};

/// A vendor's real configuration, including the hidden defense stack.
struct VendorProfile {
    std::string name;
    std::set<FlvType> supported_types;
    std::optional<IntRange> voice_code_length_range;
    std::optional<int> default_code_length;
    std::vector<Action> action_set;
    std::optional<IntRange> action_length_range;
    LipLanguage lip_language = LipLanguage::None;
    bool coherence_detection = false;
    bool anti_deepfake = false;
    bool replay_detection = true;
    Thresholds thresholds;
    /// When set, the deepfake detector only flags mean artifact scores in
    /// (thresholds.deepfake, deepfake_band_upper]; stronger artifacts slip through.
    std::optional<double> deepfake_band_upper;
    CaptureEnvelope capture;
    std::chrono::seconds session_ttl{60};
    /// Public declaration when it differs from the real configuration.
    std::optional<DeclaredFeatures> declared_override;

    bool supports(FlvType t) const { return supported_types.contains(t); }

    /// Public declaration: the override when present, else the truthful one.
    DeclaredFeatures declared() const;

    friend bool operator==(const VendorProfile&, const VendorProfile&) = default;
};

/// Throws ProfileError on a violated invariant.
void validate(const VendorProfile& profile);

/// Default profile: every FLV type and every detection enabled.
VendorProfile default_profile();

/// Built-in presets modeled on the surveyed cloud vendors: BD, TC, HW, CW, ST, iFT.
const std::vector<VendorProfile>& vendor_presets();
const VendorProfile& vendor_preset(std::string_view name);

const char* to_string(FlvType t);
const char* to_string(Action a);
const char* to_string(LipLanguage l);
FlvType flv_type_from_string(std::string_view s);
Action action_from_string(std::string_view s);
LipLanguage lip_language_from_string(std::string_view s);

nlohmann::json to_json(const DeclaredFeatures& d);
DeclaredFeatures declared_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VendorProfile& p);

/// Parses a profile document. A `preset` key starts from the named built-in
/// profile and applies the remaining keys as overrides; a `declared` block
/// overrides individual fields of the public declaration.
VendorProfile profile_from_json(const nlohmann::json& j);

}  // namespace flvg::vendor
