#pragma once

// Simulated FLV verification pipeline. Everything in this header is a pure
// function of its arguments; mutable session bookkeeping lives in
// vendor_service.hpp.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/media.hpp"
#include "flvg/vendor_profile.hpp"

namespace flvg::vendor {

using Clock = std::chrono::steady_clock;

enum class ErrorCode { MalformedMedia, UnknownSession, ExpiredSession, UnsupportedType, BadRequest };

/// Maps to an HTTP status: 400, 404, 410, 422, 400.
int http_status(ErrorCode code);
const char* to_string(ErrorCode code);

class VerifyError : public std::runtime_error {
public:
    VerifyError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

using Challenge = std::variant<std::vector<int>, std::vector<Action>>;

struct ChallengeSession {
    std::string session_id;
    FlvType flv_type = FlvType::Voice;
    Challenge challenge;
    Clock::time_point issued_at{};
    std::chrono::seconds ttl{60};

    const std::vector<int>& digits() const { return std::get<std::vector<int>>(challenge); }
    const std::vector<Action>& actions() const { return std::get<std::vector<Action>>(challenge); }
    bool expired(Clock::time_point now) const { return now >= issued_at + ttl; }
};

struct VerificationOutcome {
    bool requirement_met = true;
    bool liveness_pass = false;
    std::optional<bool> anti_deepfake_pass;
    std::optional<bool> face_match_pass;
    double face_match_score = 0.0;
    std::size_t test_frame_index = 0;
    std::map<std::string, double> stage_scores;

    /// Passed every stage the vendor runs.
    bool overall_pass() const {
        return requirement_met && liveness_pass && anti_deepfake_pass.value_or(true) && face_match_pass.value_or(false);
    }

    friend bool operator==(const VerificationOutcome&, const VerificationOutcome&) = default;
};

nlohmann::json to_json(const VerificationOutcome& outcome);
VerificationOutcome outcome_from_json(const nlohmann::json& j);
nlohmann::json challenge_to_json(const Challenge& challenge);
Challenge challenge_from_json(const nlohmann::json& j, FlvType type);

/// Kinematic definition of one action, evaluated over a window of frames.
struct ActionSignature {
    enum class Channel { Yaw, Pitch, Roll, LipOpenness };
    enum class Direction { AtMost, AtLeast, BothExtremes };

    Action action;
    Channel channel;
    Direction direction;
    double threshold;  // degrees, or openness for LipOpenness

    bool satisfied_by(std::span<const media::Frame> window) const;
};

const ActionSignature& signature(Action action);

struct VoiceCheck {
    bool pass = false;
    bool tokens_match = false;
    bool lips_ok = false;
    double lip_variance = 0.0;
    double min_span_match = 0.0;  // worst per-span fraction of frames mouthing the token
};

/// Throws VerifyError(MalformedMedia) when the media has no audio.
VoiceCheck check_voice_requirement(const VendorProfile& profile, const media::FacialMedia& media, std::span<const int> digits);

/// True iff disjoint, ordered frame windows satisfy each action in turn.
/// Throws VerifyError(BadRequest) for an empty action list.
bool check_action_requirement(const media::FacialMedia& media, std::span<const Action> actions);

/// True iff all adjacent frames come from the same clip with consecutive indices.
bool check_coherence(const media::FacialMedia& media);

struct FaceMatch {
    bool pass = false;
    double score = 0.0;
};

FaceMatch face_match(const media::Frame& test_frame, const media::IdentityVector& reference, double threshold);

/// Median-quality frame (lower median), lowest index among equal qualities.
std::size_t select_test_frame(const media::FacialMedia& media);

/// Deterministic challenge for `seed`. `length` pins the challenge length and
/// must lie within the profile's range.
ChallengeSession issue_challenge(const VendorProfile& profile, FlvType type, std::uint64_t seed,
                                 std::optional<int> length = std::nullopt, Clock::time_point now = {});

/// Runs every stage and reports all of them, even after an earlier failure.
VerificationOutcome verify(const VendorProfile& profile, FlvType type, const media::FacialMedia& media,
                           const media::IdentityVector& reference, const ChallengeSession* session = nullptr,
                           Clock::time_point now = {});

}  // namespace flvg::vendor
