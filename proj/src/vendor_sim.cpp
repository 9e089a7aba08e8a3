#include "flvg/vendor_sim.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>

#include "flvg/rng.hpp"

namespace flvg::vendor {

using media::FacialMedia;
using media::Frame;
using nlohmann::json;

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedMedia: return 400;
        case ErrorCode::UnknownSession: return 404;
        case ErrorCode::ExpiredSession: return 410;
        case ErrorCode::UnsupportedType: return 422;
        case ErrorCode::BadRequest: return 400;
    }
    return 500;
}

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedMedia: return "malformed_media";
        case ErrorCode::UnknownSession: return "unknown_session";
        case ErrorCode::ExpiredSession: return "expired_session";
        case ErrorCode::UnsupportedType: return "unsupported_type";
        case ErrorCode::BadRequest: return "bad_request";
    }
    return "?";
}

namespace {

using Sig = ActionSignature;

const std::array<ActionSignature, 7> kSignatures{{
    {Action::Blink, Sig::Channel::Roll, Sig::Direction::AtMost, -10.0},
    {Action::OpenMouth, Sig::Channel::LipOpenness, Sig::Direction::AtLeast, 0.5},
    {Action::TurnLeft, Sig::Channel::Yaw, Sig::Direction::AtMost, -20.0},
    {Action::TurnRight, Sig::Channel::Yaw, Sig::Direction::AtLeast, 20.0},
    {Action::LookUp, Sig::Channel::Pitch, Sig::Direction::AtLeast, 15.0},
    {Action::ChinDown, Sig::Channel::Pitch, Sig::Direction::AtMost, -15.0},
    {Action::TurnRightAndLeft, Sig::Channel::Yaw, Sig::Direction::BothExtremes, 20.0},
}};

double channel_value(const Frame& f, Sig::Channel channel) {
    switch (channel) {
        case Sig::Channel::Yaw: return f.head_pose.yaw;
        case Sig::Channel::Pitch: return f.head_pose.pitch;
        case Sig::Channel::Roll: return f.head_pose.roll;
        case Sig::Channel::LipOpenness: return f.lip_openness;
    }
    return 0.0;
}

bool extremes_satisfy(const Sig& sig, double lo, double hi) {
    switch (sig.direction) {
        case Sig::Direction::AtMost: return lo <= sig.threshold;
        case Sig::Direction::AtLeast: return hi >= sig.threshold;
        case Sig::Direction::BothExtremes: return hi >= sig.threshold && lo <= -sig.threshold;
    }
    return false;
}

std::string hex_id(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "s-%016llx", static_cast<unsigned long long>(v));
    return buf;
}

int challenge_length(const IntRange& range, std::optional<int> length, Rng& rng, const char* what) {
    if (length) {
        if (!range.contains(*length)) {
            throw VerifyError(ErrorCode::BadRequest, std::string(what) + " length " + std::to_string(*length) + " outside the supported range");
        }
        return *length;
    }
    return static_cast<int>(rng.uniform_int(range.lo, range.hi));
}

}  // namespace

bool ActionSignature::satisfied_by(std::span<const Frame> window) const {
    if (window.empty()) return false;
    double lo = channel_value(window.front(), channel);
    double hi = lo;
    for (const Frame& f : window) {
        const double v = channel_value(f, channel);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return extremes_satisfy(*this, lo, hi);
}

const ActionSignature& signature(Action action) {
    for (const auto& s : kSignatures) {
        if (s.action == action) return s;
    }
    throw ProfileError("action without a signature");
}

VoiceCheck check_voice_requirement(const VendorProfile& profile, const FacialMedia& media, std::span<const int> digits) {
    if (!media.audio()) throw VerifyError(ErrorCode::MalformedMedia, "voice requirement: media has no audio track");
    const media::AudioTrack& audio = *media.audio();
    VoiceCheck check;
    check.tokens_match = std::equal(audio.tokens.begin(), audio.tokens.end(), digits.begin(), digits.end());

    const auto& frames = media.frames();
    const double mean = std::accumulate(frames.begin(), frames.end(), 0.0, [](double acc, const Frame& f) { return acc + f.lip_openness; }) /
                        static_cast<double>(frames.size());
    double var = 0.0;
    for (const Frame& f : frames) var += (f.lip_openness - mean) * (f.lip_openness - mean);
    check.lip_variance = var / static_cast<double>(frames.size());

    check.min_span_match = audio.spans.empty() ? 0.0 : 1.0;
    bool majority_everywhere = !audio.spans.empty();
    for (std::size_t k = 0; k < audio.spans.size(); ++k) {
        const media::Span& span = audio.spans[k];
        std::size_t hits = 0;
        for (std::size_t i = span.begin; i < span.end; ++i) {
            if (frames[i].lip_pattern == audio.tokens[k]) ++hits;
        }
        const std::size_t len = span.end - span.begin;
        check.min_span_match = std::min(check.min_span_match, static_cast<double>(hits) / static_cast<double>(len));
        if (2 * hits <= len) majority_everywhere = false;
    }

    switch (profile.lip_language) {
        case LipLanguage::None: check.lips_ok = true; break;
        case LipLanguage::MovementOnly: check.lips_ok = check.lip_variance > profile.thresholds.lip_movement; break;
        case LipLanguage::FullMatch: check.lips_ok = majority_everywhere; break;
    }
    check.pass = check.tokens_match && check.lips_ok;
    return check;
}

bool check_action_requirement(const FacialMedia& media, std::span<const Action> actions) {
    if (actions.empty()) throw VerifyError(ErrorCode::BadRequest, "action requirement: empty action list");
    const auto& frames = media.frames();
    std::size_t start = 0;
    for (Action action : actions) {
        const ActionSignature& sig = signature(action);
        bool found = false;
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = start; i < frames.size(); ++i) {
            const double v = channel_value(frames[i], sig.channel);
            lo = i == start ? v : std::min(lo, v);
            hi = i == start ? v : std::max(hi, v);
            if (extremes_satisfy(sig, lo, hi)) {
                start = i + 1;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool check_coherence(const FacialMedia& media) {
    const auto& frames = media.frames();
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].source_clip_id != frames[i - 1].source_clip_id) return false;
        if (frames[i].seq_index != frames[i - 1].seq_index + 1) return false;
    }
    return true;
}

FaceMatch face_match(const Frame& test_frame, const media::IdentityVector& reference, double threshold) {
    if (test_frame.identity.dim() != reference.dim()) throw VerifyError(ErrorCode::MalformedMedia, "face match: identity dimension mismatch");
    const double score = test_frame.identity.cosine(reference);
    return {score >= threshold, score};
}

std::size_t select_test_frame(const FacialMedia& media) {
    const auto& frames = media.frames();
    std::vector<double> qualities;
    qualities.reserve(frames.size());
    for (const Frame& f : frames) qualities.push_back(f.quality);
    std::vector<double> sorted = qualities;
    const std::size_t mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    const double median = sorted[mid];
    return static_cast<std::size_t>(std::find(qualities.begin(), qualities.end(), median) - qualities.begin());
}

ChallengeSession issue_challenge(const VendorProfile& profile, FlvType type, std::uint64_t seed, std::optional<int> length,
                                 Clock::time_point now) {
    if (type != FlvType::Voice && type != FlvType::Action) {
        throw VerifyError(ErrorCode::UnsupportedType, std::string(to_string(type)) + " FLV issues no challenge");
    }
    if (!profile.supports(type)) throw VerifyError(ErrorCode::UnsupportedType, profile.name + " does not offer " + to_string(type) + " FLV");

    Rng rng(seed, 0xc4a1);
    ChallengeSession session;
    session.session_id = hex_id(rng.next_u64());
    session.flv_type = type;
    session.issued_at = now;
    session.ttl = profile.session_ttl;
    if (type == FlvType::Voice) {
        const int n = challenge_length(*profile.voice_code_length_range, length ? length : profile.default_code_length, rng, "voice code");
        std::vector<int> digits(static_cast<std::size_t>(n));
        for (int& d : digits) d = static_cast<int>(rng.uniform_int(0, 9));
        session.challenge = std::move(digits);
    } else {
        const int n = challenge_length(*profile.action_length_range, length, rng, "action sequence");
        std::vector<Action> actions(static_cast<std::size_t>(n));
        for (Action& a : actions) a = profile.action_set[rng.index(profile.action_set.size())];
        session.challenge = std::move(actions);
    }
    return session;
}

VerificationOutcome verify(const VendorProfile& profile, FlvType type, const FacialMedia& media, const media::IdentityVector& reference,
                           const ChallengeSession* session, Clock::time_point now) {
    if (!profile.supports(type)) throw VerifyError(ErrorCode::UnsupportedType, profile.name + " does not offer " + to_string(type) + " FLV");
    if ((type == FlvType::Image) != (media.kind() == media::MediaKind::Image)) {
        throw VerifyError(ErrorCode::MalformedMedia, std::string(to_string(type)) + " FLV expects " + (type == FlvType::Image ? "an image" : "a video"));
    }
    if (media.identity_dim() != reference.dim()) throw VerifyError(ErrorCode::MalformedMedia, "reference identity dimension mismatch");
    const bool challenged = type == FlvType::Voice || type == FlvType::Action;
    if (challenged) {
        if (session == nullptr) throw VerifyError(ErrorCode::UnknownSession, "a challenge session is required");
        if (session->flv_type != type) throw VerifyError(ErrorCode::UnknownSession, "session was issued for another FLV type");
        if (session->expired(now)) throw VerifyError(ErrorCode::ExpiredSession, "session expired");
    }

    VerificationOutcome out;
    auto& scores = out.stage_scores;

    // (a) voice/action requirement
    if (type == FlvType::Voice) {
        try {
            const VoiceCheck vc = check_voice_requirement(profile, media, session->digits());
            out.requirement_met = vc.pass;
            scores["lip_variance"] = vc.lip_variance;
            scores["lip_span_match"] = vc.min_span_match;
            scores["tokens_match"] = vc.tokens_match ? 1.0 : 0.0;
        } catch (const VerifyError&) {
            out.requirement_met = false;  // nothing was spoken
            scores["tokens_match"] = 0.0;
        }
    } else if (type == FlvType::Action) {
        out.requirement_met = check_action_requirement(media, session->actions());
    }
    scores["requirement"] = out.requirement_met ? 1.0 : 0.0;

    // (b) presentation attack, capture quality and coherence
    out.test_frame_index = select_test_frame(media);
    const Frame& test = media.frames()[out.test_frame_index];
    double replay_max = 0.0;
    double artifact_sum = 0.0;
    for (const Frame& f : media.frames()) {
        replay_max = std::max(replay_max, f.replay_score);
        artifact_sum += f.artifact_score;
    }
    const bool coherent = check_coherence(media);
    const CaptureEnvelope& env = profile.capture;
    const bool replay_ok = !profile.replay_detection || replay_max <= profile.thresholds.replay;
    const bool quality_ok = test.quality >= profile.thresholds.quality;
    const bool capture_ok = test.env.brightness >= env.min_brightness && test.env.brightness <= env.max_brightness &&
                            std::abs(test.env.posture_bias) <= env.max_abs_posture;
    const bool coherence_ok = !profile.coherence_detection || coherent;
    out.liveness_pass = replay_ok && quality_ok && capture_ok && coherence_ok;
    scores["replay_max"] = replay_max;
    scores["test_quality"] = test.quality;
    scores["brightness"] = test.env.brightness;
    scores["posture_bias"] = test.env.posture_bias;
    scores["coherence"] = coherent ? 1.0 : 0.0;

    // (c) anti-deepfake
    const double artifact_mean = artifact_sum / static_cast<double>(media.size());
    scores["artifact_mean"] = artifact_mean;
    if (profile.anti_deepfake) {
        bool flagged = artifact_mean > profile.thresholds.deepfake;
        if (profile.deepfake_band_upper) flagged = flagged && artifact_mean <= *profile.deepfake_band_upper;
        out.anti_deepfake_pass = !flagged;
    }

    // (d) face matching on the test frame
    const FaceMatch fm = face_match(test, reference, profile.thresholds.face_match);
    out.face_match_pass = fm.pass;
    out.face_match_score = fm.score;
    scores["face_match"] = fm.score;
    return out;
}

json to_json(const VerificationOutcome& o) {
    json scores = json::object();
    for (const auto& [k, v] : o.stage_scores) scores[k] = v;
    return json{{"requirement_met", o.requirement_met},
                {"liveness_pass", o.liveness_pass},
                {"anti_deepfake_pass", o.anti_deepfake_pass ? json(*o.anti_deepfake_pass) : json(nullptr)},
                {"face_match_pass", o.face_match_pass ? json(*o.face_match_pass) : json(nullptr)},
                {"face_match_score", o.face_match_score},
                {"test_frame_index", o.test_frame_index},
                {"stage_scores", std::move(scores)}};
}

VerificationOutcome outcome_from_json(const json& j) {
    VerificationOutcome o;
    o.requirement_met = j.at("requirement_met").get<bool>();
    o.liveness_pass = j.at("liveness_pass").get<bool>();
    if (const json& a = j.at("anti_deepfake_pass"); !a.is_null()) o.anti_deepfake_pass = a.get<bool>();
    if (const json& f = j.at("face_match_pass"); !f.is_null()) o.face_match_pass = f.get<bool>();
    o.face_match_score = j.at("face_match_score").get<double>();
    o.test_frame_index = j.at("test_frame_index").get<std::size_t>();
    for (const auto& [k, v] : j.at("stage_scores").items()) o.stage_scores[k] = v.get<double>();
    return o;
}

json challenge_to_json(const Challenge& challenge) {
    if (const auto* digits = std::get_if<std::vector<int>>(&challenge)) return json(*digits);
    json out = json::array();
    for (Action a : std::get<std::vector<Action>>(challenge)) out.push_back(to_string(a));
    return out;
}

Challenge challenge_from_json(const json& j, FlvType type) {
    if (!j.is_array()) throw VerifyError(ErrorCode::BadRequest, "challenge must be an array");
    if (type == FlvType::Voice) return j.get<std::vector<int>>();
    std::vector<Action> actions;
    for (const json& a : j) actions.push_back(action_from_string(a.get<std::string>()));
    return actions;
}

}  // namespace flvg::vendor
