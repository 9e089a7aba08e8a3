#include "flvg/media_json.hpp"

#include <algorithm>
#include <string>

namespace flvg::media {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, std::string_view where) {
    auto it = j.find(key);
    if (it == j.end()) throw MediaError(std::string(where) + ": missing field '" + key + "'");
    return *it;
}

double number(const json& j, const char* key, std::string_view where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) throw MediaError(std::string(where) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

json pose_to_json(const HeadPose& p) { return json{{"yaw", p.yaw}, {"pitch", p.pitch}, {"roll", p.roll}}; }

HeadPose pose_from_json(const json& j) {
    if (!j.is_object()) throw MediaError("head_pose must be an object");
    reject_unknown_fields(j, {"yaw", "pitch", "roll"}, "head_pose");
    return {number(j, "yaw", "head_pose"), number(j, "pitch", "head_pose"), number(j, "roll", "head_pose")};
}

json env_to_json(const EnvironmentAttrs& e) {
    return json{{"brightness", e.brightness}, {"posture_bias", e.posture_bias}, {"scene_tag", to_string(e.scene_tag)}};
}

EnvironmentAttrs env_from_json(const json& j) {
    if (!j.is_object()) throw MediaError("env must be an object");
    reject_unknown_fields(j, {"brightness", "posture_bias", "scene_tag"}, "env");
    const json& tag = require(j, "scene_tag", "env");
    if (!tag.is_string()) throw MediaError("env: scene_tag must be a string");
    return {number(j, "brightness", "env"), number(j, "posture_bias", "env"), scene_tag_from_string(tag.get<std::string>())};
}

json provenance_to_json(const Provenance& p) {
    json j{{"type", to_string(p.kind)}};
    if (p.kind == Provenance::Kind::Synthesized) {
        j["method"] = p.method;
        j["category"] = to_string(p.category);
    }
    return j;
}

Provenance provenance_from_json(const json& j) {
    if (!j.is_object()) throw MediaError("provenance must be an object");
    const json& type = require(j, "type", "provenance");
    if (!type.is_string()) throw MediaError("provenance: type must be a string");
    const auto t = type.get<std::string>();
    if (t == "Genuine" || t == "Replayed") {
        reject_unknown_fields(j, {"type"}, "provenance");
        return t == "Genuine" ? Provenance::genuine() : Provenance::replayed();
    }
    if (t == "Synthesized") {
        reject_unknown_fields(j, {"type", "method", "category"}, "provenance");
        const json& method = require(j, "method", "provenance");
        const json& category = require(j, "category", "provenance");
        if (!method.is_string() || !category.is_string()) throw MediaError("provenance: method/category must be strings");
        return Provenance::synthesized(method.get<std::string>(), category_from_string(category.get<std::string>()));
    }
    throw MediaError("provenance: unknown type '" + t + "'");
}

json audio_to_json(const AudioTrack& a) {
    json spans = json::array();
    for (const Span& s : a.spans) spans.push_back(json::array({s.begin, s.end}));
    return json{{"tokens", a.tokens}, {"spans", std::move(spans)}};
}

AudioTrack audio_from_json(const json& j) {
    if (!j.is_object()) throw MediaError("audio must be an object or null");
    reject_unknown_fields(j, {"tokens", "spans"}, "audio");
    const json& tokens = require(j, "tokens", "audio");
    const json& spans = require(j, "spans", "audio");
    if (!tokens.is_array() || !spans.is_array()) throw MediaError("audio: tokens and spans must be arrays");
    AudioTrack audio;
    for (const json& t : tokens) {
        if (!t.is_number_integer()) throw MediaError("audio: tokens must be integers");
        audio.tokens.push_back(t.get<int>());
    }
    for (const json& s : spans) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned()) {
            throw MediaError("audio: each span is a [begin, end) pair of non-negative integers");
        }
        audio.spans.push_back({s[0].get<std::size_t>(), s[1].get<std::size_t>()});
    }
    return audio;
}

}  // namespace

void reject_unknown_fields(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw MediaError(std::string(where) + ": unknown field '" + it.key() + "'");
        }
    }
}

SceneTag scene_tag_from_string(std::string_view s) {
    for (SceneTag tag : kAllSceneTags) {
        if (s == to_string(tag)) return tag;
    }
    throw MediaError("unknown scene_tag '" + std::string(s) + "'");
}

SynthesisCategory category_from_string(std::string_view s) {
    if (s == "Swap") return SynthesisCategory::Swap;
    if (s == "Reenactment") return SynthesisCategory::Reenactment;
    throw MediaError("unknown synthesis category '" + std::string(s) + "'");
}

json to_json(const IdentityVector& identity) {
    return json(std::vector<double>(identity.components().begin(), identity.components().end()));
}

IdentityVector identity_from_json(const json& j) {
    if (!j.is_array()) throw MediaError("identity must be an array of numbers");
    std::vector<double> components;
    components.reserve(j.size());
    for (const json& c : j) {
        if (!c.is_number()) throw MediaError("identity must be an array of numbers");
        components.push_back(c.get<double>());
    }
    return IdentityVector(std::move(components));
}

json to_json(const Frame& f) {
    return json{{"identity", to_json(f.identity)},
                {"env", env_to_json(f.env)},
                {"source_clip_id", f.source_clip_id},
                {"seq_index", f.seq_index},
                {"head_pose", pose_to_json(f.head_pose)},
                {"lip_openness", f.lip_openness},
                {"lip_pattern", f.lip_pattern ? json(*f.lip_pattern) : json(nullptr)},
                {"artifact_score", f.artifact_score},
                {"replay_score", f.replay_score},
                {"quality", f.quality}};
}

Frame frame_from_json(const json& j) {
    constexpr std::string_view where = "frame";
    if (!j.is_object()) throw MediaError("frame must be an object");
    reject_unknown_fields(j,
                          {"identity", "env", "source_clip_id", "seq_index", "head_pose", "lip_openness", "lip_pattern",
                           "artifact_score", "replay_score", "quality"},
                          where);
    const json& clip = require(j, "source_clip_id", where);
    if (!clip.is_string()) throw MediaError("frame: source_clip_id must be a string");
    const json& seq = require(j, "seq_index", where);
    if (!seq.is_number_unsigned()) throw MediaError("frame: seq_index must be a non-negative integer");
    const json& pattern = require(j, "lip_pattern", where);
    std::optional<int> lip_pattern;
    if (!pattern.is_null()) {
        if (!pattern.is_number_integer()) throw MediaError("frame: lip_pattern must be an integer or null");
        lip_pattern = pattern.get<int>();
    }
    Frame f{.identity = identity_from_json(require(j, "identity", where)),
            .env = env_from_json(require(j, "env", where)),
            .source_clip_id = clip.get<std::string>(),
            .seq_index = seq.get<std::uint32_t>(),
            .head_pose = pose_from_json(require(j, "head_pose", where)),
            .lip_openness = number(j, "lip_openness", where),
            .lip_pattern = lip_pattern,
            .artifact_score = number(j, "artifact_score", where),
            .replay_score = number(j, "replay_score", where),
            .quality = number(j, "quality", where)};
    validate_frame(f);
    return f;
}

json to_json(const FacialMedia& media) {
    json frames = json::array();
    for (const Frame& f : media.frames()) frames.push_back(to_json(f));
    return json{{"version", kMediaFormatVersion},
                {"kind", to_string(media.kind())},
                {"provenance", provenance_to_json(media.provenance())},
                {"frames", std::move(frames)},
                {"audio", media.audio() ? audio_to_json(*media.audio()) : json(nullptr)}};
}

FacialMedia media_from_json(const json& j) {
    constexpr std::string_view where = "media";
    if (!j.is_object()) throw MediaError("media must be an object");
    reject_unknown_fields(j, {"version", "kind", "provenance", "frames", "audio"}, where);
    const json& version = require(j, "version", where);
    if (!version.is_number_integer() || version.get<int>() != kMediaFormatVersion) {
        throw MediaError("media: unsupported format version");
    }
    const json& kind = require(j, "kind", where);
    if (!kind.is_string()) throw MediaError("media: kind must be a string");
    const json& frames_json = require(j, "frames", where);
    if (!frames_json.is_array()) throw MediaError("media: frames must be an array");
    std::vector<Frame> frames;
    frames.reserve(frames_json.size());
    for (const json& f : frames_json) frames.push_back(frame_from_json(f));
    Provenance provenance = provenance_from_json(require(j, "provenance", where));
    const json& audio = require(j, "audio", where);

    const auto k = kind.get<std::string>();
    if (k == "Image") {
        if (!audio.is_null()) throw MediaError("media: an image cannot carry audio");
        if (frames.size() != 1) throw MediaError("media: an image has exactly one frame");
        return FacialMedia::image(std::move(frames.front()), std::move(provenance));
    }
    if (k == "Video") {
        std::optional<AudioTrack> track;
        if (!audio.is_null()) track = audio_from_json(audio);
        return FacialMedia::video(std::move(frames), std::move(track), std::move(provenance));
    }
    throw MediaError("media: unknown kind '" + k + "'");
}

}  // namespace flvg::media
