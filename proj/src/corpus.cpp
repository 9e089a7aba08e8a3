#include "flvg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "flvg/media_json.hpp"
#include "flvg/rng.hpp"

namespace flvg::harness {

using media::EnvironmentAttrs;
using media::FacialMedia;
using media::Frame;
using media::HeadPose;
using media::IdentityVector;
using nlohmann::json;
using vendor::Action;

namespace {

// Independent random streams, one per kind of asset.
enum Stream : std::uint64_t { kIdentity = 1, kStills, kVideos, kActions, kDrivingImages };

IdentityVector random_identity(Rng& rng, std::size_t dim) {
    std::vector<double> c(dim);
    for (double& x : c) x = rng.normal();
    return IdentityVector::normalized(std::move(c));
}

/// Same person, slightly different appearance: noise of norm about 0.1.
IdentityVector jitter(Rng& rng, const IdentityVector& base) {
    const double sd = 0.1 / std::sqrt(static_cast<double>(base.dim()));
    std::vector<double> c(base.components().begin(), base.components().end());
    for (double& x : c) x += rng.normal(0.0, sd);
    return IdentityVector::normalized(std::move(c));
}

media::SceneTag scene(std::size_t k) { return media::kAllSceneTags[k % std::size(media::kAllSceneTags)]; }

EnvironmentAttrs good_env(Rng& rng, std::size_t k, double brightness_shift = 0.0) {
    return {std::clamp(rng.uniform(0.45, 0.75) + brightness_shift, 0.0, 1.0), rng.uniform(-10.0, 10.0), scene(k)};
}

EnvironmentAttrs bad_env(Rng& rng, std::size_t k) { return {rng.uniform(0.02, 0.12), rng.uniform(-10.0, 10.0), scene(k)}; }

Frame still(const IdentityVector& id, EnvironmentAttrs env, double quality, std::string clip) {
    return Frame{id, env, std::move(clip), 0, HeadPose{}, 0.1, std::nullopt, 0.0, 0.0, quality};
}

struct ClipShape {
    enum Channel { Yaw, Pitch, Roll, Lips } channel;
    double peak;
    bool both_ways = false;
};

ClipShape shape_of(Action a) {
    switch (a) {
        case Action::Blink: return {ClipShape::Roll, -15.0};
        case Action::OpenMouth: return {ClipShape::Lips, 0.8};
        case Action::TurnLeft: return {ClipShape::Yaw, -30.0};
        case Action::TurnRight: return {ClipShape::Yaw, 30.0};
        case Action::LookUp: return {ClipShape::Pitch, 25.0};
        case Action::ChinDown: return {ClipShape::Pitch, -25.0};
        case Action::TurnRightAndLeft: return {ClipShape::Yaw, 30.0, true};
    }
    return {ClipShape::Yaw, 0.0};
}

/// Frames of one performed action: neutral, out to the peak and back.
std::vector<Frame> action_frames(Rng& rng, const IdentityVector& id, Action a, std::size_t count, const EnvironmentAttrs& env) {
    count = std::max<std::size_t>(count, 5);
    const ClipShape s = shape_of(a);
    std::vector<Frame> frames;
    for (std::size_t t = 0; t < count; ++t) {
        // First and last frames stay neutral so clips join without a pose jump.
        const double phase = static_cast<double>(t) / static_cast<double>(count - 1);
        double v = (t == 0 || t + 1 == count) ? 0.0 : std::sin(std::numbers::pi * phase);
        if (s.both_ways) v = (t == 0 || t + 1 == count) ? 0.0 : std::sin(2.0 * std::numbers::pi * phase);
        // The ends of the sine curve fall short of the peak; hold the extreme frames at it.
        if (std::abs(v) > 0.9) v = v > 0 ? 1.0 : -1.0;
        Frame f = still(id, env, rng.uniform(0.7, 0.95), "");
        f.lip_openness = rng.uniform(0.05, 0.3);
        switch (s.channel) {
            case ClipShape::Yaw: f.head_pose.yaw = s.peak * v; break;
            case ClipShape::Pitch: f.head_pose.pitch = s.peak * v; break;
            case ClipShape::Roll: f.head_pose.roll = s.peak * v; break;
            case ClipShape::Lips: f.lip_openness = std::max(f.lip_openness, s.peak * v); break;
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

FacialMedia as_clip(std::vector<Frame> frames, const std::string& clip_id) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frames[i].source_clip_id = clip_id;
        frames[i].seq_index = static_cast<std::uint32_t>(i);
    }
    return FacialMedia::video(std::move(frames));
}

std::string person_id(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%03zu", i);
    return buf;
}

}  // namespace

void validate(const CorpusSpec& s) {
    if (s.identities < 2) throw ConfigError("corpus needs at least two identities");
    if (s.identity_dim < 2) throw ConfigError("identity dimension must be at least 2");
    if (s.frames_per_video.lo < 2 || s.frames_per_video.hi < s.frames_per_video.lo) throw ConfigError("frames_per_video must be [lo, hi] with lo >= 2");
    if (!(s.failing_target_fraction >= 0.0 && s.failing_target_fraction <= 1.0)) throw ConfigError("failing_target_fraction outside [0,1]");
    if (s.groups.empty()) throw ConfigError("corpus needs at least one group tag");
    if (!(s.motion_min_deg >= 0.0 && s.motion_max_deg >= s.motion_min_deg)) throw ConfigError("motion range must satisfy 0 <= min <= max");
    for (const auto& [g, shift] : s.group_brightness_shift) {
        if (std::find(s.groups.begin(), s.groups.end(), g) == s.groups.end()) throw ConfigError("brightness shift for unknown group " + g);
        if (!(std::abs(shift) <= 1.0)) throw ConfigError("brightness shift outside [-1,1]");
    }
}

std::vector<FacialMedia> Corpus::genuine_videos() const {
    std::vector<FacialMedia> out;
    for (const Person& p : persons) out.insert(out.end(), p.videos.begin(), p.videos.end());
    return out;
}

Corpus generate_corpus(const CorpusSpec& spec) {
    validate(spec);
    Corpus corpus{spec, {}};
    const std::size_t total_videos = spec.identities * spec.videos_per_identity;
    for (std::size_t i = 0; i < spec.identities; ++i) {
        const std::uint64_t pseed = mix_seed(spec.seed, i);
        Rng id_rng(pseed, kIdentity);
        Rng still_rng(pseed, kStills);
        Rng video_rng(pseed, kVideos);
        Rng action_rng(pseed, kActions);
        Rng drive_rng(pseed, kDrivingImages);

        const std::string pid = person_id(i);
        const std::string group = spec.groups[i % spec.groups.size()];
        const auto shift_it = spec.group_brightness_shift.find(group);
        const double shift = shift_it == spec.group_brightness_shift.end() ? 0.0 : shift_it->second;
        const IdentityVector base = random_identity(id_rng, spec.identity_dim);

        Person p{pid, group, base,
                 FacialMedia::image(still(jitter(id_rng, base), good_env(still_rng, i, shift), still_rng.uniform(0.75, 0.95), pid + "-ref")),
                 FacialMedia::image(still(jitter(id_rng, base), good_env(still_rng, i + 1, shift), still_rng.uniform(0.75, 0.95), pid + "-tp")),
                 FacialMedia::image(still(jitter(id_rng, base), bad_env(still_rng, i + 2), still_rng.uniform(0.05, 0.2), pid + "-tf")),
                 {}, {}, {}, {}, {}, {}};

        for (std::size_t k = 0; k < spec.targets_per_identity; ++k) {
            // Exact share of failing targets, spread evenly over the whole corpus.
            const double g = static_cast<double>(i * spec.targets_per_identity + k);
            const bool failing = std::floor((g + 1.0) * spec.failing_target_fraction) > std::floor(g * spec.failing_target_fraction);
            const std::string clip = pid + "-t" + std::to_string(k);
            const IdentityVector id = jitter(id_rng, base);
            p.targets.push_back(FacialMedia::image(failing ? still(id, bad_env(still_rng, k), still_rng.uniform(0.05, 0.2), clip)
                                                           : still(id, good_env(still_rng, k, shift), still_rng.uniform(0.75, 0.95), clip)));
            p.target_failing.push_back(failing);
        }

        for (std::size_t v = 0; v < spec.videos_per_identity; ++v) {
            const std::size_t global = i * spec.videos_per_identity + v;
            const std::size_t n = static_cast<std::size_t>(video_rng.uniform_int(spec.frames_per_video.lo, spec.frames_per_video.hi));
            // Stratified motion magnitude: each video gets its own slice of the range.
            const double u = (static_cast<double>(global) + video_rng.uniform()) / static_cast<double>(total_videos);
            const double magnitude = spec.motion_min_deg + (spec.motion_max_deg - spec.motion_min_deg) * u;
            HeadPose dir{video_rng.normal(), video_rng.normal(), video_rng.normal()};
            const double norm = std::sqrt(dir.yaw * dir.yaw + dir.pitch * dir.pitch + dir.roll * dir.roll);
            dir = {dir.yaw / norm, dir.pitch / norm, dir.roll / norm};
            const HeadPose rest{video_rng.uniform(-5.0, 5.0), video_rng.uniform(-3.0, 3.0), video_rng.uniform(-1.0, 1.0)};
            const EnvironmentAttrs env = good_env(video_rng, global);
            const double replay = video_rng.uniform(0.0, 0.1);
            const IdentityVector id = jitter(id_rng, base);
            const std::string clip = pid + "-v" + std::to_string(v);

            std::vector<Frame> frames;
            std::vector<Frame> poor;
            for (std::size_t t = 0; t < n; ++t) {
                const double s = (t % 2 == 0 ? -0.5 : 0.5) * magnitude;
                Frame f = still(id, env, video_rng.uniform(0.7, 0.95), clip);
                f.seq_index = static_cast<std::uint32_t>(t);
                f.head_pose = {rest.yaw + s * dir.yaw, rest.pitch + s * dir.pitch, rest.roll + s * dir.roll};
                f.lip_openness = video_rng.uniform(0.05, 0.45);
                f.replay_score = replay;
                Frame b = f;
                b.source_clip_id = clip + "-poor";
                b.quality = video_rng.uniform(0.05, 0.2);
                frames.push_back(std::move(f));
                poor.push_back(std::move(b));
            }
            const EnvironmentAttrs dark = bad_env(video_rng, global);
            for (Frame& b : poor) b.env = dark;
            p.videos.push_back(FacialMedia::video(std::move(frames)));
            p.failing_videos.push_back(FacialMedia::video(std::move(poor)));
        }

        for (std::size_t k = 0; k < spec.driving_images_per_identity; ++k) {
            p.driving_images.push_back(FacialMedia::image(
                still(jitter(id_rng, base), good_env(drive_rng, k), drive_rng.uniform(0.75, 0.95), pid + "-d" + std::to_string(k))));
        }

        const EnvironmentAttrs action_env = good_env(action_rng, i);
        const IdentityVector action_id = jitter(id_rng, base);
        for (Action a : spec.actions) {
            p.action_clips.emplace(a, as_clip(action_frames(action_rng, action_id, a, spec.action_clip_frames, action_env),
                                              pid + "-a-" + vendor::to_string(a)));
        }
        corpus.persons.push_back(std::move(p));
    }
    return corpus;
}

FacialMedia record_action_video(const Person& person, std::span<const Action> actions, std::uint64_t seed, std::size_t frames_per_action) {
    if (actions.empty()) throw ConfigError("record_action_video: no actions");
    Rng rng(seed, kActions);
    const EnvironmentAttrs env = good_env(rng, seed);
    const IdentityVector id = jitter(rng, person.identity);
    std::vector<Frame> frames;
    for (Action a : actions) {
        auto part = action_frames(rng, id, a, frames_per_action, env);
        frames.insert(frames.end(), part.begin(), part.end());
    }
    return as_clip(std::move(frames), person.id + "-rec-" + std::to_string(seed));
}

json to_json(const CorpusSpec& s) {
    json actions = json::array();
    for (Action a : s.actions) actions.push_back(vendor::to_string(a));
    json shifts = json::object();
    for (const auto& [g, v] : s.group_brightness_shift) shifts[g] = v;
    return json{{"identities", s.identities},
                {"videos_per_identity", s.videos_per_identity},
                {"frames_per_video", {s.frames_per_video.lo, s.frames_per_video.hi}},
                {"targets_per_identity", s.targets_per_identity},
                {"failing_target_fraction", s.failing_target_fraction},
                {"driving_images_per_identity", s.driving_images_per_identity},
                {"actions", std::move(actions)},
                {"action_clip_frames", s.action_clip_frames},
                {"groups", s.groups},
                {"group_brightness_shift", std::move(shifts)},
                {"motion_deg", {s.motion_min_deg, s.motion_max_deg}},
                {"identity_dim", s.identity_dim},
                {"seed", s.seed}};
}

CorpusSpec corpus_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("corpus spec must be an object");
    try {
        media::reject_unknown_fields(j,
                                     {"identities", "videos_per_identity", "frames_per_video", "targets_per_identity", "failing_target_fraction",
                                      "driving_images_per_identity", "actions", "action_clip_frames", "groups", "group_brightness_shift",
                                      "motion_deg", "identity_dim", "seed"},
                                     "corpus");
        CorpusSpec s;
        if (j.contains("identities")) s.identities = j["identities"].get<std::size_t>();
        if (j.contains("videos_per_identity")) s.videos_per_identity = j["videos_per_identity"].get<std::size_t>();
        if (j.contains("frames_per_video")) {
            const auto r = j["frames_per_video"].get<std::vector<int>>();
            if (r.size() != 2) throw ConfigError("frames_per_video must be [lo, hi]");
            s.frames_per_video = {r[0], r[1]};
        }
        if (j.contains("targets_per_identity")) s.targets_per_identity = j["targets_per_identity"].get<std::size_t>();
        if (j.contains("failing_target_fraction")) s.failing_target_fraction = j["failing_target_fraction"].get<double>();
        if (j.contains("driving_images_per_identity")) s.driving_images_per_identity = j["driving_images_per_identity"].get<std::size_t>();
        if (j.contains("actions")) {
            s.actions.clear();
            for (const auto& a : j["actions"]) s.actions.push_back(vendor::action_from_string(a.get<std::string>()));
        }
        if (j.contains("action_clip_frames")) s.action_clip_frames = j["action_clip_frames"].get<std::size_t>();
        if (j.contains("groups")) s.groups = j["groups"].get<std::vector<std::string>>();
        if (j.contains("group_brightness_shift")) s.group_brightness_shift = j["group_brightness_shift"].get<std::map<std::string, double>>();
        if (j.contains("motion_deg")) {
            const auto r = j["motion_deg"].get<std::vector<double>>();
            if (r.size() != 2) throw ConfigError("motion_deg must be [min, max]");
            s.motion_min_deg = r[0];
            s.motion_max_deg = r[1];
        }
        if (j.contains("identity_dim")) s.identity_dim = j["identity_dim"].get<std::size_t>();
        if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
        validate(s);
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("corpus: ") + e.what());
    } catch (const media::MediaError& e) {
        throw ConfigError(e.what());
    } catch (const vendor::ProfileError& e) {
        throw ConfigError(e.what());
    }
}

json to_json(const Corpus& c) {
    json persons = json::array();
    for (const Person& p : c.persons) {
        auto list = [](const std::vector<FacialMedia>& items) {
            json out = json::array();
            for (const auto& m : items) out.push_back(media::to_json(m));
            return out;
        };
        json clips = json::object();
        for (const auto& [a, clip] : p.action_clips) clips[vendor::to_string(a)] = media::to_json(clip);
        persons.push_back({{"id", p.id},
                           {"group", p.group},
                           {"identity", media::to_json(p.identity)},
                           {"reference", media::to_json(p.reference)},
                           {"passing_target", media::to_json(p.passing_target)},
                           {"failing_target", media::to_json(p.failing_target)},
                           {"targets", list(p.targets)},
                           {"target_failing", p.target_failing},
                           {"videos", list(p.videos)},
                           {"failing_videos", list(p.failing_videos)},
                           {"driving_images", list(p.driving_images)},
                           {"action_clips", std::move(clips)}});
    }
    return json{{"spec", to_json(c.spec)}, {"persons", std::move(persons)}};
}

}  // namespace flvg::harness
