#include "flvg/media.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flvg/rng.hpp"

namespace flvg::media {
namespace {

constexpr double kNormTolerance = 1e-9;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_audio(const AudioTrack& audio, std::size_t frame_count) {
    if (audio.tokens.size() != audio.spans.size()) throw MediaError("audio: token and span counts differ");
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < audio.tokens.size(); ++i) {
        const int token = audio.tokens[i];
        const Span& span = audio.spans[i];
        if (token < 0 || token > 9) throw MediaError("audio: token is not a digit");
        if (span.begin >= span.end) throw MediaError("audio: empty span");
        if (span.begin < cursor) throw MediaError("audio: spans overlap or are out of order");
        if (span.end > frame_count) throw MediaError("audio: span exceeds the video length");
        cursor = span.end;
    }
}

// Openness used on frames whose lips are animated for a digit; alternates so the
// track always carries movement.
double animated_openness(std::size_t frame_index) { return frame_index % 2 == 0 ? 0.7 : 0.35; }

}  // namespace

IdentityVector::IdentityVector(std::vector<double> components) : components_(std::move(components)) {
    if (components_.empty()) throw MediaError("identity vector must be non-empty");
    double norm2 = 0.0;
    for (double c : components_) {
        if (!std::isfinite(c)) throw MediaError("identity vector has a non-finite component");
        norm2 += c * c;
    }
    if (std::fabs(std::sqrt(norm2) - 1.0) > kNormTolerance) throw MediaError("identity vector must have unit norm");
}

IdentityVector IdentityVector::normalized(std::vector<double> components) {
    double norm2 = 0.0;
    for (double c : components) norm2 += c * c;
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw MediaError("cannot normalize a zero or non-finite vector");
    for (double& c : components) c /= norm;
    return IdentityVector(std::move(components));
}

double IdentityVector::cosine(const IdentityVector& other) const {
    if (dim() != other.dim()) throw MediaError("identity dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) dot += components_[i] * other.components_[i];
    return std::clamp(dot, -1.0, 1.0);
}

IdentityVector blend(const IdentityVector& a, const IdentityVector& b, double weight) {
    if (a.dim() != b.dim()) throw MediaError("identity dimension mismatch");
    if (weight == 1.0) return a;
    std::vector<double> mixed(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) mixed[i] = weight * a.components()[i] + (1.0 - weight) * b.components()[i];
    return IdentityVector::normalized(std::move(mixed));
}

void validate_frame(const Frame& frame) {
    if (!in_unit(frame.env.brightness)) throw MediaError("frame: brightness outside [0,1]");
    if (!(frame.env.posture_bias >= -45.0 && frame.env.posture_bias <= 45.0)) throw MediaError("frame: posture_bias outside [-45,45]");
    if (!in_unit(frame.lip_openness) || !in_unit(frame.artifact_score) || !in_unit(frame.replay_score) || !in_unit(frame.quality)) {
        throw MediaError("frame: score field outside [0,1]");
    }
    for (double angle : {frame.head_pose.yaw, frame.head_pose.pitch, frame.head_pose.roll}) {
        if (!std::isfinite(angle)) throw MediaError("frame: non-finite head pose");
    }
    if (frame.lip_pattern) {
        if (*frame.lip_pattern < 0 || *frame.lip_pattern > 9) throw MediaError("frame: lip_pattern is not a digit");
        if (!(frame.lip_openness > 0.0)) throw MediaError("frame: lip_pattern requires open lips");
    }
}

FacialMedia::FacialMedia(MediaKind kind, std::vector<Frame> frames, std::optional<AudioTrack> audio, Provenance provenance)
    : kind_(kind), frames_(std::move(frames)), audio_(std::move(audio)), provenance_(std::move(provenance)) {
    if (frames_.empty()) throw MediaError("media must contain at least one frame");
    if (kind_ == MediaKind::Image) {
        if (frames_.size() != 1) throw MediaError("an image has exactly one frame");
        if (audio_) throw MediaError("an image cannot carry audio");
    }
    const std::size_t dim = frames_.front().identity.dim();
    for (const Frame& f : frames_) {
        validate_frame(f);
        if (f.identity.dim() != dim) throw MediaError("mixed identity dimensions within one media");
    }
    if (audio_) check_audio(*audio_, frames_.size());
    if (provenance_.kind == Provenance::Kind::Synthesized && provenance_.method.empty()) {
        throw MediaError("synthesized provenance needs a method name");
    }
}

FacialMedia FacialMedia::image(Frame frame, Provenance provenance) {
    std::vector<Frame> frames;
    frames.push_back(std::move(frame));
    return FacialMedia(MediaKind::Image, std::move(frames), std::nullopt, std::move(provenance));
}

FacialMedia FacialMedia::video(std::vector<Frame> frames, std::optional<AudioTrack> audio, Provenance provenance) {
    return FacialMedia(MediaKind::Video, std::move(frames), std::move(audio), std::move(provenance));
}

FacialMedia scramble_frames(const FacialMedia& video, std::uint64_t seed) {
    if (!video.is_video()) throw MediaError("scramble_frames: images have no frame order");
    const std::size_t n = video.size();
    if (n < 2) throw MediaError("scramble_frames: need at least two frames");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed, 0x5c4a);
    rng.shuffle(order);
    if (std::is_sorted(order.begin(), order.end())) {
        std::rotate(order.begin(), order.begin() + 1, order.end());
    }

    std::vector<Frame> frames;
    frames.reserve(n);
    for (std::size_t i : order) frames.push_back(video.frames()[i]);
    return FacialMedia::video(std::move(frames), video.audio(), video.provenance());
}

FacialMedia stitch_clips(std::span<const FacialMedia> clips) {
    if (clips.empty()) throw MediaError("stitch_clips: no clips");
    const std::size_t dim = clips.front().identity_dim();
    bool all_genuine = true;
    std::vector<Frame> frames;
    for (const FacialMedia& clip : clips) {
        if (!clip.is_video()) throw MediaError("stitch_clips: only videos can be stitched");
        if (clip.identity_dim() != dim) throw MediaError("stitch_clips: mixed identity dimensions");
        all_genuine = all_genuine && clip.provenance().kind == Provenance::Kind::Genuine;
        frames.insert(frames.end(), clip.frames().begin(), clip.frames().end());
    }
    // Mixed inputs: the stitched result is at best a replay-grade recording
    // unless a synthesized clip is involved, in which case that one wins.
    Provenance provenance = Provenance::genuine();
    if (!all_genuine) {
        provenance = Provenance::replayed();
        for (const FacialMedia& clip : clips) {
            if (clip.provenance().kind == Provenance::Kind::Synthesized) {
                provenance = clip.provenance();
                break;
            }
        }
    }
    return FacialMedia::video(std::move(frames), std::nullopt, std::move(provenance));
}

FacialMedia make_replay(const FacialMedia& media, double replay_strength) {
    if (!(replay_strength > 0.0 && replay_strength <= 1.0)) throw MediaError("make_replay: strength must lie in (0,1]");
    std::vector<Frame> frames = media.frames();
    for (Frame& f : frames) f.replay_score = std::max(f.replay_score, replay_strength);
    if (media.kind() == MediaKind::Image) return FacialMedia::image(std::move(frames.front()), Provenance::replayed());
    return FacialMedia::video(std::move(frames), media.audio(), Provenance::replayed());
}

std::vector<Span> equal_spans(std::size_t frame_count, std::size_t parts) {
    if (parts == 0 || parts > frame_count) throw MediaError("equal_spans: need 1..frame_count parts");
    const std::size_t base = frame_count / parts;
    const std::size_t extra = frame_count % parts;
    std::vector<Span> spans;
    spans.reserve(parts);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < parts; ++i) {
        const std::size_t len = base + (i < extra ? 1 : 0);
        spans.push_back({cursor, cursor + len});
        cursor += len;
    }
    return spans;
}

FacialMedia import_audio(const FacialMedia& video, std::span<const int> digits) {
    if (!video.is_video()) throw MediaError("import_audio: needs a video");
    if (digits.empty()) throw MediaError("import_audio: empty digit list");
    if (digits.size() > video.size()) throw MediaError("import_audio: more digits than frames");
    AudioTrack audio{{digits.begin(), digits.end()}, equal_spans(video.size(), digits.size())};
    return FacialMedia::video(video.frames(), std::move(audio), video.provenance());
}

FacialMedia overlay_lip_pattern(const FacialMedia& video, std::span<const int> digits) {
    if (!video.audio()) throw MediaError("lip pattern: video has no audio track");
    const AudioTrack& audio = *video.audio();
    if (audio.spans.size() != digits.size()) throw MediaError("lip pattern: digit count differs from audio spans");
    std::vector<Frame> frames = video.frames();
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (digits[k] < 0 || digits[k] > 9) throw MediaError("lip pattern: not a digit");
        for (std::size_t i = audio.spans[k].begin; i < audio.spans[k].end; ++i) {
            frames[i].lip_openness = animated_openness(i);
            frames[i].lip_pattern = digits[k];
        }
    }
    return FacialMedia::video(std::move(frames), video.audio(), video.provenance());
}

FacialMedia set_matched_lips(const FacialMedia& video, std::span<const int> digits) {
    if (!video.audio()) throw MediaError("set_matched_lips: audio must be imported first");
    if (!std::equal(digits.begin(), digits.end(), video.audio()->tokens.begin(), video.audio()->tokens.end())) {
        throw MediaError("set_matched_lips: digits differ from the audio tokens");
    }
    return overlay_lip_pattern(video, digits);
}

FacialMedia silence_lips(const FacialMedia& video) {
    std::vector<Frame> frames = video.frames();
    for (Frame& f : frames) {
        f.lip_openness = 0.0;
        f.lip_pattern.reset();
    }
    if (video.kind() == MediaKind::Image) return FacialMedia::image(std::move(frames.front()), video.provenance());
    return FacialMedia::video(std::move(frames), video.audio(), video.provenance());
}

FacialMedia still_image(const FacialMedia& media, std::size_t index) {
    if (index >= media.size()) throw MediaError("still_image: frame index out of range");
    return FacialMedia::image(media.frames()[index], media.provenance());
}

const char* to_string(SceneTag tag) {
    switch (tag) {
        case SceneTag::Indoor: return "Indoor";
        case SceneTag::Outdoor: return "Outdoor";
        case SceneTag::Office: return "Office";
        case SceneTag::Vehicle: return "Vehicle";
    }
    return "?";
}

const char* to_string(MediaKind kind) { return kind == MediaKind::Image ? "Image" : "Video"; }

const char* to_string(SynthesisCategory category) { return category == SynthesisCategory::Swap ? "Swap" : "Reenactment"; }

const char* to_string(Provenance::Kind kind) {
    switch (kind) {
        case Provenance::Kind::Genuine: return "Genuine";
        case Provenance::Kind::Replayed: return "Replayed";
        case Provenance::Kind::Synthesized: return "Synthesized";
    }
    return "?";
}

}  // namespace flvg::media
