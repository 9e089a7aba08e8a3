#pragma once

// Synthetic facial media: structured stand-ins for images and videos, plus the
// provenance-preserving transformations applied by the probing and synthesis
// engines. Every value here is immutable once built; transformations return
// new media.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flvg::media {

inline constexpr std::size_t kDefaultIdentityDim = 16;

class MediaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unit-norm identity embedding.
class IdentityVector {
public:
    /// Takes components that already have unit norm (within 1e-9).
    explicit IdentityVector(std::vector<double> components);

    /// Rescales arbitrary non-zero components to unit norm.
    static IdentityVector normalized(std::vector<double> components);

    std::size_t dim() const { return components_.size(); }
    std::span<const double> components() const { return components_; }

    /// Cosine similarity; throws MediaError on dimension mismatch.
    double cosine(const IdentityVector& other) const;

    friend bool operator==(const IdentityVector&, const IdentityVector&) = default;

private:
    std::vector<double> components_;
};

/// Normalized blend `weight * a + (1 - weight) * b`.
IdentityVector blend(const IdentityVector& a, const IdentityVector& b, double weight);

enum class SceneTag { Indoor, Outdoor, Office, Vehicle };
inline constexpr SceneTag kAllSceneTags[] = {SceneTag::Indoor, SceneTag::Outdoor, SceneTag::Office, SceneTag::Vehicle};

struct EnvironmentAttrs {
    double brightness = 0.6;     // [0, 1]
    double posture_bias = 0.0;   // degrees, [-45, 45]
    SceneTag scene_tag = SceneTag::Indoor;

    friend bool operator==(const EnvironmentAttrs&, const EnvironmentAttrs&) = default;
};

struct HeadPose {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;

    friend bool operator==(const HeadPose&, const HeadPose&) = default;
};

struct Frame {
    IdentityVector identity;
    EnvironmentAttrs env;
    std::string source_clip_id;
    std::uint32_t seq_index = 0;
    HeadPose head_pose;
    double lip_openness = 0.0;
    std::optional<int> lip_pattern;  // digit 0-9, only while lips are open
    double artifact_score = 0.0;
    double replay_score = 0.0;
    double quality = 1.0;

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Throws MediaError when a frame violates a field-range invariant.
void validate_frame(const Frame& frame);

struct Span {
    std::size_t begin = 0;  // half-open frame interval
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct AudioTrack {
    std::vector<int> tokens;
    std::vector<Span> spans;

    friend bool operator==(const AudioTrack&, const AudioTrack&) = default;
};

enum class MediaKind { Image, Video };
enum class SynthesisCategory { Swap, Reenactment };

struct Provenance {
    enum class Kind { Genuine, Replayed, Synthesized };
    Kind kind = Kind::Genuine;
    std::string method;                                  // Synthesized only
    SynthesisCategory category = SynthesisCategory::Swap;  // Synthesized only

    static Provenance genuine() { return {}; }
    static Provenance replayed() { return {Kind::Replayed, {}, SynthesisCategory::Swap}; }
    static Provenance synthesized(std::string method, SynthesisCategory category) {
        return {Kind::Synthesized, std::move(method), category};
    }

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

class FacialMedia {
public:
    static FacialMedia image(Frame frame, Provenance provenance = Provenance::genuine());
    static FacialMedia video(std::vector<Frame> frames, std::optional<AudioTrack> audio = std::nullopt,
                             Provenance provenance = Provenance::genuine());

    MediaKind kind() const { return kind_; }
    bool is_video() const { return kind_ == MediaKind::Video; }
    const std::vector<Frame>& frames() const { return frames_; }
    std::size_t size() const { return frames_.size(); }
    const std::optional<AudioTrack>& audio() const { return audio_; }
    const Provenance& provenance() const { return provenance_; }
    std::size_t identity_dim() const { return frames_.front().identity.dim(); }

    friend bool operator==(const FacialMedia&, const FacialMedia&) = default;

private:
    FacialMedia(MediaKind kind, std::vector<Frame> frames, std::optional<AudioTrack> audio, Provenance provenance);

    MediaKind kind_;
    std::vector<Frame> frames_;
    std::optional<AudioTrack> audio_;
    Provenance provenance_;
};

/// Deterministic non-identity permutation of the frames; audio is kept as is.
FacialMedia scramble_frames(const FacialMedia& video, std::uint64_t seed);

/// Concatenates clips in order. Audio is dropped; the result is Genuine only if
/// every input is.
FacialMedia stitch_clips(std::span<const FacialMedia> clips);

/// Re-capture of the media through a screen or print.
FacialMedia make_replay(const FacialMedia& media, double replay_strength);

/// Attaches spoken digits, one equal share of the frame range per digit.
/// Lip fields are left untouched.
FacialMedia import_audio(const FacialMedia& video, std::span<const int> digits);

/// Makes the lips say `digits` over the already imported audio spans.
FacialMedia set_matched_lips(const FacialMedia& video, std::span<const int> digits);

/// Lip animation pattern for `digits` laid over existing spans without any
/// check against the audio tokens (used to build mismatched probes).
FacialMedia overlay_lip_pattern(const FacialMedia& video, std::span<const int> digits);

/// Closes the lips on every frame.
FacialMedia silence_lips(const FacialMedia& video);

/// Single-frame image taken from frame `index` of a video.
FacialMedia still_image(const FacialMedia& media, std::size_t index = 0);

/// Equal partition of `frame_count` frames into `parts` consecutive spans whose
/// lengths differ by at most one.
std::vector<Span> equal_spans(std::size_t frame_count, std::size_t parts);

const char* to_string(SceneTag tag);
const char* to_string(MediaKind kind);
const char* to_string(SynthesisCategory category);
const char* to_string(Provenance::Kind kind);

}  // namespace flvg::media
