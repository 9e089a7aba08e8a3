#pragma once

// Synthetic stand-in for the face datasets used in evaluation: victims with a
// reference photo and target images, plus genuine recordings usable as
// driving media and probe material.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/deepfaker.hpp"
#include "flvg/media.hpp"
#include "flvg/vendor_profile.hpp"

namespace flvg::harness {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CorpusSpec {
    std::size_t identities = 10;
    std::size_t videos_per_identity = 3;
    vendor::IntRange frames_per_video{12, 20};
    std::size_t targets_per_identity = 5;
    /// Share of nominal target images shot in conditions a vendor rejects.
    double failing_target_fraction = 0.2;
    std::size_t driving_images_per_identity = 2;
    std::vector<vendor::Action> actions{std::begin(vendor::kAllActions), std::end(vendor::kAllActions)};
    std::size_t action_clip_frames = 10;
    /// Group tags assigned round-robin over identities.
    std::vector<std::string> groups{"A", "B"};
    /// Brightness offset applied to the target and reference images of a group.
    std::map<std::string, double> group_brightness_shift;
    /// Per-frame head motion of driving videos, in degrees, stratified over the range.
    double motion_min_deg = 4.0;
    double motion_max_deg = 16.0;
    std::size_t identity_dim = media::kDefaultIdentityDim;
    std::uint64_t seed = 1;

    friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

void validate(const CorpusSpec& spec);

struct Person {
    std::string id;
    std::string group;
    media::IdentityVector identity;
    media::FacialMedia reference;
    /// Target image that passes image-based FLV on default settings.
    media::FacialMedia passing_target;
    /// Same person shot too dark and blurred.
    media::FacialMedia failing_target;
    /// Nominal mix used by campaigns; `target_failing[k]` marks engineered failures.
    std::vector<media::FacialMedia> targets;
    std::vector<bool> target_failing;
    /// Genuine recordings of this person, single continuous clips.
    std::vector<media::FacialMedia> videos;
    /// videos[k] re-shot in poor conditions with the same head motion.
    std::vector<media::FacialMedia> failing_videos;
    std::vector<media::FacialMedia> driving_images;
    deepfake::ActionClips action_clips;

    friend bool operator==(const Person&, const Person&) = default;
};

struct Corpus {
    CorpusSpec spec;
    std::vector<Person> persons;

    /// Every genuine recording, person by person.
    std::vector<media::FacialMedia> genuine_videos() const;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Deterministic expansion of `spec`.
Corpus generate_corpus(const CorpusSpec& spec);

/// One continuous recording of `actions` performed in order by `person`.
media::FacialMedia record_action_video(const Person& person, std::span<const vendor::Action> actions, std::uint64_t seed,
                                       std::size_t frames_per_action = 10);

nlohmann::json to_json(const CorpusSpec& spec);
CorpusSpec corpus_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Corpus& corpus);

}  // namespace flvg::harness
