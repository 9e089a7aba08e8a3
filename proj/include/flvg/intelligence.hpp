#pragma once

// Black-box probing of an FLV API. Every conclusion is drawn from the public
// declaration and verification responses obtained through an FlvClient.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "flvg/flv_client.hpp"
#include "flvg/media.hpp"

namespace flvg::intel {

enum class ProbeFeature { Coherence, LipLanguage, PresentationAttack };

enum class Verdict { Deployed, NotDeployed, Inconclusive, NotApplicable };

/// Inferred lip language level.
enum class LipVerdict { None, MovementOnly, FullMatch, Inconclusive, NotApplicable };

inline constexpr const char* kMatched = "matched";
inline constexpr const char* kMismatched = "mismatched";
inline constexpr const char* kSilentLips = "silent-lips";
inline constexpr const char* kScrambled = "scrambled";
inline constexpr const char* kReplayed = "replayed";
inline constexpr const char* kBaseline = "baseline";

struct ProbeVariant {
    std::string label;
    std::vector<media::FacialMedia> items;  // items[i] derives from baseline[i]
};

struct ProbeSet {
    ProbeFeature feature = ProbeFeature::Coherence;
    std::vector<media::FacialMedia> baseline;
    std::vector<ProbeVariant> perturbed;
    /// Lip probes only: the untouched videos, so the variants can be rebuilt
    /// for the digits a voice challenge actually asks for.
    std::vector<media::FacialMedia> sources;
};

/// Thrown when the corpus cannot supply the requested probe.
class ProbeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ProbeSet build_coherence_probe(std::span<const media::FacialMedia> corpus, std::size_t n, std::uint64_t seed);
ProbeSet build_lip_probe(std::span<const media::FacialMedia> corpus, std::size_t digits_per_item, std::size_t n, std::uint64_t seed);
ProbeSet build_replay_probe(std::span<const media::FacialMedia> corpus, std::size_t n, std::uint64_t seed, double replay_strength = 0.9);

enum class LipVariant { Matched, Mismatched, SilentLips };

/// The lip probe variant of `source` for the spoken `digits`. Mismatched
/// lips mouth (d + 1) mod 10 for every digit d.
media::FacialMedia lip_variant(const media::FacialMedia& source, LipVariant variant, std::span<const int> digits);

struct ProbeOptions {
    std::size_t n = 20;
    std::size_t digits_per_item = 4;
    double replay_strength = 0.9;
    double collapse_ratio = 0.5;     // rv <= ratio * r0 counts as collapsed
    double similar_ratio = 0.8;      // rv >= ratio * r0 counts as unaffected
    double min_baseline_rate = 0.3;  // below this nothing can be concluded
    std::size_t in_flight = 4;
};

struct VariantRate {
    std::string label;
    std::size_t submitted = 0;
    std::size_t bypassed = 0;
    std::size_t errors = 0;
    double rate = 0.0;

    friend bool operator==(const VariantRate&, const VariantRate&) = default;
};

struct FeatureInference {
    ProbeFeature feature = ProbeFeature::Coherence;
    std::optional<vendor::FlvType> probe_type;
    Verdict verdict = Verdict::Inconclusive;  // Coherence / PresentationAttack
    LipVerdict lip = LipVerdict::Inconclusive;  // LipLanguage
    std::string reason;                       // set for Inconclusive and NotApplicable
    std::vector<VariantRate> rates;           // baseline first
    /// Whether responses carried an anti-deepfake result; empty if nothing came back.
    std::optional<bool> anti_deepfake_reported;

    friend bool operator==(const FeatureInference&, const FeatureInference&) = default;
};

/// FLV type used to submit a probe, or nullopt when the declared types offer none.
std::optional<vendor::FlvType> probe_type_for(ProbeFeature feature, const vendor::DeclaredFeatures& declared);

/// Submits every probe item and applies the bypass-rate decision rule.
/// API failures make the verdict Inconclusive; they never throw.
FeatureInference infer_feature(FlvClient& api, const ProbeSet& probe, vendor::FlvType type, const ProbeOptions& options = {});

struct Contradiction {
    std::string feature;
    std::string declared;
    std::string inferred;

    friend bool operator==(const Contradiction&, const Contradiction&) = default;
};

struct IntelligenceReport {
    vendor::DeclaredFeatures declared;
    Verdict coherence = Verdict::Inconclusive;
    LipVerdict lip_language = LipVerdict::Inconclusive;
    Verdict presentation_attack = Verdict::Inconclusive;
    /// Read from the presence of anti-deepfake results in responses, not probed.
    Verdict anti_deepfake = Verdict::Inconclusive;
    std::vector<FeatureInference> probes;
    std::vector<Contradiction> contradictions;

    friend bool operator==(const IntelligenceReport&, const IntelligenceReport&) = default;
};

/// Fetches the declaration and runs all three probes over `corpus` (genuine
/// videos that pass liveness). Throws TransportError if the declaration
/// cannot be fetched.
IntelligenceReport collect_intelligence(FlvClient& api, std::span<const media::FacialMedia> corpus, std::uint64_t seed,
                                        const ProbeOptions& options = {});

const char* to_string(ProbeFeature f);
const char* to_string(Verdict v);
const char* to_string(LipVerdict v);
Verdict verdict_from_string(std::string_view s);
LipVerdict lip_verdict_from_string(std::string_view s);

nlohmann::json to_json(const FeatureInference& inference);
nlohmann::json to_json(const IntelligenceReport& report);

}  // namespace flvg::intel
