#include "flvg/intelligence.hpp"

#include <numeric>

#include "flvg/parallel.hpp"
#include "flvg/rng.hpp"
#include "flvg/vendor_profile.hpp"

namespace flvg::intel {

using media::FacialMedia;
using nlohmann::json;
using vendor::FlvType;

namespace {

constexpr std::uint64_t kSampleStream = 0x1a7e;
constexpr std::uint64_t kDigitStream = 0xd161;

/// n distinct genuine multi-frame videos in seeded order.
std::vector<FacialMedia> sample_videos(std::span<const FacialMedia> corpus, std::size_t n, std::uint64_t seed, std::size_t min_frames) {
    if (n == 0) throw ProbeError("probe size must be positive");
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const FacialMedia& m = corpus[i];
        if (m.is_video() && m.size() >= std::max<std::size_t>(min_frames, 2) &&
            m.provenance().kind == media::Provenance::Kind::Genuine) {
            eligible.push_back(i);
        }
    }
    if (eligible.size() < n) {
        throw ProbeError("corpus has " + std::to_string(eligible.size()) + " usable videos, probe needs " + std::to_string(n));
    }
    Rng rng(seed, kSampleStream);
    rng.shuffle(eligible);
    std::vector<FacialMedia> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(corpus[eligible[k]]);
    return out;
}

struct Job {
    std::size_t group = 0;
    std::size_t item = 0;
};

struct Tally {
    std::size_t submitted = 0;
    std::size_t bypassed = 0;
    std::size_t errors = 0;
};

enum class Shift { Collapsed, Unaffected, Ambiguous };

Shift classify(double r0, double rv, const ProbeOptions& o) {
    if (rv <= o.collapse_ratio * r0) return Shift::Collapsed;
    if (rv >= o.similar_ratio * r0) return Shift::Unaffected;
    return Shift::Ambiguous;
}

std::string rate_text(const VariantRate& r) {
    return r.label + "=" + std::to_string(r.bypassed) + "/" + std::to_string(r.submitted);
}

}  // namespace

ProbeSet build_coherence_probe(std::span<const FacialMedia> corpus, std::size_t n, std::uint64_t seed) {
    ProbeSet probe;
    probe.feature = ProbeFeature::Coherence;
    probe.baseline = sample_videos(corpus, n, seed, 2);
    ProbeVariant scrambled{kScrambled, {}};
    for (std::size_t i = 0; i < probe.baseline.size(); ++i) {
        scrambled.items.push_back(media::scramble_frames(probe.baseline[i], mix_seed(seed, i)));
    }
    probe.perturbed.push_back(std::move(scrambled));
    return probe;
}

FacialMedia lip_variant(const FacialMedia& source, LipVariant variant, std::span<const int> digits) {
    const FacialMedia voiced = media::import_audio(source, digits);
    switch (variant) {
        case LipVariant::Matched: return media::set_matched_lips(voiced, digits);
        case LipVariant::Mismatched: {
            std::vector<int> other(digits.begin(), digits.end());
            for (int& d : other) d = (d + 1) % 10;
            return media::overlay_lip_pattern(voiced, other);
        }
        case LipVariant::SilentLips: return media::silence_lips(voiced);
    }
    throw ProbeError("unknown lip variant");
}

ProbeSet build_lip_probe(std::span<const FacialMedia> corpus, std::size_t digits_per_item, std::size_t n, std::uint64_t seed) {
    if (digits_per_item == 0) throw ProbeError("lip probe needs at least one digit per item");
    ProbeSet probe;
    probe.feature = ProbeFeature::LipLanguage;
    probe.sources = sample_videos(corpus, n, seed, digits_per_item);
    Rng rng(seed, kDigitStream);
    ProbeVariant mismatched{kMismatched, {}};
    ProbeVariant silent{kSilentLips, {}};
    for (const FacialMedia& src : probe.sources) {
        std::vector<int> digits(digits_per_item);
        for (int& d : digits) d = static_cast<int>(rng.uniform_int(0, 9));
        probe.baseline.push_back(lip_variant(src, LipVariant::Matched, digits));
        mismatched.items.push_back(lip_variant(src, LipVariant::Mismatched, digits));
        silent.items.push_back(lip_variant(src, LipVariant::SilentLips, digits));
    }
    probe.perturbed.push_back(std::move(mismatched));
    probe.perturbed.push_back(std::move(silent));
    return probe;
}

ProbeSet build_replay_probe(std::span<const FacialMedia> corpus, std::size_t n, std::uint64_t seed, double replay_strength) {
    ProbeSet probe;
    probe.feature = ProbeFeature::PresentationAttack;
    probe.baseline = sample_videos(corpus, n, seed, 2);
    ProbeVariant replayed{kReplayed, {}};
    for (const FacialMedia& m : probe.baseline) replayed.items.push_back(media::make_replay(m, replay_strength));
    probe.perturbed.push_back(std::move(replayed));
    return probe;
}

std::optional<FlvType> probe_type_for(ProbeFeature feature, const vendor::DeclaredFeatures& declared) {
    std::vector<FlvType> order;
    switch (feature) {
        case ProbeFeature::Coherence: order = {FlvType::Silence, FlvType::Action, FlvType::Voice}; break;
        case ProbeFeature::LipLanguage: order = {FlvType::Voice}; break;
        case ProbeFeature::PresentationAttack: order = {FlvType::Silence, FlvType::Image, FlvType::Action, FlvType::Voice}; break;
    }
    for (FlvType t : order) {
        if (declared.supported_types.contains(t)) return t;
    }
    return std::nullopt;
}

FeatureInference infer_feature(FlvClient& api, const ProbeSet& probe, FlvType type, const ProbeOptions& options) {
    FeatureInference out;
    out.feature = probe.feature;
    out.probe_type = type;
    const bool lip = probe.feature == ProbeFeature::LipLanguage;
    if (lip && type != FlvType::Voice) throw ProbeError("lip probes need voice-based FLV");
    if (lip && probe.sources.size() != probe.baseline.size()) throw ProbeError("lip probe without source videos");

    std::vector<const std::vector<FacialMedia>*> groups{&probe.baseline};
    std::vector<std::string> labels{lip ? kMatched : kBaseline};
    for (const ProbeVariant& v : probe.perturbed) {
        if (v.items.size() != probe.baseline.size()) throw ProbeError("probe variant " + v.label + " differs in size from the baseline");
        groups.push_back(&v.items);
        labels.push_back(v.label);
    }

    std::vector<Job> jobs;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i = 0; i < groups[g]->size(); ++i) jobs.push_back({g, i});
    }

    // Challenges are handed out in job order so that a deterministic vendor
    // issues the same challenge to the same item on every run.
    const bool challenged = type == FlvType::Voice || type == FlvType::Action;
    std::vector<std::optional<ChallengeTicket>> tickets(jobs.size());
    std::vector<char> failed(jobs.size(), 0);
    if (challenged) {
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            try {
                tickets[k] = api.challenge(type);
            } catch (const std::exception&) {
                failed[k] = 1;
            }
        }
    }

    std::vector<char> bypassed(jobs.size(), 0);
    std::vector<signed char> adf(jobs.size(), -1);
    parallel_for(jobs.size(), options.in_flight, [&](std::size_t k) {
        if (failed[k]) return;
        const Job& job = jobs[k];
        try {
            std::optional<FacialMedia> built;
            const FacialMedia* submitted = &(*groups[job.group])[job.item];
            if (lip) {
                static constexpr LipVariant kOrder[] = {LipVariant::Matched, LipVariant::Mismatched, LipVariant::SilentLips};
                const LipVariant variant = job.group < 3 ? kOrder[job.group] : LipVariant::Matched;
                built = lip_variant(probe.sources[job.item], variant, std::get<std::vector<int>>(tickets[k]->challenge));
                submitted = &*built;
            } else if (type == FlvType::Image && submitted->is_video()) {
                built = media::still_image(*submitted, 0);
                submitted = &*built;
            }
            const media::IdentityVector& reference = submitted->frames().front().identity;
            const std::optional<std::string> sid = tickets[k] ? std::optional<std::string>(tickets[k]->session_id) : std::nullopt;
            const vendor::VerificationOutcome o = api.verify(type, *submitted, reference, sid);
            // Lip probes need the spoken requirement; the others look at liveness alone.
            bypassed[k] = o.liveness_pass && (!lip || o.requirement_met);
            adf[k] = o.anti_deepfake_pass.has_value() ? 1 : 0;
        } catch (const std::exception&) {
            failed[k] = 1;
        }
    });

    std::vector<Tally> tallies(groups.size());
    std::size_t total_errors = 0;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        Tally& t = tallies[jobs[k].group];
        ++t.submitted;
        if (failed[k]) {
            ++t.errors;
            ++total_errors;
        } else if (bypassed[k]) {
            ++t.bypassed;
        }
        if (adf[k] >= 0 && !out.anti_deepfake_reported) out.anti_deepfake_reported = adf[k] == 1;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const Tally& t = tallies[g];
        const double rate = t.submitted ? static_cast<double>(t.bypassed) / static_cast<double>(t.submitted) : 0.0;
        out.rates.push_back({labels[g], t.submitted, t.bypassed, t.errors, rate});
    }

    auto inconclusive = [&](std::string reason) {
        out.verdict = Verdict::Inconclusive;
        out.lip = LipVerdict::Inconclusive;
        out.reason = std::move(reason);
        return out;
    };
    if (total_errors > 0) return inconclusive("api-errors: " + std::to_string(total_errors) + " submissions failed");
    const double r0 = out.rates.front().rate;
    if (r0 < options.min_baseline_rate) return inconclusive("baseline-rate-too-low: " + rate_text(out.rates.front()));

    if (!lip) {
        switch (classify(r0, out.rates[1].rate, options)) {
            case Shift::Collapsed: out.verdict = Verdict::Deployed; break;
            case Shift::Unaffected: out.verdict = Verdict::NotDeployed; break;
            case Shift::Ambiguous: return inconclusive("ambiguous-rate-drop: " + rate_text(out.rates[1]));
        }
        return out;
    }

    const Shift mismatched = classify(r0, out.rates[1].rate, options);
    const Shift silent = classify(r0, out.rates[2].rate, options);
    if (mismatched == Shift::Ambiguous || silent == Shift::Ambiguous) {
        return inconclusive("ambiguous-rate-drop: " + rate_text(out.rates[1]) + " " + rate_text(out.rates[2]));
    }
    if (mismatched == Shift::Collapsed && silent == Shift::Collapsed) {
        out.lip = LipVerdict::FullMatch;
    } else if (silent == Shift::Collapsed) {
        out.lip = LipVerdict::MovementOnly;
    } else if (mismatched == Shift::Unaffected) {
        out.lip = LipVerdict::None;
    } else {
        return inconclusive("inconsistent-lip-variants: mismatched collapsed while silent lips passed");
    }
    return out;
}

IntelligenceReport collect_intelligence(FlvClient& api, std::span<const FacialMedia> corpus, std::uint64_t seed, const ProbeOptions& options) {
    IntelligenceReport report;
    report.declared = api.declared();

    constexpr ProbeFeature kFeatures[] = {ProbeFeature::Coherence, ProbeFeature::LipLanguage, ProbeFeature::PresentationAttack};
    for (std::size_t f = 0; f < std::size(kFeatures); ++f) {
        const ProbeFeature feature = kFeatures[f];
        const std::uint64_t probe_seed = mix_seed(seed, f);
        FeatureInference inference;
        inference.feature = feature;
        const std::optional<FlvType> type = probe_type_for(feature, report.declared);
        if (!type) {
            inference.verdict = Verdict::NotApplicable;
            inference.lip = LipVerdict::NotApplicable;
            inference.reason = feature == ProbeFeature::LipLanguage ? "no-voice-flv" : "no-compatible-flv-type";
        } else {
            try {
                ProbeSet probe;
                switch (feature) {
                    case ProbeFeature::Coherence: probe = build_coherence_probe(corpus, options.n, probe_seed); break;
                    case ProbeFeature::LipLanguage: probe = build_lip_probe(corpus, options.digits_per_item, options.n, probe_seed); break;
                    case ProbeFeature::PresentationAttack:
                        probe = build_replay_probe(corpus, options.n, probe_seed, options.replay_strength);
                        break;
                }
                inference = infer_feature(api, probe, *type, options);
            } catch (const ProbeError& e) {
                inference.probe_type = type;
                inference.verdict = Verdict::Inconclusive;
                inference.lip = LipVerdict::Inconclusive;
                inference.reason = std::string("probe-unavailable: ") + e.what();
            }
        }
        switch (feature) {
            case ProbeFeature::Coherence: report.coherence = inference.verdict; break;
            case ProbeFeature::LipLanguage: report.lip_language = inference.lip; break;
            case ProbeFeature::PresentationAttack: report.presentation_attack = inference.verdict; break;
        }
        if (report.anti_deepfake == Verdict::Inconclusive && inference.anti_deepfake_reported) {
            report.anti_deepfake = *inference.anti_deepfake_reported ? Verdict::Deployed : Verdict::NotDeployed;
        }
        report.probes.push_back(std::move(inference));
    }

    const vendor::DeclaredFeatures& d = report.declared;
    if (report.lip_language == LipVerdict::None || report.lip_language == LipVerdict::MovementOnly ||
        report.lip_language == LipVerdict::FullMatch) {
        const std::string claimed = vendor::to_string(d.lip_language);
        const std::string found = to_string(report.lip_language);
        if (claimed != found) report.contradictions.push_back({"lip_language", claimed, found});
    }
    auto check_flag = [&](const char* feature, bool claimed, Verdict found) {
        if (found != Verdict::Deployed && found != Verdict::NotDeployed) return;
        if (claimed != (found == Verdict::Deployed)) {
            report.contradictions.push_back({feature, claimed ? "Deployed" : "NotDeployed", to_string(found)});
        }
    };
    check_flag("presentation_attack", d.replay_detection, report.presentation_attack);
    check_flag("anti_deepfake", d.anti_deepfake, report.anti_deepfake);
    return report;
}

const char* to_string(ProbeFeature f) {
    switch (f) {
        case ProbeFeature::Coherence: return "coherence";
        case ProbeFeature::LipLanguage: return "lip_language";
        case ProbeFeature::PresentationAttack: return "presentation_attack";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Deployed: return "Deployed";
        case Verdict::NotDeployed: return "NotDeployed";
        case Verdict::Inconclusive: return "Inconclusive";
        case Verdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

const char* to_string(LipVerdict v) {
    switch (v) {
        case LipVerdict::None: return "None";
        case LipVerdict::MovementOnly: return "MovementOnly";
        case LipVerdict::FullMatch: return "FullMatch";
        case LipVerdict::Inconclusive: return "Inconclusive";
        case LipVerdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

Verdict verdict_from_string(std::string_view s) {
    for (Verdict v : {Verdict::Deployed, Verdict::NotDeployed, Verdict::Inconclusive, Verdict::NotApplicable}) {
        if (s == to_string(v)) return v;
    }
    throw std::invalid_argument("unknown verdict " + std::string(s));
}

LipVerdict lip_verdict_from_string(std::string_view s) {
    for (LipVerdict v : {LipVerdict::None, LipVerdict::MovementOnly, LipVerdict::FullMatch, LipVerdict::Inconclusive, LipVerdict::NotApplicable}) {
        if (s == to_string(v)) return v;
    }
    throw std::invalid_argument("unknown lip verdict " + std::string(s));
}

json to_json(const FeatureInference& f) {
    json rates = json::array();
    for (const VariantRate& r : f.rates) {
        rates.push_back({{"label", r.label}, {"submitted", r.submitted}, {"bypassed", r.bypassed}, {"errors", r.errors}, {"rate", r.rate}});
    }
    json j{{"feature", to_string(f.feature)},
           {"probe_type", f.probe_type ? json(vendor::to_string(*f.probe_type)) : json(nullptr)},
           {"verdict", f.feature == ProbeFeature::LipLanguage ? to_string(f.lip) : to_string(f.verdict)},
           {"rates", std::move(rates)}};
    if (!f.reason.empty()) j["reason"] = f.reason;
    return j;
}

json to_json(const IntelligenceReport& r) {
    json probes = json::array();
    for (const auto& p : r.probes) probes.push_back(to_json(p));
    json contradictions = json::array();
    for (const auto& c : r.contradictions) contradictions.push_back({{"feature", c.feature}, {"declared", c.declared}, {"inferred", c.inferred}});
    return json{{"declared", vendor::to_json(r.declared)},
                {"inferred",
                 {{"coherence", to_string(r.coherence)},
                  {"lip_language", to_string(r.lip_language)},
                  {"presentation_attack", to_string(r.presentation_attack)},
                  {"anti_deepfake", to_string(r.anti_deepfake)}}},
                {"probes", std::move(probes)},
                {"contradictions", std::move(contradictions)}};
}

}  // namespace flvg::intel
