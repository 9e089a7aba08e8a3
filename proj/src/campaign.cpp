#include "flvg/campaign.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#include <openssl/evp.h>

#include "flvg/media_json.hpp"
#include "flvg/parallel.hpp"
#include "flvg/rng.hpp"
#include "flvg/vendor_service.hpp"

namespace flvg::harness {

using deepfake::MethodProfile;
using media::FacialMedia;
using media::IdentityVector;
using nlohmann::json;
using planner::DrivingRecipe;
using vendor::FlvType;
using vendor::VerificationOutcome;

namespace {

constexpr std::size_t kChunk = 128;
constexpr double kReplayStrength = 0.9;

bool challenged(FlvType t) { return t == FlvType::Voice || t == FlvType::Action; }

struct Submission {
    FlvType type;
    std::optional<int> length;
    std::function<FacialMedia(const ChallengeTicket*)> build;
    IdentityVector reference;
};

/// Challenges are issued in submission order, chunk by chunk, so a
/// deterministic vendor hands out the same challenges on every run; the
/// verification calls of a chunk then run concurrently.
std::vector<VerificationOutcome> submit_all(FlvClient& api, const std::vector<Submission>& subs, std::size_t concurrency) {
    std::vector<VerificationOutcome> out(subs.size());
    for (std::size_t start = 0; start < subs.size(); start += kChunk) {
        const std::size_t count = std::min(kChunk, subs.size() - start);
        std::vector<std::optional<ChallengeTicket>> tickets(count);
        for (std::size_t k = 0; k < count; ++k) {
            const Submission& s = subs[start + k];
            if (challenged(s.type)) tickets[k] = api.challenge(s.type, s.length);
        }
        parallel_for(count, concurrency, [&](std::size_t k) {
            const Submission& s = subs[start + k];
            const ChallengeTicket* ticket = tickets[k] ? &*tickets[k] : nullptr;
            const FacialMedia media = s.build(ticket);
            out[start + k] = api.verify(s.type, media, s.reference, ticket ? std::optional<std::string>(ticket->session_id) : std::nullopt);
        });
    }
    return out;
}

const std::vector<int>& digits_of(const ChallengeTicket* t) {
    if (!t) throw std::logic_error("voice submission without a challenge");
    return std::get<std::vector<int>>(t->challenge);
}

const std::vector<vendor::Action>& actions_of(const ChallengeTicket* t) {
    if (!t) throw std::logic_error("action submission without a challenge");
    return std::get<std::vector<vendor::Action>>(t->challenge);
}

FacialMedia as_driving(const FacialMedia& image) { return FacialMedia::video({image.frames().front()}, std::nullopt, image.provenance()); }

struct TargetRef {
    std::size_t person;
    const FacialMedia* image;
};

struct DriverRef {
    std::size_t owner;
    std::size_t slot;
    const FacialMedia* media;
};

std::vector<MethodProfile> default_methods(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::BiasStudy:
        case ExperimentKind::InputStudy: return {deepfake::method_preset("FaceShifter"), deepfake::method_preset("FOMM")};
        case ExperimentKind::TwoStageComparison: return {deepfake::method_preset("FaceShifter"), deepfake::method_preset("FOMM")};
        default: return deepfake::method_presets();
    }
}

class Runner {
public:
    Runner(const CampaignConfig& cfg, FlvClient& api, CampaignReport& report)
        : cfg_(cfg), api_(api), report_(report), corpus_(generate_corpus(cfg.corpus)) {
        methods_ = cfg.methods.empty() ? default_methods(cfg.kind) : cfg.methods;
    }

    void run() {
        declared_ = api_.declared();
        report_.target = declared_.name;
        type_ = choose_type();
        report_.flv_type = vendor::to_string(type_);

        intel::ProbeOptions probe;
        probe.n = cfg_.samples.probe_n;
        probe.in_flight = cfg_.concurrency;
        const std::vector<FacialMedia> probe_corpus = corpus_.genuine_videos();
        report_.intelligence = intel::collect_intelligence(api_, probe_corpus, mix_seed(cfg_.seed, 0x1e7), probe);

        if (cfg_.kind == ExperimentKind::IntelligenceOnly) {
            for (FlvType t : vendor::kAllFlvTypes) {
                if (declared_.supported_types.contains(t)) report_.plans.push_back(planner::plan_attack(*report_.intelligence, t, methods_));
            }
            check_plans();
            return;
        }
        plan_ = planner::plan_attack(*report_.intelligence, type_, methods_);
        report_.plans.push_back(*plan_);
        check_plans();
        select_targets();

        switch (cfg_.kind) {
            case ExperimentKind::TypeEvaluation: type_evaluation(); break;
            case ExperimentKind::BiasStudy: bias_study(); break;
            case ExperimentKind::DigitLengthSweep:
            case ExperimentKind::ActionSweep: sweep(); break;
            case ExperimentKind::TwoStageComparison: two_stage(); break;
            case ExperimentKind::PresentationBaseline: presentation(); break;
            case ExperimentKind::InputStudy: input_study(); break;
            case ExperimentKind::IntelligenceOnly: break;
        }
    }

private:
    FlvType choose_type() const {
        std::optional<FlvType> wanted = cfg_.flv_type;
        if (cfg_.kind == ExperimentKind::DigitLengthSweep) wanted = FlvType::Voice;
        if (cfg_.kind == ExperimentKind::ActionSweep) wanted = FlvType::Action;
        if (wanted) {
            if (!declared_.supported_types.contains(*wanted)) {
                throw ConfigError(declared_.name + " does not offer " + vendor::to_string(*wanted) + " FLV");
            }
            if (cfg_.kind == ExperimentKind::InputStudy && *wanted == FlvType::Image) throw ConfigError("InputStudy needs a video FLV type");
            return *wanted;
        }
        const bool video_only = cfg_.kind == ExperimentKind::InputStudy;
        for (FlvType t : {FlvType::Silence, FlvType::Image, FlvType::Voice, FlvType::Action}) {
            if (video_only && t == FlvType::Image) continue;
            if (declared_.supported_types.contains(t)) return t;
        }
        throw ConfigError(declared_.name + " offers no FLV type usable for " + to_string(cfg_.kind));
    }

    void check_plans() {
        const auto& intel = *report_.intelligence;
        for (const auto& p : report_.plans) {
            if (p.driving_recipe == DrivingRecipe::MatchedLipsInteractive && intel.lip_language != intel::LipVerdict::FullMatch &&
                intel.lip_language != intel::LipVerdict::Inconclusive) {
                report_.invariant_violations.push_back("plan uses matched lips without FullMatch lip language");
            }
            if (p.driving_recipe == DrivingRecipe::RecordedCoherent && intel.coherence != intel::Verdict::Deployed &&
                intel.coherence != intel::Verdict::Inconclusive) {
                report_.invariant_violations.push_back("plan records coherent video without coherence detection");
            }
        }
    }

    void select_targets() {
        for (std::size_t i = 0; i < corpus_.persons.size(); ++i) {
            for (const FacialMedia& t : corpus_.persons[i].targets) targets_.push_back({i, &t});
        }
        if (targets_.size() > cfg_.samples.targets) targets_.resize(cfg_.samples.targets);
        if (targets_.empty()) throw ConfigError("campaign has no target images");
    }

    const IdentityVector& reference(std::size_t person) const { return corpus_.persons[person].reference.frames().front().identity; }

    /// Recordings of other people, first video slot first.
    std::vector<DriverRef> drivers(std::size_t victim, std::size_t count, bool images) const {
        const std::size_t n = corpus_.persons.size();
        const std::size_t slots = images ? cfg_.corpus.driving_images_per_identity : cfg_.corpus.videos_per_identity;
        std::vector<DriverRef> out;
        for (std::size_t v = 0; v < slots && out.size() < count; ++v) {
            for (std::size_t off = 1; off < n && out.size() < count; ++off) {
                const std::size_t owner = (victim + off) % n;
                const Person& p = corpus_.persons[owner];
                out.push_back({owner, v, images ? &p.driving_images[v] : &p.videos[v]});
            }
        }
        if (out.size() < count) throw ConfigError("corpus too small for " + std::to_string(count) + " driving media per target");
        return out;
    }

    std::vector<DriverRef> drivers_for_type(std::size_t victim) const {
        return type_ == FlvType::Image ? drivers(victim, cfg_.samples.driving_images, true) : drivers(victim, cfg_.samples.driving_videos, false);
    }

    std::function<FacialMedia(const ChallengeTicket*)> attack(const MethodProfile& m, DrivingRecipe recipe, const FacialMedia& face,
                                                             const FacialMedia& driving, std::size_t owner, std::uint64_t rec_seed) const {
        const FlvType type = type_;
        const Person* actor = &corpus_.persons[owner];
        const std::size_t clip_frames = cfg_.corpus.action_clip_frames;
        return [=, &face, &driving](const ChallengeTicket* t) -> FacialMedia {
            switch (type) {
                case FlvType::Image:
                    return media::still_image(deepfake::synthesize(face, driving.is_video() ? driving : as_driving(driving), m), 0);
                case FlvType::Silence: return deepfake::synthesize(face, driving, m);
                case FlvType::Voice:
                    return deepfake::synthesize_for_voice(face, driving, m, digits_of(t), recipe == DrivingRecipe::MatchedLipsInteractive);
                case FlvType::Action:
                    if (recipe == DrivingRecipe::RecordedCoherent) {
                        return deepfake::synthesize(face, record_action_video(*actor, actions_of(t), rec_seed, clip_frames), m);
                    }
                    return deepfake::synthesize_for_action(face, actor->action_clips, actions_of(t), m);
            }
            throw std::logic_error("unknown FLV type");
        };
    }

    /// Victim's own genuine capture for the FLV type.
    std::function<FacialMedia(const ChallengeTicket*)> genuine(std::size_t person, std::size_t slot, bool replay, std::uint64_t rec_seed) const {
        const FlvType type = type_;
        const Person* p = &corpus_.persons[person];
        const FacialMedia* video = &p->videos[slot % p->videos.size()];
        const std::size_t clip_frames = cfg_.corpus.action_clip_frames;
        return [=](const ChallengeTicket* t) -> FacialMedia {
            FacialMedia m = [&] {
                switch (type) {
                    case FlvType::Image: return media::still_image(*video, 0);
                    case FlvType::Silence: return *video;
                    case FlvType::Voice: return intel::lip_variant(*video, intel::LipVariant::Matched, digits_of(t));
                    case FlvType::Action: return record_action_video(*p, actions_of(t), rec_seed, clip_frames);
                }
                throw std::logic_error("unknown FLV type");
            }();
            return replay ? media::make_replay(m, kReplayStrength) : m;
        };
    }

    /// Every (target, driver) pair for one method.
    std::vector<Submission> method_submissions(const MethodProfile& m, std::optional<int> length,
                                               const std::function<const FacialMedia&(std::size_t)>& face_of = {}) const {
        std::vector<Submission> subs;
        for (std::size_t ti = 0; ti < targets_.size(); ++ti) {
            const TargetRef& t = targets_[ti];
            const FacialMedia& face = face_of ? face_of(ti) : *t.image;
            for (const DriverRef& d : drivers_for_type(t.person)) {
                const std::uint64_t rec_seed = mix_seed(cfg_.seed, subs.size() + 0x5ec);
                subs.push_back({type_, length, attack(m, plan_->driving_recipe, face, *d.media, d.owner, rec_seed), reference(t.person)});
            }
        }
        return subs;
    }

    /// Runs one row, recording MISSING rows once the transport has failed.
    std::optional<std::vector<VerificationOutcome>> row(const std::string& label, const std::string& method,
                                                        const std::function<std::vector<Submission>()>& make) {
        MetricsRow r{label, method, std::nullopt, {}};
        if (report_.partial) {
            r.error = "not run: " + report_.error;
            report_.rows.push_back(std::move(r));
            return std::nullopt;
        }
        try {
            std::vector<VerificationOutcome> outcomes = submit_all(api_, make(), cfg_.concurrency);
            r.metrics = analysis::compute_metrics(outcomes, true);
            if (!analysis::metrics_consistent(*r.metrics)) report_.invariant_violations.push_back("inconsistent metric rates in row " + label);
            report_.rows.push_back(std::move(r));
            return outcomes;
        } catch (const TransportError& e) {
            report_.partial = true;
            report_.error = e.what();
            r.error = e.what();
        } catch (const vendor::VerifyError& e) {
            r.error = e.what();
        }
        report_.rows.push_back(std::move(r));
        return std::nullopt;
    }

    void type_evaluation() {
        for (const MethodProfile& m : methods_) {
            row(m.name, m.name, [&] { return method_submissions(m, std::nullopt); });
        }
    }

    void presentation() {
        auto genuine_subs = [&](bool replay) {
            std::vector<Submission> subs;
            for (std::size_t ti = 0; ti < targets_.size(); ++ti) {
                const TargetRef& t = targets_[ti];
                subs.push_back({type_, std::nullopt, genuine(t.person, ti, replay, mix_seed(cfg_.seed, ti + 0x9e)), reference(t.person)});
            }
            return subs;
        };
        row("Genuine", "", [&] { return genuine_subs(false); });
        row("Replay", "", [&] { return genuine_subs(true); });
        type_evaluation();
    }

    void bias_study() {
        const auto& groups = cfg_.corpus.groups;
        for (const MethodProfile& m : methods_) {
            std::vector<Submission> subs;
            std::vector<std::string> tags;
            for (std::size_t ti = 0; ti < targets_.size(); ++ti) {
                const TargetRef& t = targets_[ti];
                for (const DriverRef& d : drivers_for_type(t.person)) {
                    subs.push_back({type_, std::nullopt, attack(m, plan_->driving_recipe, *t.image, *d.media, d.owner, mix_seed(cfg_.seed, subs.size())),
                                    reference(t.person)});
                    tags.push_back(corpus_.persons[t.person].group);
                }
            }
            const auto outcomes = row(m.name, m.name, [&] { return subs; });
            std::map<std::string, std::vector<VerificationOutcome>> by_group;
            if (outcomes) {
                for (std::size_t k = 0; k < outcomes->size(); ++k) by_group[tags[k]].push_back((*outcomes)[k]);
            }
            for (const std::string& g : groups) {
                MetricsRow r{m.name + " [" + g + "]", m.name, std::nullopt, {}};
                if (!outcomes) {
                    r.error = "not run";
                } else if (by_group[g].empty()) {
                    r.error = "no targets in group";
                } else {
                    r.metrics = analysis::compute_metrics(by_group[g], true);
                }
                report_.rows.push_back(std::move(r));
            }
            for (std::size_t k = 1; k < groups.size(); ++k) {
                ComparisonRow c{m.name + ": " + groups[0] + " vs " + groups[k], std::nullopt, {}};
                const auto& a = by_group[groups[0]];
                const auto& b = by_group[groups[k]];
                if (!outcomes) {
                    c.error = "not run";
                } else if (a.size() < 2 || b.size() < 2) {
                    c.error = "groups need at least two outcomes each";
                } else {
                    c.comparison = analysis::compare_groups(a, b, groups[0], groups[k], true);
                }
                report_.comparisons.push_back(std::move(c));
            }
        }
    }

    void sweep() {
        std::vector<int> lengths = cfg_.lengths;
        const std::optional<vendor::IntRange> range =
            type_ == FlvType::Voice ? declared_.voice_code_length_range : declared_.action_length_range;
        if (lengths.empty()) {
            if (!range) throw ConfigError(declared_.name + " declares no challenge length range");
            for (int l = range->lo; l <= range->hi; ++l) lengths.push_back(l);
        }
        const std::vector<MethodProfile> methods = cfg_.methods.empty() ? std::vector<MethodProfile>{plan_->method} : methods_;
        for (const MethodProfile& m : methods) {
            for (int l : lengths) {
                row(m.name + " L=" + std::to_string(l), m.name, [&] { return method_submissions(m, l); });
            }
        }
    }

    void two_stage() {
        const MethodProfile* swap = nullptr;
        const MethodProfile* reen = nullptr;
        for (const MethodProfile& m : methods_) {
            if (!swap && m.category == media::SynthesisCategory::Swap) swap = &m;
            if (!reen && m.category == media::SynthesisCategory::Reenactment) reen = &m;
        }
        if (!swap || !reen) throw ConfigError("TwoStageComparison needs a face swapping and a face reenactment method");
        MethodProfile reen_adv = *reen;
        reen_adv.adversarial = true;

        // Stage 1 queries the vendor one target at a time, in order.
        std::vector<planner::StageOne> stage1;
        FlvClient* probe = declared_.supported_types.contains(FlvType::Image) ? &api_ : nullptr;
        try {
            for (const TargetRef& t : targets_) {
                std::vector<FacialMedia> bases;
                for (const DriverRef& d : drivers(t.person, cfg_.samples.driving_images, true)) bases.push_back(*d.media);
                stage1.push_back(planner::stage_one(*t.image, bases, *swap, probe, reference(t.person)));
            }
        } catch (const TransportError& e) {
            report_.partial = true;
            report_.error = e.what();
        }
        auto stage1_face = [&](std::size_t ti) -> const FacialMedia& { return stage1[ti].image; };

        row(reen->name, reen->name, [&] { return method_submissions(*reen, std::nullopt); });
        row(reen->name + " (Stage1)", reen->name, [&] { return method_submissions(*reen, std::nullopt, stage1_face); });
        row(reen->name + " (Stage2)", reen_adv.name, [&] { return method_submissions(reen_adv, std::nullopt); });
        row(reen->name + " (Stage1+Stage2)", reen_adv.name, [&] { return method_submissions(reen_adv, std::nullopt, stage1_face); });
    }

    void input_study() {
        const std::size_t victims = std::min(cfg_.samples.targets, corpus_.persons.size());
        auto subs_for = [&](const MethodProfile& m, bool failing_target, bool failing_driver) {
            std::vector<Submission> subs;
            for (std::size_t i = 0; i < victims; ++i) {
                const Person& p = corpus_.persons[i];
                const FacialMedia& face = failing_target ? p.failing_target : p.passing_target;
                for (const DriverRef& d : drivers(i, cfg_.samples.driving_videos, false)) {
                    const Person& owner = corpus_.persons[d.owner];
                    const FacialMedia& driving = failing_driver ? owner.failing_videos[d.slot] : owner.videos[d.slot];
                    subs.push_back({type_, std::nullopt, attack(m, plan_->driving_recipe, face, driving, d.owner, mix_seed(cfg_.seed, subs.size())),
                                    reference(i)});
                }
            }
            return subs;
        };
        for (const MethodProfile& m : methods_) {
            row(m.name + " / passing driving", m.name, [&] { return subs_for(m, false, false); });
            row(m.name + " / failing driving", m.name, [&] { return subs_for(m, false, true); });
            row(m.name + " / passing target", m.name, [&] { return subs_for(m, false, false); });
            row(m.name + " / failing target", m.name, [&] { return subs_for(m, true, false); });
        }
    }

    const CampaignConfig& cfg_;
    FlvClient& api_;
    CampaignReport& report_;
    Corpus corpus_;
    std::vector<MethodProfile> methods_;
    vendor::DeclaredFeatures declared_;
    FlvType type_ = FlvType::Silence;
    std::optional<planner::AttackPlan> plan_;
    std::vector<TargetRef> targets_;
};

std::string hex(const unsigned char* data, unsigned len) {
    std::string out;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", data[i]);
        out += buf;
    }
    return out;
}

}  // namespace

const MetricsRow* CampaignReport::row(std::string_view label) const {
    for (const auto& r : rows) {
        if (r.label == label) return &r;
    }
    return nullptr;
}

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::TypeEvaluation: return "TypeEvaluation";
        case ExperimentKind::IntelligenceOnly: return "IntelligenceOnly";
        case ExperimentKind::BiasStudy: return "BiasStudy";
        case ExperimentKind::DigitLengthSweep: return "DigitLengthSweep";
        case ExperimentKind::ActionSweep: return "ActionSweep";
        case ExperimentKind::TwoStageComparison: return "TwoStageComparison";
        case ExperimentKind::PresentationBaseline: return "PresentationBaseline";
        case ExperimentKind::InputStudy: return "InputStudy";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
    for (ExperimentKind k : {ExperimentKind::TypeEvaluation, ExperimentKind::IntelligenceOnly, ExperimentKind::BiasStudy,
                             ExperimentKind::DigitLengthSweep, ExperimentKind::ActionSweep, ExperimentKind::TwoStageComparison,
                             ExperimentKind::PresentationBaseline, ExperimentKind::InputStudy}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("unknown experiment kind " + std::string(s));
}

CampaignConfig campaign_config_from_json(const json& j, std::optional<std::uint64_t> seed_override) {
    if (!j.is_object()) throw ConfigError("campaign config must be an object");
    try {
        media::reject_unknown_fields(j, {"kind", "target", "flv_type", "methods", "corpus", "samples", "lengths", "seed", "concurrency"}, "campaign");
        CampaignConfig c;
        if (!j.contains("kind")) throw ConfigError("campaign config needs a kind");
        c.kind = experiment_kind_from_string(j["kind"].get<std::string>());
        if (!j.contains("target")) throw ConfigError("campaign config needs a target");
        const json& t = j["target"];
        media::reject_unknown_fields(t, {"url", "profile", "vendor_seed"}, "target");
        if (t.contains("url") == t.contains("profile")) throw ConfigError("target needs exactly one of url and profile");
        if (t.contains("url")) c.target.url = t["url"].get<std::string>();
        if (t.contains("profile")) {
            const json& p = t["profile"];
            c.target.profile = p.is_string() ? vendor::vendor_preset(p.get<std::string>()) : vendor::profile_from_json(p);
        }
        if (t.contains("vendor_seed")) c.target.vendor_seed = t["vendor_seed"].get<std::uint64_t>();
        if (j.contains("flv_type") && !j["flv_type"].is_null()) c.flv_type = vendor::flv_type_from_string(j["flv_type"].get<std::string>());
        if (j.contains("methods")) c.methods = deepfake::methods_from_json(j["methods"]);
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (seed_override) c.seed = *seed_override;
        const bool corpus_seed_pinned = j.contains("corpus") && j["corpus"].contains("seed");
        if (j.contains("corpus")) c.corpus = corpus_spec_from_json(j["corpus"]);
        if (!corpus_seed_pinned) c.corpus.seed = c.seed;
        if (j.contains("samples")) {
            const json& s = j["samples"];
            media::reject_unknown_fields(s, {"targets", "driving_videos", "driving_images", "probe_n"}, "samples");
            if (s.contains("targets")) c.samples.targets = s["targets"].get<std::size_t>();
            if (s.contains("driving_videos")) c.samples.driving_videos = s["driving_videos"].get<std::size_t>();
            if (s.contains("driving_images")) c.samples.driving_images = s["driving_images"].get<std::size_t>();
            if (s.contains("probe_n")) c.samples.probe_n = s["probe_n"].get<std::size_t>();
        }
        if (j.contains("lengths")) c.lengths = j["lengths"].get<std::vector<int>>();
        if (j.contains("concurrency")) c.concurrency = j["concurrency"].get<std::size_t>();
        if (c.concurrency == 0) throw ConfigError("concurrency must be positive");
        if (c.samples.targets == 0 || c.samples.driving_videos == 0 || c.samples.driving_images == 0 || c.samples.probe_n == 0) {
            throw ConfigError("sample sizes must be positive");
        }
        if (c.kind == ExperimentKind::BiasStudy && c.corpus.groups.size() < 2) throw ConfigError("BiasStudy needs at least two group tags");
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("campaign: ") + e.what());
    } catch (const media::MediaError& e) {
        throw ConfigError(e.what());
    } catch (const vendor::ProfileError& e) {
        throw ConfigError(e.what());
    } catch (const deepfake::MethodError& e) {
        throw ConfigError(e.what());
    }
}

json to_json(const CampaignConfig& c) {
    json target = json::object();
    if (c.target.url) target["url"] = *c.target.url;
    if (c.target.profile) target["profile"] = vendor::to_json(*c.target.profile);
    target["vendor_seed"] = c.target.vendor_seed;
    json methods = json::array();
    for (const auto& m : c.methods) methods.push_back(deepfake::to_json(m));
    return json{{"kind", to_string(c.kind)},
                {"target", std::move(target)},
                {"flv_type", c.flv_type ? json(vendor::to_string(*c.flv_type)) : json(nullptr)},
                {"methods", std::move(methods)},
                {"corpus", to_json(c.corpus)},
                {"samples",
                 {{"targets", c.samples.targets},
                  {"driving_videos", c.samples.driving_videos},
                  {"driving_images", c.samples.driving_images},
                  {"probe_n", c.samples.probe_n}}},
                {"lengths", c.lengths},
                {"seed", c.seed},
                {"concurrency", c.concurrency}};
}

std::string config_digest(const CampaignConfig& config) {
    const std::string doc = to_json(config).dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_Digest(doc.data(), doc.size(), md, &len, EVP_sha256(), nullptr);
    return hex(md, len);
}

std::unique_ptr<FlvClient> make_client(const TargetSpec& target) {
    if (target.url) return std::make_unique<HttpFlvClient>(*target.url);
    if (!target.profile) throw ConfigError("target has neither url nor profile");
    return std::make_unique<LocalFlvClient>(std::make_shared<vendor::VendorService>(*target.profile, target.vendor_seed));
}

CampaignReport run_campaign(const CampaignConfig& config, FlvClient& api) {
    const auto start = std::chrono::steady_clock::now();
    CampaignReport report;
    report.kind = to_string(config.kind);
    report.seed = config.seed;
    report.config_digest = config_digest(config);
    Runner runner(config, api, report);
    try {
        runner.run();
    } catch (const TransportError& e) {
        report.partial = true;
        report.error = e.what();
    }
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

CampaignReport run_campaign(const CampaignConfig& config) {
    auto client = make_client(config.target);
    return run_campaign(config, *client);
}

}  // namespace flvg::harness
