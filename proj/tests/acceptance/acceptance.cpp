// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "../oracles/oracles.hpp"
#include "flvg/campaign.hpp"
#include "flvg/report.hpp"
#include "flvg/vendor_http.hpp"

using namespace flvg;
using harness::CampaignConfig;
using nlohmann::json;
using vendor::FlvType;
using vendor::LipLanguage;
using vendor::VendorProfile;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Result {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// 1 --------------------------------------------------------------------------

VendorProfile random_profile(std::mt19937_64& rng, int i) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    VendorProfile p;
    p.name = "rand" + std::to_string(i);
    while (p.supported_types.empty()) {
        for (FlvType t : vendor::kAllFlvTypes) {
            if (coin(rng)) p.supported_types.insert(t);
        }
    }
    if (p.supports(FlvType::Voice)) {
        const int lo = 1 + static_cast<int>(rng() % 4);
        const int hi = lo + static_cast<int>(rng() % 4);
        p.voice_code_length_range = vendor::IntRange{lo, hi};
        p.default_code_length = lo + static_cast<int>(rng() % (hi - lo + 1));
        const int lip = static_cast<int>(rng() % 3);
        p.lip_language = lip == 0 ? LipLanguage::None : lip == 1 ? LipLanguage::MovementOnly : LipLanguage::FullMatch;
    }
    if (p.supports(FlvType::Action)) {
        for (vendor::Action a : vendor::kAllActions) {
            if (coin(rng)) p.action_set.push_back(a);
        }
        if (p.action_set.empty()) p.action_set.push_back(vendor::Action::Blink);
        const int lo = 1 + static_cast<int>(rng() % 2);
        p.action_length_range = vendor::IntRange{lo, lo + static_cast<int>(rng() % 3)};
    }
    p.coherence_detection = coin(rng);
    p.replay_detection = coin(rng);
    p.anti_deepfake = coin(rng);
    p.thresholds.replay = 0.3 + 0.5 * u(rng);
    p.thresholds.quality = 0.1 + 0.4 * u(rng);
    p.thresholds.lip_movement = 0.005 + 0.015 * u(rng);
    vendor::validate(p);
    return p;
}

std::string probe_mismatch(const VendorProfile& p, const intel::IntelligenceReport& r) {
    std::string why;
    const bool video = p.supports(FlvType::Silence) || p.supports(FlvType::Voice) || p.supports(FlvType::Action);
    for (const auto& f : r.probes) {
        for (const auto& v : f.rates) {
            if (v.errors) why += " errors(" + std::string(intel::to_string(f.feature)) + ")";
        }
    }
    const intel::Verdict coherence = !video ? intel::Verdict::NotApplicable : p.coherence_detection ? intel::Verdict::Deployed : intel::Verdict::NotDeployed;
    if (r.coherence != coherence) {
        why += std::string(" coherence=") + intel::to_string(r.coherence);
    }
    if (r.presentation_attack != (p.replay_detection ? intel::Verdict::Deployed : intel::Verdict::NotDeployed)) {
        why += std::string(" presentation=") + intel::to_string(r.presentation_attack);
    }
    intel::LipVerdict want = intel::LipVerdict::NotApplicable;
    if (p.supports(FlvType::Voice)) {
        want = p.lip_language == LipLanguage::FullMatch      ? intel::LipVerdict::FullMatch
               : p.lip_language == LipLanguage::MovementOnly ? intel::LipVerdict::MovementOnly
                                                             : intel::LipVerdict::None;
    }
    if (r.lip_language != want) why += std::string(" lip=") + intel::to_string(r.lip_language);
    return why;
}

Result probing_soundness() {
    const auto start = Clock::now();
    const auto corpus = harness::generate_corpus({});
    const auto videos = corpus.genuine_videos();
    std::vector<VendorProfile> profiles = vendor::vendor_presets();
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) profiles.push_back(random_profile(rng, i));

    int wrong = 0;
    std::string first;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        LocalFlvClient api(std::make_shared<vendor::VendorService>(profiles[k], k));
        intel::ProbeOptions o;
        o.n = 20;
        const auto r = intel::collect_intelligence(api, videos, 100 + k, o);
        const std::string why = probe_mismatch(profiles[k], r);
        if (!why.empty()) {
            ++wrong;
            if (first.empty()) first = profiles[k].name + ":" + why;
        }
    }
    const double t = seconds_since(start);
    std::string detail = fmt("%.0f configs, %.0f wrong, %.1f s", static_cast<double>(profiles.size()), wrong, t);
    if (!first.empty()) detail += "; first: " + first;
    return {wrong == 0 && t < 60.0, detail};
}

// 2 --------------------------------------------------------------------------

Result contradiction_detection() {
    int flagged = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        harness::CorpusSpec spec;
        spec.seed = seed;
        const auto videos = harness::generate_corpus(spec).genuine_videos();
        LocalFlvClient api(std::make_shared<vendor::VendorService>(vendor::vendor_preset("BD"), seed));
        const auto r = intel::collect_intelligence(api, videos, seed);
        for (const auto& c : r.contradictions) {
            if (c.feature == "lip_language" && c.declared == "FullMatch" && c.inferred == "None") {
                ++flagged;
                break;
            }
        }
    }
    return {flagged == 50, fmt("flagged in %.0f/50 runs", flagged)};
}

// 3 --------------------------------------------------------------------------

Result metric_algebra() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        const bool adf = u(rng) < 0.5;
        const double bias = u(rng);
        std::vector<vendor::VerificationOutcome> os(1 + rng() % 60);
        for (auto& o : os) {
            o.requirement_met = u(rng) < 0.5 + bias / 2;
            o.liveness_pass = u(rng) < bias;
            if (adf) o.anti_deepfake_pass = u(rng) < 1 - bias / 2;
            o.face_match_pass = u(rng) < 0.7;
        }
        const bool require = u(rng) < 0.5;
        const auto m = analysis::compute_metrics(os, require);
        const double rates[] = {m.liveness_evasion_rate, m.anti_deepfake_evasion_rate, m.face_matching_rate, m.overall_evasion_rate};
        bool ok = true;
        for (double r : rates) ok = ok && r >= 0.0 && r <= 1.0;
        double bound = std::min(m.liveness_evasion_rate, m.face_matching_rate);
        if (adf) {
            bound = std::min(bound, m.anti_deepfake_evasion_rate);
        } else {
            ok = ok && m.anti_deepfake_evasion_rate == 1.0 && !m.anti_deepfake_applicable;
        }
        ok = ok && m.overall_evasion_rate <= bound + 1e-15;
        if (!ok) ++violations;
    }
    return {violations == 0, fmt("1000 outcome sets, %.0f violations", violations)};
}

// 4 --------------------------------------------------------------------------

Result statistics_correctness() {
    std::mt19937_64 rng(5);
    double worst_t = 0, worst_p = 0;
    for (int k = 0; k < 100; ++k) {
        auto group = [&] {
            const std::size_t n = 10 + rng() % 191;
            const std::size_t ones = 1 + rng() % (n - 1);
            std::vector<double> v(n, 0.0);
            std::fill(v.begin(), v.begin() + ones, 1.0);
            std::shuffle(v.begin(), v.end(), rng);
            return v;
        };
        const auto a = group(), b = group();
        const auto r = analysis::welch_t_test(a, b);
        const auto o = oracle::welch(a, b);
        worst_t = std::max(worst_t, std::fabs(r.t - o.t));
        worst_p = std::max(worst_p, std::fabs(r.p - o.p));
    }
    std::vector<double> a(100, 0.0), b(100, 0.0);
    std::fill(a.begin(), a.begin() + 96, 1.0);
    std::fill(b.begin(), b.begin() + 74, 1.0);
    const double p = analysis::welch_t_test(a, b).p;
    return {worst_t <= 1e-9 && worst_p <= 1e-9 && p < 1e-3, fmt("max |dt| %.2e, max |dp| %.2e; 96/100 vs 74/100 p=%.2e", worst_t, worst_p, p)};
}

// 5 --------------------------------------------------------------------------

json base_config(const std::string& kind, const std::string& preset) {
    return {{"kind", kind}, {"target", {{"profile", preset}}}};
}

double overall(const harness::CampaignReport& r, const std::string& label) {
    const auto* row = r.row(label);
    if (!row || !row->metrics) return std::nan("");
    return row->metrics->overall_evasion_rate;
}

Result causal_structure() {
    const auto corpus = harness::generate_corpus({});
    const auto& swap = deepfake::method_preset("FaceShifter");
    const auto& reen = deepfake::method_preset("FOMM");

    // (a) env inheritance, repeated to catch run-to-run drift
    std::size_t frames = 0, env_bad = 0;
    for (int run = 0; run < 2; ++run) {
        for (std::size_t i = 0; i < corpus.persons.size(); ++i) {
            const auto& victim = corpus.persons[i];
            const auto& driver = corpus.persons[(i + 1) % corpus.persons.size()];
            for (const auto& m : deepfake::method_presets()) {
                for (const auto& target : victim.targets) {
                    for (const auto& driving : driver.videos) {
                        const auto out = deepfake::synthesize(target, driving, m);
                        for (std::size_t f = 0; f < out.size(); ++f, ++frames) {
                            const auto& want = m.category == media::SynthesisCategory::Swap ? driving.frames()[f].env : target.frames()[0].env;
                            if (!(out.frames()[f].env == want)) ++env_bad;
                        }
                    }
                }
            }
        }
    }

    // (b) adversarial discount before clamping
    std::size_t discount_bad = 0;
    for (const auto& m : deepfake::method_presets()) {
        auto on = m, off = m;
        on.adversarial = true;
        off.adversarial = false;
        for (int k = 0; k <= 100; ++k) {
            const double mo = k / 100.0;
            if (deepfake::raw_artifact(on, mo) != deepfake::raw_artifact(off, mo) - m.adversarial_discount) ++discount_bad;
        }
    }

    // (c) which input each category depends on
    std::string detail;
    bool c_ok = true;
    for (const char* preset : {"ST", "CW", "BD"}) {
        json j = base_config("InputStudy", preset);
        j["methods"] = {"FaceShifter", "FOMM"};
        const auto r = harness::run_campaign(harness::campaign_config_from_json(j));
        auto delta = [&](const std::string& m, const char* a, const char* b) {
            return std::fabs(overall(r, m + " / " + a) - overall(r, m + " / " + b));
        };
        const double sd = delta(swap.name, "passing driving", "failing driving"), rd = delta(reen.name, "passing driving", "failing driving");
        const double st = delta(swap.name, "passing target", "failing target"), rt = delta(reen.name, "passing target", "failing target");
        const bool ok = sd >= 0.15 && rd <= 0.05 && rt >= 0.15 && st <= 0.05;
        c_ok = c_ok && ok;
        detail += std::string("; ") + preset + fmt(" driving swap %.2f reen %.2f, target swap %.2f reen %.2f", sd, rd, st, rt);
    }
    const std::string head = fmt("env mismatches %.0f/%.0f frames, discount mismatches %.0f", env_bad, frames, discount_bad);
    return {env_bad == 0 && discount_bad == 0 && c_ok, head + detail};
}

// 6 --------------------------------------------------------------------------

Result two_stage_dominance() {
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    int presets = 0;
    for (const auto& p : vendor::vendor_presets()) {
        if (!p.anti_deepfake) continue;
        ++presets;
        // default calibration, and one with large head motion where the
        // detector actually bites
        for (const json& motion : {json::array({4.0, 16.0}), json::array({10.0, 40.0})}) {
            json j = base_config("TwoStageComparison", p.name);
            j["samples"] = {{"targets", 40}};
            j["corpus"] = {{"motion_deg", motion}};
            const auto r = harness::run_campaign(harness::campaign_config_from_json(j));
            const double base = overall(r, "FOMM"), s1 = overall(r, "FOMM (Stage1)"), s2 = overall(r, "FOMM (Stage2)"),
                         both = overall(r, "FOMM (Stage1+Stage2)");
            const bool here = both >= s1 && s1 >= base && both >= s2 && !r.partial;
            ok = ok && here;
            detail += "; " + p.name + fmt(" motion<=%.0f:", motion[1].get<double>()) +
                      fmt(" two-stage %.3f, stage1 %.3f, stage2 %.3f, baseline %.3f", both, s1, s2, base);
        }
    }
    const double t = seconds_since(start);
    ok = ok && presets > 0 && t < 120.0;
    return {ok, fmt("%.0f presets, %.1f s", presets, t) + detail};
}

// 7 --------------------------------------------------------------------------

double variation(const harness::CampaignReport& r) {
    double lo = 1.0, hi = 0.0;
    for (const auto& row : r.rows) {
        if (!row.metrics) return std::nan("");
        lo = std::min(lo, row.metrics->overall_evasion_rate);
        hi = std::max(hi, row.metrics->overall_evasion_rate);
    }
    return r.rows.size() < 2 ? 0.0 : hi - lo;
}

Result null_results() {
    bool ok = true;
    std::string detail;

    VendorProfile wide = vendor::default_profile();
    wide.name = "wide";
    wide.lip_language = LipLanguage::None;
    wide.coherence_detection = false;
    wide.voice_code_length_range = vendor::IntRange{1, 8};
    for (const json& target : {json{{"profile", "BD"}}, json{{"profile", "ST"}}, json{{"profile", vendor::to_json(wide)}}}) {
        json j{{"kind", "DigitLengthSweep"}, {"target", target}};
        const auto r = harness::run_campaign(harness::campaign_config_from_json(j));
        const double v = variation(r);
        ok = ok && v < 0.01 && !r.rows.empty();
        detail += "; digits " + r.target + fmt(" (%.0f lengths) %.3f", static_cast<double>(r.rows.size()), v);
    }
    for (const json& target : {json{{"profile", "HW"}}, json{{"profile", vendor::to_json(wide)}}}) {
        json j{{"kind", "ActionSweep"}, {"target", target}, {"lengths", {1, 2, 3, 4}}};
        const auto r = harness::run_campaign(harness::campaign_config_from_json(j));
        const double v = variation(r);
        ok = ok && v < 0.05 && r.rows.size() == 4;
        detail += "; actions " + r.target + fmt(" %.3f", v);
    }
    return {ok, detail.substr(2)};
}

// 8 --------------------------------------------------------------------------

Result presentation_baseline() {
    bool ok = true;
    std::string detail;
    for (const auto& p : vendor::vendor_presets()) {
        if (!p.replay_detection) continue;
        const auto r = harness::run_campaign(harness::campaign_config_from_json(base_config("PresentationBaseline", p.name)));
        double best = 0.0;
        for (const auto& row : r.rows) {
            if (row.label != "Genuine" && row.label != "Replay" && row.metrics) best = std::max(best, row.metrics->overall_evasion_rate);
        }
        const double replay = overall(r, "Replay");
        ok = ok && replay <= 0.05 && best > 0.4;
        detail += "; " + p.name + fmt(" replay %.3f best %.3f", replay, best);
    }
    return {ok, detail.substr(2)};
}

// 9 --------------------------------------------------------------------------

Result transport_equivalence() {
    const json configs[] = {
        {{"kind", "TypeEvaluation"}, {"target", {{"profile", "TC"}, {"vendor_seed", 11}}}, {"flv_type", "voice"}},
        {{"kind", "PresentationBaseline"}, {"target", {{"profile", "HW"}, {"vendor_seed", 12}}}, {"flv_type", "action"}},
        {{"kind", "TwoStageComparison"}, {"target", {{"profile", "BD"}, {"vendor_seed", 13}}}, {"samples", {{"targets", 20}}}},
    };
    bool ok = true;
    std::string detail;
    for (const json& j : configs) {
        const CampaignConfig cfg = harness::campaign_config_from_json(j);
        const json local = harness::strip_run_metadata(harness::to_json(harness::run_campaign(cfg)));

        auto service = std::make_shared<vendor::VendorService>(*cfg.target.profile, cfg.target.vendor_seed);
        vendor::VendorHttpServer server(service);
        server.bind();
        server.start();
        HttpFlvClient api(server.url());
        const json remote = harness::strip_run_metadata(harness::to_json(harness::run_campaign(cfg, api)));
        server.stop();

        const bool same = local == remote && !remote["status"]["partial"].get<bool>() && !remote["metrics"].empty();
        ok = ok && same;
        detail += "; " + j["kind"].get<std::string>() + (same ? " equal" : " DIFFERENT");
    }
    return {ok, detail.substr(2)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Result()>> criteria[] = {
        {"1 probing soundness", probing_soundness},
        {"2 declared-vs-actual contradiction", contradiction_detection},
        {"3 metric algebra", metric_algebra},
        {"4 statistics correctness", statistics_correctness},
        {"5 deepfake causal structure", causal_structure},
        {"6 two-stage dominance", two_stage_dominance},
        {"7 random-process null results", null_results},
        {"8 presentation baseline", presentation_baseline},
        {"9 transport equivalence", transport_equivalence},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        if (!r.pass) ++failed;
        std::printf("%s  %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
