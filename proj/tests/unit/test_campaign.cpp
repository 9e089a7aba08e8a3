#include <gtest/gtest.h>

#include <atomic>

#include "flvg/campaign.hpp"
#include "flvg/report.hpp"

using namespace flvg;
using namespace flvg::harness;
using nlohmann::json;

namespace {

CampaignConfig config(const json& extra) {
    json j{{"kind", "TypeEvaluation"}, {"target", {{"profile", "CW"}}}, {"samples", {{"targets", 10}, {"driving_videos", 2}, {"driving_images", 2}}}};
    if (extra.is_object()) j.update(extra);
    return campaign_config_from_json(j);
}

/// Drops the connection after `budget` verify calls.
class DroppingClient : public FlvClient {
public:
    DroppingClient(const vendor::VendorProfile& p, int budget) : inner_(std::make_shared<vendor::VendorService>(p)), budget_(budget) {}
    vendor::DeclaredFeatures declared() override { return inner_.declared(); }
    ChallengeTicket challenge(vendor::FlvType t, std::optional<int> l) override { return inner_.challenge(t, l); }
    vendor::VerificationOutcome verify(vendor::FlvType t, const media::FacialMedia& m, const media::IdentityVector& r,
                                       const std::optional<std::string>& s) override {
        if (budget_-- <= 0) throw TransportError("connection reset");
        return inner_.verify(t, m, r, s);
    }

private:
    LocalFlvClient inner_;
    std::atomic<int> budget_;
};

}  // namespace

TEST(Config, ParsesAndDigests) {
    const auto c = config({{"methods", {"FOMM", {{"preset", "FaceShifter"}, {"adversarial", false}}}}});
    EXPECT_EQ(c.kind, ExperimentKind::TypeEvaluation);
    ASSERT_EQ(c.methods.size(), 2u);
    EXPECT_FALSE(c.methods[1].adversarial);
    EXPECT_EQ(c.corpus.seed, c.seed);
    EXPECT_EQ(config_digest(c).size(), 64u);
    EXPECT_EQ(config_digest(c), config_digest(campaign_config_from_json(to_json(c))));
    EXPECT_NE(config_digest(c), config_digest(config({{"seed", 2}})));
}

TEST(Config, SeedOverride) {
    const json j{{"kind", "TypeEvaluation"}, {"target", {{"profile", "CW"}}}, {"seed", 3}};
    const auto c = campaign_config_from_json(j, 99);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.corpus.seed, 99u);
    json pinned = j;
    pinned["corpus"] = {{"seed", 4}};
    EXPECT_EQ(campaign_config_from_json(pinned, 99).corpus.seed, 4u);
}

TEST(Config, Rejects) {
    EXPECT_THROW(config({{"kind", "Nope"}}), ConfigError);
    EXPECT_THROW(config({{"surprise", 1}}), ConfigError);
    EXPECT_THROW(config({{"target", {{"url", "http://x"}, {"profile", "BD"}}}}), ConfigError);
    EXPECT_THROW(config({{"methods", {"DeepNope"}}}), ConfigError);
    EXPECT_THROW(config({{"concurrency", 0}}), ConfigError);
    EXPECT_THROW(config({{"kind", "BiasStudy"}, {"corpus", {{"groups", {"A"}}}}}), ConfigError);
}

TEST(Campaign, DeterministicAndConcurrencyFree) {
    const auto a = to_json(run_campaign(config({{"concurrency", 1}})));
    const auto b = to_json(run_campaign(config({{"concurrency", 8}})));
    json sa = strip_run_metadata(a), sb = strip_run_metadata(b);
    EXPECT_EQ(sa, sb);
    EXPECT_EQ(strip_run_metadata(to_json(run_campaign(config({})))), strip_run_metadata(to_json(run_campaign(config({})))));
}

TEST(Campaign, RowsPerMethod) {
    const auto r = run_campaign(config({}));
    EXPECT_EQ(r.rows.size(), 6u);
    EXPECT_FALSE(r.partial);
    EXPECT_TRUE(r.invariant_violations.empty());
    const auto* fs = r.row("FaceShifter");
    ASSERT_NE(fs, nullptr);
    EXPECT_EQ(fs->metrics->n, 10u * 2u);
    ASSERT_TRUE(r.intelligence);
    ASSERT_EQ(r.plans.size(), 1u);
}

TEST(Campaign, TransportFailureKeepsFinishedRows) {
    const auto c = config({});
    // 140 probe calls (20 per variant, 7 variants), then two full rows of 20
    DroppingClient api(vendor::vendor_preset("CW"), 140 + 20 * 2 + 5);
    const auto r = run_campaign(c, api);
    EXPECT_TRUE(r.partial);
    ASSERT_EQ(r.rows.size(), 6u);
    EXPECT_TRUE(r.rows[0].metrics.has_value());
    EXPECT_TRUE(r.rows[1].metrics.has_value());
    EXPECT_FALSE(r.rows[2].metrics.has_value());
    EXPECT_FALSE(r.rows[5].metrics.has_value());
    const std::string text = emit_report(r, ReportFormat::Text);
    EXPECT_NE(text.find("MISSING"), std::string::npos);
    EXPECT_NE(text.find("PARTIAL"), std::string::npos);
}

TEST(Campaign, UnsupportedTypeIsConfigError) {
    EXPECT_THROW(run_campaign(config({{"flv_type", "action"}})), ConfigError);
    EXPECT_THROW(run_campaign(config({{"kind", "ActionSweep"}})), ConfigError);
}

TEST(Campaign, KindsProduceTheirRows) {
    const auto pb = run_campaign(config({{"kind", "PresentationBaseline"}}));
    ASSERT_NE(pb.row("Genuine"), nullptr);
    EXPECT_EQ(pb.row("Genuine")->metrics->overall_evasion_rate, 1.0);
    EXPECT_EQ(pb.row("Replay")->metrics->overall_evasion_rate, 0.0);

    const auto sweep = run_campaign(config({{"kind", "DigitLengthSweep"}}));
    EXPECT_EQ(sweep.rows.size(), 3u);  // CW accepts 4 to 6 digits

    const auto bias = run_campaign(config({{"kind", "BiasStudy"}}));
    EXPECT_EQ(bias.comparisons.size(), 2u);
    EXPECT_NE(bias.row("FOMM [B]"), nullptr);

    const auto ts = run_campaign(config({{"kind", "TwoStageComparison"}, {"target", {{"profile", "BD"}}}}));
    EXPECT_NE(ts.row("FOMM (Stage1+Stage2)"), nullptr);

    const auto io = run_campaign(config({{"kind", "IntelligenceOnly"}}));
    EXPECT_TRUE(io.rows.empty());
    EXPECT_EQ(io.plans.size(), 3u);
}

TEST(Report, JsonAndTextAgree) {
    const auto r = run_campaign(config({}));
    const json j = to_json(r);
    const std::string text = render_text(j);
    for (const auto& row : j["metrics"]) {
        EXPECT_NE(text.find(analysis::format_rate(row["metrics"]["overall_evasion_rate"].get<double>())), std::string::npos);
    }
    EXPECT_NE(text.find(r.config_digest), std::string::npos);
    EXPECT_EQ(j["run"]["config_digest"], r.config_digest);
    EXPECT_EQ(render_text(json::parse(j.dump())), text);
}
