#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flvg/campaign.hpp"
#include "flvg/report.hpp"
#include "flvg/vendor_http.hpp"

using namespace flvg;
using vendor::FlvType;

namespace {

struct Served {
    explicit Served(const vendor::VendorProfile& p, std::uint64_t seed = 0)
        : service(std::make_shared<vendor::VendorService>(p, seed)), server(service) {
        server.bind();
        server.start();
    }
    ~Served() { server.stop(); }
    std::shared_ptr<vendor::VendorService> service;
    vendor::VendorHttpServer server;
};

}  // namespace

TEST(Http, DeclarationRoundTrip) {
    Served s(vendor::vendor_preset("BD"));
    HttpFlvClient api(s.server.url());
    EXPECT_EQ(api.declared(), vendor::vendor_preset("BD").declared());
}

TEST(Http, VerifyMatchesInProcess) {
    Served s(vendor::default_profile());
    HttpFlvClient api(s.server.url());
    const auto& p = fixture::corpus().persons[0];
    const auto o = api.verify(FlvType::Silence, p.videos[0], fixture::reference(0), std::nullopt);
    EXPECT_EQ(o, vendor::verify(vendor::default_profile(), FlvType::Silence, p.videos[0], fixture::reference(0)));
}

TEST(Http, ChallengeFlow) {
    Served s(vendor::default_profile());
    HttpFlvClient api(s.server.url());
    const auto t = api.challenge(FlvType::Voice, 5);
    const auto& digits = std::get<std::vector<int>>(t.challenge);
    EXPECT_EQ(digits.size(), 5u);
    const auto& p = fixture::corpus().persons[0];
    const auto m = media::set_matched_lips(media::import_audio(p.videos[0], digits), digits);
    EXPECT_TRUE(api.verify(FlvType::Voice, m, fixture::reference(0), t.session_id).overall_pass());
    try {
        api.verify(FlvType::Voice, m, fixture::reference(0), t.session_id);
        FAIL();
    } catch (const vendor::VerifyError& e) {
        EXPECT_EQ(e.code(), vendor::ErrorCode::UnknownSession);
    }
}

TEST(Http, ErrorsMapToCodes) {
    Served s(vendor::vendor_preset("ST"));
    HttpFlvClient api(s.server.url());
    try {
        api.challenge(FlvType::Action, std::nullopt);
        FAIL();
    } catch (const vendor::VerifyError& e) {
        EXPECT_EQ(e.code(), vendor::ErrorCode::UnsupportedType);
    }
}

TEST(Http, DeadServerIsTransportError) {
    int port = 0;
    {
        Served s(vendor::default_profile());
        port = s.server.port();
    }
    HttpFlvClient api("http://127.0.0.1:" + std::to_string(port), 2);
    EXPECT_THROW(api.declared(), TransportError);
}

TEST(Http, CampaignEqualsInProcess) {
    const nlohmann::json j{{"kind", "TypeEvaluation"},
                           {"target", {{"profile", "TC"}, {"vendor_seed", 3}}},
                           {"flv_type", "voice"},
                           {"samples", {{"targets", 6}, {"driving_videos", 2}, {"probe_n", 10}}}};
    const auto cfg = harness::campaign_config_from_json(j);
    const auto local = harness::run_campaign(cfg);
    Served s(vendor::vendor_preset("TC"), 3);
    HttpFlvClient api(s.server.url());
    const auto remote = harness::run_campaign(cfg, api);
    EXPECT_EQ(harness::strip_run_metadata(harness::to_json(local)), harness::strip_run_metadata(harness::to_json(remote)));
}
