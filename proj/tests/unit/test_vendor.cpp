#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flvg/vendor_service.hpp"

using namespace flvg;
using namespace flvg::vendor;
using media::FacialMedia;

namespace {

const harness::Person& person(std::size_t i = 0) { return fixture::corpus().persons[i]; }

}  // namespace

TEST(Profile, PresetsValidate) {
    ASSERT_EQ(vendor_presets().size(), 6u);
    for (const auto& p : vendor_presets()) EXPECT_NO_THROW(validate(p));
    EXPECT_THROW(vendor_preset("nope"), ProfileError);
}

TEST(Profile, BdDeclaresMoreThanItChecks) {
    const auto& bd = vendor_preset("BD");
    EXPECT_EQ(bd.lip_language, LipLanguage::None);
    EXPECT_EQ(bd.declared().lip_language, LipLanguage::FullMatch);
}

TEST(Profile, JsonRoundTripAndOverrides) {
    for (const auto& p : vendor_presets()) EXPECT_EQ(profile_from_json(to_json(p)), p);
    const auto p = profile_from_json({{"preset", "ST"}, {"coherence_detection", true}});
    EXPECT_TRUE(p.coherence_detection);
    EXPECT_EQ(p.name, "ST");
    EXPECT_THROW(profile_from_json({{"preset", "ST"}, {"colour", 1}}), ProfileError);
}

TEST(Profile, RejectsBadThresholds) {
    VendorProfile p = default_profile();
    p.thresholds.replay = 1.5;
    EXPECT_THROW(validate(p), ProfileError);
}

TEST(Verify, GenuineVideoPasses) {
    const auto o = verify(default_profile(), FlvType::Silence, person().videos[0], fixture::reference(0));
    EXPECT_TRUE(o.liveness_pass);
    EXPECT_TRUE(o.overall_pass());
    ASSERT_TRUE(o.anti_deepfake_pass);
}

TEST(Verify, ReplayFailsLivenessOnlyWithDetection) {
    const auto replay = media::make_replay(person().videos[0], 0.9);
    EXPECT_FALSE(verify(default_profile(), FlvType::Silence, replay, fixture::reference(0)).liveness_pass);
    VendorProfile off = default_profile();
    off.replay_detection = false;
    EXPECT_TRUE(verify(off, FlvType::Silence, replay, fixture::reference(0)).liveness_pass);
}

TEST(Verify, CoherenceCatchesScrambling) {
    for (std::size_t v = 0; v < 3; ++v) {
        const FacialMedia& clip = person().videos[v];
        EXPECT_TRUE(check_coherence(clip));
        for (std::uint64_t s = 0; s < 20; ++s) EXPECT_FALSE(check_coherence(media::scramble_frames(clip, s)));
    }
}

TEST(Verify, WrongPersonFailsFaceMatch) {
    const auto o = verify(default_profile(), FlvType::Silence, person(0).videos[0], fixture::reference(1));
    EXPECT_TRUE(o.liveness_pass);
    EXPECT_FALSE(o.face_match_pass.value_or(true));
}

TEST(Verify, AnAbsentDetectorLeavesFieldEmpty) {
    const auto o = verify(vendor_preset("ST"), FlvType::Silence, person().videos[0], fixture::reference(0));
    EXPECT_FALSE(o.anti_deepfake_pass.has_value());
}

TEST(Verify, PoorCaptureFails) {
    const auto o = verify(default_profile(), FlvType::Silence, person().failing_videos[0], fixture::reference(0));
    EXPECT_FALSE(o.liveness_pass);
}

TEST(Verify, VoiceRequirement) {
    const auto p = default_profile();
    const auto s = issue_challenge(p, FlvType::Voice, 9);
    const auto& digits = s.digits();
    EXPECT_EQ(static_cast<int>(digits.size()), *p.default_code_length);
    const FacialMedia& clip = person().videos[0];
    const auto good = media::set_matched_lips(media::import_audio(clip, digits), digits);
    EXPECT_TRUE(verify(p, FlvType::Voice, good, fixture::reference(0), &s).requirement_met);
    std::vector<int> wrong(digits);
    wrong[0] = (wrong[0] + 1) % 10;
    const auto bad = media::set_matched_lips(media::import_audio(clip, wrong), wrong);
    EXPECT_FALSE(verify(p, FlvType::Voice, bad, fixture::reference(0), &s).requirement_met);
    const auto silent = media::silence_lips(media::import_audio(clip, digits));
    EXPECT_FALSE(verify(p, FlvType::Voice, silent, fixture::reference(0), &s).requirement_met);
}

TEST(Verify, ActionRequirement) {
    const std::vector<Action> acts{Action::TurnLeft, Action::OpenMouth};
    const auto rec = harness::record_action_video(person(), acts, 3);
    EXPECT_TRUE(check_action_requirement(rec, acts));
    const std::vector<Action> other{Action::LookUp};
    EXPECT_FALSE(check_action_requirement(rec, other));
}

TEST(Verify, ChallengesNeedSessions) {
    EXPECT_THROW(verify(default_profile(), FlvType::Voice, person().videos[0], fixture::reference(0)), VerifyError);
    EXPECT_THROW(verify(vendor_preset("ST"), FlvType::Image, media::still_image(person().videos[0]), fixture::reference(0)), VerifyError);
}

TEST(Service, SessionsAreSingleUse) {
    VendorService svc(default_profile(), 4);
    const auto s = svc.challenge(FlvType::Voice);
    const auto media = media::set_matched_lips(media::import_audio(person().videos[0], s.digits()), s.digits());
    EXPECT_NO_THROW(svc.verify(FlvType::Voice, media, fixture::reference(0), s.session_id));
    try {
        svc.verify(FlvType::Voice, media, fixture::reference(0), s.session_id);
        FAIL();
    } catch (const VerifyError& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownSession);
    }
}

TEST(Service, SessionsExpire) {
    Clock::time_point now{};
    VendorService svc(default_profile(), 4, [&] { return now; });
    const auto s = svc.challenge(FlvType::Action);
    now += std::chrono::seconds(61);
    try {
        svc.verify(FlvType::Action, person().videos[0], fixture::reference(0), s.session_id);
        FAIL();
    } catch (const VerifyError& e) {
        EXPECT_EQ(e.code(), ErrorCode::ExpiredSession);
    }
}

TEST(Service, ChallengeSequenceIsSeeded) {
    VendorService a(default_profile(), 17), b(default_profile(), 17);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(a.challenge(FlvType::Voice).challenge, b.challenge(FlvType::Voice).challenge);
}

TEST(Service, LengthOutsideRangeIsRejected) {
    VendorService svc(vendor_preset("ST"));
    EXPECT_THROW(svc.challenge(FlvType::Voice, 9), VerifyError);
    EXPECT_EQ(svc.challenge(FlvType::Voice, 4).digits().size(), 4u);
}

TEST(OutcomeJson, RoundTrip) {
    const auto o = verify(default_profile(), FlvType::Silence, person().videos[1], fixture::reference(0));
    EXPECT_EQ(outcome_from_json(to_json(o)), o);
}
