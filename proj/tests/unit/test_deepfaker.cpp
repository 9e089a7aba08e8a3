#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flvg/deepfaker.hpp"
#include "flvg/vendor_sim.hpp"

using namespace flvg;
using namespace flvg::deepfake;
using media::FacialMedia;

namespace {

const harness::Person& person(std::size_t i) { return fixture::corpus().persons[i]; }

}  // namespace

TEST(Method, Presets) {
    ASSERT_EQ(method_presets().size(), 6u);
    EXPECT_TRUE(method_preset("FaceShifter").adversarial);
    EXPECT_EQ(method_preset("FOMM").category, media::SynthesisCategory::Reenactment);
    EXPECT_THROW(method_preset("DeepNope"), MethodError);
    MethodProfile bad = method_preset("FOMM");
    bad.identity_fidelity = 1.2;
    EXPECT_THROW(validate(bad), MethodError);
}

TEST(Method, Motion) {
    EXPECT_EQ(motion({}, {}), 0.0);
    EXPECT_NEAR(motion({0, 0, 0}, {45, 0, 0}), 0.5, 1e-12);
    EXPECT_EQ(motion({0, 0, 0}, {180, 0, 0}), 1.0);
}

TEST(Method, AdversarialDiscountIsExact) {
    for (const auto& m : method_presets()) {
        MethodProfile on = m, off = m;
        on.adversarial = true;
        off.adversarial = false;
        for (double mo : {0.0, 0.1, 0.37, 1.0}) EXPECT_DOUBLE_EQ(raw_artifact(off, mo) - raw_artifact(on, mo), m.adversarial_discount);
    }
}

TEST(Synthesize, SwapKeepsDrivingEnv) {
    const auto& target = person(0).targets[0];
    const auto& driving = person(1).videos[0];
    const auto out = synthesize(target, driving, method_preset("FaceShifter"));
    ASSERT_EQ(out.size(), driving.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        EXPECT_EQ(out.frames()[i].env, driving.frames()[i].env);
        EXPECT_EQ(out.frames()[i].head_pose, driving.frames()[i].head_pose);
        EXPECT_EQ(out.frames()[i].replay_score, driving.frames()[i].replay_score);
    }
    EXPECT_EQ(out.provenance().kind, media::Provenance::Kind::Synthesized);
}

TEST(Synthesize, ReenactmentKeepsTargetEnv) {
    const auto& target = person(0).targets[1];
    const auto& driving = person(2).videos[1];
    const auto out = synthesize(target, driving, method_preset("FOMM"));
    for (const auto& f : out.frames()) {
        EXPECT_EQ(f.env, target.frames()[0].env);
        EXPECT_EQ(f.replay_score, 0.0);
    }
}

TEST(Synthesize, IdentityFollowsFidelity) {
    const auto& target = person(0).targets[0];
    const auto& driving = person(1).videos[0];
    const auto& ref = fixture::reference(0);
    const double hi = synthesize(target, driving, method_preset("FOMM")).frames()[0].identity.cosine(ref);
    const double lo = synthesize(target, driving, method_preset("ICface")).frames()[0].identity.cosine(ref);
    EXPECT_GT(hi, lo);
}

TEST(Synthesize, ArtifactTracksMotion) {
    const auto& target = person(0).targets[0];
    const auto& driving = person(1).videos[0];
    const auto& m = method_preset("FSGAN_S");
    const auto out = synthesize(target, driving, m);
    EXPECT_DOUBLE_EQ(out.frames()[0].artifact_score, artifact(m, 0.0));
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double mo = motion(driving.frames()[i - 1].head_pose, driving.frames()[i].head_pose);
        EXPECT_DOUBLE_EQ(out.frames()[i].artifact_score, artifact(m, mo));
    }
}

TEST(Synthesize, VoiceKeepsRequestedDigits) {
    const std::vector<int> digits{5, 0, 9};
    const auto out = synthesize_for_voice(person(0).targets[0], person(1).videos[0], method_preset("FOMM"), digits, true);
    ASSERT_TRUE(out.audio());
    EXPECT_EQ(out.audio()->tokens, digits);
    EXPECT_EQ(out.frames()[0].lip_pattern, 5);
    const auto stock = synthesize_for_voice(person(0).targets[0], person(1).videos[0], method_preset("FOMM"), digits, false);
    EXPECT_EQ(stock.audio()->tokens, digits);
}

TEST(Synthesize, StitchedActionsBreakCoherence) {
    const std::vector<vendor::Action> acts{vendor::Action::TurnLeft, vendor::Action::Blink};
    const auto out = synthesize_for_action(person(0).targets[0], person(1).action_clips, acts, method_preset("FOMM"));
    EXPECT_TRUE(vendor::check_action_requirement(out, acts));
    EXPECT_FALSE(vendor::check_coherence(out));
    ActionClips none;
    EXPECT_THROW(synthesize_for_action(person(0).targets[0], none, acts, method_preset("FOMM")), MethodError);
}

TEST(MethodJson, PresetNamesAndOverrides) {
    EXPECT_EQ(method_from_json("FOMM"), method_preset("FOMM"));
    const auto m = method_from_json({{"preset", "FOMM"}, {"adversarial", true}});
    EXPECT_TRUE(m.adversarial);
    for (const auto& p : method_presets()) EXPECT_EQ(method_from_json(to_json(p)), p);
}
