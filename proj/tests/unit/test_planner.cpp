#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "flvg/planner.hpp"

using namespace flvg;
using namespace flvg::planner;
using intel::LipVerdict;
using intel::Verdict;
using vendor::FlvType;

namespace {

intel::IntelligenceReport report(Verdict adf, Verdict coherence, LipVerdict lip = LipVerdict::None) {
    intel::IntelligenceReport r;
    r.declared = vendor::default_profile().declared();
    r.anti_deepfake = adf;
    r.coherence = coherence;
    r.lip_language = lip;
    r.presentation_attack = Verdict::Deployed;
    return r;
}

std::vector<deepfake::MethodProfile> pair() { return {deepfake::method_preset("FaceShifter"), deepfake::method_preset("FOMM")}; }

}  // namespace

TEST(Plan, TwoStageUnderAntiDeepfake) {
    const auto p = plan_attack(report(Verdict::Deployed, Verdict::NotDeployed), FlvType::Silence, pair());
    EXPECT_TRUE(p.two_stage);
    EXPECT_EQ(p.swap_profile->name, "FaceShifter");
    EXPECT_EQ(p.reenactment_profile->name, "FOMM");
    EXPECT_EQ(p.method.name, "FaceShifter");
}

TEST(Plan, HighestFidelityWithoutDetector) {
    const auto p = plan_attack(report(Verdict::NotDeployed, Verdict::NotDeployed), FlvType::Silence, deepfake::method_presets());
    EXPECT_EQ(p.method.name, "FOMM");
    EXPECT_FALSE(p.two_stage);
}

TEST(Plan, VoiceRecipes) {
    EXPECT_EQ(plan_attack(report(Verdict::NotDeployed, Verdict::NotDeployed, LipVerdict::FullMatch), FlvType::Voice, pair()).driving_recipe,
              DrivingRecipe::MatchedLipsInteractive);
    EXPECT_EQ(plan_attack(report(Verdict::NotDeployed, Verdict::NotDeployed, LipVerdict::MovementOnly), FlvType::Voice, pair()).driving_recipe,
              DrivingRecipe::Stock);
}

TEST(Plan, ActionRecipes) {
    EXPECT_EQ(plan_attack(report(Verdict::NotDeployed, Verdict::Deployed), FlvType::Action, pair()).driving_recipe, DrivingRecipe::RecordedCoherent);
    EXPECT_EQ(plan_attack(report(Verdict::NotDeployed, Verdict::NotDeployed), FlvType::Action, pair()).driving_recipe,
              DrivingRecipe::StitchedActions);
}

TEST(Plan, ImageUsesSwap) {
    const auto p = plan_attack(report(Verdict::NotDeployed, Verdict::NotDeployed), FlvType::Image, deepfake::method_presets());
    EXPECT_EQ(p.method.category, media::SynthesisCategory::Swap);
}

TEST(Plan, RationaleCitesReportFields) {
    for (FlvType t : vendor::kAllFlvTypes) {
        for (Verdict adf : {Verdict::Deployed, Verdict::NotDeployed}) {
            for (Verdict coh : {Verdict::Deployed, Verdict::NotDeployed}) {
                const auto p = plan_attack(report(adf, coh, LipVerdict::FullMatch), t, deepfake::method_presets());
                ASSERT_FALSE(p.rationale.empty());
                for (const auto& e : p.rationale) EXPECT_NE(e.fact.find('='), std::string::npos);
                if (p.two_stage) {
                    EXPECT_NE(to_json(p)["stages"]["kind"], "SingleStage");
                }
            }
        }
    }
}

TEST(Plan, Errors) {
    EXPECT_THROW(plan_attack(report(Verdict::Deployed, Verdict::Deployed), FlvType::Silence, {}), PlanError);
    auto r = report(Verdict::Deployed, Verdict::Deployed);
    r.declared.supported_types = {FlvType::Image};
    EXPECT_THROW(plan_attack(r, FlvType::Voice, pair()), PlanError);
}

TEST(StageOne, HeuristicPicksAcceptableImage) {
    const auto& c = fixture::corpus();
    const std::vector<media::FacialMedia> bases{c.persons[1].driving_images[0]};
    const auto s = stage_one(c.persons[0].failing_target, bases, deepfake::method_preset("FaceShifter"), nullptr, fixture::reference(0));
    EXPECT_TRUE(s.heuristic);
    EXPECT_EQ(s.image.frames()[0].env, bases[0].frames()[0].env);
}

TEST(StageOne, QueriesImageVendor) {
    const auto& c = fixture::corpus();
    LocalFlvClient api(std::make_shared<vendor::VendorService>(vendor::vendor_preset("BD")));
    const std::vector<media::FacialMedia> bases{c.persons[1].driving_images[0], c.persons[2].driving_images[0]};
    const auto s = stage_one(c.persons[0].failing_target, bases, deepfake::method_preset("FaceShifter"), &api, fixture::reference(0));
    EXPECT_FALSE(s.heuristic);
    EXPECT_TRUE(s.passed);
    EXPECT_EQ(s.attempts, 1u);
    ASSERT_TRUE(s.outcome);
    EXPECT_TRUE(s.outcome->overall_pass());
}

TEST(TwoStage, OutputCarriesStageOneEnv) {
    const auto& c = fixture::corpus();
    const std::vector<media::FacialMedia> bases{c.persons[1].driving_images[0]};
    const auto r = two_stage_attack(c.persons[0].failing_target, c.persons[2].videos[0], deepfake::method_preset("FaceShifter"),
                                    deepfake::method_preset("FOMM"), bases, nullptr, fixture::reference(0));
    for (const auto& f : r.output.frames()) EXPECT_EQ(f.env, r.stage1.image.frames()[0].env);
    EXPECT_EQ(r.stage2_method, "FOMM");
}
