#include <gtest/gtest.h>

#include <random>

#include "../oracles/oracles.hpp"
#include "flvg/analysis.hpp"

using namespace flvg;
using analysis::compute_metrics;
using vendor::VerificationOutcome;

namespace {

VerificationOutcome outcome(bool req, bool live, std::optional<bool> adf, bool face) {
    VerificationOutcome o;
    o.requirement_met = req;
    o.liveness_pass = live;
    o.anti_deepfake_pass = adf;
    o.face_match_pass = face;
    o.face_match_score = face ? 0.9 : 0.1;
    return o;
}

std::vector<double> indicators(int ones, int n) {
    std::vector<double> v(n, 0.0);
    std::fill(v.begin(), v.begin() + ones, 1.0);
    return v;
}

}  // namespace

TEST(Metrics, CountsEachStage) {
    std::vector<VerificationOutcome> os{outcome(true, true, true, true), outcome(true, true, false, true), outcome(true, false, true, true),
                                        outcome(true, true, true, false)};
    const auto m = compute_metrics(os);
    EXPECT_EQ(m.n, 4u);
    EXPECT_DOUBLE_EQ(m.liveness_evasion_rate, 0.75);
    EXPECT_DOUBLE_EQ(m.anti_deepfake_evasion_rate, 0.75);
    EXPECT_DOUBLE_EQ(m.face_matching_rate, 0.75);
    EXPECT_DOUBLE_EQ(m.overall_evasion_rate, 0.25);
    EXPECT_TRUE(m.anti_deepfake_applicable);
}

TEST(Metrics, AbsentDetectorCountsAsEvaded) {
    std::vector<VerificationOutcome> os{outcome(true, true, std::nullopt, true), outcome(true, false, std::nullopt, true)};
    const auto m = compute_metrics(os);
    EXPECT_FALSE(m.anti_deepfake_applicable);
    EXPECT_DOUBLE_EQ(m.anti_deepfake_evasion_rate, 1.0);
    EXPECT_DOUBLE_EQ(m.overall_evasion_rate, 0.5);
}

TEST(Metrics, RequirementGatesLiveness) {
    std::vector<VerificationOutcome> os{outcome(false, true, std::nullopt, true)};
    EXPECT_DOUBLE_EQ(compute_metrics(os, true).liveness_evasion_rate, 0.0);
    EXPECT_DOUBLE_EQ(compute_metrics(os, false).liveness_evasion_rate, 1.0);
}

TEST(Metrics, RejectsEmptyAndMixed) {
    EXPECT_THROW(compute_metrics({}), analysis::AnalysisError);
    std::vector<VerificationOutcome> os{outcome(true, true, true, true), outcome(true, true, std::nullopt, true)};
    EXPECT_THROW(compute_metrics(os), analysis::AnalysisError);
}

TEST(Metrics, RandomSetsStayConsistent) {
    std::mt19937_64 rng(3);
    std::bernoulli_distribution coin(0.6);
    for (int k = 0; k < 300; ++k) {
        const bool adf = coin(rng);
        std::vector<VerificationOutcome> os;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 40); i < n; ++i) {
            os.push_back(outcome(coin(rng), coin(rng), adf ? std::optional<bool>(coin(rng)) : std::nullopt, coin(rng)));
        }
        EXPECT_TRUE(analysis::metrics_consistent(compute_metrics(os)));
    }
}

TEST(Welch, MatchesOracle) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        std::normal_distribution<double> a(0.0, 1.0 + k % 3), b(0.3, 0.5 + k % 4);
        std::vector<double> xs(5 + k % 17), ys(4 + k % 23);
        for (double& x : xs) x = a(rng);
        for (double& y : ys) y = b(rng);
        const auto r = analysis::welch_t_test(xs, ys);
        const auto o = oracle::welch(xs, ys);
        EXPECT_NEAR(r.t, o.t, 1e-9);
        EXPECT_NEAR(r.dof, o.dof, 1e-8);
        EXPECT_NEAR(r.p, o.p, 1e-9);
        EXPECT_FALSE(r.degenerate);
    }
}

TEST(Welch, IndicatorGroups) {
    const auto a = indicators(96, 100), b = indicators(74, 100);
    const auto r = analysis::welch_t_test(a, b);
    EXPECT_GT(r.t, 0.0);
    EXPECT_LT(r.p, 1e-3);
}

TEST(Welch, Degenerate) {
    const auto ones = indicators(10, 10), zeros = indicators(0, 10);
    const auto same = analysis::welch_t_test(ones, ones);
    EXPECT_TRUE(same.degenerate);
    EXPECT_EQ(same.p, 1.0);
    const auto diff = analysis::welch_t_test(ones, zeros);
    EXPECT_TRUE(diff.degenerate);
    EXPECT_EQ(diff.p, 0.0);
    EXPECT_TRUE(std::isinf(diff.t));
    EXPECT_TRUE(analysis::to_json(diff)["t"].is_null());
}

TEST(Welch, NeedsTwoPerSide) {
    const std::vector<double> one{1.0}, two{1.0, 0.0};
    EXPECT_THROW(analysis::welch_t_test(one, two), analysis::AnalysisError);
}

TEST(Compare, TestsLivenessAndDetector) {
    std::vector<VerificationOutcome> a, b;
    for (int i = 0; i < 100; ++i) {
        a.push_back(outcome(true, i < 96, i < 90, true));
        b.push_back(outcome(true, i < 74, i < 88, true));
    }
    const auto g = analysis::compare_groups(a, b, "light", "dark");
    ASSERT_EQ(g.tests.size(), 2u);
    EXPECT_EQ(g.tests[0].metric, "liveness");
    EXPECT_TRUE(g.tests[0].significant_01);
    EXPECT_FALSE(g.tests[1].significant_05);
    const std::string table = analysis::comparison_table({g});
    EXPECT_NE(table.find("96.0%"), std::string::npos);
    EXPECT_NE(table.find("**"), std::string::npos);
}

TEST(Format, RatesAndPValues) {
    EXPECT_EQ(analysis::format_rate(0.8), "80.0%");
    EXPECT_EQ(analysis::format_rate(1.0 / 3.0), "33.3%");
    EXPECT_EQ(analysis::format_p(0.0001234), "1.23e-04");
}
