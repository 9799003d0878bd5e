// Packaged adversarial demonstrations: each demo must be deterministic,
// self-validating, and reproduce the hand-derived dichotomy (real algorithm
// stalls, eager variant decides wrongly with gap 1).

#include "anodyne/scenarios.hpp"

#include <gtest/gtest.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace anodyne;

std::vector<double> doubles_of(const nlohmann::ordered_json& j) {
    return j.get<std::vector<double>>();
}

void expect_all_assertions_pass(const DemoReport& rep) {
    for (const DemoAssertion& a : rep.assertions) {
        EXPECT_TRUE(a.pass) << rep.name << " / " << a.label << ": " << a.evidence;
    }
    EXPECT_TRUE(rep.all_pass());
}

TEST(CrashDegree, SixNodeDichotomy) {
    DemoReport rep = demo_crash_degree(6);
    EXPECT_EQ(rep.name, "crash-degree");
    EXPECT_FALSE(rep.illustration_only);
    ASSERT_EQ(rep.assertions.size(), 4u);
    expect_all_assertions_pass(rep);
    EXPECT_EQ(doubles_of(rep.data["eager_outputs"]),
              (std::vector<double>{0, 0, 0, 1, 1, 1}));
    EXPECT_EQ(rep.data["gap"].get<double>(), 1.0);
    EXPECT_EQ(rep.data["real_rounds"].get<int>(), 30);
}

TEST(CrashDegree, FourNodeSameStructure) {
    DemoReport rep = demo_crash_degree(4);
    expect_all_assertions_pass(rep);
    EXPECT_EQ(doubles_of(rep.data["eager_outputs"]), (std::vector<double>{0, 0, 1, 1}));
}

TEST(CrashDegree, TightEpsilonStillViolated) {
    DemoReport rep = demo_crash_degree(8, 0.1);
    expect_all_assertions_pass(rep);
    EXPECT_EQ(rep.data["gap"].get<double>(), 1.0);
}

TEST(CrashDegree, RejectsOddOrTinyN) {
    EXPECT_THROW(demo_crash_degree(5), std::invalid_argument);
    EXPECT_THROW(demo_crash_degree(3), std::invalid_argument);
    EXPECT_THROW(demo_crash_degree(2), std::invalid_argument);
}

TEST(CrashCount, SixThreeDichotomy) {
    DemoReport rep = demo_crash_count(6, 3);
    EXPECT_EQ(rep.name, "crash-count");
    ASSERT_EQ(rep.assertions.size(), 4u);
    expect_all_assertions_pass(rep);
    // Eager threshold 3 fires every round on a 3-survivor complete graph,
    // and p_end(0.25) = 2, so both scenarios finish in two rounds.
    EXPECT_EQ(rep.data["R"].get<int>(), 2);
    EXPECT_EQ(doubles_of(rep.data["scenario2_outputs"]),
              (std::vector<double>{0, 0, 0, 1, 1, 1}));
    EXPECT_EQ(rep.data["gap"].get<double>(), 1.0);
}

TEST(CrashCount, FourTwoSameStructure) {
    DemoReport rep = demo_crash_count(4, 2);
    expect_all_assertions_pass(rep);
    EXPECT_EQ(rep.data["R"].get<int>(), 2);
    EXPECT_EQ(doubles_of(rep.data["scenario2_outputs"]),
              (std::vector<double>{0, 0, 1, 1}));
}

TEST(CrashCount, RejectsMismatchedParameters) {
    EXPECT_THROW(demo_crash_count(6, 2), std::invalid_argument);  // n > 2f
    EXPECT_THROW(demo_crash_count(2, 1), std::invalid_argument);  // too small
}

TEST(ByzPartition, TenTwoSplit) {
    DemoReport rep = demo_byz_partition(10, 2);
    EXPECT_EQ(rep.name, "byz-partition");
    ASSERT_EQ(rep.assertions.size(), 3u);
    expect_all_assertions_pass(rep);
    EXPECT_EQ(doubles_of(rep.data["side_a_outputs"]), (std::vector<double>{0, 0, 0, 0}));
    EXPECT_EQ(doubles_of(rep.data["side_b_outputs"]), (std::vector<double>{1, 1, 1, 1}));
    EXPECT_EQ(rep.data["gap"].get<double>(), 1.0);
    EXPECT_EQ(rep.data["group_size"].get<int>(), 8);
}

TEST(ByzPartition, SevenTwoOverlappingGroups) {
    DemoReport rep = demo_byz_partition(7, 2);
    expect_all_assertions_pass(rep);
    EXPECT_EQ(doubles_of(rep.data["side_a_outputs"]), (std::vector<double>{0, 0}));
    EXPECT_EQ(doubles_of(rep.data["side_b_outputs"]), (std::vector<double>{1, 1, 1}));
    EXPECT_EQ(rep.data["group_size"].get<int>(), 6);
}

TEST(ByzPartition, RejectsTooManyTraitors) {
    EXPECT_THROW(demo_byz_partition(6, 2), std::invalid_argument);
}

TEST(ExactDropOne, ApproximateButNotExact) {
    DemoReport rep = demo_exact_drop_one(4);
    EXPECT_TRUE(rep.illustration_only);
    ASSERT_EQ(rep.assertions.size(), 2u);
    expect_all_assertions_pass(rep);
    // Largest spread comes from the lone-dissenter inputs at eps 0.5:
    // outputs {0.5, 1, 1, 1}.
    EXPECT_EQ(rep.data["max_spread"].get<double>(), 0.5);
    const nlohmann::ordered_json& runs = rep.data["runs"];
    ASSERT_EQ(runs.size(), 27u);
    for (const auto& cell : runs) {
        EXPECT_TRUE(cell["all_pass"].get<bool>());
        EXPECT_LE(cell["spread"].get<double>(), cell["eps"].get<double>() + 1e-9);
    }
}

TEST(ExactDropOne, HalvesCollapseToOneMidpoint) {
    SimConfig cfg;
    cfg.n = 4;
    cfg.f = 0;
    cfg.epsilon = 0.25;
    cfg.seed = 1;
    cfg.algorithm = Algorithm::Dac;
    cfg.inputs = {0.0, 0.0, 1.0, 1.0};
    Trace tr = run_simulation(cfg, drop_one_strategy(4));
    Verdict v = check_consensus(tr);
    EXPECT_TRUE(v.all_pass());
    EXPECT_EQ(v.achieved_range, 0.0);
    for (NodeId i = 1; i <= 4; ++i) {
        const auto& out = tr.rounds.back().states[static_cast<std::size_t>(i)].output;
        ASSERT_TRUE(out.has_value());
        EXPECT_EQ(*out, 0.5);
    }
}

TEST(ExactDropOne, RejectsTinyN) {
    EXPECT_THROW(demo_exact_drop_one(2), std::invalid_argument);
}

TEST(Reports, DeterministicAcrossInvocations) {
    EXPECT_EQ(demo_report_json(demo_crash_degree(6)).dump(),
              demo_report_json(demo_crash_degree(6)).dump());
    EXPECT_EQ(demo_report_json(demo_crash_count(6, 3)).dump(),
              demo_report_json(demo_crash_count(6, 3)).dump());
    EXPECT_EQ(demo_report_json(demo_byz_partition(10, 2)).dump(),
              demo_report_json(demo_byz_partition(10, 2)).dump());
    EXPECT_EQ(demo_report_json(demo_exact_drop_one(4)).dump(),
              demo_report_json(demo_exact_drop_one(4)).dump());
}

TEST(Reports, TextAndJsonRendering) {
    DemoReport rep;
    rep.name = "sample";
    rep.illustration_only = true;
    rep.assertions.push_back(DemoAssertion{"holds", true, "fine"});
    rep.assertions.push_back(DemoAssertion{"breaks", false, "bad"});

    std::string text = demo_report_text(rep);
    EXPECT_NE(text.find("demo sample (illustration only)"), std::string::npos);
    EXPECT_NE(text.find("[pass] holds: fine"), std::string::npos);
    EXPECT_NE(text.find("[FAIL] breaks: bad"), std::string::npos);
    EXPECT_NE(text.find("result: ASSERTION FAILURE"), std::string::npos);

    nlohmann::ordered_json j = demo_report_json(rep);
    EXPECT_FALSE(j["all_pass"].get<bool>());
    EXPECT_TRUE(j["illustration_only"].get<bool>());
    ASSERT_EQ(j["assertions"].size(), 2u);
    EXPECT_EQ(j["assertions"][1]["label"].get<std::string>(), "breaks");

    std::string happy = demo_report_text(demo_crash_degree(6));
    EXPECT_NE(happy.find("result: all assertions hold"), std::string::npos);
    EXPECT_EQ(happy.find("FAIL"), std::string::npos);
}

}  // namespace
