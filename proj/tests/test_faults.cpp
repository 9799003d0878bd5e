#include "anodyne/faults.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

using namespace anodyne;

namespace {

ByzEmitContext ctx_at(Round round, NodeId receiver) {
    ByzEmitContext ctx;
    ctx.round = round;
    ctx.self = 5;
    ctx.receiver = receiver;
    return ctx;
}

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
    for (const auto& v : vs)
        if (v.rule == rule) return true;
    return false;
}

}  // namespace

// --------------------------------------------------------------------------
// Crash plans.

TEST(CrashPlan, SilentFromCrashRoundOnwards) {
    FaultPlan plan;
    plan.crashes.push_back({3, 5});
    EXPECT_FALSE(apply_crash(plan, 3, 4));
    EXPECT_TRUE(apply_crash(plan, 3, 5));
    EXPECT_TRUE(apply_crash(plan, 3, 6));
    EXPECT_FALSE(apply_crash(plan, 2, 9));
    EXPECT_FALSE(plan.is_byzantine(3));
}

TEST(CrashPlan, ByzantineMembership) {
    FaultPlan plan;
    plan.byzantine.push_back({5, ConstantLiar{0.5}});
    plan.byzantine.push_back({2, PhaseJumper{1}});
    EXPECT_TRUE(plan.is_byzantine(5));
    EXPECT_FALSE(plan.is_byzantine(3));
    EXPECT_EQ(plan.byzantine_set(), (std::set<NodeId>{2, 5}));
}

// --------------------------------------------------------------------------
// Behavior emissions.

TEST(ByzEmit, ConstantLiarIgnoresEverything) {
    ByzBehavior b = ConstantLiar{0.5};
    for (NodeId r : {1, 2, 3}) {
        ByzEmitContext ctx = ctx_at(7, r);
        ctx.max_fault_free_phase = 9;
        ctx.last_received = WireMessage{0.1, 4};
        WireMessage m = byz_emit(b, ctx);
        EXPECT_EQ(m.value, 0.5);
        EXPECT_EQ(m.phase, 0u);
    }
}

TEST(ByzEmit, EquivocatorSplitsBySide) {
    ByzBehavior b = Equivocator{0.0, 1.0, {1, 2, 3, 4}};
    ByzEmitContext ctx2 = ctx_at(3, 2);
    ctx2.max_fault_free_phase = 6;
    WireMessage to_a = byz_emit(b, ctx2);
    EXPECT_EQ(to_a.value, 0.0);
    EXPECT_EQ(to_a.phase, 6u);
    ByzEmitContext ctx9 = ctx_at(3, 9);
    ctx9.max_fault_free_phase = 6;
    WireMessage to_b = byz_emit(b, ctx9);
    EXPECT_EQ(to_b.value, 1.0);
    EXPECT_EQ(to_b.phase, 6u);
}

TEST(ByzEmit, PhaseJumperEchoesWithOffset) {
    ByzBehavior b = PhaseJumper{3};
    ByzEmitContext ctx = ctx_at(4, 1);
    ctx.last_received = WireMessage{0.7, 2};
    WireMessage m = byz_emit(b, ctx);
    EXPECT_EQ(m.value, 0.7);
    EXPECT_EQ(m.phase, 5u);
}

TEST(ByzEmit, PhaseJumperFallsBackToOwnInput) {
    ByzBehavior b = PhaseJumper{3};
    ByzEmitContext ctx = ctx_at(1, 1);
    ctx.own_input = 0.25;
    WireMessage m = byz_emit(b, ctx);
    EXPECT_EQ(m.value, 0.25);
    EXPECT_EQ(m.phase, 3u);
}

TEST(ByzEmit, RandomNoiseIsDeterministicPerReceiverAndRound) {
    ByzBehavior b = RandomNoise{99};
    WireMessage first = byz_emit(b, ctx_at(3, 1));
    WireMessage again = byz_emit(b, ctx_at(3, 1));
    EXPECT_EQ(first, again);
    WireMessage other_receiver = byz_emit(b, ctx_at(3, 2));
    WireMessage other_round = byz_emit(b, ctx_at(4, 1));
    EXPECT_FALSE(first == other_receiver);
    EXPECT_FALSE(first == other_round);
}

TEST(ByzEmit, RandomNoiseStaysInRange) {
    ByzBehavior b = RandomNoise{1234};
    std::set<std::uint32_t> phases;
    for (NodeId r = 1; r <= 200; ++r) {
        WireMessage m = byz_emit(b, ctx_at(3, r));
        ASSERT_GE(m.value, 0.0);
        ASSERT_LT(m.value, 1.0);
        ASSERT_LE(m.phase, 3u);
        phases.insert(m.phase);
    }
    EXPECT_EQ(phases.size(), 4u);  // 0..3 all reachable
}

// --------------------------------------------------------------------------
// Plan validation.

namespace {

SimConfig byz_config() {
    SimConfig cfg;
    cfg.n = 6;
    cfg.f = 1;
    cfg.epsilon = 0.05;
    cfg.algorithm = Algorithm::Dbac;
    cfg.inputs.assign(6, 0.5);
    return cfg;
}

}  // namespace

TEST(ValidatePlan, AcceptsPlanWithinBudget) {
    FaultPlan plan;
    plan.byzantine.push_back({2, ConstantLiar{0.0}});
    std::vector<Violation> out;
    validate_fault_plan(plan, byz_config(), out);
    EXPECT_TRUE(out.empty());
}

TEST(ValidatePlan, RejectsOverBudget) {
    FaultPlan plan;
    plan.byzantine.push_back({2, ConstantLiar{0.0}});
    plan.crashes.push_back({3, 1});
    std::vector<Violation> out;
    validate_fault_plan(plan, byz_config(), out);
    EXPECT_TRUE(has_rule(out, "at most f faulty nodes"));
}

TEST(ValidatePlan, RejectsDoubleBookingAndBadNodes) {
    FaultPlan plan;
    plan.crashes.push_back({2, 1});
    plan.byzantine.push_back({2, ConstantLiar{0.0}});
    SimConfig cfg = byz_config();
    cfg.f = 2;
    std::vector<Violation> out;
    validate_fault_plan(plan, cfg, out);
    EXPECT_TRUE(has_rule(out, "one fault per node"));

    FaultPlan plan2;
    plan2.crashes.push_back({9, 1});
    out.clear();
    validate_fault_plan(plan2, cfg, out);
    EXPECT_TRUE(has_rule(out, "1 <= node <= n"));

    FaultPlan plan3;
    plan3.crashes.push_back({2, 0});
    out.clear();
    validate_fault_plan(plan3, cfg, out);
    EXPECT_TRUE(has_rule(out, "round >= 1"));
}

TEST(ValidatePlan, CrashAlgorithmsRejectByzantineEntries) {
    FaultPlan plan;
    plan.byzantine.push_back({2, ConstantLiar{0.0}});
    SimConfig cfg = byz_config();
    cfg.algorithm = Algorithm::Dac;
    std::vector<Violation> out;
    validate_fault_plan(plan, cfg, out);
    EXPECT_TRUE(has_rule(out, "crash algorithms tolerate crashes only"));
}

// --------------------------------------------------------------------------
// JSON round-trip.

TEST(FaultPlanJson, RoundTripAllKinds) {
    FaultPlan plan;
    plan.crashes.push_back({3, 5});
    plan.crashes.push_back({1, 2});
    plan.byzantine.push_back({5, Equivocator{0.0, 1.0, {1, 2, 3, 4}}});
    plan.byzantine.push_back({6, ConstantLiar{0.25}});
    plan.byzantine.push_back({7, PhaseJumper{2}});
    plan.byzantine.push_back({8, RandomNoise{77}});
    auto j = fault_plan_to_json(plan);
    FaultPlan back = fault_plan_from_json(j);
    EXPECT_EQ(fault_plan_to_json(back), j);
    ASSERT_EQ(back.crashes.size(), 2u);
    EXPECT_EQ(back.crashes[0].node, 1);  // sorted by node
    EXPECT_EQ(back.crashes[0].round, 2);
    ASSERT_EQ(back.byzantine.size(), 4u);
    const auto* eq = std::get_if<Equivocator>(&back.byzantine[0].behavior);
    ASSERT_NE(eq, nullptr);
    EXPECT_EQ(eq->value_a, 0.0);
    EXPECT_EQ(eq->value_b, 1.0);
    EXPECT_EQ(eq->side_a, (std::set<NodeId>{1, 2, 3, 4}));
}

TEST(FaultPlanJson, MatchesDocumentedShape) {
    auto j = nlohmann::json::parse(
        R"({"crashes": {"3": 5}, "byzantine": {"5": {"kind": "equivocator", "a": 0, "b": 1, "sideA": [1, 2]}}})");
    FaultPlan plan = fault_plan_from_json(j);
    ASSERT_EQ(plan.crashes.size(), 1u);
    EXPECT_EQ(plan.crashes[0].node, 3);
    EXPECT_EQ(plan.crashes[0].round, 5);
    ASSERT_EQ(plan.byzantine.size(), 1u);
    EXPECT_EQ(plan.byzantine[0].node, 5);
    EXPECT_NE(std::get_if<Equivocator>(&plan.byzantine[0].behavior), nullptr);
}

TEST(FaultPlanJson, RejectsUnknownKindsAndBadKeys) {
    EXPECT_THROW(fault_plan_from_json(nlohmann::json::parse(
                     R"({"byzantine": {"5": {"kind": "telepath"}}})")),
                 std::invalid_argument);
    EXPECT_THROW(fault_plan_from_json(nlohmann::json::parse(R"({"crashes": {"abc": 5}})")),
                 std::invalid_argument);
}
