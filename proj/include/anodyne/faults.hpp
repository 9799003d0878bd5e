#pragma once

// Fault plans: which nodes crash when, and which nodes are Byzantine with
// what behavior. Byzantine emission is per-receiver and may depend on the
// round and on everything the faulty node has seen.

#include <algorithm>
#include <stdexcept>
#include <variant>
#include <vector>

#include <json.hpp>

#include "anodyne/model.hpp"
#include "anodyne/rng.hpp"
#include "anodyne/schedule.hpp"

namespace anodyne {

struct CrashFault {
    NodeId node = 0;
    Round round = 0;  // silent from the start of this round onwards
};

// Always sends the same value at phase 0.
struct ConstantLiar {
    Value value = 0.0;
};

// Sends value_a to side-A receivers and value_b to everyone else, always
// claiming the highest phase any fault-free node holds at the start of the
// round, so the lie is never discarded as stale.
struct Equivocator {
    Value value_a = 0.0;
    Value value_b = 1.0;
    std::set<NodeId> side_a;
};

// Replays the last message it received with the phase inflated by a fixed
// offset. Before anything arrives it advertises its own input.
struct PhaseJumper {
    int offset = 1;
};

// Per-receiver fresh noise: value uniform in [0,1), phase uniform in
// {0, .., round}. Keyed by (seed, round, receiver) so reruns are identical.
struct RandomNoise {
    std::uint64_t seed = 0;
};

using ByzBehavior = std::variant<ConstantLiar, Equivocator, PhaseJumper, RandomNoise>;

struct ByzFault {
    NodeId node = 0;
    ByzBehavior behavior;
};

struct FaultPlan {
    std::vector<CrashFault> crashes;
    std::vector<ByzFault> byzantine;

    // Silent from the crash round onwards.
    bool crashed_at(NodeId v, Round t) const {
        for (const auto& c : crashes)
            if (c.node == v && t >= c.round) return true;
        return false;
    }
    bool is_byzantine(NodeId v) const {
        for (const auto& b : byzantine)
            if (b.node == v) return true;
        return false;
    }
    std::set<NodeId> byzantine_set() const {
        std::set<NodeId> s;
        for (const auto& b : byzantine) s.insert(b.node);
        return s;
    }
};

inline void validate_fault_plan(const FaultPlan& plan, const SimConfig& cfg,
                                std::vector<Violation>& out) {
    std::set<NodeId> seen;
    auto check_node = [&](NodeId v, const char* field) {
        if (v < 1 || v > cfg.n)
            out.push_back({field, "1 <= node <= n", "fault on node " + std::to_string(v) +
                                                       " outside 1.." + std::to_string(cfg.n)});
        if (seen.count(v))
            out.push_back({field, "one fault per node", "node " + std::to_string(v) +
                                                            " appears in multiple faults"});
        seen.insert(v);
    };
    for (const auto& c : plan.crashes) {
        check_node(c.node, "crashes");
        if (c.round < 1)
            out.push_back({"crashes", "round >= 1", "crash round " + std::to_string(c.round) +
                                                        " below 1"});
    }
    for (const auto& b : plan.byzantine) check_node(b.node, "byzantine");
    int total = static_cast<int>(plan.crashes.size() + plan.byzantine.size());
    if (total > cfg.f)
        out.push_back({"faults", "at most f faulty nodes", std::to_string(total) +
                                                               " faults exceed f=" + std::to_string(cfg.f)});
    if (is_crash_algorithm(cfg.algorithm) && !plan.byzantine.empty())
        out.push_back({"byzantine", "crash algorithms tolerate crashes only",
                       "byzantine faults configured for a crash-tolerant algorithm"});
}

// What a Byzantine node sends to one receiver in one round.
struct ByzEmitContext {
    Round round = 0;
    NodeId self = 0;
    NodeId receiver = 0;
    Phase max_fault_free_phase = 0;   // over fault-free nodes, start of round
    std::optional<WireMessage> last_received;
    Value own_input = 0.0;
};

inline bool apply_crash(const FaultPlan& plan, NodeId node, Round round) {
    return plan.crashed_at(node, round);
}

// JSON shape: {"crashes": {"3": 5}, "byzantine": {"5": {"kind": "...", ...}}}.
inline nlohmann::ordered_json fault_plan_to_json(const FaultPlan& plan) {
    nlohmann::ordered_json j;
    j["crashes"] = nlohmann::ordered_json::object();
    std::vector<CrashFault> crashes = plan.crashes;
    std::sort(crashes.begin(), crashes.end(),
              [](const CrashFault& a, const CrashFault& b) { return a.node < b.node; });
    for (const auto& c : crashes) j["crashes"][std::to_string(c.node)] = c.round;
    j["byzantine"] = nlohmann::ordered_json::object();
    std::vector<ByzFault> byz = plan.byzantine;
    std::sort(byz.begin(), byz.end(),
              [](const ByzFault& a, const ByzFault& b) { return a.node < b.node; });
    for (const auto& b : byz) {
        nlohmann::ordered_json o;
        if (const auto* liar = std::get_if<ConstantLiar>(&b.behavior)) {
            o["kind"] = "constant-liar";
            o["value"] = liar->value;
        } else if (const auto* eq = std::get_if<Equivocator>(&b.behavior)) {
            o["kind"] = "equivocator";
            o["a"] = eq->value_a;
            o["b"] = eq->value_b;
            o["sideA"] = eq->side_a;
        } else if (const auto* pj = std::get_if<PhaseJumper>(&b.behavior)) {
            o["kind"] = "phase-jumper";
            o["offset"] = pj->offset;
        } else if (const auto* rn = std::get_if<RandomNoise>(&b.behavior)) {
            o["kind"] = "random-noise";
            o["seed"] = rn->seed;
        }
        j["byzantine"][std::to_string(b.node)] = std::move(o);
    }
    return j;
}

inline FaultPlan fault_plan_from_json(const nlohmann::json& j) {
    FaultPlan plan;
    if (!j.is_object()) throw std::invalid_argument("fault plan: need an object");
    const nlohmann::json crashes = j.value("crashes", nlohmann::json::object());
    const nlohmann::json byzantine = j.value("byzantine", nlohmann::json::object());
    for (const auto& [key, val] : crashes.items()) {
        CrashFault c;
        try {
            c.node = std::stoi(key);
        } catch (const std::exception&) {
            throw std::invalid_argument("fault plan: crash key must be a node id");
        }
        c.round = val.get<int>();
        plan.crashes.push_back(c);
    }
    for (const auto& [key, val] : byzantine.items()) {
        ByzFault b;
        try {
            b.node = std::stoi(key);
        } catch (const std::exception&) {
            throw std::invalid_argument("fault plan: byzantine key must be a node id");
        }
        const std::string kind = val.at("kind").get<std::string>();
        if (kind == "constant-liar") {
            b.behavior = ConstantLiar{val.at("value").get<Value>()};
        } else if (kind == "equivocator") {
            Equivocator eq;
            eq.value_a = val.at("a").get<Value>();
            eq.value_b = val.at("b").get<Value>();
            eq.side_a = val.at("sideA").get<std::set<NodeId>>();
            b.behavior = eq;
        } else if (kind == "phase-jumper") {
            b.behavior = PhaseJumper{val.at("offset").get<int>()};
        } else if (kind == "random-noise") {
            b.behavior = RandomNoise{val.at("seed").get<std::uint64_t>()};
        } else {
            throw std::invalid_argument("fault plan: unknown behavior kind '" + kind + "'");
        }
        plan.byzantine.push_back(b);
    }
    auto by_node_c = [](const CrashFault& a, const CrashFault& b) { return a.node < b.node; };
    auto by_node_b = [](const ByzFault& a, const ByzFault& b) { return a.node < b.node; };
    std::sort(plan.crashes.begin(), plan.crashes.end(), by_node_c);
    std::sort(plan.byzantine.begin(), plan.byzantine.end(), by_node_b);
    return plan;
}

inline WireMessage byz_emit(const ByzBehavior& behavior, const ByzEmitContext& ctx) {
    struct Visitor {
        const ByzEmitContext& ctx;
        WireMessage operator()(const ConstantLiar& b) const {
            return {b.value, 0};
        }
        WireMessage operator()(const Equivocator& b) const {
            Value v = b.side_a.count(ctx.receiver) ? b.value_a : b.value_b;
            return {v, static_cast<std::uint32_t>(ctx.max_fault_free_phase)};
        }
        WireMessage operator()(const PhaseJumper& b) const {
            WireMessage base = ctx.last_received.value_or(WireMessage{ctx.own_input, 0});
            return {base.value, base.phase + static_cast<std::uint32_t>(b.offset)};
        }
        WireMessage operator()(const RandomNoise& b) const {
            std::uint64_t key = mix64(mix64(b.seed, static_cast<std::uint64_t>(ctx.round)),
                                      static_cast<std::uint64_t>(ctx.receiver));
            Rng rng(key);
            Value v = rng.next_unit();
            std::uint32_t ph = static_cast<std::uint32_t>(
                rng.bounded(static_cast<std::uint64_t>(ctx.round) + 1));
            return {v, ph};
        }
    };
    return std::visit(Visitor{ctx}, behavior);
}

} // namespace anodyne
