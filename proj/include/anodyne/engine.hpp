#pragma once

// Round loop: payloads are computed from start-of-round states, the
// adversary picks the edge set for the round, deliveries land on ports,
// and receivers fold messages in ascending port order.  Produces a full
// per-round trace suitable for replay-free analysis.

#include "anodyne/algo.hpp"
#include "anodyne/faults.hpp"
#include "anodyne/model.hpp"
#include "anodyne/schedule.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace anodyne {

struct Delivery {
    NodeId src = 0;
    NodeId dst = 0;
    WireMessage msg;
};

// One phase change at a single node.  `via_jump` distinguishes adopting a
// higher-phase message from firing the counting threshold.
struct Transition {
    NodeId node = 0;
    Phase from = 0;
    Phase to = 0;
    Value value = 0.0;
    bool via_jump = false;
    Round round = 0;
};

struct NodeSnapshot {
    Phase p = 0;
    Value v = 0.0;
    int count = 0;
    std::optional<Value> output;
    bool crashed = false;
    bool byzantine = false;
};

struct RoundRecord {
    Round t = 0;
    EdgeSet edges;
    std::vector<Delivery> deliveries;
    std::vector<Transition> transitions;
    std::vector<NodeSnapshot> states;  // index 1..n, slot 0 unused
};

struct Trace {
    SimConfig cfg;
    FaultPlan plan;
    PortNumbering ports;
    Phase p_end = 0;
    int max_rounds = 0;
    std::vector<RoundRecord> rounds;
    std::vector<std::optional<Round>> termination;  // index 1..n, slot 0 unused
    bool non_termination = false;

    Round rounds_run() const { return static_cast<Round>(rounds.size()); }
};

namespace detail {

inline void throw_if_invalid(const SimConfig& cfg, const FaultPlan& plan) {
    std::vector<Violation> violations = validate_config(cfg);
    validate_fault_plan(plan, cfg, violations);
    if (!violations.empty()) {
        std::string msg = "invalid simulation setup:";
        for (const Violation& v : violations) msg += " [" + v.message + "]";
        throw std::invalid_argument(msg);
    }
}

}  // namespace detail

// Runs one execution to completion.  Halts when every fault-free node has
// an output, or after `max_rounds` rounds (then `non_termination` is set;
// no exception).  A zero `cfg.max_rounds` derives the cap from the
// strategy's window hint and the phase horizon.
inline Trace run_simulation(const SimConfig& cfg, const AdversaryStrategy& strategy,
                            const FaultPlan& plan = {}) {
    detail::throw_if_invalid(cfg, plan);

    const int n = cfg.n;
    Trace tr;
    tr.cfg = cfg;
    tr.plan = plan;
    tr.ports = build_port_numbering(n, cfg.seed);
    tr.p_end = p_end_for(cfg.algorithm, cfg.epsilon, cfg.n);
    tr.max_rounds =
        cfg.max_rounds > 0 ? cfg.max_rounds : 10 * strategy.t_hint() * std::max(tr.p_end, 1);
    tr.termination.assign(static_cast<std::size_t>(n) + 1, std::nullopt);

    std::vector<bool> is_byz(static_cast<std::size_t>(n) + 1, false);
    std::vector<const ByzBehavior*> behavior(static_cast<std::size_t>(n) + 1, nullptr);
    for (const ByzFault& b : plan.byzantine) {
        is_byz[static_cast<std::size_t>(b.node)] = true;
        behavior[static_cast<std::size_t>(b.node)] = &b.behavior;
    }
    std::vector<bool> has_crash_entry(static_cast<std::size_t>(n) + 1, false);
    for (const CrashFault& c : plan.crashes) has_crash_entry[static_cast<std::size_t>(c.node)] = true;
    auto fault_free = [&](NodeId i) {
        return !is_byz[static_cast<std::size_t>(i)] && !has_crash_entry[static_cast<std::size_t>(i)];
    };

    std::vector<NodeState> st;
    st.reserve(static_cast<std::size_t>(n) + 1);
    st.push_back(NodeState{});  // slot 0 unused
    for (NodeId i = 1; i <= n; ++i)
        st.push_back(make_node(cfg.algorithm, cfg.inputs[static_cast<std::size_t>(i - 1)], n,
                               cfg.f, cfg.epsilon, tr.ports.self_port(i)));

    // Last message each Byzantine node saw, fed back to behaviors that echo.
    std::vector<std::optional<WireMessage>> last_received(static_cast<std::size_t>(n) + 1);

    auto all_done = [&] {
        for (NodeId i = 1; i <= n; ++i)
            if (fault_free(i) && !st[static_cast<std::size_t>(i)].has_output) return false;
        return true;
    };

    for (Round t = 1;; ++t) {
        if (all_done()) break;
        if (t > tr.max_rounds) {
            tr.non_termination = true;
            break;
        }

        // Start-of-round views drive both the adversary and the payloads.
        std::vector<NodeView> views(static_cast<std::size_t>(n) + 1);
        Phase max_ff_phase = 0;
        for (NodeId i = 1; i <= n; ++i) {
            NodeView& vw = views[static_cast<std::size_t>(i)];
            const NodeState& s = st[static_cast<std::size_t>(i)];
            if (is_byz[static_cast<std::size_t>(i)]) {
                vw.value = cfg.inputs[static_cast<std::size_t>(i - 1)];
                vw.byzantine = true;
            } else {
                vw.value = s.v;  // frozen at the crash round for crashed nodes
                vw.phase = s.p;
                vw.crashed = apply_crash(plan, i, t);
                vw.has_output = s.has_output;
                if (!vw.crashed && s.p > max_ff_phase) max_ff_phase = s.p;
            }
        }

        RoundRecord rec;
        rec.t = t;
        rec.edges = strategy.edges_for(t, views);

        std::vector<WireMessage> payload(static_cast<std::size_t>(n) + 1);
        for (NodeId i = 1; i <= n; ++i)
            if (!is_byz[static_cast<std::size_t>(i)])
                payload[static_cast<std::size_t>(i)] = broadcast_payload(st[static_cast<std::size_t>(i)]);

        for (const Edge& e : rec.edges.edges) {
            if (apply_crash(plan, e.first, t)) continue;   // crashed senders are silent
            if (apply_crash(plan, e.second, t)) continue;  // nothing lands on crashed nodes
            WireMessage msg;
            if (is_byz[static_cast<std::size_t>(e.first)]) {
                ByzEmitContext ctx;
                ctx.round = t;
                ctx.self = e.first;
                ctx.receiver = e.second;
                ctx.max_fault_free_phase = max_ff_phase;
                ctx.last_received = last_received[static_cast<std::size_t>(e.first)];
                ctx.own_input = cfg.inputs[static_cast<std::size_t>(e.first - 1)];
                msg = byz_emit(*behavior[static_cast<std::size_t>(e.first)], ctx);
            } else {
                msg = payload[static_cast<std::size_t>(e.first)];
            }
            rec.deliveries.push_back(Delivery{e.first, e.second, msg});
        }

        // Per-receiver inbox sorted by port; ports fix the fold order.
        for (NodeId v = 1; v <= n; ++v) {
            if (apply_crash(plan, v, t)) continue;
            std::vector<std::pair<Port, const Delivery*>> inbox;
            for (const Delivery& d : rec.deliveries)
                if (d.dst == v) inbox.emplace_back(tr.ports.port(v, d.src), &d);
            std::sort(inbox.begin(), inbox.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (is_byz[static_cast<std::size_t>(v)]) {
                for (const auto& [port, d] : inbox)
                    last_received[static_cast<std::size_t>(v)] = d->msg;
                continue;
            }
            NodeState& s = st[static_cast<std::size_t>(v)];
            for (const auto& [port, d] : inbox) {
                if (s.has_output) break;
                Phase before = s.p;
                HandleResult hr = handle_message(s, port, d->msg);
                if (hr.phase_changed) {
                    rec.transitions.push_back(Transition{v, before, s.p, s.v, hr.jumped, t});
                    if (s.has_output && !tr.termination[static_cast<std::size_t>(v)])
                        tr.termination[static_cast<std::size_t>(v)] = t;
                }
            }
        }

        rec.states.assign(static_cast<std::size_t>(n) + 1, NodeSnapshot{});
        for (NodeId i = 1; i <= n; ++i) {
            NodeSnapshot& snap = rec.states[static_cast<std::size_t>(i)];
            const NodeState& s = st[static_cast<std::size_t>(i)];
            if (is_byz[static_cast<std::size_t>(i)]) {
                snap.byzantine = true;
                snap.v = cfg.inputs[static_cast<std::size_t>(i - 1)];
                continue;
            }
            snap.p = s.p;
            snap.v = s.v;
            snap.count = s.received_count();
            if (s.has_output) snap.output = s.output;
            snap.crashed = apply_crash(plan, i, t);
        }
        tr.rounds.push_back(std::move(rec));
    }
    return tr;
}

// --- trace serialization (JSON Lines, byte-stable across reruns) ---

inline nlohmann::ordered_json trace_header_json(const Trace& tr) {
    nlohmann::ordered_json j;
    j["type"] = "header";
    j["format"] = "anodyne-trace-v1";
    j["n"] = tr.cfg.n;
    j["f"] = tr.cfg.f;
    j["epsilon"] = tr.cfg.epsilon;
    j["algorithm"] = algorithm_name(tr.cfg.algorithm);
    j["seed"] = tr.cfg.seed;
    j["inputs"] = tr.cfg.inputs;
    j["p_end"] = tr.p_end;
    j["threshold"] = algo_threshold(tr.cfg.algorithm, tr.cfg.n, tr.cfg.f);
    j["max_rounds"] = tr.max_rounds;
    j["faults"] = fault_plan_to_json(tr.plan);
    nlohmann::ordered_json ports = nlohmann::ordered_json::array();
    for (NodeId i = 1; i <= tr.cfg.n; ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Port q = 1; q <= tr.cfg.n; ++q)
            row.push_back(tr.ports.node_at[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)]);
        ports.push_back(std::move(row));
    }
    j["ports"] = std::move(ports);
    return j;
}

inline nlohmann::ordered_json round_record_json(const RoundRecord& rec) {
    nlohmann::ordered_json j;
    j["type"] = "round";
    j["t"] = rec.t;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const Edge& e : rec.edges.edges) edges.push_back({e.first, e.second});
    j["edges"] = std::move(edges);
    nlohmann::ordered_json deliveries = nlohmann::ordered_json::array();
    for (const Delivery& d : rec.deliveries)
        deliveries.push_back({d.src, d.dst, d.msg.value, d.msg.phase});
    j["deliveries"] = std::move(deliveries);
    nlohmann::ordered_json transitions = nlohmann::ordered_json::array();
    for (const Transition& tn : rec.transitions) {
        nlohmann::ordered_json o;
        o["node"] = tn.node;
        o["from"] = tn.from;
        o["to"] = tn.to;
        o["value"] = tn.value;
        o["via"] = tn.via_jump ? "jump" : "threshold";
        transitions.push_back(std::move(o));
    }
    j["transitions"] = std::move(transitions);
    nlohmann::ordered_json states = nlohmann::ordered_json::array();
    for (std::size_t i = 1; i < rec.states.size(); ++i) {
        const NodeSnapshot& s = rec.states[i];
        nlohmann::ordered_json o;
        o["p"] = s.p;
        o["v"] = s.v;
        o["count"] = s.count;
        o["output"] = s.output ? nlohmann::ordered_json(*s.output) : nlohmann::ordered_json(nullptr);
        o["crashed"] = s.crashed;
        o["byzantine"] = s.byzantine;
        states.push_back(std::move(o));
    }
    j["states"] = std::move(states);
    return j;
}

inline nlohmann::ordered_json trace_final_json(const Trace& tr) {
    nlohmann::ordered_json j;
    j["type"] = "final";
    nlohmann::ordered_json term = nlohmann::ordered_json::array();
    for (std::size_t i = 1; i < tr.termination.size(); ++i)
        term.push_back(tr.termination[i] ? nlohmann::ordered_json(*tr.termination[i])
                                         : nlohmann::ordered_json(nullptr));
    j["termination"] = std::move(term);
    j["non_termination"] = tr.non_termination;
    j["rounds_run"] = tr.rounds_run();
    return j;
}

inline std::string trace_to_jsonl(const Trace& tr) {
    std::string out = trace_header_json(tr).dump();
    out += '\n';
    for (const RoundRecord& rec : tr.rounds) {
        out += round_record_json(rec).dump();
        out += '\n';
    }
    out += trace_final_json(tr).dump();
    out += '\n';
    return out;
}

// Deterministic fan-out: results land by index, so any worker count yields
// the same vector.  `fn` must not throw; wrap fallible work before fanning out.
template <typename R>
std::vector<R> run_indexed_parallel(std::size_t count, int workers,
                                    const std::function<R(std::size_t)>& fn) {
    std::vector<R> out(count);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<int>(workers, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    return out;
}

}  // namespace anodyne
