#pragma once

// Dynamic edge schedules and message adversaries.
//
// A schedule maps each round to a directed edge set. The stability property
// dynaDegree(T,D) asks that every non-excluded node accumulate at least D
// distinct in-neighbors over every T consecutive rounds. The checker is the
// oracle for the generator; adaptive strategies (drop-one, partitions) are
// deterministic functions of the start-of-round states.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "anodyne/model.hpp"
#include "anodyne/rng.hpp"

namespace anodyne {

struct DynamicSchedule {
    int n = 0;
    int horizon = 0;                  // rounds materialized: 1..horizon
    std::vector<EdgeSet> rounds;      // rounds[t-1] = edges at round t

    // Rounds past the horizon repeat the materialized pattern periodically.
    const EdgeSet& at(Round t) const {
        int idx = (t - 1) % horizon;
        return rounds[static_cast<std::size_t>(idx)];
    }
};

struct HorizonTooShort : std::invalid_argument {
    explicit HorizonTooShort(const std::string& what) : std::invalid_argument(what) {}
};

// JSON shape: {"n", "horizon", "rounds": [{"t", "edges": [[src, dst], ...]}]}.
// Rounds with no entry are empty; emission writes only non-empty rounds.
inline nlohmann::ordered_json schedule_to_json(const DynamicSchedule& sched) {
    nlohmann::ordered_json j;
    j["n"] = sched.n;
    j["horizon"] = sched.horizon;
    j["rounds"] = nlohmann::ordered_json::array();
    for (Round t = 1; t <= sched.horizon; ++t) {
        const EdgeSet& e = sched.rounds[static_cast<std::size_t>(t - 1)];
        if (e.edges.empty()) continue;
        nlohmann::ordered_json r;
        r["t"] = t;
        r["edges"] = nlohmann::ordered_json::array();
        for (const auto& [u, v] : e.edges) r["edges"].push_back({u, v});
        j["rounds"].push_back(std::move(r));
    }
    return j;
}

inline DynamicSchedule schedule_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("horizon"))
        throw std::invalid_argument("schedule: need object with n and horizon");
    DynamicSchedule sched;
    sched.n = j.at("n").get<int>();
    sched.horizon = j.at("horizon").get<int>();
    if (sched.n < 2) throw std::invalid_argument("schedule: n must be >= 2");
    if (sched.horizon < 1) throw std::invalid_argument("schedule: horizon must be >= 1");
    sched.rounds.assign(static_cast<std::size_t>(sched.horizon), EdgeSet{});
    std::set<Round> seen;
    for (const auto& r : j.value("rounds", nlohmann::json::array())) {
        Round t = r.at("t").get<int>();
        if (t < 1 || t > sched.horizon)
            throw std::invalid_argument("schedule: round t=" + std::to_string(t) +
                                        " outside 1.." + std::to_string(sched.horizon));
        if (!seen.insert(t).second)
            throw std::invalid_argument("schedule: duplicate round t=" + std::to_string(t));
        EdgeSet& e = sched.rounds[static_cast<std::size_t>(t - 1)];
        for (const auto& pair : r.at("edges")) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("schedule: edge must be a [src, dst] pair");
            NodeId u = pair[0].get<int>();
            NodeId v = pair[1].get<int>();
            if (u < 1 || u > sched.n || v < 1 || v > sched.n)
                throw std::invalid_argument("schedule: edge endpoint outside 1.." +
                                            std::to_string(sched.n));
            if (u == v) throw std::invalid_argument("schedule: self-loop rejected");
            e.add(u, v);
        }
        e.normalize();
    }
    return sched;
}

enum class WindowMode {
    Sliding,  // every window start t in [1, horizon-T+1]
    Aligned,  // window starts 1, T+1, 2T+1, ... (the generator's blocks)
};

struct DynaWitness {
    Round t = 0;      // offending window start
    NodeId node = 0;  // first node below the bound
    int count = 0;    // distinct in-neighbors it accumulated
};

struct DynaCheck {
    bool satisfied = true;
    std::optional<DynaWitness> witness;
};

inline DynaCheck check_dyna_degree(const DynamicSchedule& sched, int T, int D,
                                   const std::set<NodeId>& exclude = {},
                                   WindowMode mode = WindowMode::Sliding) {
    if (T < 1 || sched.horizon < T)
        throw HorizonTooShort("window T=" + std::to_string(T) + " exceeds horizon " +
                              std::to_string(sched.horizon));
    int n = sched.n;
    int step = (mode == WindowMode::Aligned) ? T : 1;
    for (Round t = 1; t + T - 1 <= sched.horizon; t += step) {
        // distinct in-neighbors per node over the window
        std::vector<std::set<NodeId>> in(static_cast<std::size_t>(n) + 1);
        for (Round s = t; s <= t + T - 1; ++s)
            for (const auto& [u, v] : sched.rounds[static_cast<std::size_t>(s - 1)].edges)
                in[static_cast<std::size_t>(v)].insert(u);
        for (NodeId v = 1; v <= n; ++v) {
            if (exclude.count(v)) continue;
            int c = static_cast<int>(in[static_cast<std::size_t>(v)].size());
            if (c < D) return {false, DynaWitness{t, v, c}};
        }
    }
    return {true, std::nullopt};
}

// Generator: per disjoint T-block and per node, D distinct in-neighbors each
// placed at a uniformly random round of the block, plus every other edge
// independently with probability extra_edge_prob per round. Satisfies the
// checker at (T, D) with Aligned windows by construction, and at (2T-1, D)
// with Sliding windows (any such window covers a full block).
inline DynamicSchedule gen_dyna_degree(int n, int T, int D, int horizon, std::uint64_t seed,
                                       double extra_edge_prob = 0.0) {
    if (n < 2 || D < 1 || D > n - 1) throw std::invalid_argument("need 1 <= D <= n-1");
    if (T < 1 || horizon < T || horizon % T != 0)
        throw std::invalid_argument("horizon must be a positive multiple of T");
    DynamicSchedule sched;
    sched.n = n;
    sched.horizon = horizon;
    sched.rounds.assign(static_cast<std::size_t>(horizon), EdgeSet{});
    for (int w = 0; w < horizon / T; ++w) {
        Rng rng(mix64(seed, 0x77696E00ULL + static_cast<std::uint64_t>(w)));
        for (NodeId v = 1; v <= n; ++v) {
            std::vector<NodeId> others;
            for (NodeId u = 1; u <= n; ++u)
                if (u != v) others.push_back(u);
            rng.shuffle(others);
            for (int k = 0; k < D; ++k) {
                Round r = w * T + 1 + static_cast<Round>(rng.bounded(static_cast<std::uint64_t>(T)));
                sched.rounds[static_cast<std::size_t>(r - 1)].add(others[static_cast<std::size_t>(k)], v);
            }
        }
        if (extra_edge_prob > 0.0) {
            for (Round r = w * T + 1; r <= (w + 1) * T; ++r)
                for (NodeId u = 1; u <= n; ++u)
                    for (NodeId v = 1; v <= n; ++v)
                        if (u != v && rng.next_unit() < extra_edge_prob)
                            sched.rounds[static_cast<std::size_t>(r - 1)].add(u, v);
        }
    }
    for (auto& e : sched.rounds) e.normalize();
    return sched;
}

// Complete within each group, empty across. Groups must partition [1, n].
inline DynamicSchedule partition_schedule(int n, const std::vector<std::set<NodeId>>& groups,
                                          int horizon) {
    std::set<NodeId> seen;
    for (const auto& g : groups)
        for (NodeId v : g) {
            if (v < 1 || v > n || seen.count(v)) throw std::invalid_argument("invalid partition");
            seen.insert(v);
        }
    if (static_cast<int>(seen.size()) != n) throw std::invalid_argument("partition must cover all nodes");
    EdgeSet per_round;
    for (const auto& g : groups)
        for (NodeId u : g)
            for (NodeId v : g)
                if (u != v) per_round.add(u, v);
    per_round.normalize();
    DynamicSchedule sched;
    sched.n = n;
    sched.horizon = horizon;
    sched.rounds.assign(static_cast<std::size_t>(horizon), per_round);
    return sched;
}

// ---------------------------------------------------------------------------
// Adversary strategies. The engine hands the strategy the start-of-round view
// of every node; the choice must be a deterministic function of it.

struct NodeView {
    Value value = 0.0;
    Phase phase = 0;
    bool crashed = false;
    bool byzantine = false;
    bool has_output = false;
};

struct AdversaryStrategy {
    enum class Kind { Static, DropOne, CrashPartition, ByzPartition, RandomDynaDegree };
    Kind kind = Kind::Static;
    int n = 0;

    // Static
    DynamicSchedule sched;

    // CrashPartition: complete within groups for rounds 1..partition_until,
    // complete graph afterwards.
    std::vector<std::set<NodeId>> groups;
    Round partition_until = 0;

    // ByzPartition: each fault-free node receives only from its side; the
    // Byzantine intersection nodes receive from everyone.
    std::set<NodeId> side_a;      // receivers served by group A senders
    std::set<NodeId> side_b;      // receivers served by group B senders
    std::set<NodeId> group_a;     // A-side sender pool
    std::set<NodeId> group_b;     // B-side sender pool

    // RandomDynaDegree: lazily generated blocks, unbounded horizon.
    int T = 1;
    int D = 1;
    double extra_edge_prob = 0.0;
    std::uint64_t seed = 0;
    mutable std::map<int, std::vector<EdgeSet>> window_cache;

    int t_hint() const {
        switch (kind) {
            case Kind::RandomDynaDegree: return T;
            default: return 1;
        }
    }

    EdgeSet edges_for(Round t, const std::vector<NodeView>& views) const {
        switch (kind) {
            case Kind::Static:
                return sched.at(t);
            case Kind::DropOne: {
                // Complete graph minus, per receiver, the in-edge whose
                // sender's value is farthest from the receiver's (ties:
                // lowest sender id). Exactly one drop per receiver.
                EdgeSet e;
                for (NodeId v = 1; v <= n; ++v) {
                    NodeId drop = 0;
                    double worst = -1.0;
                    for (NodeId u = 1; u <= n; ++u) {
                        if (u == v) continue;
                        double d = std::abs(views[static_cast<std::size_t>(u)].value -
                                            views[static_cast<std::size_t>(v)].value);
                        if (d > worst) { worst = d; drop = u; }
                    }
                    for (NodeId u = 1; u <= n; ++u)
                        if (u != v && u != drop) e.add(u, v);
                }
                e.normalize();
                return e;
            }
            case Kind::CrashPartition: {
                if (t <= partition_until) {
                    EdgeSet e;
                    for (const auto& g : groups)
                        for (NodeId u : g)
                            for (NodeId v : g)
                                if (u != v) e.add(u, v);
                    e.normalize();
                    return e;
                }
                return complete_edge_set(n);
            }
            case Kind::ByzPartition: {
                EdgeSet e;
                for (NodeId v = 1; v <= n; ++v) {
                    const std::set<NodeId>* pool = nullptr;
                    if (views[static_cast<std::size_t>(v)].byzantine) {
                        for (NodeId u = 1; u <= n; ++u)
                            if (u != v) e.add(u, v);
                        continue;
                    }
                    if (side_a.count(v)) pool = &group_a;
                    else if (side_b.count(v)) pool = &group_b;
                    if (!pool) continue;
                    for (NodeId u : *pool)
                        if (u != v) e.add(u, v);
                }
                e.normalize();
                return e;
            }
            case Kind::RandomDynaDegree: {
                int w = (t - 1) / T;
                auto it = window_cache.find(w);
                if (it == window_cache.end()) {
                    DynamicSchedule block = gen_dyna_degree(n, T, D, T, mix64(seed, static_cast<std::uint64_t>(w)),
                                                            extra_edge_prob);
                    it = window_cache.emplace(w, block.rounds).first;
                }
                return it->second[static_cast<std::size_t>((t - 1) % T)];
            }
        }
        return EdgeSet{};
    }
};

inline AdversaryStrategy static_strategy(DynamicSchedule sched) {
    AdversaryStrategy s;
    s.kind = AdversaryStrategy::Kind::Static;
    s.n = sched.n;
    s.sched = std::move(sched);
    return s;
}

inline AdversaryStrategy drop_one_strategy(int n) {
    if (n < 2) throw std::invalid_argument("drop-one needs n >= 2");
    AdversaryStrategy s;
    s.kind = AdversaryStrategy::Kind::DropOne;
    s.n = n;
    return s;
}

inline AdversaryStrategy crash_partition_strategy(int n, std::vector<std::set<NodeId>> groups,
                                                  Round partition_until) {
    AdversaryStrategy s;
    s.kind = AdversaryStrategy::Kind::CrashPartition;
    s.n = n;
    s.groups = std::move(groups);
    s.partition_until = partition_until;
    return s;
}

inline AdversaryStrategy random_dyna_degree_strategy(int n, int T, int D, double extra_edge_prob,
                                                     std::uint64_t seed) {
    AdversaryStrategy s;
    s.kind = AdversaryStrategy::Kind::RandomDynaDegree;
    s.n = n;
    s.T = T;
    s.D = D;
    s.extra_edge_prob = extra_edge_prob;
    s.seed = seed;
    return s;
}

// ---------------------------------------------------------------------------
// Byzantine partition construction: sender pools, reception sides, the
// Byzantine block sitting in the intersection, and the 0/1 input split.

struct ByzPartitionRoles {
    std::set<NodeId> group_a;   // {1 .. floor((n+3f)/2)}
    std::set<NodeId> group_b;   // {floor((n-3f)/2)+1 .. n}
    std::set<NodeId> byz;       // {floor((n-f)/2)+1 .. floor((n+f)/2)}
    std::set<NodeId> side_a;    // fault-free nodes receiving A-side traffic
    std::set<NodeId> side_b;
    std::vector<Value> inputs;  // 0 below the Byzantine block, 1 above
};

inline ByzPartitionRoles byz_partition_roles(int n, int f) {
    if (n < 3 * f + 1) throw std::invalid_argument("need n >= 3f+1");
    ByzPartitionRoles r;
    int a_hi = (n + 3 * f) / 2;
    int b_lo = (n - 3 * f) / 2 + 1;
    int byz_lo = (n - f) / 2 + 1;
    int byz_hi = (n + f) / 2;
    for (NodeId i = 1; i <= a_hi; ++i) r.group_a.insert(i);
    for (NodeId i = b_lo; i <= n; ++i) r.group_b.insert(i);
    for (NodeId i = byz_lo; i <= byz_hi; ++i) r.byz.insert(i);
    r.inputs.assign(static_cast<std::size_t>(n), 0.0);
    for (NodeId i = 1; i <= n; ++i)
        if (i >= byz_hi + 1) r.inputs[static_cast<std::size_t>(i - 1)] = 1.0;
    // Fault-free intersection nodes: lower-indexed half receives A-side
    // traffic, higher-indexed half B-side. Nodes outside the intersection
    // receive from their only group.
    std::vector<NodeId> inter_ff;
    for (NodeId i = b_lo; i <= a_hi; ++i)
        if (!r.byz.count(i)) inter_ff.push_back(i);
    std::size_t half = inter_ff.size() / 2;
    for (std::size_t k = 0; k < inter_ff.size(); ++k)
        (k < half ? r.side_a : r.side_b).insert(inter_ff[k]);
    for (NodeId i = 1; i <= n; ++i) {
        if (r.byz.count(i)) continue;
        bool in_a = r.group_a.count(i) > 0;
        bool in_b = r.group_b.count(i) > 0;
        if (in_a && !in_b) r.side_a.insert(i);
        if (in_b && !in_a) r.side_b.insert(i);
    }
    return r;
}

inline AdversaryStrategy byz_partition_strategy(int n, int f) {
    ByzPartitionRoles r = byz_partition_roles(n, f);
    AdversaryStrategy s;
    s.kind = AdversaryStrategy::Kind::ByzPartition;
    s.n = n;
    s.side_a = r.side_a;
    s.side_b = r.side_b;
    s.group_a = r.group_a;
    s.group_b = r.group_b;
    return s;
}

} // namespace anodyne
