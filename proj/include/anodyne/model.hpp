#pragma once

// Core domain types: identifiers, messages, edge sets, simulation config,
// port numbering. Node identities are analysis-side labels only; algorithm
// code never sees them (receivers know senders only as local ports).

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "anodyne/rng.hpp"

namespace anodyne {

using NodeId = int;  // 1-based
using Port   = int;  // 1-based, per-receiver local
using Round  = int;  // 1-based in traces; 0 = initial state
using Phase  = int;
using Value  = double;

enum class Algorithm { Dac, Dbac, EagerDac, EagerDbac };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Dac: return "dac";
        case Algorithm::Dbac: return "dbac";
        case Algorithm::EagerDac: return "eager-dac";
        case Algorithm::EagerDbac: return "eager-dbac";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
    if (s == "dac") return Algorithm::Dac;
    if (s == "dbac") return Algorithm::Dbac;
    if (s == "eager-dac") return Algorithm::EagerDac;
    if (s == "eager-dbac") return Algorithm::EagerDbac;
    return std::nullopt;
}

inline bool is_crash_algorithm(Algorithm a) {
    return a == Algorithm::Dac || a == Algorithm::EagerDac;
}

// ---------------------------------------------------------------------------
// WireMessage: the only thing that crosses the network. Fixed size, carries
// no sender identity (the delivery port stands in for it).

struct WireMessage {
    Value value = 0.0;
    std::uint32_t phase = 0;

    bool operator==(const WireMessage& o) const {
        return value == o.value && phase == o.phase;
    }
};

inline constexpr std::size_t kWireMessageSize = 12;

// Little-endian: 8-byte IEEE-754 value, then 4-byte unsigned phase.
inline std::array<std::uint8_t, kWireMessageSize> serialize(const WireMessage& m) {
    std::array<std::uint8_t, kWireMessageSize> out{};
    std::uint64_t bits;
    std::memcpy(&bits, &m.value, 8);
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bits >> (8 * i));
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(m.phase >> (8 * i));
    return out;
}

inline WireMessage deserialize(const std::array<std::uint8_t, kWireMessageSize>& in) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | in[static_cast<std::size_t>(i)];
    WireMessage m;
    std::memcpy(&m.value, &bits, 8);
    std::uint32_t p = 0;
    for (int i = 3; i >= 0; --i) p = (p << 8) | in[static_cast<std::size_t>(8 + i)];
    m.phase = p;
    return m;
}

// ---------------------------------------------------------------------------
// EdgeSet: directed links for one round. No self-loops. Kept sorted and
// deduplicated so serialization is canonical.

using Edge = std::pair<NodeId, NodeId>;  // (src, dst)

struct EdgeSet {
    std::vector<Edge> edges;  // sorted

    void add(NodeId src, NodeId dst) {
        if (src == dst) return;
        edges.emplace_back(src, dst);
    }
    void normalize() {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    bool contains(NodeId src, NodeId dst) const {
        return std::binary_search(edges.begin(), edges.end(), std::make_pair(src, dst));
    }
    std::size_t size() const { return edges.size(); }
    bool operator==(const EdgeSet& o) const { return edges == o.edges; }
};

inline EdgeSet complete_edge_set(int n) {
    EdgeSet e;
    for (NodeId u = 1; u <= n; ++u)
        for (NodeId v = 1; v <= n; ++v)
            if (u != v) e.add(u, v);
    e.normalize();
    return e;
}

// ---------------------------------------------------------------------------
// SimConfig

struct SimConfig {
    int n = 0;
    int f = 0;
    double epsilon = 0.0;
    int max_rounds = 0;           // 0 = derive default from schedule hint
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::Dac;
    std::vector<Value> inputs;    // exactly n entries, each in [0,1]
    bool allow_insufficient = false;  // scenario runs may break the n/f bound
};

struct Violation {
    std::string field;
    std::string rule;
    std::string message;
};

// Total: never throws, returns every violated rule.
inline std::vector<Violation> validate_config(const SimConfig& cfg) {
    std::vector<Violation> out;
    auto bad = [&out](const char* field, const char* rule, std::string msg) {
        out.push_back({field, rule, std::move(msg)});
    };
    if (cfg.n < 2) bad("n", "n >= 2", "need at least two nodes, got " + std::to_string(cfg.n));
    if (cfg.f < 0) bad("f", "f >= 0", "fault bound must be non-negative");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        bad("epsilon", "0 < epsilon < 1", "agreement target must lie in (0,1)");
    if (!cfg.allow_insufficient && is_crash_algorithm(cfg.algorithm) && cfg.n < 2 * cfg.f + 1)
        bad("n", "n >= 2f+1", "crash-model algorithm needs n >= 2f+1; n=" + std::to_string(cfg.n) +
                                  ", f=" + std::to_string(cfg.f));
    if (!cfg.allow_insufficient && !is_crash_algorithm(cfg.algorithm) && cfg.n < 5 * cfg.f + 1)
        bad("n", "n >= 5f+1", "Byzantine-model algorithm needs n >= 5f+1; n=" + std::to_string(cfg.n) +
                                  ", f=" + std::to_string(cfg.f));
    if (static_cast<int>(cfg.inputs.size()) != cfg.n)
        bad("inputs", "|inputs| = n", "expected " + std::to_string(cfg.n) + " inputs, got " +
                                          std::to_string(cfg.inputs.size()));
    for (std::size_t i = 0; i < cfg.inputs.size(); ++i)
        if (!(cfg.inputs[i] >= 0.0 && cfg.inputs[i] <= 1.0)) {
            bad("inputs", "inputs in [0,1]", "input " + std::to_string(i + 1) + " out of range");
            break;
        }
    if (cfg.max_rounds < 0) bad("max_rounds", "max_rounds >= 0", "negative round budget");
    return out;
}

// ---------------------------------------------------------------------------
// Port numbering: per receiver, a bijection sender-node <-> local port,
// fixed for the whole execution. Shuffled independently per node from seed.

struct PortNumbering {
    int n = 0;
    // port_of[i][u] = port at node i on which node u's messages arrive (1-based
    // outer and inner). port_of[i][i] is node i's own (self) slot; no wire
    // message ever arrives there.
    std::vector<std::vector<Port>> port_of;
    std::vector<std::vector<NodeId>> node_at;  // inverse

    Port port(NodeId receiver, NodeId sender) const {
        return port_of[static_cast<std::size_t>(receiver)][static_cast<std::size_t>(sender)];
    }
    Port self_port(NodeId i) const { return port(i, i); }
};

inline PortNumbering build_port_numbering(int n, std::uint64_t seed) {
    PortNumbering pn;
    pn.n = n;
    pn.port_of.assign(static_cast<std::size_t>(n) + 1, std::vector<Port>(static_cast<std::size_t>(n) + 1, 0));
    pn.node_at.assign(static_cast<std::size_t>(n) + 1, std::vector<NodeId>(static_cast<std::size_t>(n) + 1, 0));
    for (NodeId i = 1; i <= n; ++i) {
        std::vector<Port> perm(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k + 1;
        Rng r(mix64(seed, 0x706F7274ULL + static_cast<std::uint64_t>(i)));
        r.shuffle(perm);
        for (NodeId u = 1; u <= n; ++u) {
            Port p = perm[static_cast<std::size_t>(u - 1)];
            pn.port_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(u)] = p;
            pn.node_at[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = u;
        }
    }
    return pn;
}

} // namespace anodyne
