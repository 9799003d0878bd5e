#pragma once

// Per-node approximate-consensus state machines.
//
// Crash family (DAC): track the min/max of values seen this phase; once
// floor(n/2)+1 distinct senders (self included) are counted, move to their
// midpoint and advance a phase. Higher-phase messages are adopted wholesale
// (a "jump"). Byzantine family (DBAC): keep the f+1 smallest and f+1 largest
// values seen this phase; once floor((n+3f)/2)+1 distinct senders are
// counted, move to the midpoint of the (f+1)-th lowest and (f+1)-th highest.
// No jumps; future-phase values are accepted as points. Eager variants lower
// the counting threshold by one, deliberately below the safe bound.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "anodyne/model.hpp"

namespace anodyne {

inline int algo_threshold(Algorithm a, int n, int f) {
    int base = is_crash_algorithm(a) ? n / 2 + 1 : (n + 3 * f) / 2 + 1;
    bool eager = a == Algorithm::EagerDac || a == Algorithm::EagerDbac;
    return eager ? base - 1 : base;
}

// Smallest k >= 0 with 2^-k <= eps.
inline Phase p_end_crash(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    Phase k = 0;
    while (std::ldexp(1.0, -k) > eps) ++k;  // 2^-k is exact, so the scan is too
    return k;
}

namespace detail {

// Exact decision of (1-2^-n)^k <= eps on 128-bit integers, available whenever
// (2^n-1)^k fits. Every representable tie does: a tie forces (2^n-1)^k, which
// is odd, to be a double mantissa, hence < 2^53.
inline std::optional<bool> p_end_byz_exact(double eps, int n, long long k) {
    if (static_cast<long long>(n) * k > 126) return std::nullopt;
    unsigned __int128 val = 1;
    const unsigned __int128 q = (static_cast<unsigned __int128>(1) << n) - 1;
    for (long long i = 0; i < k; ++i) val *= q;
    int ex = 0;
    double fr = std::frexp(eps, &ex);
    const unsigned __int128 m =
        static_cast<unsigned __int128>(static_cast<unsigned long long>(std::ldexp(fr, 53)));
    // decide val <= m * 2^sh with sh = n*k + ex - 53, m in [2^52, 2^53)
    long long sh = static_cast<long long>(n) * k + ex - 53;
    if (sh >= 0) {
        if (sh >= 75) return true;  // rhs >= 2^127 > val
        return val <= (m << sh);
    }
    long long s = -sh;
    if (s >= 128) return false;  // val * 2^s >= 2^128 > m
    const unsigned __int128 all_ones = ~static_cast<unsigned __int128>(0);
    if (val > (all_ones >> s)) return false;
    return (val << s) <= m;
}

} // namespace detail

// Smallest k >= 0 with (1-2^-n)^k <= eps. Extended-precision logs pick the
// candidate; integer arithmetic settles borderline k where ties can exist.
inline Phase p_end_byz(double eps, int n) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const long double le = logl(static_cast<long double>(eps));
    const long double lq = log1pl(-ldexpl(1.0L, -n));  // ln(1 - 2^-n) < 0
    auto holds = [&](long long k) {
        if (auto exact = detail::p_end_byz_exact(eps, n, k)) return *exact;
        return static_cast<long double>(k) * lq <= le;
    };
    long long k = static_cast<long long>(ceill(le / lq));
    if (k < 0) k = 0;
    while (!holds(k)) ++k;
    while (k > 0 && holds(k - 1)) --k;
    return static_cast<Phase>(k);
}

inline Phase p_end_for(Algorithm a, double eps, int n) {
    return is_crash_algorithm(a) ? p_end_crash(eps) : p_end_byz(eps, n);
}

// Keep the `capacity` smallest values in r_low and the `capacity` largest in
// r_high (with multiplicity), given one more observed value.
inline void store_point(std::vector<Value>& r_low, std::vector<Value>& r_high, int capacity,
                        Value x) {
    if (static_cast<int>(r_low.size()) < capacity) {
        r_low.push_back(x);
    } else {
        auto it = std::max_element(r_low.begin(), r_low.end());
        if (x < *it) *it = x;
    }
    if (static_cast<int>(r_high.size()) < capacity) {
        r_high.push_back(x);
    } else {
        auto it = std::min_element(r_high.begin(), r_high.end());
        if (x > *it) *it = x;
    }
}

struct NodeState {
    Algorithm algorithm = Algorithm::Dac;
    int n = 0;
    int f = 0;
    Port self_port = 0;
    Phase p_end = 0;
    Value input = 0.0;

    Value v = 0.0;
    Phase p = 0;
    std::vector<bool> r_bits;  // indexed by port, 1..n; self stays set

    Value v_min = 0.0;  // crash family: extremes seen this phase
    Value v_max = 0.0;
    std::vector<Value> r_low;   // byz family: f+1 smallest seen this phase
    std::vector<Value> r_high;  // byz family: f+1 largest seen this phase

    bool has_output = false;
    Value output = 0.0;

    int received_count() const {
        int c = 0;
        for (int q = 1; q <= n; ++q) c += r_bits[static_cast<std::size_t>(q)] ? 1 : 0;
        return c;
    }
};

struct HandleResult {
    bool phase_changed = false;
    bool jumped = false;
};

namespace detail {

inline void reset_round_state(NodeState& st) {
    st.r_bits.assign(static_cast<std::size_t>(st.n) + 1, false);
    st.r_bits[static_cast<std::size_t>(st.self_port)] = true;
    if (is_crash_algorithm(st.algorithm)) {
        st.v_min = st.v;
        st.v_max = st.v;
    } else {
        st.r_low.assign(1, st.v);   // the node's own value always counts
        st.r_high.assign(1, st.v);
    }
}

} // namespace detail

inline NodeState make_node(Algorithm a, Value x, int n, int f, double epsilon, Port self_port) {
    if (n < 2 || self_port < 1 || self_port > n) throw std::invalid_argument("bad node shape");
    NodeState st;
    st.algorithm = a;
    st.n = n;
    st.f = f;
    st.self_port = self_port;
    st.p_end = p_end_for(a, epsilon, n);
    st.input = x;
    st.v = x;
    st.p = 0;
    detail::reset_round_state(st);
    return st;
}

inline WireMessage broadcast_payload(const NodeState& st) {
    return {st.v, static_cast<std::uint32_t>(st.p)};
}

// Process one delivered message. Nodes that already hold an output are
// final; the engine stops feeding them, and this guard makes that harmless.
inline HandleResult handle_message(NodeState& st, Port from, const WireMessage& msg) {
    HandleResult res;
    if (st.has_output) return res;
    const Phase mp = static_cast<Phase>(msg.phase);
    const int threshold = algo_threshold(st.algorithm, st.n, st.f);
    if (is_crash_algorithm(st.algorithm)) {
        if (mp > st.p) {
            st.v = msg.value;
            st.p = mp;
            detail::reset_round_state(st);
            res.phase_changed = true;
            res.jumped = true;
        } else if (mp == st.p && !st.r_bits[static_cast<std::size_t>(from)]) {
            st.r_bits[static_cast<std::size_t>(from)] = true;
            st.v_min = std::min(st.v_min, msg.value);
            st.v_max = std::max(st.v_max, msg.value);
            if (st.received_count() >= threshold) {
                st.v = (st.v_min + st.v_max) / 2.0;
                st.p += 1;
                detail::reset_round_state(st);
                res.phase_changed = true;
            }
        }
    } else {
        if (mp >= st.p && !st.r_bits[static_cast<std::size_t>(from)]) {
            st.r_bits[static_cast<std::size_t>(from)] = true;
            store_point(st.r_low, st.r_high, st.f + 1, msg.value);
            if (st.received_count() >= threshold) {
                Value lo = *std::max_element(st.r_low.begin(), st.r_low.end());
                Value hi = *std::min_element(st.r_high.begin(), st.r_high.end());
                st.v = (lo + hi) / 2.0;
                st.p += 1;
                detail::reset_round_state(st);
                res.phase_changed = true;
            }
        }
    }
    if (res.phase_changed && st.p >= st.p_end) {
        st.p = st.p_end;
        st.output = st.v;
        st.has_output = true;
    }
    return res;
}

} // namespace anodyne
