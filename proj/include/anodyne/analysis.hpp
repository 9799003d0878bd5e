#pragma once

// Trace interpretation: per-phase state tables, convergence and containment
// checks, and the consensus verdict. All checks are pure functions over an
// immutable Trace; inequality checks use an absolute tolerance of 1e-9, and
// the two closed forms of the contraction envelope must agree to 1e-12.

#include "anodyne/engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anodyne {

inline constexpr double kCheckTol = 1e-9;
inline constexpr double kFormTol = 1e-12;

enum class FaultModel { Crash, Byzantine };

inline FaultModel fault_model_for(Algorithm a) {
    return is_crash_algorithm(a) ? FaultModel::Crash : FaultModel::Byzantine;
}

// One node's arrival in a phase. Imputed entries stand in for phases a node
// skipped by jumping; they carry the adopted value and sort after all real
// entries of that phase.
struct PhaseEntry {
    NodeId node = 0;
    Value value = 0.0;
    Round round_entered = 0;
    bool imputed = false;
};

struct PhaseTable {
    FaultModel model = FaultModel::Crash;
    int h = 0;        // nodes with no fault of any kind
    Round t_end = 0;  // rounds recorded in the trace
    Phase p_end = 0;
    std::vector<std::vector<PhaseEntry>> phases;  // phases[p], chronological
    std::vector<bool> node_fault_free;            // index 1..n; empty = all

    Phase max_phase() const { return static_cast<Phase>(phases.size()) - 1; }

    bool entry_fault_free(NodeId node) const {
        if (static_cast<std::size_t>(node) < node_fault_free.size())
            return node_fault_free[static_cast<std::size_t>(node)];
        return true;
    }

    int n_p(Phase p) const {
        if (p < 0 || p > max_phase()) return 0;
        return static_cast<int>(phases[static_cast<std::size_t>(p)].size());
    }

    std::vector<Value> values(Phase p) const {
        std::vector<Value> out;
        if (p < 0 || p > max_phase()) return out;
        for (const PhaseEntry& e : phases[static_cast<std::size_t>(p)]) out.push_back(e.value);
        return out;
    }

    // Value-ordered copy of the phase's entries.
    std::vector<Value> w(Phase p) const {
        std::vector<Value> out = values(p);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Fault-free nodes at phase >= p once t rounds have run (t = 0 is the
    // initial state).
    int k(Round t, Phase p) const {
        if (p < 0 || p > max_phase()) return 0;
        int c = 0;
        for (const PhaseEntry& e : phases[static_cast<std::size_t>(p)])
            if (entry_fault_free(e.node) && e.round_entered <= t) ++c;
        return c;
    }
};

inline PhaseTable build_phase_table(const Trace& tr, FaultModel model) {
    const int n = tr.cfg.n;
    PhaseTable t;
    t.model = model;
    t.t_end = tr.rounds_run();
    t.p_end = tr.p_end;
    t.node_fault_free.assign(static_cast<std::size_t>(n) + 1, true);
    std::vector<bool> include(static_cast<std::size_t>(n) + 1, true);
    for (const CrashFault& c : tr.plan.crashes)
        t.node_fault_free[static_cast<std::size_t>(c.node)] = false;
    for (const ByzFault& b : tr.plan.byzantine) {
        t.node_fault_free[static_cast<std::size_t>(b.node)] = false;
        include[static_cast<std::size_t>(b.node)] = false;
    }
    // Crash tables keep entries a node made before crashing; the Byzantine
    // table holds fault-free nodes only.
    if (model == FaultModel::Byzantine) include = t.node_fault_free;
    for (NodeId i = 1; i <= n; ++i)
        if (t.node_fault_free[static_cast<std::size_t>(i)]) ++t.h;

    Phase pmax = 0;
    for (const RoundRecord& rec : tr.rounds)
        for (const Transition& tn : rec.transitions) {
            if (tn.node < 1 || tn.node > n) throw std::invalid_argument("malformed trace: bad node id");
            if (include[static_cast<std::size_t>(tn.node)]) pmax = std::max(pmax, tn.to);
        }

    std::vector<std::vector<PhaseEntry>> real(static_cast<std::size_t>(pmax) + 1);
    std::vector<std::vector<PhaseEntry>> imputed(static_cast<std::size_t>(pmax) + 1);
    for (NodeId i = 1; i <= n; ++i)
        if (include[static_cast<std::size_t>(i)])
            real[0].push_back(PhaseEntry{i, tr.cfg.inputs[static_cast<std::size_t>(i - 1)], 0, false});
    for (const RoundRecord& rec : tr.rounds)
        for (const Transition& tn : rec.transitions) {
            if (!include[static_cast<std::size_t>(tn.node)]) continue;
            real[static_cast<std::size_t>(tn.to)].push_back(
                PhaseEntry{tn.node, tn.value, tn.round, false});
            if (tn.via_jump)
                for (Phase p = tn.from + 1; p < tn.to; ++p)
                    imputed[static_cast<std::size_t>(p)].push_back(
                        PhaseEntry{tn.node, tn.value, tn.round, true});
        }

    auto by_round_then_node = [](const PhaseEntry& a, const PhaseEntry& b) {
        return a.round_entered != b.round_entered ? a.round_entered < b.round_entered
                                                  : a.node < b.node;
    };
    t.phases.resize(static_cast<std::size_t>(pmax) + 1);
    for (Phase p = 0; p <= pmax; ++p) {
        auto& rl = real[static_cast<std::size_t>(p)];
        auto& im = imputed[static_cast<std::size_t>(p)];
        std::sort(rl.begin(), rl.end(), by_round_then_node);
        std::sort(im.begin(), im.end(), by_round_then_node);
        auto& dst = t.phases[static_cast<std::size_t>(p)];
        dst = std::move(rl);
        dst.insert(dst.end(), im.begin(), im.end());
    }
    return t;
}

struct RangeInterval {
    Value min = 0.0;
    Value max = 0.0;
    Value range = 0.0;
};

inline RangeInterval range_interval(const std::vector<Value>& values) {
    if (values.empty()) throw std::invalid_argument("range of an empty value set");
    RangeInterval r;
    r.min = r.max = values.front();
    for (Value v : values) {
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
    }
    r.range = r.max - r.min;
    return r;
}

// Machine-readable counterexample; fields default to -1/0 when not relevant.
struct CheckWitness {
    Phase p = -1;
    Phase q = -1;
    Round t = -1;
    NodeId node = 0;
    int k = -1;
    Value value = 0.0;
    Value lo = 0.0;
    Value hi = 0.0;
    std::string note;
};

struct CheckResult {
    bool pass = true;
    std::optional<CheckWitness> witness;
};

struct RateReport {
    bool pass = true;
    std::vector<double> ratios;  // achieved per-phase contraction
    std::optional<CheckWitness> witness;
};

inline RateReport check_convergence_rate(const PhaseTable& t, double rho) {
    RateReport rep;
    for (Phase p = 0; p < t.max_phase(); ++p) {
        if (t.n_p(p + 1) == 0) break;
        double rp = range_interval(t.values(p)).range;
        double rn = range_interval(t.values(p + 1)).range;
        rep.ratios.push_back(rp > 0.0 ? rn / rp : 0.0);
        if (rn > rho * rp + kCheckTol && rep.pass) {
            rep.pass = false;
            CheckWitness w;
            w.p = p;
            w.value = rn;
            w.hi = rho * rp;
            w.note = "next-phase range exceeds rho * phase range";
            rep.witness = w;
        }
    }
    return rep;
}

// Every next-phase value must lie between the midpoint of the lowest
// majority block and the midpoint of the highest majority block of the
// current phase's value-ordered states.
inline CheckResult check_midpoint_inclusion(const PhaseTable& t, int n) {
    const int m = n / 2;
    for (Phase p = 0; p < t.max_phase(); ++p) {
        const auto& next = t.phases[static_cast<std::size_t>(p + 1)];
        if (next.empty()) continue;
        std::vector<Value> W = t.w(p);
        const int np = static_cast<int>(W.size());
        if (np < m + 1) {
            CheckWitness w;
            w.p = p;
            w.note = "not enough phase entries to form the majority interval";
            return CheckResult{false, w};
        }
        const Value lo = (W[0] + W[static_cast<std::size_t>(m)]) / 2.0;
        const Value hi =
            (W[static_cast<std::size_t>(np - m - 1)] + W[static_cast<std::size_t>(np - 1)]) / 2.0;
        for (const PhaseEntry& e : next) {
            if (e.value < lo - kCheckTol || e.value > hi + kCheckTol) {
                CheckWitness w;
                w.p = p;
                w.node = e.node;
                w.value = e.value;
                w.lo = lo;
                w.hi = hi;
                return CheckResult{false, w};
            }
        }
    }
    return CheckResult{};
}

// Per-round snapshots of each phase's occupied interval must nest downward:
// what later phases hold stays inside what earlier phases held at the same
// time. Also checks the occupancy counts are monotone in both arguments.
inline CheckResult check_interval_nesting(const PhaseTable& t) {
    const Phase pmax = t.max_phase();
    if (pmax < 0) return CheckResult{};
    struct Sorted {
        std::vector<Round> rounds;
        std::vector<Value> lo;  // prefix minima
        std::vector<Value> hi;  // prefix maxima
    };
    std::vector<Sorted> by_phase(static_cast<std::size_t>(pmax) + 1);
    for (Phase p = 0; p <= pmax; ++p) {
        std::vector<PhaseEntry> entries;
        for (const PhaseEntry& e : t.phases[static_cast<std::size_t>(p)])
            if (t.entry_fault_free(e.node)) entries.push_back(e);
        std::sort(entries.begin(), entries.end(), [](const PhaseEntry& a, const PhaseEntry& b) {
            return a.round_entered < b.round_entered;
        });
        Sorted& s = by_phase[static_cast<std::size_t>(p)];
        for (const PhaseEntry& e : entries) {
            s.rounds.push_back(e.round_entered);
            if (s.lo.empty()) {
                s.lo.push_back(e.value);
                s.hi.push_back(e.value);
            } else {
                s.lo.push_back(std::min(s.lo.back(), e.value));
                s.hi.push_back(std::max(s.hi.back(), e.value));
            }
        }
    }

    std::vector<std::size_t> idx(static_cast<std::size_t>(pmax) + 1, 0);
    std::vector<int> prev_k(static_cast<std::size_t>(pmax) + 1, 0);
    for (Round tau = 0; tau <= t.t_end; ++tau) {
        for (Phase p = 0; p <= pmax; ++p) {
            Sorted& s = by_phase[static_cast<std::size_t>(p)];
            while (idx[static_cast<std::size_t>(p)] < s.rounds.size() &&
                   s.rounds[idx[static_cast<std::size_t>(p)]] <= tau)
                ++idx[static_cast<std::size_t>(p)];
        }
        for (Phase p = 0; p <= pmax; ++p) {
            int kv = static_cast<int>(idx[static_cast<std::size_t>(p)]);
            if (kv < prev_k[static_cast<std::size_t>(p)]) {
                CheckWitness w;
                w.t = tau;
                w.p = p;
                w.note = "occupancy count decreased over time";
                return CheckResult{false, w};
            }
            prev_k[static_cast<std::size_t>(p)] = kv;
            if (p > 0 && kv > static_cast<int>(idx[static_cast<std::size_t>(p - 1)])) {
                CheckWitness w;
                w.t = tau;
                w.p = p - 1;
                w.q = p;
                w.note = "higher phase occupied by more nodes than lower phase";
                return CheckResult{false, w};
            }
        }
        for (Phase p = 0; p <= pmax; ++p) {
            if (idx[static_cast<std::size_t>(p)] == 0) continue;
            std::size_t ip = idx[static_cast<std::size_t>(p)] - 1;
            for (Phase q = p + 1; q <= pmax; ++q) {
                if (idx[static_cast<std::size_t>(q)] == 0) continue;
                std::size_t iq = idx[static_cast<std::size_t>(q)] - 1;
                const Sorted& sp = by_phase[static_cast<std::size_t>(p)];
                const Sorted& sq = by_phase[static_cast<std::size_t>(q)];
                if (sq.lo[iq] < sp.lo[ip] - kCheckTol || sq.hi[iq] > sp.hi[ip] + kCheckTol) {
                    CheckWitness w;
                    w.t = tau;
                    w.p = p;
                    w.q = q;
                    w.lo = sq.lo[iq];
                    w.hi = sq.hi[iq];
                    return CheckResult{false, w};
                }
            }
        }
    }
    return CheckResult{};
}

// After the final recorded round every fault-free node must have reached
// every phase up to the output horizon.
inline CheckResult check_saturation(const PhaseTable& t) {
    for (Phase p = 0; p <= t.p_end; ++p) {
        if (t.k(t.t_end, p) != t.h) {
            CheckWitness w;
            w.t = t.t_end;
            w.p = p;
            w.k = t.k(t.t_end, p);
            w.note = "phase not reached by every fault-free node";
            return CheckResult{false, w};
        }
    }
    return CheckResult{};
}

// The first k(t,p) chronological entries of each phase must be exactly the
// fault-free nodes the trace shows at phase >= p after t rounds.
inline CheckResult check_prefix_property(const Trace& tr, const PhaseTable& t) {
    const int n = tr.cfg.n;
    for (Round tau = 0; tau <= t.t_end; ++tau) {
        for (Phase p = 0; p <= t.max_phase(); ++p) {
            std::set<NodeId> from_table;
            for (const PhaseEntry& e : t.phases[static_cast<std::size_t>(p)])
                if (t.entry_fault_free(e.node) && e.round_entered <= tau) from_table.insert(e.node);
            std::set<NodeId> from_trace;
            for (NodeId i = 1; i <= n; ++i) {
                if (!t.entry_fault_free(i)) continue;
                Phase ph = tau == 0 ? 0
                                    : tr.rounds[static_cast<std::size_t>(tau - 1)]
                                          .states[static_cast<std::size_t>(i)]
                                          .p;
                if (ph >= p) from_trace.insert(i);
            }
            if (from_table != from_trace) {
                CheckWitness w;
                w.t = tau;
                w.p = p;
                w.note = "phase occupancy prefix disagrees with trace states";
                return CheckResult{false, w};
            }
        }
    }
    return CheckResult{};
}

enum class EnvelopeForm { Recursive, Explicit };

struct EnvelopeBounds {
    Value lo = 0.0;
    Value hi = 0.0;
};

// Contraction envelope for phase p after k arrivals: both bounds start at
// the (2f+1)-th smallest value and halve their distance to the extreme
// values per step.
inline EnvelopeBounds envelope(const PhaseTable& t, int f, Phase p, int k, EnvelopeForm form) {
    std::vector<Value> W = t.w(p);
    const int hp = static_cast<int>(W.size());
    if (hp < 2 * f + 1) throw std::invalid_argument("envelope needs at least 2f+1 phase entries");
    const Value w1 = W.front();
    const Value wh = W.back();
    const Value anchor = W[static_cast<std::size_t>(2 * f)];
    EnvelopeBounds b;
    if (form == EnvelopeForm::Recursive) {
        b.lo = b.hi = anchor;
        for (int i = 0; i < k; ++i) {
            b.lo = (b.lo + w1) / 2.0;
            b.hi = (b.hi + wh) / 2.0;
        }
    } else {
        b.lo = w1 + std::ldexp(anchor - w1, -k);
        b.hi = wh + std::ldexp(anchor - wh, -k);
    }
    return b;
}

// The k-th node to reach phase p+1 must land inside the phase-p envelope
// after k steps.
inline CheckResult check_envelope(const PhaseTable& t, int f) {
    for (Phase p = 0; p < t.max_phase(); ++p) {
        const auto& next = t.phases[static_cast<std::size_t>(p + 1)];
        if (next.empty()) continue;
        if (t.n_p(p) < 2 * f + 1) {
            CheckWitness w;
            w.p = p;
            w.note = "not enough phase entries for the envelope";
            return CheckResult{false, w};
        }
        for (int k = 1; k <= static_cast<int>(next.size()); ++k) {
            EnvelopeBounds b = envelope(t, f, p, k, EnvelopeForm::Recursive);
            const PhaseEntry& e = next[static_cast<std::size_t>(k - 1)];
            if (e.value < b.lo - kCheckTol || e.value > b.hi + kCheckTol) {
                CheckWitness w;
                w.p = p;
                w.k = k;
                w.node = e.node;
                w.value = e.value;
                w.lo = b.lo;
                w.hi = b.hi;
                return CheckResult{false, w};
            }
        }
    }
    return CheckResult{};
}

inline CheckResult check_envelope_forms(const PhaseTable& t, int f, int k_max = 64) {
    for (Phase p = 0; p <= t.max_phase(); ++p) {
        if (t.n_p(p) < 2 * f + 1) continue;
        for (int k = 0; k <= k_max; ++k) {
            EnvelopeBounds r = envelope(t, f, p, k, EnvelopeForm::Recursive);
            EnvelopeBounds x = envelope(t, f, p, k, EnvelopeForm::Explicit);
            if (std::abs(r.lo - x.lo) > kFormTol || std::abs(r.hi - x.hi) > kFormTol) {
                CheckWitness w;
                w.p = p;
                w.k = k;
                w.lo = r.lo - x.lo;
                w.hi = r.hi - x.hi;
                w.note = "recursive and explicit envelope forms disagree";
                return CheckResult{false, w};
            }
        }
    }
    return CheckResult{};
}

struct Verdict {
    bool validity = true;
    bool eps_agreement = true;
    double achieved_range = 0.0;
    std::optional<Round> termination;
    std::vector<double> rate_per_phase;
    std::map<std::string, CheckResult> checks;

    bool all_pass() const {
        if (!validity || !eps_agreement || !termination.has_value()) return false;
        for (const auto& [name, c] : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline Verdict check_consensus(const Trace& tr, std::optional<FaultModel> model_override = {}) {
    const FaultModel model = model_override.value_or(fault_model_for(tr.cfg.algorithm));
    const int n = tr.cfg.n;
    Verdict v;

    PhaseTable table = build_phase_table(tr, model);

    // Output hull: crash validity admits every input, Byzantine validity
    // only the inputs of nodes that are not Byzantine.
    std::vector<bool> byz(static_cast<std::size_t>(n) + 1, false);
    for (const ByzFault& b : tr.plan.byzantine) byz[static_cast<std::size_t>(b.node)] = true;
    std::vector<Value> hull_inputs;
    for (NodeId i = 1; i <= n; ++i) {
        if (model == FaultModel::Byzantine && byz[static_cast<std::size_t>(i)]) continue;
        hull_inputs.push_back(tr.cfg.inputs[static_cast<std::size_t>(i - 1)]);
    }
    RangeInterval hull = range_interval(hull_inputs);

    std::vector<Value> outputs;
    bool all_output = true;
    Round last_round = 0;
    for (NodeId i = 1; i <= n; ++i) {
        if (!table.node_fault_free[static_cast<std::size_t>(i)]) continue;
        const auto& term = tr.termination[static_cast<std::size_t>(i)];
        if (!term.has_value()) {
            all_output = false;
            continue;
        }
        last_round = std::max(last_round, *term);
        Value out = *tr.rounds.back().states[static_cast<std::size_t>(i)].output;
        outputs.push_back(out);
        if (out < hull.min - kCheckTol || out > hull.max + kCheckTol) v.validity = false;
    }
    if (!outputs.empty()) v.achieved_range = range_interval(outputs).range;
    v.eps_agreement = v.achieved_range <= tr.cfg.epsilon + kCheckTol;
    if (all_output) v.termination = last_round;

    const double rho =
        model == FaultModel::Crash ? 0.5 : 1.0 - std::ldexp(1.0, -n);
    RateReport rate = check_convergence_rate(table, rho);
    v.rate_per_phase = rate.ratios;
    v.checks["rate"] = CheckResult{rate.pass, rate.witness};
    if (model == FaultModel::Crash) {
        v.checks["midpoint-inclusion"] = check_midpoint_inclusion(table, n);
    } else {
        v.checks["interval-nesting"] = check_interval_nesting(table);
        v.checks["envelope"] = check_envelope(table, tr.cfg.f);
        v.checks["envelope-forms"] = check_envelope_forms(table, tr.cfg.f);
        if (v.termination.has_value()) {
            v.checks["saturation"] = check_saturation(table);
        } else {
            CheckWitness w;
            w.note = "run did not terminate";
            v.checks["saturation"] = CheckResult{false, w};
        }
        v.checks["prefix"] = check_prefix_property(tr, table);
    }
    return v;
}

inline nlohmann::ordered_json check_witness_json(const CheckWitness& w) {
    nlohmann::ordered_json j;
    j["p"] = w.p;
    j["q"] = w.q;
    j["t"] = w.t;
    j["node"] = w.node;
    j["k"] = w.k;
    j["value"] = w.value;
    j["lo"] = w.lo;
    j["hi"] = w.hi;
    j["note"] = w.note;
    return j;
}

inline nlohmann::ordered_json verdict_to_json(const Verdict& v) {
    nlohmann::ordered_json j;
    j["validity"] = v.validity;
    nlohmann::ordered_json agree;
    agree["pass"] = v.eps_agreement;
    agree["achieved_range"] = v.achieved_range;
    j["eps_agreement"] = std::move(agree);
    j["termination"] =
        v.termination ? nlohmann::ordered_json(*v.termination) : nlohmann::ordered_json(nullptr);
    j["rate_per_phase"] = v.rate_per_phase;
    nlohmann::ordered_json checks;
    for (const auto& [name, c] : v.checks) {
        nlohmann::ordered_json cj;
        cj["pass"] = c.pass;
        cj["witness"] = c.witness ? check_witness_json(*c.witness) : nlohmann::ordered_json(nullptr);
        checks[name] = std::move(cj);
    }
    j["checks"] = std::move(checks);
    j["all_pass"] = v.all_pass();
    return j;
}

}  // namespace anodyne
