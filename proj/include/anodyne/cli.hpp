#pragma once

// Command-line front end: config parsing, run/sweep/check/demo dispatch, and
// CSV/JSONL artifact emission.  Commands take explicit output streams so they
// can be exercised in-process; `run_cli` wires them to a CLI11 parser.
//
// Config document shape (JSON):
//   {
//     "sim":      {n, f, epsilon, seed, algorithm, inputs, max_rounds?,
//                  allow_insufficient?},
//     "schedule": {"kind": "static" | "complete" | "generate" | "drop-one" |
//                  "crash-partition" | "byz-partition" | "random-dyna-degree",
//                  ...kind-specific fields},
//     "faults":   optional fault plan (see faults.hpp JSON form),
//     "analysis": optional {"fault_model": "auto" | "crash" | "byzantine"},
//     "sweep":    optional {"overrides": [merge patches...]}
//   }
// The ANODYNE_SEED environment variable overrides sim.seed for `run`.
// Generated-schedule seeds default to the (possibly overridden) sim seed.

#include "anodyne/analysis.hpp"
#include "anodyne/engine.hpp"
#include "anodyne/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anodyne {

// ---------------------------------------------------------------------------
// Summary CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "#v1 seed,n,f,T,D,algorithm,phases,rounds,final_range,validity,agreement,rate_max";

inline std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// One sweep/run cell.  `ok` false means the cell failed before producing a
// verdict; the row then carries "error" in the result columns.
struct CellSummary {
    bool ok = false;
    bool all_pass = false;
    std::uint64_t seed = 0;
    int n = 0;
    int f = 0;
    int T = 0;
    int D = 0;
    std::string algorithm = "?";
    int phases = 0;
    Round rounds = 0;
    double final_range = 0.0;
    bool validity = false;
    bool agreement = false;
    double rate_max = 0.0;
    std::string error;
};

inline std::string csv_row(const CellSummary& c) {
    std::string s = std::to_string(c.seed) + "," + std::to_string(c.n) + "," +
                    std::to_string(c.f) + "," + std::to_string(c.T) + "," +
                    std::to_string(c.D) + "," + c.algorithm + ",";
    if (!c.ok) return s + "error,error,error,error,error,error";
    return s + std::to_string(c.phases) + "," + std::to_string(c.rounds) + "," +
           format_g17(c.final_range) + "," + (c.validity ? "true" : "false") + "," +
           (c.agreement ? "true" : "false") + "," + format_g17(c.rate_max);
}

// ---------------------------------------------------------------------------
// Config loading
// ---------------------------------------------------------------------------

struct RunSetup {
    SimConfig cfg;
    AdversaryStrategy strategy;
    FaultPlan plan;
    std::optional<FaultModel> model_override;
    int csv_T = 0;  // window parameters for the summary row, 0 when the
    int csv_D = 0;  // schedule kind has none
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& s) {
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s[0])))
        throw std::invalid_argument("invalid unsigned integer: '" + s + "'");
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("invalid unsigned integer: '" + s + "'");
    return v;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + p.string());
    f << content;
    f.flush();
    if (!f.good()) throw std::runtime_error("write failed: " + p.string());
}

// Timestamps are quarantined here so the data artifacts stay byte-stable.
inline void write_meta(const std::filesystem::path& dir, const std::string& command,
                       const nlohmann::ordered_json& extra) {
    nlohmann::ordered_json m;
    m["tool"] = "anodyne";
    m["command"] = command;
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["written_utc"] = buf;
    for (const auto& kv : extra.items()) m[kv.key()] = kv.value();
    write_file(dir / "meta.json", m.dump(2) + "\n");
}

inline nlohmann::json load_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open: " + p.string());
    return nlohmann::json::parse(in);
}

}  // namespace detail

inline std::optional<std::uint64_t> env_seed_override() {
    const char* v = std::getenv("ANODYNE_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return detail::parse_u64(v);
}

// Builds the simulation pieces from one config document.  `base_dir` anchors
// relative schedule paths (normally the config file's directory).  Throws on
// any structural or semantic problem; full validation still happens inside
// run_simulation.
inline RunSetup load_run_setup(const nlohmann::json& config,
                               const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override) {
    if (!config.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (!config.contains("sim")) throw std::invalid_argument("config missing \"sim\" section");
    if (!config.contains("schedule"))
        throw std::invalid_argument("config missing \"schedule\" section");

    RunSetup setup;
    SimConfig& cfg = setup.cfg;
    const nlohmann::json& sim = config.at("sim");
    cfg.n = sim.at("n").get<int>();
    cfg.f = sim.at("f").get<int>();
    cfg.epsilon = sim.at("epsilon").get<double>();
    cfg.seed = sim.value("seed", std::uint64_t{1});
    if (seed_override) cfg.seed = *seed_override;
    std::string alg = sim.at("algorithm").get<std::string>();
    std::optional<Algorithm> parsed = parse_algorithm(alg);
    if (!parsed)
        throw std::invalid_argument("unknown algorithm '" + alg +
                                    "' (expected dac, dbac, eager-dac, eager-dbac)");
    cfg.algorithm = *parsed;
    cfg.inputs = sim.at("inputs").get<std::vector<Value>>();
    cfg.max_rounds = sim.value("max_rounds", 0);
    cfg.allow_insufficient = sim.value("allow_insufficient", false);

    const nlohmann::json& sj = config.at("schedule");
    std::string kind = sj.at("kind").get<std::string>();
    if (kind == "static") {
        DynamicSchedule sched;
        if (sj.contains("path")) {
            sched = schedule_from_json(
                detail::load_json_file(base_dir / sj.at("path").get<std::string>()));
        } else if (sj.contains("schedule")) {
            sched = schedule_from_json(sj.at("schedule"));
        } else {
            throw std::invalid_argument("static schedule needs \"path\" or \"schedule\"");
        }
        if (sched.n != cfg.n)
            throw std::invalid_argument("schedule is for n=" + std::to_string(sched.n) +
                                        " but sim.n=" + std::to_string(cfg.n));
        setup.strategy = static_strategy(std::move(sched));
    } else if (kind == "complete") {
        DynamicSchedule sched;
        sched.n = cfg.n;
        sched.horizon = 1;
        sched.rounds = {complete_edge_set(cfg.n)};
        setup.strategy = static_strategy(std::move(sched));
        setup.csv_T = 1;
        setup.csv_D = cfg.n - 1;
    } else if (kind == "generate") {
        int T = sj.at("T").get<int>();
        int D = sj.at("D").get<int>();
        int horizon = sj.at("horizon").get<int>();
        double extra = sj.value("extra_edge_prob", 0.0);
        std::uint64_t gseed = sj.value("seed", cfg.seed);
        setup.strategy = static_strategy(gen_dyna_degree(cfg.n, T, D, horizon, gseed, extra));
        setup.csv_T = T;
        setup.csv_D = D;
    } else if (kind == "drop-one") {
        setup.strategy = drop_one_strategy(cfg.n);
        setup.csv_T = 1;
        setup.csv_D = cfg.n - 2;
    } else if (kind == "crash-partition") {
        std::vector<std::set<NodeId>> groups;
        for (const auto& g : sj.at("groups")) groups.push_back(g.get<std::set<NodeId>>());
        if (groups.size() != 2)
            throw std::invalid_argument("crash-partition needs exactly two groups");
        setup.strategy =
            crash_partition_strategy(cfg.n, std::move(groups), sj.at("until").get<Round>());
    } else if (kind == "byz-partition") {
        setup.strategy = byz_partition_strategy(cfg.n, cfg.f);
    } else if (kind == "random-dyna-degree") {
        int T = sj.at("T").get<int>();
        int D = sj.at("D").get<int>();
        double extra = sj.value("extra_edge_prob", 0.0);
        std::uint64_t gseed = sj.value("seed", cfg.seed);
        setup.strategy = random_dyna_degree_strategy(cfg.n, T, D, extra, gseed);
        setup.csv_T = T;
        setup.csv_D = D;
    } else {
        throw std::invalid_argument(
            "unknown schedule kind '" + kind +
            "' (expected static, complete, generate, drop-one, crash-partition, "
            "byz-partition, random-dyna-degree)");
    }

    if (config.contains("faults")) setup.plan = fault_plan_from_json(config.at("faults"));

    if (config.contains("analysis")) {
        std::string fm = config.at("analysis").value("fault_model", "auto");
        if (fm == "crash")
            setup.model_override = FaultModel::Crash;
        else if (fm == "byzantine")
            setup.model_override = FaultModel::Byzantine;
        else if (fm != "auto")
            throw std::invalid_argument("unknown fault_model '" + fm +
                                        "' (expected auto, crash, byzantine)");
    }
    return setup;
}

// ---------------------------------------------------------------------------
// One cell: load, simulate, analyze; errors captured, never thrown
// ---------------------------------------------------------------------------

inline int phases_used(const Trace& tr) {
    if (tr.rounds.empty()) return 0;
    int mx = 0;
    const std::vector<NodeSnapshot>& st = tr.rounds.back().states;
    for (std::size_t i = 1; i < st.size(); ++i)
        if (!st[i].byzantine) mx = std::max(mx, st[i].p);
    return mx;
}

struct CellOutcome {
    CellSummary summary;
    std::optional<Trace> trace;
    std::optional<Verdict> verdict;
};

inline CellOutcome run_cell(const nlohmann::json& config,
                            const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed_override) {
    CellOutcome out;
    CellSummary& c = out.summary;
    // Best-effort identity columns so even a failing cell yields a usable row.
    if (config.is_object() && config.contains("sim") && config["sim"].is_object()) {
        const nlohmann::json& sim = config["sim"];
        c.seed = sim.value("seed", std::uint64_t{0});
        c.n = sim.value("n", 0);
        c.f = sim.value("f", 0);
        c.algorithm = sim.value("algorithm", std::string("?"));
    }
    if (seed_override) c.seed = *seed_override;
    try {
        RunSetup setup = load_run_setup(config, base_dir, seed_override);
        c.seed = setup.cfg.seed;
        c.n = setup.cfg.n;
        c.f = setup.cfg.f;
        c.T = setup.csv_T;
        c.D = setup.csv_D;
        c.algorithm = algorithm_name(setup.cfg.algorithm);
        Trace tr = run_simulation(setup.cfg, setup.strategy, setup.plan);
        Verdict v = check_consensus(tr, setup.model_override);
        c.ok = true;
        c.all_pass = v.all_pass();
        c.phases = phases_used(tr);
        c.rounds = tr.rounds_run();
        c.final_range = v.achieved_range;
        c.validity = v.validity;
        c.agreement = v.eps_agreement;
        c.rate_max = 0.0;
        for (double r : v.rate_per_phase) c.rate_max = std::max(c.rate_max, r);
        out.trace = std::move(tr);
        out.verdict = std::move(v);
    } catch (const std::exception& e) {
        c.ok = false;
        c.error = e.what();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct RunOptions {
    std::string config_path;
    std::string out_dir = ".";
};

// Exit 0: all verdicts pass.  Exit 2: verdict failure.  Exit 1: config/IO.
inline int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    nlohmann::json config;
    try {
        config = detail::load_json_file(o.config_path);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    std::optional<std::uint64_t> seed_env;
    try {
        seed_env = env_seed_override();
    } catch (const std::exception& e) {
        err << "anodyne: ANODYNE_SEED: " << e.what() << "\n";
        return 1;
    }

    CellOutcome res = run_cell(config, fs::path(o.config_path).parent_path(), seed_env);
    if (!res.summary.ok) {
        err << "anodyne: " << res.summary.error << "\n";
        return 1;
    }

    try {
        fs::path dir(o.out_dir);
        fs::create_directories(dir);
        detail::write_file(dir / "trace.jsonl", trace_to_jsonl(*res.trace));
        detail::write_file(dir / "verdict.json", verdict_to_json(*res.verdict).dump(2) + "\n");
        bool fresh = !fs::exists(dir / "summary.csv");
        std::ofstream csv(dir / "summary.csv", std::ios::binary | std::ios::app);
        if (!csv) throw std::runtime_error("cannot open summary.csv");
        if (fresh) csv << kCsvHeader << "\n";
        csv << csv_row(res.summary) << "\n";
        if (!csv.good()) throw std::runtime_error("write failed: summary.csv");
        csv.close();
        nlohmann::ordered_json extra;
        extra["config"] = o.config_path;
        detail::write_meta(dir, "run", extra);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    const CellSummary& c = res.summary;
    out << (c.all_pass ? "pass" : "fail") << " algorithm=" << c.algorithm
        << " seed=" << c.seed << " rounds=" << c.rounds << " phases=" << c.phases
        << " final_range=" << format_g17(c.final_range) << "\n";
    return c.all_pass ? 0 : 2;
}

struct CheckScheduleOptions {
    std::string schedule_path;
    int T = 1;
    int D = 1;
    WindowMode mode = WindowMode::Sliding;
    std::set<NodeId> exclude;
};

// Exit 0: satisfied.  Exit 3: unsatisfied (witness printed).  Exit 1: parse.
inline int cmd_check_schedule(const CheckScheduleOptions& o, std::ostream& out,
                              std::ostream& err) {
    DynamicSchedule sched;
    try {
        sched = schedule_from_json(detail::load_json_file(o.schedule_path));
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    DynaCheck res;
    try {
        res = check_dyna_degree(sched, o.T, o.D, o.exclude, o.mode);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    nlohmann::ordered_json j;
    j["satisfied"] = res.satisfied;
    j["T"] = o.T;
    j["D"] = o.D;
    j["window"] = o.mode == WindowMode::Sliding ? "sliding" : "aligned";
    if (res.witness) {
        nlohmann::ordered_json w;
        w["t"] = res.witness->t;
        w["node"] = res.witness->node;
        w["count"] = res.witness->count;
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    out << j.dump() << "\n";
    return res.satisfied ? 0 : 3;
}

struct SweepOptions {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = ".";
    int workers = 1;
};

// Cells are seeds x overrides (from the config's optional sweep.overrides),
// ordered seed-major.  Per-cell errors land in the CSV, never abort the
// sweep, and the worker count cannot change any output byte.
inline int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    nlohmann::json config;
    try {
        config = detail::load_json_file(o.config_path);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    std::vector<nlohmann::json> overrides;
    if (config.is_object() && config.contains("sweep")) {
        const nlohmann::json& sw = config["sweep"];
        if (sw.contains("overrides"))
            for (const auto& ov : sw.at("overrides")) overrides.push_back(ov);
    }
    if (overrides.empty()) overrides.push_back(nlohmann::json::object());

    if (o.seeds.empty()) {
        err << "anodyne: empty seed list\n";
        return 1;
    }
    const std::size_t cells = o.seeds.size() * overrides.size();
    const fs::path base_dir = fs::path(o.config_path).parent_path();
    std::vector<CellSummary> rows = run_indexed_parallel<CellSummary>(
        cells, o.workers, [&](std::size_t idx) {
            nlohmann::json cell_cfg = config;
            cell_cfg.merge_patch(overrides[idx % overrides.size()]);
            return run_cell(cell_cfg, base_dir, o.seeds[idx / overrides.size()]).summary;
        });

    std::size_t passed = 0, errors = 0;
    std::string csv = std::string(kCsvHeader) + "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv += csv_row(rows[i]) + "\n";
        if (!rows[i].ok) {
            ++errors;
            err << "anodyne: cell " << i << " (seed " << rows[i].seed
                << "): " << rows[i].error << "\n";
        } else if (rows[i].all_pass) {
            ++passed;
        }
    }

    try {
        fs::path dir(o.out_dir);
        fs::create_directories(dir);
        detail::write_file(dir / "summary.csv", csv);
        nlohmann::ordered_json extra;
        extra["config"] = o.config_path;
        extra["cells"] = cells;
        extra["workers"] = o.workers;
        detail::write_meta(dir, "sweep", extra);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    out << "sweep: " << cells << " cells, " << passed << " pass, "
        << (cells - passed - errors) << " fail, " << errors << " error\n";
    return (passed == cells) ? 0 : 2;
}

struct DemoOptions {
    std::string name;
    std::optional<int> n;
    std::optional<int> f;
    std::optional<double> eps;
    std::string out_dir = ".";
};

// Exit 0: all assertions hold.  Exit 2: an assertion failed.  Exit 1: unknown
// demo or invalid parameters.
inline int cmd_demo(const DemoOptions& o, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    DemoReport rep;
    try {
        if (o.name == "crash-degree") {
            rep = demo_crash_degree(o.n.value_or(6), o.eps.value_or(0.25));
        } else if (o.name == "crash-count") {
            rep = demo_crash_count(o.n.value_or(6), o.f.value_or(3), o.eps.value_or(0.25));
        } else if (o.name == "byz-partition") {
            rep = demo_byz_partition(o.n.value_or(10), o.f.value_or(2), o.eps.value_or(0.5));
        } else if (o.name == "exact-drop-one") {
            rep = demo_exact_drop_one(o.n.value_or(4));
        } else {
            err << "anodyne: unknown demo '" << o.name
                << "'; available: crash-degree, crash-count, byz-partition, "
                   "exact-drop-one\n";
            return 1;
        }
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    try {
        fs::path dir(o.out_dir);
        fs::create_directories(dir);
        detail::write_file(dir / "report.json", demo_report_json(rep).dump(2) + "\n");
        detail::write_file(dir / "report.txt", demo_report_text(rep));
        nlohmann::ordered_json extra;
        extra["demo"] = o.name;
        detail::write_meta(dir, "demo", extra);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }

    out << demo_report_text(rep);
    return rep.all_pass() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

// "A..B" (inclusive), "a,b,c", or a single value.
inline std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::size_t dots = spec.find("..");
    if (dots != std::string::npos) {
        std::uint64_t lo = detail::parse_u64(spec.substr(0, dots));
        std::uint64_t hi = detail::parse_u64(spec.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("seed range must be ascending: " + spec);
        if (hi - lo >= 1000000) throw std::invalid_argument("seed range too large: " + spec);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = spec.find(',', start);
        seeds.push_back(detail::parse_u64(spec.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return seeds;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"round-based consensus simulator and analysis harness"};
    app.require_subcommand(1);

    RunOptions run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "execute one configured simulation");
    run_cmd->add_option("config", run_opts.config_path, "JSON config file")->required();
    run_cmd->add_option("--out", run_opts.out_dir, "output directory (default: .)");

    CheckScheduleOptions chk;
    std::string window = "sliding";
    std::vector<int> exclude_ids;
    CLI::App* chk_cmd =
        app.add_subcommand("check-schedule", "verify accumulated in-degree over windows");
    chk_cmd->add_option("schedule", chk.schedule_path, "schedule JSON file")->required();
    chk_cmd->add_option("T", chk.T, "window length in rounds")
        ->required()
        ->check(CLI::PositiveNumber);
    chk_cmd->add_option("D", chk.D, "required distinct in-neighbors per window")
        ->required()
        ->check(CLI::PositiveNumber);
    chk_cmd->add_option("--window", window, "window placement (default: sliding)")
        ->check(CLI::IsMember({"sliding", "aligned"}));
    chk_cmd->add_option("--exclude", exclude_ids, "node ids exempt from the requirement");

    SweepOptions sweep_opts;
    std::string seed_spec;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a seed sweep, emit summary.csv");
    sweep_cmd->add_option("config", sweep_opts.config_path, "JSON config file")->required();
    sweep_cmd->add_option("--seeds", seed_spec, "seed range A..B or comma list")->required();
    sweep_cmd->add_option("--out", sweep_opts.out_dir, "output directory (default: .)");
    sweep_cmd->add_option("--workers", sweep_opts.workers, "worker threads (default: 1)")
        ->check(CLI::PositiveNumber);

    DemoOptions demo_opts;
    CLI::App* demo_cmd =
        app.add_subcommand("demo", "run a packaged adversarial demonstration");
    demo_cmd->add_option("name", demo_opts.name, "demo name")->required();
    demo_cmd->add_option("--n", demo_opts.n, "node count");
    demo_cmd->add_option("--f", demo_opts.f, "fault bound");
    demo_cmd->add_option("--eps", demo_opts.eps, "agreement target");
    demo_cmd->add_option("--out", demo_opts.out_dir, "output directory (default: .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return cmd_run(run_opts, out, err);
        if (*chk_cmd) {
            chk.mode = window == "aligned" ? WindowMode::Aligned : WindowMode::Sliding;
            chk.exclude = std::set<NodeId>(exclude_ids.begin(), exclude_ids.end());
            return cmd_check_schedule(chk, out, err);
        }
        if (*sweep_cmd) {
            sweep_opts.seeds = parse_seed_spec(seed_spec);
            return cmd_sweep(sweep_opts, out, err);
        }
        if (*demo_cmd) return cmd_demo(demo_opts, out, err);
    } catch (const std::exception& e) {
        err << "anodyne: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

inline int run_cli(int argc, char** argv) {
    return run_cli(argc, argv, std::cout, std::cerr);
}

}  // namespace anodyne
