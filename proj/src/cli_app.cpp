// SPDX-License-Identifier: Apache-2.0
#include "fhedse/cli_app.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "fhedse/config.hpp"
#include "fhedse/flashsim.hpp"
#include "fhedse/perfmodel.hpp"
#include "fhedse/report.hpp"
#include "fhedse/scheduler.hpp"
#include "fhedse/selftest.hpp"

namespace fhedse {

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string format = "csv";
    std::string out_path;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& c) {
    cmd->add_option("--config", c.config_path, "flat key=value config file");
    cmd->add_option("--set", c.overrides, "override, e.g. --set group.r=256")
        ->take_all();
    cmd->add_option("--format", c.format, "report format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("-o,--out", c.out_path, "report path (default: stdout)");
    cmd->add_option("--seed", c.seed, "seed for randomized suites");
}

ConfigMap build_config(const CommonOptions& c) {
    ConfigMap cfg;
    if (!c.config_path.empty()) cfg = ConfigMap::load_file(c.config_path);
    for (const std::string& line : c.overrides) cfg.set_line(line);
    return cfg;
}

GroupArchSpec group_from_config(const ConfigMap& cfg) {
    GroupArchSpec s;
    s.n = cfg.get_u64("group.n", s.n);
    s.levels = cfg.get_u64("group.levels", s.levels);
    s.current_level = cfg.get_u64("group.level", s.levels);
    s.groups = cfg.get_u64("group.groups", s.groups);
    s.r = cfg.get_u64("group.r", s.r);
    s.alpha = cfg.get_u64("group.alpha", s.alpha);
    s.use_current_level = cfg.get_bool("group.use_current_level", s.use_current_level);
    s.latency = latency_from_config(cfg);
    return s;
}

GridArchSpec grid_from_config(const ConfigMap& cfg) {
    GridArchSpec s;
    s.n = cfg.get_u64("grid.n", s.n);
    s.levels = cfg.get_u64("grid.levels", s.levels);
    s.current_level = cfg.get_u64("grid.level", s.levels);
    s.rows = cfg.get_u64("grid.rows", s.rows);
    s.cols = cfg.get_u64("grid.cols", s.cols);
    s.l_sub = cfg.get_u64("grid.l_sub", s.l_sub);
    s.use_current_level = cfg.get_bool("grid.use_current_level", s.use_current_level);
    s.latency = latency_from_config(cfg);
    return s;
}

class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw IoError("cannot open output file: " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::vector<std::pair<std::string, std::string>> meta_for(const std::string& command,
                                                          const CommonOptions& c) {
    return {{"tool", "fhedse"}, {"command", command}, {"seed", std::to_string(c.seed)}};
}

void add_breakdown_fields(ReportRow& row, const CycleBreakdown& b,
                          const std::vector<std::string>& phase_union) {
    for (const std::string& name : phase_union) {
        row.add(name, b.has_phase(name) ? b.phase(name) : std::uint64_t(0));
    }
    row.add("total_cycles", b.total_cycles);
    row.add("mul_count", b.mul_count);
    row.add("throughput_per_sec", b.throughput_per_sec().value());
    row.add("throughput_per_mul", b.throughput_per_mul());
}

std::vector<std::string> phase_union_of(const std::vector<const CycleBreakdown*>& bs) {
    std::vector<std::string> names;
    for (const CycleBreakdown* b : bs) {
        for (const auto& [n, v] : b->phases) {
            if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
        }
    }
    return names;
}

int cmd_model(const CommonOptions& c, const std::string& arch,
              const std::string& workload_path, std::ostream& out) {
    ConfigMap cfg = build_config(c);
    std::vector<ReportRow> rows;
    if (arch == "group") {
        GroupArchSpec spec = group_from_config(cfg);
        CycleBreakdown ntt = group_ntt_cost(spec);
        CycleBreakdown ks = keyswitch_pipeline_cost(spec);
        CostPair bc = group_bconv_cost(spec);
        auto phases = phase_union_of({&ntt, &ks});
        for (auto [op, b] : {std::pair<const char*, const CycleBreakdown*>{"ntt", &ntt},
                             {"keyswitch", &ks}}) {
            ReportRow row;
            row.add("arch", std::string(arch));
            row.add("op", std::string(op));
            add_breakdown_fields(row, *b, phases);
            rows.push_back(std::move(row));
        }
        ReportRow row;
        row.add("arch", std::string(arch));
        row.add("op", std::string("bconv"));
        row.add("total_cycles", bc.cycles);
        row.add("mul_count", bc.mul_count);
        rows.push_back(std::move(row));
    } else if (arch == "grid") {
        GridArchSpec spec = grid_from_config(cfg);
        CycleBreakdown ntt = grid_ntt_cost(spec);
        CycleBreakdown ks = keyswitch_pipeline_cost(spec);
        CostPair bc = grid_bconv_cost(spec);
        auto phases = phase_union_of({&ntt, &ks});
        for (auto [op, b] : {std::pair<const char*, const CycleBreakdown*>{"ntt", &ntt},
                             {"keyswitch", &ks}}) {
            ReportRow row;
            row.add("arch", std::string(arch));
            row.add("op", std::string(op));
            add_breakdown_fields(row, *b, phases);
            rows.push_back(std::move(row));
        }
        ReportRow row;
        row.add("arch", std::string(arch));
        row.add("op", std::string("bconv_standalone"));
        row.add("total_cycles", bc.cycles);
        row.add("mul_count", bc.mul_count);
        rows.push_back(std::move(row));
    } else {  // flash
        if (workload_path.empty()) {
            throw InvariantViolation("model --arch flash requires --workload FILE");
        }
        ConfigMap wcfg = ConfigMap::load_file(workload_path);
        for (const std::string& line : c.overrides) wcfg.set_line(line);
        WorkloadSpec wl = workload_from_config(wcfg);
        FlashArchSpec spec = flash_spec_from_config(cfg);
        WorkloadClass cls = classify(wl);
        CycleBreakdown b = cls == WorkloadClass::shallow ? shallow_cost(wl, spec)
                                                         : deep_cost(wl, spec);
        ReportRow row;
        row.add("arch", std::string("flash"));
        row.add("workload", wl.name);
        row.add("class", std::string(cls == WorkloadClass::shallow ? "shallow" : "deep"));
        add_breakdown_fields(row, b, phase_union_of({&b}));
        rows.push_back(std::move(row));
    }
    write_report(out, parse_report_format(c.format), rows, meta_for("model", c));
    return 0;
}

int cmd_sweep(const CommonOptions& c, const std::string& param, std::ostream& out) {
    ConfigMap cfg = build_config(c);
    const std::size_t eq = param.find('=');
    if (eq == std::string::npos) throw InvariantViolation("--param must look like l=1..16");
    const std::string name = param.substr(0, eq);
    if (name != "l") {
        throw InvariantViolation("only the current level l can be swept, got: " + name);
    }
    std::vector<std::uint64_t> points = parse_range(param.substr(eq + 1));

    std::vector<ReportRow> rows;
    for (std::uint64_t l : points) {
        ReportRow row;
        row.add("l", l);
        try {
            GroupArchSpec g = group_from_config(cfg);
            GridArchSpec d = grid_from_config(cfg);
            g.current_level = l;
            d.current_level = l;
            CycleBreakdown g_ntt = group_ntt_cost(g);
            CycleBreakdown d_ntt = grid_ntt_cost(d);
            CycleBreakdown g_ks = keyswitch_pipeline_cost(g);
            CycleBreakdown d_ks = keyswitch_pipeline_cost(d);
            row.add("group_ntt_cycles", g_ntt.total_cycles);
            row.add("grid_ntt_cycles", d_ntt.total_cycles);
            row.add("group_ntt_muls", g_ntt.mul_count);
            row.add("grid_ntt_muls", d_ntt.mul_count);
            row.add("group_ks_cycles", g_ks.total_cycles);
            row.add("grid_ks_cycles", d_ks.total_cycles);
            row.add("group_total_muls", g_ks.mul_count);
            row.add("grid_total_muls", d_ks.mul_count);
            row.add("ks_cycles_ratio_grid_over_group",
                    double(d_ks.total_cycles) / double(g_ks.total_cycles));
            row.add("ntt_thr_per_mul_ratio_grid_over_group",
                    d_ntt.throughput_per_mul() / g_ntt.throughput_per_mul());
            row.add("ks_thr_per_mul_ratio_grid_over_group",
                    d_ks.throughput_per_mul() / g_ks.throughput_per_mul());
            row.add("error", std::string());
        } catch (const Error& e) {
            row.add("error", e.code());
        }
        rows.push_back(std::move(row));
    }
    write_report(out, parse_report_format(c.format), rows, meta_for("sweep", c));
    return 0;
}

int emit_checks(const std::vector<CheckResult>& checks, const CommonOptions& c,
                const std::string& command, std::ostream& console, std::ostream& report_out,
                bool report_requested) {
    std::uint64_t failed = 0;
    for (const CheckResult& r : checks) {
        console << (r.passed() ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.cases
                << " cases";
        if (r.failures != 0) console << ", " << r.failures << " failures";
        if (!r.detail.empty()) console << "; " << r.detail;
        console << ")\n";
        if (!r.passed()) ++failed;
    }
    console << (failed == 0 ? "all checks passed\n"
                            : std::to_string(failed) + " check(s) failed\n");
    if (report_requested) {
        std::vector<ReportRow> rows;
        for (const CheckResult& r : checks) {
            ReportRow row;
            row.add("check", r.name);
            row.add("cases", r.cases);
            row.add("failures", r.failures);
            row.add("passed", std::string(r.passed() ? "true" : "false"));
            rows.push_back(std::move(row));
        }
        write_report(report_out, parse_report_format(c.format), rows, meta_for(command, c));
    }
    return failed == 0 ? 0 : 1;
}

int cmd_schedule(const CommonOptions& c, const std::string& scenario_path,
                 const std::string& policy_name, const std::string& trace_path,
                 std::ostream& out) {
    ConfigMap cfg = ConfigMap::load_file(scenario_path);
    for (const std::string& line : c.overrides) cfg.set_line(line);
    FlashArchSpec spec = flash_spec_from_config(cfg);
    std::vector<WorkloadSpec> jobs = jobs_from_config(cfg);
    SchedulePolicy policy;
    if (policy_name == "fifo") {
        policy = SchedulePolicy::fifo;
    } else if (policy_name == "priority" || policy_name == "priority-preemptive") {
        policy = SchedulePolicy::priority_preemptive;
    } else {
        throw InvariantViolation("unknown policy: " + policy_name);
    }

    ScheduleTrace trace = schedule(jobs, spec, policy);
    SpeedupReport speedup = compare_sequential_baseline(jobs, spec, policy);

    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) throw IoError("cannot open trace file: " + trace_path);
        for (const TraceEvent& e : trace.events) {
            tf << "{\"time\":" << e.time << ",\"event\":\"" << event_kind_name(e.kind)
               << "\",\"job\":\"" << e.job << "\",\"resources\":\"" << e.resources << "\"}\n";
        }
    }

    std::vector<ReportRow> rows;
    for (const JobOutcome& j : trace.jobs) {
        ReportRow row;
        row.add("job", j.job);
        row.add("arrival", j.arrival);
        row.add("completion", j.completion);
        row.add("preemptions", j.preemptions);
        rows.push_back(std::move(row));
    }
    auto meta = meta_for("schedule", c);
    meta.emplace_back("policy", policy_name);
    meta.emplace_back("makespan", std::to_string(trace.makespan));
    meta.emplace_back("avg_completion", format_report_value(trace.avg_completion));
    meta.emplace_back("makespan_speedup_vs_sequential",
                      format_report_value(speedup.makespan_speedup));
    meta.emplace_back("avg_completion_speedup_vs_sequential",
                      format_report_value(speedup.avg_completion_speedup));
    write_report(out, parse_report_format(c.format), rows, meta);
    return 0;
}

std::string json_escape_min(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"FHE accelerator design-space exploration toolkit"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* model = app.add_subcommand("model", "evaluate one architecture configuration");
    std::string arch = "group";
    std::string workload_path;
    model->add_option("--arch", arch, "group | grid | flash")
        ->check(CLI::IsMember({"group", "grid", "flash"}));
    model->add_option("--workload", workload_path, "workload file (flash only)");
    add_common(model, common);

    auto* sweep = app.add_subcommand("sweep", "sweep the current level over both architectures");
    std::string param = "l=1..16";
    sweep->add_option("--param", param, "sweep range, e.g. l=1..16 or l=1,4,16");
    add_common(sweep, common);

    auto* ntt_check = app.add_subcommand("ntt-check", "run the NTT/RNS/kernel oracle suites");
    std::string sizes = "4,8,16,64,256";
    std::uint64_t vectors = 50;
    bool inject_fault = false;
    ntt_check->add_option("--sizes", sizes, "transform sizes, comma separated");
    ntt_check->add_option("--vectors", vectors, "random vectors per size");
    ntt_check->add_flag("--inject-fault", inject_fault,
                        "corrupt one transform result (harness self-test)");
    add_common(ntt_check, common);

    auto* tr_check = app.add_subcommand("transpose-check", "run the transpose network suites");
    std::string tile_sizes = "1,2,4,8,16,32";
    tr_check->add_option("--tile-sizes", tile_sizes, "tile sizes, comma separated");
    add_common(tr_check, common);

    auto* sched = app.add_subcommand("schedule", "run a multi-job scenario");
    std::string scenario_path, policy_name = "fifo", trace_path;
    sched->add_option("--scenario", scenario_path, "scenario file")->required();
    sched->add_option("--policy", policy_name, "fifo | priority");
    sched->add_option("--trace", trace_path, "JSON-lines event trace path");
    add_common(sched, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "{\"error\":\"UsageError\",\"message\":\"" << json_escape_min(e.what())
            << "\"}\n";
        return 1;
    }

    try {
        OutputTarget target(common.out_path, out);
        if (model->parsed()) return cmd_model(common, arch, workload_path, target.get());
        if (sweep->parsed()) return cmd_sweep(common, param, target.get());
        if (ntt_check->parsed()) {
            NttCheckOptions opt;
            opt.sizes.clear();
            for (std::uint64_t s : parse_range(sizes)) opt.sizes.push_back(std::size_t(s));
            opt.vectors = vectors;
            opt.seed = common.seed;
            opt.inject_fault = inject_fault;
            auto checks = run_ntt_checks(opt);
            auto rns = run_rns_checks({common.seed, 2000});
            checks.insert(checks.end(), rns.begin(), rns.end());
            auto kern = run_kernel_checks(common.seed);
            checks.insert(checks.end(), kern.begin(), kern.end());
            return emit_checks(checks, common, "ntt-check", out, target.get(),
                               !common.out_path.empty());
        }
        if (tr_check->parsed()) {
            TransposeCheckOptions opt;
            opt.tile_sizes.clear();
            for (std::uint64_t s : parse_range(tile_sizes)) {
                opt.tile_sizes.push_back(std::size_t(s));
            }
            auto checks = run_transpose_checks(opt);
            return emit_checks(checks, common, "transpose-check", out, target.get(),
                               !common.out_path.empty());
        }
        if (sched->parsed()) {
            return cmd_schedule(common, scenario_path, policy_name, trace_path, target.get());
        }
        err << "{\"error\":\"UsageError\",\"message\":\"no command given\"}\n";
        return 1;
    } catch (const IoError& e) {
        err << "{\"error\":\"" << e.code() << "\",\"message\":\"" << json_escape_min(e.what())
            << "\"}\n";
        return 2;
    } catch (const Error& e) {
        err << "{\"error\":\"" << e.code() << "\",\"message\":\"" << json_escape_min(e.what())
            << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        err << "{\"error\":\"InternalError\",\"message\":\"" << json_escape_min(e.what())
            << "\"}\n";
        return 1;
    }
}

}  // namespace fhedse
