// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fhedse/ntt.hpp"
#include "fhedse/perfmodel.hpp"
#include "fhedse/scheduler.hpp"
#include "fhedse/selftest.hpp"
#include "fhedse/transpose.hpp"

using namespace fhedse;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

bool check_suite(const std::vector<CheckResult>& results, std::string& detail) {
    std::uint64_t cases = 0, failures = 0;
    for (const auto& r : results) {
        cases += r.cases;
        failures += r.failures;
    }
    std::ostringstream ss;
    ss << cases << " cases, " << failures << " failures";
    detail += ss.str();
    return failures == 0;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    criteria.push_back({"1 functional oracle suite (naive/four-step/three-step/convolution)",
                        [](std::string& detail) {
                            auto t0 = Clock::now();
                            NttCheckOptions opt;  // sizes {4,8,16,64,256}, 50 vectors
                            bool ok = check_suite(run_ntt_checks(opt), detail);
                            double secs = seconds_since(t0);
                            std::ostringstream ss;
                            ss << ", " << secs << " s";
                            detail += ss.str();
                            return ok && secs < 30.0;
                        }});

    criteria.push_back({"2 bconv output = x + e*Q with e below source basis size",
                        [](std::string& detail) {
                            RnsCheckOptions opt;
                            opt.random_cases = 10000;
                            return check_suite(run_rns_checks(opt), detail);
                        }});

    criteria.push_back({"3 formula fidelity (exact integer match)", [](std::string& detail) {
                            GroupArchSpec g;  // N=2^16, l=16, R=256, G=8
                            auto gb = group_ntt_cost(g);
                            auto gc = group_bconv_cost(g);
                            GridArchSpec d;  // R=32, C=64
                            auto db = grid_ntt_cost(d);
                            const std::uint64_t t_stage = db.phase("d1") / 5;
                            std::ostringstream ss;
                            ss << "d1=" << gb.phase("d1") << " d2=" << gb.phase("d2")
                               << " bconv=" << gc.cycles << " t_stage=" << t_stage
                               << " g_d1=" << db.phase("d1") << " g_d3=" << db.phase("d3");
                            detail += ss.str();
                            return gb.phase("d1") == 688 && gb.phase("d2") == 688 &&
                                   gc.cycles == 530 && t_stage == 278 &&
                                   db.phase("d1") == 1390 && db.phase("d3") == 1668;
                        }});

    criteria.push_back({"4 grid/group ratio bands over the l sweep", [](std::string& detail) {
                            auto t0 = Clock::now();
                            double cycles_ratio_l16 = 0, per_mul_ratio_l1 = 0;
                            for (std::uint64_t l = 1; l <= 16; ++l) {
                                GroupArchSpec g;
                                GridArchSpec d;
                                g.current_level = l;
                                d.current_level = l;
                                auto g_ks = keyswitch_pipeline_cost(g);
                                auto d_ks = keyswitch_pipeline_cost(d);
                                auto g_ntt = group_ntt_cost(g);
                                auto d_ntt = grid_ntt_cost(d);
                                if (l == 16) {
                                    cycles_ratio_l16 = double(d_ks.total_cycles) /
                                                       double(g_ks.total_cycles);
                                }
                                if (l == 1) {
                                    per_mul_ratio_l1 = d_ntt.throughput_per_mul() /
                                                       g_ntt.throughput_per_mul();
                                }
                            }
                            double secs = seconds_since(t0);
                            std::ostringstream ss;
                            ss << "ks cycles grid/group @l=16: " << cycles_ratio_l16
                               << " (band [2.5,3.5]); ntt thr-per-mul grid/group @l=1: "
                               << per_mul_ratio_l1 << " (band [2.0,3.2]); sweep " << secs
                               << " s";
                            detail += ss.str();
                            return cycles_ratio_l16 >= 2.5 && cycles_ratio_l16 <= 3.5 &&
                                   per_mul_ratio_l1 >= 2.0 && per_mul_ratio_l1 <= 3.2 &&
                                   secs < 5.0;
                        }});

    criteria.push_back({"5 resource identities over 100 random valid specs",
                        [](std::string& detail) {
                            std::mt19937_64 rng(2024);
                            std::uint64_t checked = 0;
                            bool ok = true;
                            for (int i = 0; i < 100; ++i) {
                                GroupArchSpec g;
                                g.n = std::uint64_t(1) << (10 + rng() % 7);
                                int lr = 0;
                                while ((std::uint64_t(1) << (2 * lr)) < g.n) ++lr;
                                g.r = std::uint64_t(1) << (lr + rng() % 2);
                                g.groups = std::uint64_t(1) << (rng() % 4);
                                while (g.r * g.groups > g.n && g.groups > 1) g.groups >>= 1;
                                g.levels = 1 + rng() % 30;
                                g.current_level = rng() % (g.levels + 1);
                                g.alpha = 1 + rng() % 8;
                                ok = ok && resource_totals(g) ==
                                               g.groups * g.r * (2 * g.alpha +
                                                                 std::uint64_t(
                                                                     std::countr_zero(g.r))) /
                                                   2;
                                ok = ok && resource_totals(g) ==
                                               group_ntt_cost(g).mul_count +
                                                   group_bconv_cost(g).mul_count;

                                GridArchSpec d;
                                d.n = std::uint64_t(1) << (12 + rng() % 5);
                                d.rows = std::uint64_t(1) << (2 + rng() % 4);
                                d.cols = std::uint64_t(1) << (2 + rng() % 4);
                                while (d.n / (d.rows * d.cols) < 2) d.cols >>= 1;
                                d.l_sub = std::uint64_t(1) << (rng() % 4);
                                while ((d.n / (d.rows * d.cols)) % d.l_sub != 0) d.l_sub >>= 1;
                                d.levels = 1 + rng() % 30;
                                d.current_level = rng() % (d.levels + 1);
                                ok = ok && resource_totals(d) ==
                                               d.rows * d.cols * (1 + d.l_sub);
                                ok = ok && resource_totals(d) ==
                                               grid_ntt_cost(d).mul_count +
                                                   grid_bconv_cost(d).mul_count;
                                ++checked;
                            }
                            detail += std::to_string(checked) + " spec pairs";
                            return ok;
                        }});

    criteria.push_back({"6 transpose network: L1 bijection, static routing, distribution",
                        [](std::string& detail) {
                            return check_suite(run_transpose_checks({}), detail);
                        }});

    criteria.push_back({"7 scheduler: 8x parallel speedup and exact preemption trace",
                        [](std::string& detail) {
                            FlashArchSpec spec;
                            std::vector<WorkloadSpec> jobs;
                            for (int i = 0; i < 8; ++i) {
                                WorkloadSpec wl;
                                wl.name = "s" + std::to_string(i);
                                wl.n = 1u << 13;
                                wl.levels = 6;
                                wl.current_level = 6;
                                wl.ops.ntt = 1;
                                jobs.push_back(wl);
                            }
                            SpeedupReport r = compare_sequential_baseline(jobs, spec);
                            bool speed_ok = r.makespan_speedup > 7.6 &&
                                            r.makespan_speedup < 8.4 &&
                                            r.avg_completion_speedup > 7.6 &&
                                            r.avg_completion_speedup < 8.4;

                            WorkloadSpec deep;
                            deep.name = "deep";
                            deep.n = 1u << 16;
                            deep.levels = 16;
                            deep.current_level = 16;
                            deep.ops.keyswitch = 2;
                            deep.working_set_bytes = 8ull << 20;
                            deep.priority = 1;
                            WorkloadSpec shallow = jobs[0];
                            shallow.name = "shallow";
                            shallow.arrival = 1000;
                            shallow.priority = 5;
                            ScheduleTrace t = schedule({deep, shallow}, spec,
                                                       SchedulePolicy::priority_preemptive);
                            const std::vector<TraceEvent> expected = {
                                {0, EventKind::start, "deep", "boot[*]"},
                                {2868, EventKind::preempt, "deep", "boot[*]"},
                                {10498, EventKind::spill, "deep", "boot[*]"},
                                {10498, EventKind::start, "shallow", "aff0"},
                                {11025, EventKind::finish, "shallow", "aff0"},
                                {11025, EventKind::resume, "deep", "boot[*]"},
                                {18655, EventKind::load, "deep", "boot[*]"},
                                {21523, EventKind::finish, "deep", "boot[*]"},
                            };
                            bool trace_ok = t.events == expected;
                            std::ostringstream ss;
                            ss << "makespan x" << r.makespan_speedup << ", avg-completion x"
                               << r.avg_completion_speedup << ", trace "
                               << (trace_ok ? "exact" : "MISMATCH");
                            detail += ss.str();
                            return speed_ok && trace_ok;
                        }});

    criteria.push_back({"8 decompose_pipeline(8,7) lanes equal two independent 2^7 NTTs",
                        [](std::string& detail) {
                            Modulus m(7681);
                            NttPlan lane_plan(128, m);
                            PipelineWindow w = decompose_pipeline(8, 7);
                            if (w.lanes != 2) return false;
                            std::mt19937_64 rng(7);
                            std::uniform_int_distribution<std::uint32_t> dist(0, 7680);
                            std::vector<std::uint32_t> data(256);
                            for (auto& x : data) x = dist(rng);
                            auto got = window_ntt_forward(w, data, lane_plan);
                            std::uint64_t mismatches = 0;
                            for (std::size_t lane = 0; lane < 2; ++lane) {
                                std::vector<std::uint32_t> in(128);
                                for (std::size_t i = 0; i < 128; ++i) {
                                    in[i] = data[window_position(w, lane, i)];
                                }
                                auto expect = ntt_forward(in, lane_plan);
                                for (std::size_t i = 0; i < 128; ++i) {
                                    if (got[window_position(w, lane, i)] != expect[i]) {
                                        ++mismatches;
                                    }
                                }
                            }
                            detail += "2 lanes x 128 points, " +
                                      std::to_string(mismatches) + " mismatches";
                            return mismatches == 0;
                        }});

    int failed = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail += std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %s%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                    detail.empty() ? "" : " — ", detail.c_str());
        if (!ok) ++failed;
    }
    if (failed == 0) {
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    } else {
        std::printf("acceptance: %d criteria FAILED\n", failed);
    }
    return failed == 0 ? 0 : 1;
}
