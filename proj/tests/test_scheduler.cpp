// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "fhedse/scheduler.hpp"

using namespace fhedse;

namespace {

WorkloadSpec shallow_job(const std::string& name, std::uint64_t arrival = 0,
                         std::int64_t priority = 0) {
    WorkloadSpec wl;
    wl.name = name;
    wl.n = 1u << 13;
    wl.levels = 6;
    wl.current_level = 6;
    wl.ops.ntt = 1;
    wl.arrival = arrival;
    wl.priority = priority;
    return wl;
}

WorkloadSpec deep_job(const std::string& name, std::uint64_t ks_ops, std::uint64_t ws,
                      std::int64_t priority = 0) {
    WorkloadSpec wl;
    wl.name = name;
    wl.n = 1u << 16;
    wl.levels = 16;
    wl.current_level = 16;
    wl.ops.keyswitch = ks_ops;
    wl.working_set_bytes = ws;
    wl.priority = priority;
    return wl;
}

const TraceEvent* find_event(const ScheduleTrace& t, EventKind k, const std::string& job) {
    for (const TraceEvent& e : t.events) {
        if (e.kind == k && e.job == job) return &e;
    }
    return nullptr;
}

}  // namespace

TEST_SUITE_BEGIN("scheduler");

TEST_CASE("single shallow job runs for exactly its cost") {
    FlashArchSpec spec;
    auto jobs = std::vector<WorkloadSpec>{shallow_job("a")};
    ScheduleTrace t = schedule(jobs, spec, SchedulePolicy::fifo);
    CHECK(t.makespan == shallow_cost(jobs[0], spec).total_cycles);
    CHECK(t.makespan == 527);
    REQUIRE(t.events.size() == 2);
    CHECK(t.events[0].kind == EventKind::start);
    CHECK(t.events[1].kind == EventKind::finish);
}

TEST_CASE("eight identical shallow jobs over eight affiliations reach 8x") {
    FlashArchSpec spec;
    std::vector<WorkloadSpec> jobs;
    for (int i = 0; i < 8; ++i) jobs.push_back(shallow_job("job" + std::to_string(i)));
    ScheduleTrace t = schedule(jobs, spec, SchedulePolicy::fifo);
    CHECK(t.makespan == 527);  // all in parallel
    SpeedupReport r = compare_sequential_baseline(jobs, spec);
    CHECK(r.makespan_speedup == doctest::Approx(8.0).epsilon(0.05));
    CHECK(r.avg_completion_speedup == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("single job baseline ratio is 1.0") {
    FlashArchSpec spec;
    auto jobs = std::vector<WorkloadSpec>{shallow_job("a")};
    SpeedupReport r = compare_sequential_baseline(jobs, spec);
    CHECK(r.makespan_speedup == doctest::Approx(1.0));
    CHECK(r.avg_completion_speedup == doctest::Approx(1.0));
}

TEST_CASE("k shallow jobs give k-fold makespan speedup, k <= affiliations") {
    FlashArchSpec spec;
    for (std::size_t k : {2u, 4u, 6u}) {
        std::vector<WorkloadSpec> jobs;
        for (std::size_t i = 0; i < k; ++i) jobs.push_back(shallow_job("j" + std::to_string(i)));
        SpeedupReport r = compare_sequential_baseline(jobs, spec);
        CHECK(r.makespan_speedup == doctest::Approx(double(k)));
    }
}

TEST_CASE("priority preemption matches the hand-simulated two-job trace") {
    FlashArchSpec spec;
    // deep job: two key-switch ops of 2868 cycles each, 8 MiB working set
    WorkloadSpec d = deep_job("deep", 2, 8ull << 20, 1);
    // shallow job: one NTT of 527 cycles, arrives mid-first-op, higher priority
    WorkloadSpec s = shallow_job("shallow", 1000, 5);
    ScheduleTrace t = schedule({d, s}, spec, SchedulePolicy::priority_preemptive);

    // spill/load = ceil(8 MiB * 1 GHz / 1024 GiB/s) = 7630 cycles
    CHECK(transfer_cycles(8ull << 20, spec) == 7630);

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
    CHECK(t.events == expected);
    CHECK(t.makespan == 21523);
}

TEST_CASE("fifo never preempts; a later shallow job degrades onto free swifts") {
    FlashArchSpec spec;
    WorkloadSpec d = deep_job("deep", 2, 8ull << 20, 1);
    WorkloadSpec s = shallow_job("shallow", 1000, 5);
    ScheduleTrace t = schedule({d, s}, spec, SchedulePolicy::fifo);
    CHECK(find_event(t, EventKind::preempt, "deep") == nullptr);
    const TraceEvent* start = find_event(t, EventKind::start, "shallow");
    REQUIRE(start != nullptr);
    CHECK(start->time == 1000);
    CHECK(start->resources.substr(0, 5) == "swift");
    // degraded two-lane rate: d1 = 154 + 8192*6/256, d2 = 132 + 192, +17+32 = 719
    const TraceEvent* fin = find_event(t, EventKind::finish, "shallow");
    REQUIRE(fin != nullptr);
    CHECK(fin->time - start->time == 719);
}

TEST_CASE("mixed batch against the sequential baseline") {
    FlashArchSpec spec;
    std::vector<WorkloadSpec> jobs = {deep_job("deep", 1, 0), shallow_job("s0"),
                                      shallow_job("s1"), shallow_job("s2")};
    // fifo: deep starts at 0 on all boots (submitted first), shallow jobs
    // degrade onto swift pairs at t=0 and run 719 cycles; deep runs 2868.
    ScheduleTrace t = schedule(jobs, spec, SchedulePolicy::fifo);
    CHECK(t.makespan == 2868);
    for (const auto& j : t.jobs) {
        if (j.job != "deep") CHECK(j.completion == 719);
    }
    // sequential: 2868 + 3*527, all completing at batch end
    SpeedupReport r = compare_sequential_baseline(jobs, spec);
    CHECK(r.sequential_makespan == 2868 + 3 * 527);
    CHECK(r.makespan_speedup == doctest::Approx(double(2868 + 3 * 527) / 2868.0));
    CHECK(r.avg_completion_speedup ==
          doctest::Approx(double(2868 + 3 * 527) / ((2868.0 + 3 * 719.0) / 4.0)));
}

TEST_CASE("resource exclusivity holds at every instant") {
    FlashArchSpec spec;
    std::vector<WorkloadSpec> jobs = {deep_job("d0", 1, 1 << 20, 2), shallow_job("s0", 0, 1),
                                      shallow_job("s1", 100, 3), shallow_job("s2", 200, 9)};
    ScheduleTrace t = schedule(jobs, spec, SchedulePolicy::priority_preemptive);
    // replay events; intervals on the same resource must not overlap
    std::map<std::string, std::vector<std::pair<std::uint64_t, std::uint64_t>>> busy;
    std::map<std::string, std::pair<std::uint64_t, std::string>> open;
    for (const TraceEvent& e : t.events) {
        if (e.kind == EventKind::start || e.kind == EventKind::load) {
            open[e.job] = {e.time, e.resources};
        } else if (e.kind == EventKind::finish || e.kind == EventKind::spill ||
                   e.kind == EventKind::preempt) {
            auto it = open.find(e.job);
            if (it != open.end()) {
                busy[it->second.second].push_back({it->second.first, e.time});
                open.erase(it);
            }
        }
    }
    for (auto& [res, iv] : busy) {
        std::sort(iv.begin(), iv.end());
        for (std::size_t i = 1; i < iv.size(); ++i) {
            CHECK(iv[i].first >= iv[i - 1].second);
        }
    }
}

TEST_CASE("trace invariants: starts match finishes, preempt->spill, resume->load") {
    FlashArchSpec spec;
    std::vector<WorkloadSpec> jobs = {deep_job("d", 2, 4ull << 20, 0),
                                      shallow_job("s", 500, 4)};
    ScheduleTrace t = schedule(jobs, spec, SchedulePolicy::priority_preemptive);
    std::map<std::string, int> starts, finishes;
    std::uint64_t prev_time = 0;
    std::map<std::string, EventKind> last_kind;
    for (const TraceEvent& e : t.events) {
        CHECK(e.time >= prev_time);
        prev_time = e.time;
        if (e.kind == EventKind::start) ++starts[e.job];
        if (e.kind == EventKind::finish) ++finishes[e.job];
        if (e.kind == EventKind::spill) CHECK(last_kind[e.job] == EventKind::preempt);
        if (e.kind == EventKind::load) CHECK(last_kind[e.job] == EventKind::resume);
        last_kind[e.job] = e.kind;
    }
    for (const auto& [job, n] : starts) CHECK(finishes[job] == 1);
    // preemption cost: spill + load = 2 * transfer per preemption
    for (const auto& j : t.jobs) {
        if (j.preemptions > 0) {
            const TraceEvent* pre = find_event(t, EventKind::preempt, j.job);
            const TraceEvent* sp = find_event(t, EventKind::spill, j.job);
            REQUIRE(pre != nullptr);
            REQUIRE(sp != nullptr);
            CHECK(sp->time - pre->time ==
                  transfer_cycles(4ull << 20, spec));
        }
    }
}

TEST_CASE("fifo is work conserving for shallow queues") {
    FlashArchSpec spec;
    std::vector<WorkloadSpec> jobs;
    for (int i = 0; i < 12; ++i) {
        jobs.push_back(shallow_job("s" + std::to_string(i), std::uint64_t(i * 40)));
    }
    ScheduleTrace t = schedule(jobs, spec, SchedulePolicy::fifo);
    // with 8 affiliations and 12 jobs, the first 8 run immediately on arrival;
    // later jobs start exactly when an affiliation frees up
    std::vector<std::uint64_t> start_times;
    for (const TraceEvent& e : t.events) {
        if (e.kind == EventKind::start) start_times.push_back(e.time);
    }
    REQUIRE(start_times.size() == 12);
    for (int i = 0; i < 8; ++i) CHECK(start_times[i] == std::uint64_t(i * 40));
    for (int i = 8; i < 12; ++i) CHECK(start_times[i] == std::uint64_t((i - 8) * 40) + 527);
}

TEST_CASE("identical inputs yield identical traces") {
    FlashArchSpec spec;
    std::vector<WorkloadSpec> jobs = {deep_job("d", 1, 1 << 20, 1), shallow_job("a", 0, 2),
                                      shallow_job("b", 0, 2)};
    ScheduleTrace t1 = schedule(jobs, spec, SchedulePolicy::priority_preemptive);
    ScheduleTrace t2 = schedule(jobs, spec, SchedulePolicy::priority_preemptive);
    CHECK(t1.events == t2.events);
    CHECK(t1.makespan == t2.makespan);
}

TEST_CASE("random job mixes keep every trace invariant, both policies") {
    FlashArchSpec spec;
    std::mt19937_64 rng(0xabcdef);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<WorkloadSpec> jobs;
        const std::size_t count = 1 + rng() % 6;
        for (std::size_t i = 0; i < count; ++i) {
            WorkloadSpec wl;
            wl.name = "j" + std::to_string(i);
            const bool deep = rng() % 3 == 0;
            wl.n = deep ? (1u << (15 + rng() % 2)) : (1u << (11 + rng() % 4));
            wl.levels = 1 + rng() % 16;
            wl.current_level = wl.levels;
            if (deep) {
                wl.ops.keyswitch = 1 + rng() % 3;
                wl.ops.bconv = rng() % 2;
            } else {
                wl.ops.ntt = 1 + rng() % 3;
                wl.ops.add = rng() % 2;
            }
            wl.working_set_bytes = (rng() % 4) << 20;
            wl.priority = std::int64_t(rng() % 5);
            wl.arrival = rng() % 3000;
            jobs.push_back(std::move(wl));
        }
        for (SchedulePolicy policy :
             {SchedulePolicy::fifo, SchedulePolicy::priority_preemptive}) {
            ScheduleTrace t = schedule(jobs, spec, policy);
            REQUIRE(t.jobs.size() == jobs.size());
            // every job finishes, never before it arrives
            std::map<std::string, int> finishes;
            std::map<std::string, EventKind> last;
            std::uint64_t prev = 0;
            for (const TraceEvent& e : t.events) {
                CHECK(e.time >= prev);
                prev = e.time;
                switch (e.kind) {
                    case EventKind::spill:
                        CHECK(last[e.job] == EventKind::preempt);
                        break;
                    case EventKind::load:
                        CHECK(last[e.job] == EventKind::resume);
                        break;
                    case EventKind::resume:
                        CHECK(last[e.job] == EventKind::spill);
                        break;
                    case EventKind::finish:
                        ++finishes[e.job];
                        break;
                    default:
                        break;
                }
                last[e.job] = e.kind;
            }
            for (const JobOutcome& j : t.jobs) {
                CHECK(finishes[j.job] == 1);
                CHECK(j.completion >= j.arrival);
                CHECK(j.completion <= t.makespan);
            }
            if (policy == SchedulePolicy::fifo) {
                for (const TraceEvent& e : t.events) CHECK(e.kind != EventKind::preempt);
            }
        }
    }
}

TEST_CASE("scenario config parsing") {
    ConfigMap cfg = ConfigMap::parse(
        "job.0.name=first\njob.0.n=8192\njob.0.levels=6\njob.0.ops.ntt=1\n"
        "job.1.name=second\njob.1.n=65536\njob.1.levels=16\njob.1.ops.keyswitch=1\n");
    auto jobs = jobs_from_config(cfg);
    REQUIRE(jobs.size() == 2);
    CHECK(jobs[0].name == "first");
    CHECK(jobs[1].ops.keyswitch == 1);
    CHECK_THROWS_AS(jobs_from_config(ConfigMap{}), InvariantViolation);
}

TEST_SUITE_END();
