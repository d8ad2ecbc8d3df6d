// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhedse/flashsim.hpp"

namespace fhedse {

enum class SchedulePolicy { fifo, priority_preemptive };

enum class EventKind { start, preempt, resume, finish, spill, load };

std::string_view event_kind_name(EventKind k);

struct TraceEvent {
    std::uint64_t time = 0;
    EventKind kind = EventKind::start;
    std::string job;
    std::string resources;

    bool operator==(const TraceEvent&) const = default;
};

struct JobOutcome {
    std::string job;
    std::uint64_t arrival = 0;
    std::uint64_t completion = 0;
    std::uint64_t preemptions = 0;
};

struct ScheduleTrace {
    std::vector<TraceEvent> events;       // in emission (time) order
    std::vector<JobOutcome> jobs;
    std::uint64_t makespan = 0;
    double avg_completion = 0.0;          // mean of (completion - arrival)
};

/// Cycles to move a working set once between SRAM and HBM.
std::uint64_t transfer_cycles(std::uint64_t bytes, const FlashArchSpec& spec);

/// Runs a job mix over the affiliations.
///
/// Shallow jobs occupy one affiliation each (four 2^7 lanes); when every
/// bootstrappable cluster is held by a deep job they may fall back to the
/// two swift clusters of an affiliation at the degraded rate. A deep job
/// occupies all bootstrappable clusters. Under priority_preemptive, a
/// strictly higher-priority job preempts lower-priority holders at their
/// next op boundary; preemption spills the victim's working set to HBM and
/// loads it back on resume, transfer_cycles each way.
///
/// Deterministic: ties break by priority (preemptive policy), then arrival,
/// then job order.
ScheduleTrace schedule(const std::vector<WorkloadSpec>& jobs, const FlashArchSpec& spec,
                       SchedulePolicy policy);

struct SpeedupReport {
    std::uint64_t sequential_makespan = 0;
    std::uint64_t parallel_makespan = 0;
    double sequential_avg_completion = 0.0;
    double parallel_avg_completion = 0.0;
    double makespan_speedup = 0.0;
    double avg_completion_speedup = 0.0;
};

/// The same jobs run one at a time on the whole machine, as a homogeneous
/// accelerator's statically compiled batch would: results ship when the
/// batch ends, so every sequential job completes at the batch makespan.
SpeedupReport compare_sequential_baseline(const std::vector<WorkloadSpec>& jobs,
                                          const FlashArchSpec& spec,
                                          SchedulePolicy policy = SchedulePolicy::fifo);

/// Scenario file schema: job.<k>.<workload fields> for k = 0, 1, ...
/// (see workload_from_config), plus the optional flash.*/latency.* spec keys.
std::vector<WorkloadSpec> jobs_from_config(const ConfigMap& cfg);

}  // namespace fhedse
