// SPDX-License-Identifier: Apache-2.0
#include "fhedse/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace fhedse {

std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::start: return "start";
        case EventKind::preempt: return "preempt";
        case EventKind::resume: return "resume";
        case EventKind::finish: return "finish";
        case EventKind::spill: return "spill";
        case EventKind::load: return "load";
    }
    return "?";
}

std::uint64_t transfer_cycles(std::uint64_t bytes, const FlashArchSpec& spec) {
    if (bytes == 0) return 0;
    const unsigned __int128 num = (unsigned __int128)bytes * spec.latency.frequency_hz;
    return std::uint64_t((num + spec.hbm_bandwidth_bytes_per_sec - 1) /
                         spec.hbm_bandwidth_bytes_per_sec);
}

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

enum class JobState { pending, ready, running, spilling, suspended, loading, done };

struct Job {
    WorkloadSpec spec;
    WorkloadClass cls;
    std::size_t id = 0;
    bool degraded = false;  // shallow fallback on the swift pair only

    std::vector<std::uint64_t> segments;  // op boundaries; preemption points
    std::size_t next_seg = 0;
    JobState state = JobState::pending;
    std::uint64_t seg_end = kNever;
    std::uint64_t transfer_end = kNever;
    bool preempt_pending = false;
    int affiliation = -1;
    std::uint64_t completion = 0;
    std::uint64_t preemptions = 0;

    std::string resource_name() const {
        if (cls == WorkloadClass::deep) return "boot[*]";
        return (degraded ? "swift" : "aff") + std::to_string(affiliation);
    }
};

std::vector<std::uint64_t> expand_segments(const WorkloadSpec& wl, const FlashArchSpec& spec,
                                           WorkloadClass cls, bool degraded) {
    std::vector<std::uint64_t> segs;
    auto push = [&](OpKind k, std::uint64_t count) {
        if (count == 0) return;
        const std::uint64_t unit = op_unit_cost(k, wl, spec, degraded);
        for (std::uint64_t i = 0; i < count; ++i) segs.push_back(unit);
    };
    push(OpKind::ntt, wl.ops.ntt);
    push(OpKind::intt, wl.ops.intt);
    if (cls == WorkloadClass::deep) {
        push(OpKind::bconv, wl.ops.bconv);
    }
    push(OpKind::mul, wl.ops.mul);
    push(OpKind::add, wl.ops.add);
    if (cls == WorkloadClass::deep) {
        push(OpKind::keyswitch, wl.ops.keyswitch);
    }
    if (std::uint64_t pen = memory_penalty(wl, spec); pen != 0) segs.push_back(pen);
    return segs;
}

class Simulator {
public:
    Simulator(const std::vector<WorkloadSpec>& jobs, const FlashArchSpec& spec,
              SchedulePolicy policy)
        : spec_(spec), policy_(policy) {
        spec_.validate();
        boot_holder_.assign(spec_.affiliations, -1);
        swift_holder_.assign(spec_.affiliations, -1);
        jobs_.reserve(jobs.size());
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            Job j;
            j.spec = jobs[i];
            j.cls = classify(jobs[i]);
            if (j.cls == WorkloadClass::shallow &&
                (jobs[i].ops.bconv != 0 || jobs[i].ops.keyswitch != 0)) {
                throw InvariantViolation("shallow workload '" + jobs[i].name +
                                         "' carries bconv/keyswitch ops");
            }
            j.id = i;
            j.segments = expand_segments(jobs[i], spec_, j.cls, false);
            jobs_.push_back(std::move(j));
        }
    }

    ScheduleTrace run() {
        std::uint64_t t = 0;
        while (true) {
            while (step(t)) {
            }
            if (all_done()) break;
            std::uint64_t next = next_event_after(t);
            if (next == kNever || next <= t) {
                throw InvariantViolation("scheduler made no progress (internal)");
            }
            t = next;
        }
        ScheduleTrace trace;
        trace.events = std::move(events_);
        double sum = 0;
        for (const Job& j : jobs_) {
            trace.jobs.push_back({j.spec.name, j.spec.arrival, j.completion, j.preemptions});
            trace.makespan = std::max(trace.makespan, j.completion);
            sum += double(j.completion - j.spec.arrival);
        }
        trace.avg_completion = jobs_.empty() ? 0.0 : sum / double(jobs_.size());
        return trace;
    }

private:
    bool all_done() const {
        return std::all_of(jobs_.begin(), jobs_.end(),
                           [](const Job& j) { return j.state == JobState::done; });
    }

    std::uint64_t next_event_after(std::uint64_t t) const {
        std::uint64_t next = kNever;
        for (const Job& j : jobs_) {
            if (j.state == JobState::pending && j.spec.arrival > t) {
                next = std::min(next, j.spec.arrival);
            }
            if (j.state == JobState::running) next = std::min(next, j.seg_end);
            if (j.state == JobState::spilling || j.state == JobState::loading) {
                next = std::min(next, j.transfer_end);
            }
        }
        return next;
    }

    void emit(std::uint64_t t, EventKind k, const Job& j) {
        events_.push_back({t, k, j.spec.name, j.resource_name()});
    }

    void release(Job& j) {
        for (auto& h : boot_holder_) {
            if (h == int(j.id)) h = -1;
        }
        for (auto& h : swift_holder_) {
            if (h == int(j.id)) h = -1;
        }
        j.affiliation = -1;
    }

    // segment completions: finish, or begin the preemption spill
    bool phase_completions(std::uint64_t t) {
        bool progress = false;
        for (Job& j : jobs_) {
            if (j.state != JobState::running || j.seg_end != t) continue;
            progress = true;
            ++j.next_seg;
            if (j.preempt_pending && j.next_seg < j.segments.size()) {
                j.preempt_pending = false;
                ++j.preemptions;
                emit(t, EventKind::preempt, j);
                j.state = JobState::spilling;
                j.transfer_end = t + transfer_cycles(j.spec.working_set_bytes, spec_);
                j.seg_end = kNever;
            } else if (j.next_seg >= j.segments.size()) {
                j.completion = t;
                emit(t, EventKind::finish, j);
                release(j);
                j.state = JobState::done;
                j.seg_end = kNever;
            } else {
                // internal op boundary; segments are strictly positive so the
                // new deadline is in the future
                j.seg_end = t + j.segments[j.next_seg];
            }
        }
        return progress;
    }

    bool phase_transfers(std::uint64_t t) {
        bool progress = false;
        for (Job& j : jobs_) {
            if (j.state == JobState::spilling && j.transfer_end == t) {
                progress = true;
                emit(t, EventKind::spill, j);
                release(j);
                j.state = JobState::suspended;
                j.transfer_end = kNever;
            } else if (j.state == JobState::loading && j.transfer_end == t) {
                progress = true;
                emit(t, EventKind::load, j);
                j.state = JobState::running;
                j.transfer_end = kNever;
                j.seg_end = t + j.segments[j.next_seg];
            }
        }
        return progress;
    }

    bool phase_arrivals(std::uint64_t t) {
        bool progress = false;
        for (Job& j : jobs_) {
            if (j.state == JobState::pending && j.spec.arrival <= t) {
                j.state = JobState::ready;
                progress = true;
            }
        }
        return progress;
    }

    std::vector<Job*> ready_queue() {
        std::vector<Job*> q;
        for (Job& j : jobs_) {
            if (j.state == JobState::ready || j.state == JobState::suspended) q.push_back(&j);
        }
        std::stable_sort(q.begin(), q.end(), [&](const Job* a, const Job* b) {
            if (policy_ == SchedulePolicy::priority_preemptive &&
                a->spec.priority != b->spec.priority) {
                return a->spec.priority > b->spec.priority;
            }
            if (a->spec.arrival != b->spec.arrival) return a->spec.arrival < b->spec.arrival;
            return a->id < b->id;
        });
        return q;
    }

    bool boots_all_free() const {
        return std::all_of(boot_holder_.begin(), boot_holder_.end(),
                           [](int h) { return h == -1; });
    }

    void begin_execution(Job& j, std::uint64_t t) {
        if (j.state == JobState::suspended) {
            emit(t, EventKind::resume, j);
            j.state = JobState::loading;
            j.transfer_end = t + transfer_cycles(j.spec.working_set_bytes, spec_);
            if (j.transfer_end == t) {  // zero-size working set
                emit(t, EventKind::load, j);
                j.state = JobState::running;
                j.transfer_end = kNever;
                j.seg_end = t + j.segments[j.next_seg];
            }
        } else {
            emit(t, EventKind::start, j);
            if (j.segments.empty()) {
                j.completion = t;
                emit(t, EventKind::finish, j);
                release(j);
                j.state = JobState::done;
            } else {
                j.state = JobState::running;
                j.seg_end = t + j.segments[j.next_seg];
            }
        }
    }

    // Requests preemption of every strictly lower-priority holder of the
    // resources `j` needs. Returns true when all blockers are displaceable
    // (so `j` should wait for the spill rather than degrade).
    bool request_preemption(Job& j) {
        if (policy_ != SchedulePolicy::priority_preemptive) return false;
        std::vector<int> victims;
        bool displaceable = false;
        if (j.cls == WorkloadClass::deep) {
            displaceable = true;
            for (std::size_t a = 0; a < boot_holder_.size() && displaceable; ++a) {
                for (int holder : {boot_holder_[a], swift_holder_[a]}) {
                    if (holder == -1) continue;
                    if (jobs_[std::size_t(holder)].spec.priority < j.spec.priority) {
                        victims.push_back(holder);
                    } else {
                        displaceable = false;
                    }
                }
            }
        } else {
            // first affiliation whose holders are all lower priority
            for (std::size_t a = 0; a < boot_holder_.size() && !displaceable; ++a) {
                std::vector<int> cand;
                bool ok = true;
                for (int holder : {boot_holder_[a], swift_holder_[a]}) {
                    if (holder == -1) continue;
                    if (jobs_[std::size_t(holder)].spec.priority < j.spec.priority) {
                        cand.push_back(holder);
                    } else {
                        ok = false;
                    }
                }
                if (ok && !cand.empty()) {
                    victims = std::move(cand);
                    displaceable = true;
                }
            }
        }
        if (!displaceable || victims.empty()) return false;
        for (int v : victims) {
            Job& victim = jobs_[std::size_t(v)];
            if (victim.state == JobState::running) victim.preempt_pending = true;
        }
        return true;
    }

    bool try_allocate(Job& j, std::uint64_t t) {
        if (j.cls == WorkloadClass::deep) {
            bool all_free = boots_all_free();
            if (all_free) {
                for (auto& h : boot_holder_) h = int(j.id);
                begin_execution(j, t);
                return true;
            }
            request_preemption(j);
            return false;
        }
        // a preempted degraded job resumes in its locked mode
        if (j.state == JobState::suspended && j.degraded) {
            for (std::size_t a = 0; a < swift_holder_.size(); ++a) {
                if (swift_holder_[a] == -1) {
                    swift_holder_[a] = int(j.id);
                    j.affiliation = int(a);
                    begin_execution(j, t);
                    return true;
                }
            }
            return false;
        }
        // shallow: prefer a full affiliation
        for (std::size_t a = 0; a < boot_holder_.size(); ++a) {
            if (boot_holder_[a] == -1 && swift_holder_[a] == -1) {
                boot_holder_[a] = int(j.id);
                swift_holder_[a] = int(j.id);
                j.affiliation = int(a);
                j.degraded = false;
                begin_execution(j, t);
                return true;
            }
        }
        if (request_preemption(j)) return false;  // wait for the spill
        // degraded fallback: the swift pair of an affiliation whose
        // bootstrappable cluster is held by a deep job
        if (j.state == JobState::ready) {
            for (std::size_t a = 0; a < swift_holder_.size(); ++a) {
                if (swift_holder_[a] == -1 && boot_holder_[a] != -1) {
                    swift_holder_[a] = int(j.id);
                    j.affiliation = int(a);
                    j.degraded = true;
                    j.segments = expand_segments(j.spec, spec_, j.cls, true);
                    begin_execution(j, t);
                    return true;
                }
            }
        }
        return false;
    }

    bool phase_schedule(std::uint64_t t) {
        bool progress = false;
        for (Job* j : ready_queue()) {
            if (try_allocate(*j, t)) progress = true;
        }
        return progress;
    }

    bool step(std::uint64_t t) {
        bool progress = false;
        progress |= phase_completions(t);
        progress |= phase_transfers(t);
        progress |= phase_arrivals(t);
        progress |= phase_schedule(t);
        return progress;
    }

    FlashArchSpec spec_;
    SchedulePolicy policy_;
    std::vector<Job> jobs_;
    std::vector<int> boot_holder_;
    std::vector<int> swift_holder_;
    std::vector<TraceEvent> events_;
};

}  // namespace

ScheduleTrace schedule(const std::vector<WorkloadSpec>& jobs, const FlashArchSpec& spec,
                       SchedulePolicy policy) {
    return Simulator(jobs, spec, policy).run();
}

SpeedupReport compare_sequential_baseline(const std::vector<WorkloadSpec>& jobs,
                                          const FlashArchSpec& spec, SchedulePolicy policy) {
    SpeedupReport r;
    // batch order: arrival, then submission order
    std::vector<std::size_t> order(jobs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return jobs[a].arrival < jobs[b].arrival;
    });
    std::uint64_t t = 0;
    for (std::size_t i : order) {
        const WorkloadSpec& wl = jobs[i];
        const std::uint64_t dur = classify(wl) == WorkloadClass::shallow
                                      ? shallow_cost(wl, spec).total_cycles
                                      : deep_cost(wl, spec).total_cycles;
        t = std::max(t, wl.arrival) + dur;
    }
    r.sequential_makespan = t;
    double seq_sum = 0;
    for (const WorkloadSpec& wl : jobs) seq_sum += double(t - wl.arrival);
    r.sequential_avg_completion = jobs.empty() ? 0.0 : seq_sum / double(jobs.size());

    ScheduleTrace par = schedule(jobs, spec, policy);
    r.parallel_makespan = par.makespan;
    r.parallel_avg_completion = par.avg_completion;
    r.makespan_speedup = par.makespan == 0 ? 1.0
                                           : double(r.sequential_makespan) /
                                                 double(r.parallel_makespan);
    r.avg_completion_speedup = par.avg_completion == 0.0
                                   ? 1.0
                                   : r.sequential_avg_completion / r.parallel_avg_completion;
    return r;
}

std::vector<WorkloadSpec> jobs_from_config(const ConfigMap& cfg) {
    std::vector<WorkloadSpec> jobs;
    for (std::size_t k = 0;; ++k) {
        const std::string prefix = "job." + std::to_string(k) + ".";
        if (cfg.keys_with_prefix(prefix).empty()) break;
        WorkloadSpec wl = workload_from_config(cfg, prefix);
        if (wl.name == "workload") wl.name = "job" + std::to_string(k);
        jobs.push_back(std::move(wl));
    }
    if (jobs.empty()) throw InvariantViolation("scenario defines no jobs (job.0.* keys)");
    return jobs;
}

}  // namespace fhedse
