#pragma once

#include <span>
#include <string>
#include <vector>

#include "npfp/model.hpp"
#include "npfp/sim.hpp"

namespace npfp {

struct AuditOptions {
    std::vector<Duration> release_offsets;  // as passed to the simulation
    Duration scheduler_overhead{};
};

// Replays a trace and lists every broken scheduling invariant.
struct AuditReport {
    std::size_t dispatches = 0;
    std::size_t coarse_batches = 0;
    std::size_t fine_dispatches = 0;
    std::vector<std::string> time_order;
    std::vector<std::string> exclusivity;       // overlapping or mis-timed execution
    std::vector<std::string> priority_prefix;   // P1: coarse batch = top-n active coarse subtasks
    std::vector<std::string> release_bound;     // P2: coarse batch WCET ends by every next release
    std::vector<std::string> coarse_dominance;  // no fine work while coarse work is pending
    std::vector<std::string> fine_slack;        // recorded fine work ends by every next release

    bool ok() const {
        return time_order.empty() && exclusivity.empty() && priority_prefix.empty() && release_bound.empty() &&
               coarse_dominance.empty() && fine_slack.empty();
    }
};

AuditReport audit_trace(const Trace& trace, std::span<const Task> tasks, const BatchWcetTables& tables,
                        const AuditOptions& options = {});

}  // namespace npfp
