#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "npfp/model.hpp"
#include "npfp/sim.hpp"

namespace npfp {

struct ProxyParams {
    double base_credit = 0.6;  // credit for a hard frame whose fine stage never ran
};

struct TaskReport {
    int task_id = 0;
    std::int64_t released = 0;
    std::int64_t coarse_completed = 0;
    std::int64_t coarse_deadline_misses = 0;
    std::int64_t hard_frames = 0;  // revealed at coarse completion
    std::int64_t fine_completed = 0;
    double coarse_fps = 0;
    double fine_completion_rate = 0;  // 0 when no hard frames were revealed
};

struct Report {
    std::vector<TaskReport> tasks;
    double critical_score = 1.0;
    double proxy_score = 1.0;
    std::int64_t coarse_deadline_misses = 0;
    std::uint64_t seed = 0;
    PolicyVariant variant;
    SamplingMode sampling = SamplingMode::Wcet;
    Duration horizon;
};

// Per frame: a coarse miss scores 0, an easy frame or a hard frame with its
// fine stage done scores 1, a hard frame without it scores base_credit.
Report compute_report(const Trace& trace, std::span<const Task> tasks, Duration horizon, const ProxyParams& proxy);

}  // namespace npfp
