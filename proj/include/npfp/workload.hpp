#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "npfp/model.hpp"

namespace npfp {

// Sampled at release; level is Zero for easy frames.
struct FrameOutcome {
    bool hard = false;
    WorkloadLevel level = WorkloadLevel::Zero;

    bool operator==(const FrameOutcome&) const = default;
};

FrameOutcome sample_frame(const HardnessModel& model, std::mt19937_64& rng);

struct TaskSetSpec {
    std::size_t count = 1;
    std::vector<double> periods_ms;                        // fixed, one per task
    std::optional<std::pair<double, double>> period_range_ms;  // otherwise uniform in [lo, hi] (whole ms)
    std::string platform = "server";
    HardnessModel hardness;
};

// Tasks with ids 1..count, the platform's profiles, and RM priorities.
// Throws std::invalid_argument for unknown platforms or C^S > T.
std::vector<Task> generate_taskset(const TaskSetSpec& spec, std::mt19937_64& rng);

}  // namespace npfp
