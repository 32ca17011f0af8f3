#pragma once

#include <optional>
#include <span>
#include <vector>

#include "npfp/model.hpp"

namespace npfp {

// Rate-monotonic priorities 1..n: shorter period first, ties by ascending id.
std::vector<Task> rm_assign(std::vector<Task> tasks);

// Longest coarse WCET among lower-priority tasks, or zero.
Duration blocking(const Task& task, std::span<const Task> tasks);

// Least fixed point of the non-preemptive response-time recurrence for the
// coarse subtask, or nullopt once an iterate exceeds the period.
std::optional<Duration> response_time(const Task& task, std::span<const Task> tasks);

struct TaskResponse {
    int task_id;
    std::optional<Duration> response;  // nullopt: diverged
    Duration period;
};

struct RtaResult {
    std::vector<TaskResponse> tasks;
    bool schedulable = true;
};

RtaResult schedulable(std::span<const Task> tasks);

}  // namespace npfp
