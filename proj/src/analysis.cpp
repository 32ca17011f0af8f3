#include "npfp/analysis.hpp"

#include <algorithm>

namespace npfp {

std::vector<Task> rm_assign(std::vector<Task> tasks) {
    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tasks[a].period != tasks[b].period) return tasks[a].period < tasks[b].period;
        return tasks[a].id < tasks[b].id;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) tasks[order[rank]].priority = static_cast<int>(rank) + 1;
    return tasks;
}

Duration blocking(const Task& task, std::span<const Task> tasks) {
    Duration b{};
    for (const auto& other : tasks)
        if (other.priority > task.priority) b = std::max(b, coarse_wcet(other.coarse));
    return b;
}

std::optional<Duration> response_time(const Task& task, std::span<const Task> tasks) {
    const Duration own = coarse_wcet(task.coarse) + blocking(task, tasks);
    Duration r = own;
    while (r <= task.period) {
        Duration next = own;
        for (const auto& h : tasks)
            if (h.priority < task.priority) next += coarse_wcet(h.coarse) * ceil_div(r, h.period);
        if (next == r) return r;
        r = next;
    }
    return std::nullopt;
}

RtaResult schedulable(std::span<const Task> tasks) {
    RtaResult result;
    for (const auto& task : tasks) {
        auto r = response_time(task, tasks);
        result.schedulable = result.schedulable && r.has_value();
        result.tasks.push_back({task.id, r, task.period});
    }
    return result;
}

}  // namespace npfp
