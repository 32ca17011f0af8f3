#include "npfp/workload.hpp"

#include <stdexcept>

#include "npfp/analysis.hpp"
#include "npfp/presets.hpp"

namespace npfp {

FrameOutcome sample_frame(const HardnessModel& model, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!(unit(rng) < model.p_hard)) return {};
    const double u = unit(rng);
    double acc = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        acc += model.level_dist[i];
        if (u < acc) return {true, kFineLevels[i]};
    }
    // Rounding slack in the distribution sum: take the largest populated level.
    for (std::size_t i = 3; i-- > 0;)
        if (model.level_dist[i] > 0) return {true, kFineLevels[i]};
    return {true, WorkloadLevel::L};
}

std::vector<Task> generate_taskset(const TaskSetSpec& spec, std::mt19937_64& rng) {
    if (spec.count == 0) throw std::invalid_argument("task set needs at least one task");
    const auto preset = platform_preset(spec.platform);
    if (!preset) throw std::invalid_argument("unknown platform '" + spec.platform + "'");
    if (!spec.periods_ms.empty() && spec.periods_ms.size() != spec.count)
        throw std::invalid_argument("periods_ms must list one period per task");
    if (spec.periods_ms.empty() && !spec.period_range_ms)
        throw std::invalid_argument("task set needs periods_ms or period_range_ms");

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < spec.count; ++i) {
        Duration period;
        if (!spec.periods_ms.empty()) {
            period = Duration::from_ms(spec.periods_ms[i]);
        } else {
            const auto [lo, hi] = *spec.period_range_ms;
            if (!(lo > 0) || hi < lo) throw std::invalid_argument("bad period range");
            std::uniform_int_distribution<std::int64_t> dist(static_cast<std::int64_t>(lo),
                                                             static_cast<std::int64_t>(hi));
            period = Duration::ms(dist(rng));
        }
        if (period <= Duration{}) throw std::invalid_argument("periods must be positive");

        Task t;
        t.id = static_cast<int>(i) + 1;
        t.period = period;
        t.deadline = period;
        t.coarse = preset->coarse;
        t.fine = preset->fine;
        t.hardness = spec.hardness;
        if (coarse_wcet(t.coarse) > t.period)
            throw std::invalid_argument("task " + std::to_string(t.id) + ": coarse WCET exceeds its period");
        tasks.push_back(t);
    }
    return rm_assign(std::move(tasks));
}

}  // namespace npfp
