#include "npfp/metrics.hpp"

#include <map>
#include <optional>

namespace npfp {

Report compute_report(const Trace& trace, std::span<const Task> tasks, Duration horizon, const ProxyParams& proxy) {
    Report rep;
    rep.seed = trace.seed;
    rep.variant = trace.variant;
    rep.sampling = trace.sampling;
    rep.horizon = horizon;

    std::map<int, std::size_t> slot;
    for (const auto& t : tasks) {
        slot[t.id] = rep.tasks.size();
        rep.tasks.push_back({});
        rep.tasks.back().task_id = t.id;
    }

    std::int64_t fine_expired_total = 0;
    std::optional<EventKind> in_flight;
    for (const auto& e : trace.events) {
        switch (e.kind) {
            case EventKind::Release:
                ++rep.tasks[slot.at(e.task_ids[0])].released;
                break;
            case EventKind::CoarseDeadlineMiss:
                ++rep.tasks[slot.at(e.task_ids[0])].coarse_deadline_misses;
                break;
            case EventKind::FineExpired:
                ++rep.tasks[slot.at(e.task_ids[0])].hard_frames;
                ++fine_expired_total;
                break;
            case EventKind::Complete: {
                const bool coarse =
                    in_flight == EventKind::DispatchCoarse || in_flight == EventKind::DispatchCoarseBatch;
                for (int id : e.task_ids) {
                    auto& tr = rep.tasks[slot.at(id)];
                    if (coarse) {
                        ++tr.coarse_completed;
                    } else {
                        ++tr.fine_completed;
                        ++tr.hard_frames;
                    }
                }
                in_flight.reset();
                break;
            }
            default:
                in_flight = e.kind;
        }
    }

    std::int64_t released = 0, misses = 0, fine_done = 0, hard = 0;
    const double seconds = horizon.to_seconds();
    for (auto& tr : rep.tasks) {
        tr.coarse_fps = seconds > 0 ? static_cast<double>(tr.coarse_completed) / seconds : 0.0;
        tr.fine_completion_rate =
            tr.hard_frames > 0 ? static_cast<double>(tr.fine_completed) / static_cast<double>(tr.hard_frames) : 0.0;
        released += tr.released;
        misses += tr.coarse_deadline_misses;
        fine_done += tr.fine_completed;
        hard += tr.hard_frames;
    }
    rep.coarse_deadline_misses = misses;
    if (released > 0) {
        const double on_time = static_cast<double>(released - misses);
        const double easy = on_time - static_cast<double>(hard);
        rep.critical_score = on_time / static_cast<double>(released);
        rep.proxy_score = (easy + static_cast<double>(fine_done) + proxy.base_credit * static_cast<double>(fine_expired_total)) /
                          static_cast<double>(released);
    }
    return rep;
}

}  // namespace npfp
