#include "npfp/audit.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace npfp {

namespace {

std::string at(const Event& e) {
    return std::string(event_name(e.kind)) + " at " + std::to_string(e.time.count()) + "us";
}

}  // namespace

AuditReport audit_trace(const Trace& trace, std::span<const Task> tasks, const BatchWcetTables& tables,
                        const AuditOptions& options) {
    AuditReport rep;
    std::map<int, std::size_t> index_of;
    for (std::size_t i = 0; i < tasks.size(); ++i) index_of[tasks[i].id] = i;

    // Earliest release of every task strictly after t.
    auto earliest_release_after = [&](Duration t) {
        Duration best = Duration::max();
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const Duration off = options.release_offsets.empty() ? Duration{} : options.release_offsets[i];
            Duration r = off;
            if (t >= off) r = off + tasks[i].period * ((t - off).count() / tasks[i].period.count() + 1);
            best = std::min(best, r);
        }
        return best;
    };

    std::set<int> pending;  // active coarse subtasks by task id
    Duration last{};
    Duration resource_free{};
    bool busy = false;
    bool first = true;

    for (const auto& e : trace.events) {
        if (!first && e.time < last) rep.time_order.push_back(at(e));
        first = false;
        last = e.time;

        switch (e.kind) {
            case EventKind::Release:
                pending.insert(e.task_ids.at(0));
                break;
            case EventKind::CoarseDeadlineMiss:
                pending.erase(e.task_ids.at(0));
                break;
            case EventKind::FineExpired:
                break;
            case EventKind::Complete:
                if (!busy || e.time != resource_free) rep.exclusivity.push_back(at(e) + " does not close a dispatch");
                busy = false;
                break;
            default: {
                ++rep.dispatches;
                if (busy) rep.exclusivity.push_back(at(e) + " while resource busy");
                busy = true;
                resource_free = e.time + e.duration;

                const bool coarse = e.kind == EventKind::DispatchCoarse || e.kind == EventKind::DispatchCoarseBatch;
                if (coarse) {
                    std::vector<int> expected(pending.begin(), pending.end());
                    std::sort(expected.begin(), expected.end(), [&](int a, int b) {
                        return tasks[index_of.at(a)].priority < tasks[index_of.at(b)].priority;
                    });
                    expected.resize(std::min(expected.size(), e.task_ids.size()));
                    if (expected != e.task_ids) rep.priority_prefix.push_back(at(e));
                    for (int id : e.task_ids) pending.erase(id);

                    if (e.kind == EventKind::DispatchCoarseBatch) {
                        ++rep.coarse_batches;
                        const Duration end =
                            e.time + options.scheduler_overhead + tables.coarse_batch(e.task_ids.size());
                        if (end > earliest_release_after(e.time)) rep.release_bound.push_back(at(e));
                    }
                } else {
                    ++rep.fine_dispatches;
                    if (!pending.empty()) rep.coarse_dominance.push_back(at(e));
                    if (e.time + e.duration > earliest_release_after(e.time)) rep.fine_slack.push_back(at(e));
                }
            }
        }
    }
    return rep;
}

}  // namespace npfp
