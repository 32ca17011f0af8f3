#include "npfp/policy.hpp"

#include <algorithm>

namespace npfp {

std::optional<PolicyVariant> parse_policy(std::string_view name) {
    if (name == "c") return variants::C;
    if (name == "cf") return variants::CF;
    if (name == "cbf") return variants::BC_F;
    if (name == "cfb") return variants::C_BF;
    if (name == "cbfb") return variants::BC_BF;
    if (name == "cb") return variants::BC;
    return std::nullopt;
}

std::string_view policy_name(PolicyVariant v) {
    const bool bc = v.coarse == CoarseMode::Batched;
    switch (v.fine) {
        case FineMode::None: return bc ? "cb" : "c";
        case FineMode::Individual: return bc ? "cbf" : "cf";
        case FineMode::Batched: return bc ? "cbfb" : "cfb";
    }
    return "?";
}

std::string_view policy_label(PolicyVariant v) {
    const bool bc = v.coarse == CoarseMode::Batched;
    switch (v.fine) {
        case FineMode::None: return bc ? "NPFP^[C]" : "NPFP^C";
        case FineMode::Individual: return bc ? "NPFP^[C]F" : "NPFP^CF";
        case FineMode::Batched: return bc ? "NPFP^[C][F]" : "NPFP^C[F]";
    }
    return "?";
}

Duration coarse_slack(const SchedulerState& state, Duration now) {
    if (state.next_release.empty()) return Duration::max();
    const Duration earliest = *std::min_element(state.next_release.begin(), state.next_release.end());
    return earliest > now ? earliest - now : Duration{};
}

namespace {

std::vector<std::size_t> coarse_by_priority(const SchedulerState& state, std::span<const Task> tasks) {
    std::vector<std::size_t> order;
    order.reserve(state.coarse.size());
    for (const auto& c : state.coarse) order.push_back(c.task);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return tasks[a].priority < tasks[b].priority; });
    return order;
}

Decision decide_individual_fine(const SchedulerState& state, Duration now, std::span<const Task> tasks) {
    const auto top = std::min_element(state.fine.begin(), state.fine.end(), [&](const auto& a, const auto& b) {
        return tasks[a.task].priority < tasks[b.task].priority;
    });
    const Duration wcet = fine_wcet(tasks[top->task].fine, top->level);
    if (admit_individual_fine(wcet, top->level, now, coarse_slack(state, now), top->deadline))
        return RunFine{top->task};
    return Idle{};
}

Decision decide_fine_batches(const SchedulerState& state, Duration now, std::span<const Task> tasks,
                             const BatchWcetTables& tables) {
    std::vector<ActiveFine> sorted = state.fine;
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        if (a.level != b.level) return a.level < b.level;
        return tasks[a.task].id < tasks[b.task].id;
    });
    std::vector<WorkloadLevel> workloads;
    std::vector<Duration> deadlines;
    for (const auto& f : sorted) {
        workloads.push_back(f.level);
        deadlines.push_back(f.deadline);
    }
    const auto ranges = dba_partition(workloads, now, deadlines, coarse_slack(state, now), tables);
    if (ranges.empty()) return Idle{};

    RunFineBatchSequence seq;
    for (auto [first, last] : ranges) {
        std::vector<std::size_t> batch;
        for (std::size_t i = first; i < last; ++i) batch.push_back(sorted[i].task);
        seq.batches.push_back(std::move(batch));
    }
    return seq;
}

}  // namespace

Decision decide(const SchedulerState& state, Duration now, PolicyVariant variant, std::span<const Task> tasks,
                const BatchWcetTables& tables) {
    if (!state.coarse.empty()) {
        if (variant.coarse == CoarseMode::Batched) return select_coarse_batch(state, now, tasks, tables);
        return RunCoarse{coarse_by_priority(state, tasks).front()};
    }
    if (!state.fine.empty()) {
        switch (variant.fine) {
            case FineMode::None: return Idle{};
            case FineMode::Individual: return decide_individual_fine(state, now, tasks);
            case FineMode::Batched: return decide_fine_batches(state, now, tasks, tables);
        }
    }
    return Idle{};
}

Decision select_coarse_batch(const SchedulerState& state, Duration now, std::span<const Task> tasks,
                             const BatchWcetTables& tables) {
    auto order = coarse_by_priority(state, tasks);
    if (order.size() >= 2) {
        const Duration slack = coarse_slack(state, now);
        for (std::size_t x = std::min(order.size(), tables.coarse_max()); x >= 2; --x) {
            if (tables.coarse_batch(x) <= slack) {
                order.resize(x);
                return RunCoarseBatch{std::move(order)};
            }
        }
    }
    return RunCoarse{order.front()};
}

bool admit_individual_fine(Duration fine_wcet, WorkloadLevel level, Duration now, Duration coarse_slack,
                           Duration deadline) {
    if (level == WorkloadLevel::Zero) return false;
    return fine_wcet <= coarse_slack && now + fine_wcet <= deadline;
}

DbaTable dba_table(std::span<const WorkloadLevel> workloads, Duration now, std::span<const Duration> deadlines,
                   Duration coarse_slack, const BatchWcetTables& tables) {
    const std::size_t n = workloads.size();
    DbaTable t;
    t.dba.assign(n + 1, std::nullopt);
    t.split.assign(n + 1, 0);
    t.dba[0] = Duration{};

    for (std::size_t k = 1; k <= n; ++k) {
        const WorkloadLevel top = workloads[k - 1];
        // Earliest member deadline of the candidate batch j..k, grown as j decreases.
        Duration tightest = Duration::max();
        for (std::size_t j = k; j >= 1; --j) {
            tightest = std::min(tightest, deadlines[j - 1]);
            const std::size_t size = k - j + 1;
            DbaCell cell{j, k, t.dba[j - 1], std::nullopt};
            if (cell.prev && top != WorkloadLevel::Zero && size <= tables.fine_max(top)) {
                const Duration finish = *cell.prev + tables.fine_batch(top, size);
                if (finish <= coarse_slack && now + finish <= tightest) cell.cost = finish;
            }
            t.cells.push_back(cell);
        }
        // Ascending j with strict improvement keeps the smallest j on ties.
        const std::size_t row = t.cells.size() - k;
        for (std::size_t j = 1; j <= k; ++j) {
            const auto& cell = t.cells[row + (k - j)];
            if (cell.cost && (!t.dba[k] || *cell.cost < *t.dba[k])) {
                t.dba[k] = cell.cost;
                t.split[k] = j;
            }
        }
    }
    return t;
}

std::vector<BatchRange> backtrack(const DbaTable& table, std::size_t k) {
    std::vector<BatchRange> out;
    while (k > 0) {
        const std::size_t j = table.split[k];
        out.emplace_back(j - 1, k);
        k = j - 1;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<BatchRange> dba_partition(std::span<const WorkloadLevel> workloads, Duration now,
                                      std::span<const Duration> deadlines, Duration coarse_slack,
                                      const BatchWcetTables& tables) {
    const auto table = dba_table(workloads, now, deadlines, coarse_slack, tables);
    for (std::size_t k = workloads.size(); k >= 1; --k)
        if (table.dba[k]) return backtrack(table, k);
    return {};
}

}  // namespace npfp
