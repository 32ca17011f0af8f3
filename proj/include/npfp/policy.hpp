#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "npfp/model.hpp"

namespace npfp {

enum class CoarseMode { Individual, Batched };
enum class FineMode { None, Individual, Batched };

struct PolicyVariant {
    CoarseMode coarse = CoarseMode::Individual;
    FineMode fine = FineMode::None;

    bool operator==(const PolicyVariant&) const = default;
};

namespace variants {
inline constexpr PolicyVariant C{CoarseMode::Individual, FineMode::None};
inline constexpr PolicyVariant CF{CoarseMode::Individual, FineMode::Individual};
inline constexpr PolicyVariant BC_F{CoarseMode::Batched, FineMode::Individual};   // [C]F
inline constexpr PolicyVariant C_BF{CoarseMode::Individual, FineMode::Batched};   // C[F]
inline constexpr PolicyVariant BC_BF{CoarseMode::Batched, FineMode::Batched};     // [C][F]
inline constexpr PolicyVariant BC{CoarseMode::Batched, FineMode::None};           // [C]
}  // namespace variants

// CLI names: c, cf, cbf ([C]F), cfb (C[F]), cbfb ([C][F]); "cb" is [C] alone.
std::optional<PolicyVariant> parse_policy(std::string_view name);
std::string_view policy_name(PolicyVariant v);
std::string_view policy_label(PolicyVariant v);  // NPFP^[C][F] style

// Active subtasks refer to tasks by index into the task span.
struct ActiveCoarse {
    std::size_t task;
};

struct ActiveFine {
    std::size_t task;
    WorkloadLevel level;
    Duration deadline;  // absolute
};

struct SchedulerState {
    std::vector<ActiveCoarse> coarse;
    std::vector<ActiveFine> fine;
    std::vector<Duration> next_release;  // per task index, absolute
};

struct RunCoarse {
    std::size_t task;
    bool operator==(const RunCoarse&) const = default;
};
struct RunCoarseBatch {
    std::vector<std::size_t> tasks;  // descending priority
    bool operator==(const RunCoarseBatch&) const = default;
};
struct RunFine {
    std::size_t task;
    bool operator==(const RunFine&) const = default;
};
struct RunFineBatchSequence {
    std::vector<std::vector<std::size_t>> batches;  // execution order
    bool operator==(const RunFineBatchSequence&) const = default;
};
struct Idle {
    bool operator==(const Idle&) const = default;
};

using Decision = std::variant<RunCoarse, RunCoarseBatch, RunFine, RunFineBatchSequence, Idle>;

// Time from now until the earliest next release of any task, floored at zero.
Duration coarse_slack(const SchedulerState& state, Duration now);

Decision decide(const SchedulerState& state, Duration now, PolicyVariant variant, std::span<const Task> tasks,
                const BatchWcetTables& tables);

// Largest priority-prefix batch finishing before the next release; falls
// back to the single highest-priority coarse subtask.
Decision select_coarse_batch(const SchedulerState& state, Duration now, std::span<const Task> tasks,
                             const BatchWcetTables& tables);

bool admit_individual_fine(Duration fine_wcet, WorkloadLevel level, Duration now, Duration coarse_slack,
                           Duration deadline);

// One evaluated term of the partition recurrence: last batch j..k (1-based).
struct DbaCell {
    std::size_t j;
    std::size_t k;
    std::optional<Duration> prev;  // DBA[j-1]
    std::optional<Duration> cost;  // nullopt: infeasible
};

struct DbaTable {
    std::vector<std::optional<Duration>> dba;  // DBA[0..N]
    std::vector<std::size_t> split;            // chosen j per k (0 when DBA[k] infeasible)
    std::vector<DbaCell> cells;                // per k, j descending
};

// Fills the DBA recurrence over a non-decreasing workload list. Costs are
// back-to-back batch WCETs from `now`; a term is infeasible if its batch
// would end after a member deadline or after now + coarse_slack.
DbaTable dba_table(std::span<const WorkloadLevel> workloads, Duration now, std::span<const Duration> deadlines,
                   Duration coarse_slack, const BatchWcetTables& tables);

// Half-open index ranges [first, last) into the sorted workload list.
using BatchRange = std::pair<std::size_t, std::size_t>;

// Partition of the longest feasible prefix; empty when nothing fits.
std::vector<BatchRange> dba_partition(std::span<const WorkloadLevel> workloads, Duration now,
                                      std::span<const Duration> deadlines, Duration coarse_slack,
                                      const BatchWcetTables& tables);

std::vector<BatchRange> backtrack(const DbaTable& table, std::size_t k);

}  // namespace npfp
