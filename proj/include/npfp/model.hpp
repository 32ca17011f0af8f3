#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "npfp/duration.hpp"

namespace npfp {

// Zero means the fine stage is skipped for the frame.
enum class WorkloadLevel { Zero = 0, S = 1, M = 2, L = 3 };

inline constexpr std::array<WorkloadLevel, 3> kFineLevels = {WorkloadLevel::S, WorkloadLevel::M,
                                                             WorkloadLevel::L};

// Index of S/M/L into per-level arrays. Undefined for Zero.
constexpr std::size_t level_index(WorkloadLevel w) { return static_cast<std::size_t>(w) - 1; }
std::string_view level_name(WorkloadLevel w);

struct MeanWcet {
    Duration mean;
    Duration wcet;
};

struct CoarseProfile {
    int patch_count = 1;
    MeanWcet patch_split;    // c^ps
    MeanWcet attention;      // c^at(p^S)
    MeanWcet hardness;       // c^dt
};

struct FineProfile {
    std::array<MeanWcet, 3> selective_split;  // c^sps per level
    std::array<MeanWcet, 3> attention;        // c^at per level
};

struct HardnessModel {
    double p_hard = 0.5;
    std::array<double, 3> level_dist = {0.4, 0.35, 0.25};
};

struct Task {
    int id = 0;
    Duration period;
    Duration deadline;
    int priority = 0;  // lower number runs first
    CoarseProfile coarse;
    FineProfile fine;
    HardnessModel hardness;
};

Duration coarse_wcet(const CoarseProfile& p);
Duration coarse_mean(const CoarseProfile& p);
Duration fine_wcet(const FineProfile& p, WorkloadLevel level);
Duration fine_mean(const FineProfile& p, WorkloadLevel level);

// Batch WCETs, indexed by batch size n (1-based through the accessors).
// The coarse table belongs to the task set; the fine table is shared by all
// tasks and keyed by the largest workload level in the batch.
struct BatchWcetTables {
    std::vector<Duration> coarse;
    std::array<std::vector<Duration>, 3> fine;
    bool synthetic = false;

    std::size_t coarse_max() const { return coarse.size(); }
    std::size_t fine_max(WorkloadLevel w) const { return fine[level_index(w)].size(); }
    Duration coarse_batch(std::size_t n) const { return coarse.at(n - 1); }
    Duration fine_batch(WorkloadLevel w, std::size_t n) const { return fine[level_index(w)].at(n - 1); }
};

// Parameters for synthesizing batch tables from single-job WCETs:
// table(n) = table(1) + round(marginal * (n - 1) * table(1)).
struct SyntheticBatchRule {
    double coarse_marginal = 0.6;
    double fine_marginal = 0.4;
    std::size_t n_max = 0;  // 0: number of tasks
};

BatchWcetTables synthesize_batch_tables(std::span<const Task> tasks, const SyntheticBatchRule& rule);

enum class ViolationKind {
    EmptyTable,
    CoarseSizeOne,
    FineSizeOne,
    CoarseBatching,
    FineBatching,
    FineLevelOrder,
    FineSizeOrder,
    MeanAboveWcet,
    ProfileLevelOrder,
    PatchCountMismatch,
    DuplicatePriority,
    DeadlineNotPeriod,
    NonPositivePeriod,
    NegativeDuration,
    BadHardness,
};

struct Violation {
    ViolationKind kind;
    std::string detail;
};

// Every violated invariant of the task set and its batch tables; empty means valid.
std::vector<Violation> validate_tables(std::span<const Task> tasks, const BatchWcetTables& tables);

}  // namespace npfp
