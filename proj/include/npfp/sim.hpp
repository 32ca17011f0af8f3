#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "npfp/model.hpp"
#include "npfp/policy.hpp"

namespace npfp {

enum class SamplingMode { Wcet, MeanCentered };

std::string_view sampling_name(SamplingMode m);

enum class EventKind {
    Release,
    DispatchCoarse,
    DispatchCoarseBatch,
    DispatchFine,
    DispatchFineBatch,
    Complete,
    CoarseDeadlineMiss,
    FineExpired,
};

std::string_view event_name(EventKind k);
bool is_dispatch(EventKind k);

struct Event {
    Duration time;
    EventKind kind;
    std::vector<int> task_ids;  // batch order for dispatches
    Duration duration;          // dispatch: overhead + sampled work; complete: the same span

    int batch_size() const { return static_cast<int>(task_ids.size()); }
    bool operator==(const Event&) const = default;
};

struct Trace {
    std::vector<Event> events;
    Duration horizon;
    std::uint64_t seed = 0;
    PolicyVariant variant;
    SamplingMode sampling = SamplingMode::Wcet;
};

struct SimOptions {
    Duration horizon;
    std::uint64_t seed = 0;
    SamplingMode sampling = SamplingMode::Wcet;
    Duration scheduler_overhead{};
    std::vector<Duration> release_offsets;  // per task; empty means all zero
};

// Wcet: the WCET itself. MeanCentered: uniform on [max(1us, 2*mean - wcet), wcet].
Duration sample_execution_time(Duration mean, Duration wcet, SamplingMode mode, std::mt19937_64& rng);

// Periodic releases in [0, horizon) executed non-preemptively on one
// resource under the given policy. After the last release the run drains
// until every released job has resolved (completed, missed or expired).
// Throws std::invalid_argument on invalid tables or options.
Trace run(std::span<const Task> tasks, PolicyVariant variant, const BatchWcetTables& tables,
          const SimOptions& options);

}  // namespace npfp
