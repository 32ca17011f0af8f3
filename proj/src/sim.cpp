#include "npfp/sim.hpp"
#include "npfp/workload.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

namespace npfp {

std::string_view sampling_name(SamplingMode m) {
    return m == SamplingMode::Wcet ? "wcet" : "mean-centered";
}

std::string_view event_name(EventKind k) {
    switch (k) {
        case EventKind::Release: return "Release";
        case EventKind::DispatchCoarse: return "DispatchCoarse";
        case EventKind::DispatchCoarseBatch: return "DispatchCoarseBatch";
        case EventKind::DispatchFine: return "DispatchFine";
        case EventKind::DispatchFineBatch: return "DispatchFineBatch";
        case EventKind::Complete: return "Complete";
        case EventKind::CoarseDeadlineMiss: return "CoarseDeadlineMiss";
        case EventKind::FineExpired: return "FineExpired";
    }
    return "?";
}

bool is_dispatch(EventKind k) {
    return k == EventKind::DispatchCoarse || k == EventKind::DispatchCoarseBatch || k == EventKind::DispatchFine ||
           k == EventKind::DispatchFineBatch;
}

Duration sample_execution_time(Duration mean, Duration wcet, SamplingMode mode, std::mt19937_64& rng) {
    if (mode == SamplingMode::Wcet || mean >= wcet) return wcet;
    const std::int64_t lo = std::max<std::int64_t>(1, 2 * mean.count() - wcet.count());
    if (lo >= wcet.count()) return wcet;
    std::uniform_int_distribution<std::int64_t> dist(lo, wcet.count());
    return Duration::us(dist(rng));
}

namespace {

enum class Stage { CoarsePending, CoarseRunning, FinePending, FineRunning, Done, Expired };

struct Job {
    std::int64_t index;
    Duration release;
    Duration deadline;
    FrameOutcome frame;
    Stage stage;
};

struct Member {
    std::size_t task;
    std::int64_t job;
};

struct Segment {
    EventKind kind;
    std::vector<Member> members;
};

std::mt19937_64 derive_rng(std::uint64_t seed, std::uint32_t stream, std::uint32_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, salt};
    return std::mt19937_64(seq);
}

constexpr std::uint32_t kFrameSalt = 0x46524d45;
constexpr std::uint32_t kExecSalt = 0x45584543;

class Simulator {
public:
    Simulator(std::span<const Task> tasks, PolicyVariant variant, const BatchWcetTables& tables,
              const SimOptions& opts)
        : tasks_(tasks), variant_(variant), tables_(tables), opts_(opts),
          exec_rng_(derive_rng(opts.seed, 0, kExecSalt)) {
        current_.resize(tasks.size());
        next_index_.assign(tasks.size(), 0);
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            next_release_.push_back(opts.release_offsets.empty() ? Duration{} : opts.release_offsets[i]);
            frame_rng_.push_back(derive_rng(opts.seed, static_cast<std::uint32_t>(tasks[i].id), kFrameSalt));
        }
        trace_.horizon = opts.horizon;
        trace_.seed = opts.seed;
        trace_.variant = variant;
        trace_.sampling = opts.sampling;
    }

    Trace run() {
        for (;;) {
            const auto t_release = next_boundary();
            const auto t_complete = running_ ? std::optional<Duration>(busy_until_) : std::nullopt;
            if (!t_release && !t_complete) break;
            const Duration now = !t_release ? *t_complete : !t_complete ? *t_release : std::min(*t_release, *t_complete);

            if (t_complete && *t_complete == now) complete(now);
            for (std::size_t i = 0; i < tasks_.size(); ++i)
                if (next_release_[i] == now && boundary_relevant(i)) boundary(i, now);
            // Tasks with nothing left to resolve keep a current next release for slack.
            for (std::size_t i = 0; i < tasks_.size(); ++i)
                while (next_release_[i] <= now) next_release_[i] += tasks_[i].period;

            if (!running_) {
                if (!plan_.empty())
                    start_next(now, Duration{});
                else
                    dispatch(now);
            }
        }
        return std::move(trace_);
    }

private:
    bool unresolved(std::size_t i) const {
        return current_[i] && current_[i]->stage != Stage::Done && current_[i]->stage != Stage::Expired;
    }

    bool boundary_relevant(std::size_t i) const { return next_release_[i] < opts_.horizon || unresolved(i); }

    std::optional<Duration> next_boundary() const {
        std::optional<Duration> best;
        for (std::size_t i = 0; i < tasks_.size(); ++i)
            if (boundary_relevant(i) && (!best || next_release_[i] < *best)) best = next_release_[i];
        return best;
    }

    void log(Duration t, EventKind kind, std::vector<int> ids, Duration d = {}) {
        trace_.events.push_back({t, kind, std::move(ids), d});
    }

    std::vector<int> ids_of(const std::vector<Member>& members) const {
        std::vector<int> ids;
        for (const auto& m : members) ids.push_back(tasks_[m.task].id);
        return ids;
    }

    // Deadline of the current job (if any) followed by the next release.
    void boundary(std::size_t i, Duration now) {
        const int id = tasks_[i].id;
        if (current_[i]) {
            Job& job = *current_[i];
            switch (job.stage) {
                case Stage::CoarsePending:
                case Stage::CoarseRunning:
                    log(now, EventKind::CoarseDeadlineMiss, {id});
                    job.stage = Stage::Expired;
                    break;
                case Stage::FinePending:
                    log(now, EventKind::FineExpired, {id});
                    job.stage = Stage::Expired;
                    break;
                case Stage::FineRunning:
                    throw std::logic_error("fine subtask of task " + std::to_string(id) + " running past its deadline");
                case Stage::Done:
                case Stage::Expired:
                    break;
            }
        }
        if (now < opts_.horizon) {
            const Task& task = tasks_[i];
            Job job{next_index_[i]++, now, now + task.deadline, sample_frame(task.hardness, frame_rng_[i]),
                    Stage::CoarsePending};
            current_[i] = job;
            log(now, EventKind::Release, {id});
        }
        next_release_[i] += tasks_[i].period;
    }

    SchedulerState state() const {
        SchedulerState s;
        s.next_release = next_release_;
        for (std::size_t i = 0; i < tasks_.size(); ++i) {
            if (!current_[i]) continue;
            const Job& job = *current_[i];
            if (job.stage == Stage::CoarsePending) s.coarse.push_back({i});
            if (job.stage == Stage::FinePending) s.fine.push_back({i, job.frame.level, job.deadline});
        }
        return s;
    }

    Member member(std::size_t task) const { return {task, current_[task]->index}; }

    void dispatch(Duration now) {
        const Duration start = now + opts_.scheduler_overhead;
        const Decision d = decide(state(), start, variant_, tasks_, tables_);
        if (std::holds_alternative<Idle>(d)) return;

        if (const auto* c = std::get_if<RunCoarse>(&d)) {
            plan_.push_back({EventKind::DispatchCoarse, {member(c->task)}});
        } else if (const auto* cb = std::get_if<RunCoarseBatch>(&d)) {
            Segment seg{EventKind::DispatchCoarseBatch, {}};
            for (auto t : cb->tasks) seg.members.push_back(member(t));
            plan_.push_back(std::move(seg));
        } else if (const auto* f = std::get_if<RunFine>(&d)) {
            plan_.push_back({EventKind::DispatchFine, {member(f->task)}});
        } else if (const auto* fb = std::get_if<RunFineBatchSequence>(&d)) {
            for (const auto& batch : fb->batches) {
                Segment seg{EventKind::DispatchFineBatch, {}};
                for (auto t : batch) seg.members.push_back(member(t));
                plan_.push_back(std::move(seg));
            }
        }
        for (const auto& seg : plan_) {
            const Stage to = (seg.kind == EventKind::DispatchCoarse || seg.kind == EventKind::DispatchCoarseBatch)
                                 ? Stage::CoarseRunning
                                 : Stage::FineRunning;
            for (const auto& m : seg.members) current_[m.task]->stage = to;
        }
        start_next(now, opts_.scheduler_overhead);
    }

    Duration sample(const Segment& seg) {
        const std::size_t n = seg.members.size();
        Duration mean;
        Duration wcet;
        switch (seg.kind) {
            case EventKind::DispatchCoarse: {
                const auto& p = tasks_[seg.members[0].task].coarse;
                mean = coarse_mean(p);
                wcet = coarse_wcet(p);
                break;
            }
            case EventKind::DispatchCoarseBatch: {
                Duration sum_mean, sum_wcet;
                for (const auto& m : seg.members) {
                    sum_mean += coarse_mean(tasks_[m.task].coarse);
                    sum_wcet += coarse_wcet(tasks_[m.task].coarse);
                }
                wcet = tables_.coarse_batch(n);
                mean = scale(wcet, sum_mean, sum_wcet);
                break;
            }
            case EventKind::DispatchFine: {
                const auto& m = seg.members[0];
                const auto level = current_[m.task]->frame.level;
                mean = fine_mean(tasks_[m.task].fine, level);
                wcet = fine_wcet(tasks_[m.task].fine, level);
                break;
            }
            default: {
                // Padded to the largest level, which sorts last.
                const auto& top = seg.members.back();
                const auto level = current_[top.task]->frame.level;
                wcet = tables_.fine_batch(level, n);
                mean = scale(wcet, fine_mean(tasks_[top.task].fine, level), fine_wcet(tasks_[top.task].fine, level));
                break;
            }
        }
        return sample_execution_time(mean, wcet, opts_.sampling, exec_rng_);
    }

    static Duration scale(Duration value, Duration num, Duration den) {
        if (den.count() == 0) return value;
        const double r = static_cast<double>(num.count()) / static_cast<double>(den.count());
        return Duration::us(std::llround(static_cast<double>(value.count()) * r));
    }

    void start_next(Duration now, Duration overhead) {
        running_ = std::move(plan_.front());
        plan_.pop_front();
        const Duration span = overhead + sample(*running_);
        busy_until_ = now + span;
        running_span_ = span;
        log(now, running_->kind, ids_of(running_->members), span);
    }

    void complete(Duration now) {
        Segment seg = std::move(*running_);
        running_.reset();
        log(now, EventKind::Complete, ids_of(seg.members), running_span_);
        const bool coarse = seg.kind == EventKind::DispatchCoarse || seg.kind == EventKind::DispatchCoarseBatch;
        for (const auto& m : seg.members) {
            auto& slot = current_[m.task];
            if (!slot || slot->index != m.job || slot->stage == Stage::Expired) continue;
            Job& job = *slot;
            if (!coarse) {
                job.stage = Stage::Done;
                continue;
            }
            if (!job.frame.hard) {
                job.stage = Stage::Done;
            } else if (now >= job.deadline) {
                log(now, EventKind::FineExpired, {tasks_[m.task].id});
                job.stage = Stage::Expired;
            } else {
                job.stage = Stage::FinePending;
            }
        }
    }

    std::span<const Task> tasks_;
    PolicyVariant variant_;
    const BatchWcetTables& tables_;
    const SimOptions& opts_;

    std::vector<std::optional<Job>> current_;
    std::vector<std::int64_t> next_index_;
    std::vector<Duration> next_release_;
    std::vector<std::mt19937_64> frame_rng_;
    std::mt19937_64 exec_rng_;

    std::deque<Segment> plan_;
    std::optional<Segment> running_;
    Duration busy_until_;
    Duration running_span_;

    Trace trace_;
};

}  // namespace

Trace run(std::span<const Task> tasks, PolicyVariant variant, const BatchWcetTables& tables,
          const SimOptions& options) {
    if (options.horizon <= Duration{}) throw std::invalid_argument("horizon must be positive");
    if (!options.release_offsets.empty() && options.release_offsets.size() != tasks.size())
        throw std::invalid_argument("release_offsets must have one entry per task");
    for (auto off : options.release_offsets)
        if (off < Duration{}) throw std::invalid_argument("release offsets must be non-negative");
    if (options.scheduler_overhead < Duration{}) throw std::invalid_argument("scheduler overhead must be non-negative");
    const auto violations = validate_tables(tasks, tables);
    if (!violations.empty())
        throw std::invalid_argument("invalid batch tables: " + violations.front().detail +
                                    (violations.size() > 1 ? " (+" + std::to_string(violations.size() - 1) + " more)" : ""));
    return Simulator(tasks, variant, tables, options).run();
}

}  // namespace npfp
