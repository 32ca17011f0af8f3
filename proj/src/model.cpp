#include "npfp/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace npfp {

std::string_view level_name(WorkloadLevel w) {
    switch (w) {
        case WorkloadLevel::Zero: return "0";
        case WorkloadLevel::S: return "S";
        case WorkloadLevel::M: return "M";
        case WorkloadLevel::L: return "L";
    }
    return "?";
}

Duration coarse_wcet(const CoarseProfile& p) {
    return p.patch_split.wcet + p.attention.wcet + p.hardness.wcet;
}

Duration coarse_mean(const CoarseProfile& p) {
    return p.patch_split.mean + p.attention.mean + p.hardness.mean;
}

Duration fine_wcet(const FineProfile& p, WorkloadLevel level) {
    if (level == WorkloadLevel::Zero) return {};
    const auto i = level_index(level);
    return p.selective_split[i].wcet + p.attention[i].wcet;
}

Duration fine_mean(const FineProfile& p, WorkloadLevel level) {
    if (level == WorkloadLevel::Zero) return {};
    const auto i = level_index(level);
    return p.selective_split[i].mean + p.attention[i].mean;
}

namespace {

Duration scaled(Duration base, double marginal, std::size_t n) {
    const double extra = marginal * static_cast<double>(n - 1) * static_cast<double>(base.count());
    return base + Duration::us(std::llround(extra));
}

std::string at_n(std::string_view what, std::size_t n) {
    return std::string(what) + "(" + std::to_string(n) + ")";
}

}  // namespace

BatchWcetTables synthesize_batch_tables(std::span<const Task> tasks, const SyntheticBatchRule& rule) {
    if (tasks.empty())
        throw std::invalid_argument("cannot synthesize batch tables for an empty task set");
    const std::size_t n_max = rule.n_max == 0 ? tasks.size() : rule.n_max;
    const Task& ref = tasks.front();

    BatchWcetTables t;
    t.synthetic = true;
    const Duration c1 = coarse_wcet(ref.coarse);
    for (std::size_t n = 1; n <= n_max; ++n) t.coarse.push_back(scaled(c1, rule.coarse_marginal, n));
    for (auto w : kFineLevels) {
        const Duration f1 = fine_wcet(ref.fine, w);
        for (std::size_t n = 1; n <= n_max; ++n)
            t.fine[level_index(w)].push_back(scaled(f1, rule.fine_marginal, n));
    }
    return t;
}

std::vector<Violation> validate_tables(std::span<const Task> tasks, const BatchWcetTables& tables) {
    std::vector<Violation> out;
    auto report = [&](ViolationKind k, std::string d) { out.push_back({k, std::move(d)}); };

    // Task-level invariants.
    std::set<int> priorities;
    for (const auto& task : tasks) {
        const std::string who = "task " + std::to_string(task.id);
        if (task.period <= Duration{}) report(ViolationKind::NonPositivePeriod, who);
        if (task.deadline != task.period) report(ViolationKind::DeadlineNotPeriod, who);
        if (!priorities.insert(task.priority).second)
            report(ViolationKind::DuplicatePriority, who + " priority " + std::to_string(task.priority));
        if (task.coarse.patch_count != tasks.front().coarse.patch_count)
            report(ViolationKind::PatchCountMismatch, who);

        auto check_component = [&](const MeanWcet& c, std::string_view name) {
            if (c.mean < Duration{} || c.wcet < Duration{})
                report(ViolationKind::NegativeDuration, who + " " + std::string(name));
            if (c.mean > c.wcet) report(ViolationKind::MeanAboveWcet, who + " " + std::string(name));
        };
        check_component(task.coarse.patch_split, "c_ps");
        check_component(task.coarse.attention, "c_at(pS)");
        check_component(task.coarse.hardness, "c_dt");
        for (auto w : kFineLevels) {
            check_component(task.fine.selective_split[level_index(w)], "c_sps(" + std::string(level_name(w)) + ")");
            check_component(task.fine.attention[level_index(w)], "c_at(" + std::string(level_name(w)) + ")");
        }
        for (std::size_t i = 1; i < 3; ++i) {
            const auto& lo = task.fine.attention[i - 1];
            const auto& hi = task.fine.attention[i];
            if (lo.mean > hi.mean || lo.wcet > hi.wcet)
                report(ViolationKind::ProfileLevelOrder,
                       who + " c_at(" + std::string(level_name(kFineLevels[i - 1])) + ") > c_at(" +
                           std::string(level_name(kFineLevels[i])) + ")");
        }

        const auto& h = task.hardness;
        double sum = 0;
        bool negative = false;
        for (double p : h.level_dist) {
            sum += p;
            negative = negative || p < 0;
        }
        if (!(h.p_hard >= 0 && h.p_hard <= 1) || negative || std::abs(sum - 1.0) > 1e-9)
            report(ViolationKind::BadHardness, who);
    }

    // Coarse table.
    if (tables.coarse.empty()) {
        report(ViolationKind::EmptyTable, "coarse");
    } else {
        const Duration c1 = tables.coarse_batch(1);
        for (const auto& task : tasks)
            if (coarse_wcet(task.coarse) != c1)
                report(ViolationKind::CoarseSizeOne,
                       "coarse(1)=" + format_ms(c1) + " ms but task " + std::to_string(task.id) +
                           " C^S=" + format_ms(coarse_wcet(task.coarse)) + " ms");
        for (std::size_t n = 2; n <= tables.coarse_max(); ++n)
            if (tables.coarse_batch(n) > c1 * static_cast<std::int64_t>(n))
                report(ViolationKind::CoarseBatching, at_n("coarse", n) + "=" + format_ms(tables.coarse_batch(n)) +
                                                          " ms > " + std::to_string(n) + "*coarse(1)");
        for (auto d : tables.coarse)
            if (d < Duration{}) report(ViolationKind::NegativeDuration, "coarse table");
    }

    // Fine table.
    for (auto w : kFineLevels) {
        const auto& row = tables.fine[level_index(w)];
        const std::string name = "fine(" + std::string(level_name(w)) + ")";
        if (row.empty()) {
            report(ViolationKind::EmptyTable, name);
            continue;
        }
        const Duration f1 = row.front();
        for (const auto& task : tasks)
            if (fine_wcet(task.fine, w) != f1)
                report(ViolationKind::FineSizeOne, name + "(1)=" + format_ms(f1) + " ms but task " +
                                                       std::to_string(task.id) + " C^F=" +
                                                       format_ms(fine_wcet(task.fine, w)) + " ms");
        for (std::size_t n = 2; n <= row.size(); ++n) {
            if (row[n - 1] > f1 * static_cast<std::int64_t>(n))
                report(ViolationKind::FineBatching, at_n(name, n) + " > " + std::to_string(n) + "*" + name + "(1)");
            if (row[n - 1] < row[n - 2]) report(ViolationKind::FineSizeOrder, at_n(name, n) + " < " + at_n(name, n - 1));
        }
        for (auto d : row)
            if (d < Duration{}) report(ViolationKind::NegativeDuration, name);
    }
    for (std::size_t i = 1; i < 3; ++i) {
        const auto& lo = tables.fine[i - 1];
        const auto& hi = tables.fine[i];
        const std::size_t common = std::min(lo.size(), hi.size());
        for (std::size_t n = 1; n <= common; ++n)
            if (lo[n - 1] > hi[n - 1])
                report(ViolationKind::FineLevelOrder,
                       "fine(" + std::string(level_name(kFineLevels[i - 1])) + "," + std::to_string(n) + ") > fine(" +
                           std::string(level_name(kFineLevels[i])) + "," + std::to_string(n) + ")");
    }
    return out;
}

}  // namespace npfp
