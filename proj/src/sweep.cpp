#include "npfp/sweep.hpp"

#include <sstream>

#include "npfp/sim.hpp"
#include "npfp/trace_io.hpp"

namespace npfp {

Report simulate_report(const Config& cfg, std::uint64_t seed, PolicyVariant variant) {
    SimOptions opts = cfg.sim;
    opts.seed = seed;
    const Trace trace = run(cfg.tasks, variant, cfg.tables, opts);
    return compute_report(trace, cfg.tasks, opts.horizon, cfg.proxy);
}

std::vector<SweepRow> run_sweep_serial(const Config& cfg, std::span<const std::uint64_t> seeds,
                                       std::span<const PolicyVariant> policies) {
    std::vector<SweepRow> rows;
    rows.reserve(seeds.size() * policies.size());
    for (auto seed : seeds)
        for (auto v : policies) rows.push_back({seed, v, simulate_report(cfg, seed, v)});
    return rows;
}

std::vector<SweepRow> run_sweep_parallel(const Config& cfg, std::span<const std::uint64_t> seeds,
                                         std::span<const PolicyVariant> policies) {
    const std::size_t np = policies.size();
    const auto total = static_cast<std::int64_t>(seeds.size() * np);
    std::vector<SweepRow> rows(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < total; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const auto seed = seeds[idx / np];
        const auto v = policies[idx % np];
        rows[idx] = {seed, v, simulate_report(cfg, seed, v)};
    }
    return rows;
}

double mean_fine_completion_rate(const Report& r) {
    if (r.tasks.empty()) return 0.0;
    double sum = 0;
    for (const auto& t : r.tasks) sum += t.fine_completion_rate;
    return sum / static_cast<double>(r.tasks.size());
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "seed,policy,coarse_deadline_misses,critical_score,proxy_score,mean_fine_completion_rate";
    if (!rows.empty())
        for (const auto& t : rows.front().report.tasks)
            out << ",coarse_fps_" << t.task_id << ",fine_completion_rate_" << t.task_id;
    out << '\n';
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << row.seed << ',' << policy_name(row.variant) << ',' << r.coarse_deadline_misses << ','
            << fixed6(r.critical_score) << ',' << fixed6(r.proxy_score) << ',' << fixed6(mean_fine_completion_rate(r));
        for (const auto& t : r.tasks) out << ',' << fixed6(t.coarse_fps) << ',' << fixed6(t.fine_completion_rate);
        out << '\n';
    }
    return out.str();
}

}  // namespace npfp
