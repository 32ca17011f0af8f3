#include "npfp/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "npfp/analysis.hpp"
#include "npfp/config.hpp"
#include "npfp/sim.hpp"
#include "npfp/sweep.hpp"
#include "npfp/trace_io.hpp"

namespace npfp {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

Config load_with_overrides(const CommandOptions& opts) {
    if (opts.config_path.empty()) throw UsageError("--config is required");
    Config cfg = load_config(opts.config_path);
    if (opts.policy) {
        const auto v = parse_policy(*opts.policy);
        if (!v) throw UsageError("unknown policy '" + *opts.policy + "'");
        cfg.policy = *v;
    }
    if (opts.seed) cfg.sim.seed = *opts.seed;
    if (opts.horizon_ms) {
        if (!(*opts.horizon_ms > 0)) throw UsageError("--horizon-ms must be positive");
        cfg.sim.horizon = Duration::from_ms(*opts.horizon_ms);
    }
    if (opts.sampling) {
        if (*opts.sampling == "wcet")
            cfg.sim.sampling = SamplingMode::Wcet;
        else if (*opts.sampling == "mean-centered")
            cfg.sim.sampling = SamplingMode::MeanCentered;
        else
            throw UsageError("--sampling expects wcet or mean-centered");
    }
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string analysis_json(const Config& cfg, const RtaResult& rta) {
    ojson j;
    j["schedulable"] = rta.schedulable;
    ojson tasks = ojson::array();
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
        const Task& t = cfg.tasks[i];
        const auto& r = rta.tasks[i];
        ojson tj;
        tj["id"] = t.id;
        tj["priority"] = t.priority;
        tj["period_ms"] = t.period.to_ms();
        tj["coarse_wcet_ms"] = coarse_wcet(t.coarse).to_ms();
        tj["blocking_ms"] = blocking(t, cfg.tasks).to_ms();
        tj["converged"] = r.response.has_value();
        if (r.response) {
            tj["response_time_ms"] = r.response->to_ms();
            tj["response_time_us"] = r.response->count();
        } else {
            tj["response_time_ms"] = nullptr;
            tj["response_time_us"] = nullptr;
        }
        tasks.push_back(std::move(tj));
    }
    j["tasks"] = std::move(tasks);
    return j.dump(2) + "\n";
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error at " << e.what() << '\n';
        return 1;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

bool refuse_unschedulable(const Config& cfg, const CommandOptions& opts, std::ostream& err) {
    if (opts.force || schedulable(cfg.tasks).schedulable) return false;
    err << "task set fails the response-time test; rerun with --force to simulate anyway\n";
    return true;
}

const std::vector<WorkloadLevel> kDemoWorkloads = {WorkloadLevel::S, WorkloadLevel::M, WorkloadLevel::M,
                                                   WorkloadLevel::L};

// Level value v ms: C(v, 1) = v, C(v, n) = v * n / 2.
BatchWcetTables demo_tables() {
    BatchWcetTables tables;
    tables.synthetic = true;
    for (auto level : kFineLevels) {
        const auto unit = Duration::ms(static_cast<std::int64_t>(level));
        for (std::int64_t n = 1; n <= 4; ++n)
            tables.fine[level_index(level)].push_back(n == 1 ? unit : Duration::us(unit.count() * n / 2));
    }
    tables.coarse = {Duration::ms(1)};
    return tables;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const auto v = std::stoull(text, &used);
            if (used != text.size()) throw UsageError("bad seed '" + text + "'");
            return {v};
        }
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        const auto lo = std::stoull(a, &used);
        if (used != a.size()) throw UsageError("bad seed range '" + text + "'");
        const auto hi = std::stoull(b, &used);
        if (used != b.size() || hi < lo) throw UsageError("bad seed range '" + text + "'");
        std::vector<std::uint64_t> out;
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
        return out;
    } catch (const std::logic_error&) {
        throw UsageError("bad seed range '" + text + "'");
    }
}

std::vector<PolicyVariant> parse_policy_list(const std::string& text) {
    std::vector<PolicyVariant> out;
    std::stringstream ss(text);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        const auto v = parse_policy(name);
        if (!v) throw UsageError("unknown policy '" + name + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw UsageError("empty policy list");
    return out;
}

int cmd_analyze(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config cfg = load_with_overrides(opts);
        const RtaResult rta = schedulable(cfg.tasks);
        out << analysis_json(cfg, rta);
        return rta.schedulable ? 0 : 2;
    });
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config cfg = load_with_overrides(opts);
        if (refuse_unschedulable(cfg, opts, err)) return 2;
        const Trace trace = run(cfg.tasks, cfg.policy, cfg.tables, cfg.sim);
        const Report report = compute_report(trace, cfg.tasks, cfg.sim.horizon, cfg.proxy);

        const fs::path dir(opts.out_dir);
        fs::create_directories(dir);
        write_file(dir / "trace.csv", trace_to_csv(trace));
        write_file(dir / "trace.json", trace_to_json(trace));
        write_file(dir / "report.json", report_to_json(report));
        out << policy_label(cfg.policy) << ": " << trace.events.size() << " events, "
            << report.coarse_deadline_misses << " coarse deadline misses, proxy_score "
            << fixed6(report.proxy_score) << " -> " << dir.string() << '\n';
        return 0;
    });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Config cfg = load_with_overrides(CommandOptions{opts.config_path, std::nullopt, opts.seed, std::nullopt,
                                                              opts.horizon_ms, opts.sampling, opts.out_dir, opts.force,
                                                              opts.serial});
        const auto policies = parse_policy_list(opts.policy.value_or("c,cfb,cbf,cbfb"));
        const auto seeds = opts.seeds ? parse_seed_range(*opts.seeds) : std::vector<std::uint64_t>{cfg.sim.seed};
        if (refuse_unschedulable(cfg, opts, err)) return 2;

        const auto rows = opts.serial ? run_sweep_serial(cfg, seeds, policies) : run_sweep_parallel(cfg, seeds, policies);
        const fs::path dir(opts.out_dir);
        fs::create_directories(dir);
        write_file(dir / "sweep.csv", sweep_csv(rows));
        out << rows.size() << " runs -> " << (dir / "sweep.csv").string() << '\n';
        return 0;
    });
}

DpDemo dp_demo() {
    const auto& w = kDemoWorkloads;
    const BatchWcetTables tables = demo_tables();
    const std::vector<Duration> deadlines(w.size(), Duration::max());
    const auto table = dba_table(w, Duration{}, deadlines, Duration::max(), tables);

    auto ms = [](const std::optional<Duration>& d) -> std::optional<double> {
        if (!d) return std::nullopt;
        return d->to_ms();
    };
    DpDemo demo;
    for (std::size_t k = 1; k <= w.size(); ++k) demo.dba_ms.push_back(ms(table.dba[k]));
    for (const auto& cell : table.cells)
        if (cell.k == w.size()) demo.last_row_ms.push_back(ms(cell.cost));
    const auto parts = dba_partition(w, Duration{}, deadlines, Duration::max(), tables);
    for (std::size_t b = 0; b < parts.size(); ++b) {
        if (b) demo.partition += " | ";
        for (std::size_t i = parts[b].first; i < parts[b].second; ++i) demo.partition += level_name(w[i]);
    }
    demo.total_ms = table.dba.back() ? table.dba.back()->to_ms() : -1;
    return demo;
}

int cmd_dp_demo(std::ostream& out, std::ostream& err) {
    const auto& w = kDemoWorkloads;
    const BatchWcetTables tables = demo_tables();
    const std::vector<Duration> deadlines(w.size(), Duration::max());
    const auto table = dba_table(w, Duration{}, deadlines, Duration::max(), tables);

    auto cell_text = [](const std::optional<Duration>& d) { return d ? format_ms(*d) : std::string("inf"); };
    out << "workloads: S M M L (S=1, M=2, L=3)\n";
    out << "C_batch(w, 1) = w, C_batch(w, n) = w*n/2 for n > 1\n\n";
    out << "step k  last group  DBA[j-1]  cost\n";
    for (const auto& c : table.cells) {
        char line[96];
        std::snprintf(line, sizeof line, "%-7zu %zu-%-9zu %-9s %s\n", c.k, c.j, c.k, cell_text(c.prev).c_str(),
                      cell_text(c.cost).c_str());
        out << line;
    }
    out << "\nDBA = (";
    for (std::size_t k = 1; k < table.dba.size(); ++k) out << (k > 1 ? ", " : "") << cell_text(table.dba[k]);
    out << ")\n";

    const DpDemo demo = dp_demo();
    out << "partition: " << demo.partition << "\n";
    out << "total: " << cell_text(table.dba.back()) << "\n";

    const bool ok = demo.dba_ms == std::vector<std::optional<double>>{1.0, 2.0, 3.0, 5.0} &&
                    demo.last_row_ms == std::vector<std::optional<double>>{6.0, 5.0, 5.5, 6.0} &&
                    demo.partition == "SM | ML" && demo.total_ms == 5.0;
    if (!ok) {
        err << "self-check failed: expected DBA = (1, 2, 3, 5), k=4 costs (6, 5, 5.5, 6), partition SM | ML\n";
        return 1;
    }
    out << "self-check: ok\n";
    return 0;
}

}  // namespace npfp
