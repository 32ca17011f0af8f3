#include "npfp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "npfp/analysis.hpp"
#include "npfp/workload.hpp"

namespace npfp {

using json = nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(child(path, key), "unknown key");
    }
}

const json& need(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ConfigError(child(path, key), "missing required field");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::string str(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

Duration millis(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (v < 0) throw ConfigError(path, "must be non-negative");
    const double scaled = v * 1000.0;
    if (std::abs(scaled - std::round(scaled)) > 1e-6)
        throw ConfigError(path, "at most three decimal places of milliseconds are representable");
    return Duration::from_ms(v);
}

MeanWcet mean_wcet(const json& j, const std::string& path) {
    only_keys(j, path, {"mean", "wcet"});
    MeanWcet m{millis(need(j, path, "mean"), child(path, "mean")), millis(need(j, path, "wcet"), child(path, "wcet"))};
    if (m.mean > m.wcet) throw ConfigError(path, "mean exceeds wcet");
    return m;
}

std::array<MeanWcet, 3> per_level(const json& j, const std::string& path) {
    only_keys(j, path, {"S", "M", "L"});
    return {mean_wcet(need(j, path, "S"), child(path, "S")), mean_wcet(need(j, path, "M"), child(path, "M")),
            mean_wcet(need(j, path, "L"), child(path, "L"))};
}

CoarseProfile coarse_profile(const json& j, const std::string& path) {
    only_keys(j, path, {"patch_count", "ps", "at", "dt"});
    CoarseProfile p;
    p.patch_count = j.contains("patch_count") ? static_cast<int>(integer(j["patch_count"], child(path, "patch_count")))
                                              : kDefaultCoarsePatches;
    if (p.patch_count <= 0) throw ConfigError(child(path, "patch_count"), "must be positive");
    p.patch_split = mean_wcet(need(j, path, "ps"), child(path, "ps"));
    p.attention = mean_wcet(need(j, path, "at"), child(path, "at"));
    p.hardness = mean_wcet(need(j, path, "dt"), child(path, "dt"));
    return p;
}

FineProfile fine_profile(const json& j, const std::string& path) {
    only_keys(j, path, {"sps", "at"});
    FineProfile p;
    const json& sps = need(j, path, "sps");
    const std::string sps_path = child(path, "sps");
    if (sps.is_object() && sps.contains("mean")) {
        const auto m = mean_wcet(sps, sps_path);
        p.selective_split = {m, m, m};
    } else {
        p.selective_split = per_level(sps, sps_path);
    }
    p.attention = per_level(need(j, path, "at"), child(path, "at"));
    return p;
}

HardnessModel hardness(const json& j, const std::string& path) {
    only_keys(j, path, {"p_hard", "level_dist"});
    HardnessModel h;
    if (j.contains("p_hard")) h.p_hard = number(j["p_hard"], child(path, "p_hard"));
    if (h.p_hard < 0 || h.p_hard > 1) throw ConfigError(child(path, "p_hard"), "must lie in [0, 1]");
    if (j.contains("level_dist")) {
        const auto& d = j["level_dist"];
        const auto dpath = child(path, "level_dist");
        if (!d.is_array() || d.size() != 3) throw ConfigError(dpath, "expected [p_S, p_M, p_L]");
        double sum = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            h.level_dist[i] = number(d[i], item(dpath, i));
            if (h.level_dist[i] < 0) throw ConfigError(item(dpath, i), "must be non-negative");
            sum += h.level_dist[i];
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(dpath, "must sum to 1");
    }
    return h;
}

PlatformPreset preset_named(const std::string& name, const std::string& path) {
    auto p = platform_preset(name);
    if (!p) throw ConfigError(path, "unknown platform '" + name + "' (server, orin, tx2)");
    return *p;
}

std::vector<Task> explicit_tasks(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of tasks");
    std::vector<Task> tasks;
    std::size_t with_priority = 0;
    std::set<int> ids;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = item(path, i);
        const json& tj = j[i];
        only_keys(tj, p, {"id", "period_ms", "priority", "platform", "coarse", "fine", "hardness"});
        Task t;
        t.id = tj.contains("id") ? static_cast<int>(integer(tj["id"], child(p, "id"))) : static_cast<int>(i) + 1;
        if (!ids.insert(t.id).second) throw ConfigError(child(p, "id"), "duplicate task id");
        t.period = millis(need(tj, p, "period_ms"), child(p, "period_ms"));
        if (t.period <= Duration{}) throw ConfigError(child(p, "period_ms"), "must be positive");
        t.deadline = t.period;
        if (tj.contains("priority")) {
            t.priority = static_cast<int>(integer(tj["priority"], child(p, "priority")));
            ++with_priority;
        }
        if (tj.contains("platform")) {
            if (tj.contains("coarse") || tj.contains("fine"))
                throw ConfigError(p, "give either platform or explicit coarse/fine profiles");
            const auto preset = preset_named(str(tj["platform"], child(p, "platform")), child(p, "platform"));
            t.coarse = preset.coarse;
            t.fine = preset.fine;
        } else {
            t.coarse = coarse_profile(need(tj, p, "coarse"), child(p, "coarse"));
            t.fine = fine_profile(need(tj, p, "fine"), child(p, "fine"));
        }
        if (tj.contains("hardness")) t.hardness = hardness(tj["hardness"], child(p, "hardness"));
        tasks.push_back(t);
    }
    if (with_priority == 0) return rm_assign(std::move(tasks));
    if (with_priority != tasks.size()) throw ConfigError(path, "give priorities for all tasks or for none");
    return tasks;
}

std::vector<Task> generated_tasks(const json& j, const std::string& path) {
    only_keys(j, path, {"count", "periods_ms", "period_range_ms", "platform", "hardness", "seed"});
    TaskSetSpec spec;
    spec.platform = str(need(j, path, "platform"), child(path, "platform"));
    preset_named(spec.platform, child(path, "platform"));
    if (j.contains("periods_ms")) {
        const auto& ps = j["periods_ms"];
        if (!ps.is_array() || ps.empty()) throw ConfigError(child(path, "periods_ms"), "expected a non-empty array");
        for (std::size_t i = 0; i < ps.size(); ++i)
            spec.periods_ms.push_back(millis(ps[i], item(child(path, "periods_ms"), i)).to_ms());
    }
    if (j.contains("period_range_ms")) {
        const auto& r = j["period_range_ms"];
        const auto rp = child(path, "period_range_ms");
        if (!r.is_array() || r.size() != 2) throw ConfigError(rp, "expected [lo, hi]");
        spec.period_range_ms = std::make_pair(number(r[0], item(rp, 0)), number(r[1], item(rp, 1)));
    }
    spec.count = j.contains("count") ? static_cast<std::size_t>(integer(j["count"], child(path, "count")))
                                     : spec.periods_ms.size();
    if (j.contains("hardness")) spec.hardness = hardness(j["hardness"], child(path, "hardness"));
    const std::uint64_t seed = j.contains("seed") ? static_cast<std::uint64_t>(integer(j["seed"], child(path, "seed"))) : 0;
    std::mt19937_64 rng(seed);
    try {
        return generate_taskset(spec, rng);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

SyntheticBatchRule batch_rule(const json& j, const std::string& path) {
    only_keys(j, path, {"coarse_marginal", "fine_marginal", "n_max"});
    SyntheticBatchRule r = default_batch_rule();
    if (j.contains("coarse_marginal")) r.coarse_marginal = number(j["coarse_marginal"], child(path, "coarse_marginal"));
    if (j.contains("fine_marginal")) r.fine_marginal = number(j["fine_marginal"], child(path, "fine_marginal"));
    if (j.contains("n_max")) {
        const auto n = integer(j["n_max"], child(path, "n_max"));
        if (n < 0) throw ConfigError(child(path, "n_max"), "must be non-negative");
        r.n_max = static_cast<std::size_t>(n);
    }
    if (r.coarse_marginal < 0 || r.coarse_marginal > 1) throw ConfigError(child(path, "coarse_marginal"), "must lie in [0, 1]");
    if (r.fine_marginal < 0 || r.fine_marginal > 1) throw ConfigError(child(path, "fine_marginal"), "must lie in [0, 1]");
    return r;
}

std::vector<Duration> duration_row(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of milliseconds");
    std::vector<Duration> row;
    for (std::size_t i = 0; i < j.size(); ++i) row.push_back(millis(j[i], item(path, i)));
    return row;
}

BatchWcetTables batch_tables(const json& j, const std::string& path, const std::vector<Task>& tasks) {
    only_keys(j, path, {"preset", "rule", "coarse_ms", "fine_ms", "synthetic"});
    if (j.contains("preset")) {
        if (j.size() != 1) throw ConfigError(path, "preset excludes other fields");
        const auto name = str(j["preset"], child(path, "preset"));
        if (name != "default") throw ConfigError(child(path, "preset"), "unknown batch table preset '" + name + "'");
        return synthesize_batch_tables(tasks, default_batch_rule());
    }
    if (j.contains("rule")) {
        if (j.contains("coarse_ms") || j.contains("fine_ms")) throw ConfigError(path, "rule excludes explicit tables");
        return synthesize_batch_tables(tasks, batch_rule(j["rule"], child(path, "rule")));
    }
    BatchWcetTables t;
    t.coarse = duration_row(need(j, path, "coarse_ms"), child(path, "coarse_ms"));
    const json& fine = need(j, path, "fine_ms");
    const auto fpath = child(path, "fine_ms");
    only_keys(fine, fpath, {"S", "M", "L"});
    for (auto w : kFineLevels) {
        const std::string key(level_name(w));
        t.fine[level_index(w)] = duration_row(need(fine, fpath, key.c_str()), child(fpath, key));
    }
    if (j.contains("synthetic")) {
        if (!j["synthetic"].is_boolean()) throw ConfigError(child(path, "synthetic"), "expected a boolean");
        t.synthetic = j["synthetic"].get<bool>();
    }
    return t;
}

SimOptions sim_options(const json& j, const std::string& path) {
    only_keys(j, path, {"horizon_ms", "seed", "sampling", "scheduler_overhead_us"});
    SimOptions o;
    o.horizon = Duration::ms(60000);
    if (j.contains("horizon_ms")) o.horizon = millis(j["horizon_ms"], child(path, "horizon_ms"));
    if (o.horizon <= Duration{}) throw ConfigError(child(path, "horizon_ms"), "must be positive");
    if (j.contains("seed")) {
        const auto s = integer(j["seed"], child(path, "seed"));
        if (s < 0) throw ConfigError(child(path, "seed"), "must be non-negative");
        o.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("sampling")) {
        const auto s = str(j["sampling"], child(path, "sampling"));
        if (s == "wcet")
            o.sampling = SamplingMode::Wcet;
        else if (s == "mean-centered")
            o.sampling = SamplingMode::MeanCentered;
        else
            throw ConfigError(child(path, "sampling"), "expected wcet or mean-centered");
    }
    if (j.contains("scheduler_overhead_us")) {
        const auto v = integer(j["scheduler_overhead_us"], child(path, "scheduler_overhead_us"));
        if (v < 0) throw ConfigError(child(path, "scheduler_overhead_us"), "must be non-negative");
        o.scheduler_overhead = Duration::us(v);
    }
    return o;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line:column.
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
    }
}

}  // namespace

Config parse_config(const std::string& text) {
    const json root = parse_json(text);
    only_keys(root, "", {"tasks", "taskset", "batch_tables", "policy", "sim", "proxy", "description"});

    Config cfg;
    if (root.contains("tasks") == root.contains("taskset"))
        throw ConfigError("<root>", "give exactly one of tasks or taskset");
    cfg.tasks = root.contains("tasks") ? explicit_tasks(root["tasks"], "tasks") : generated_tasks(root["taskset"], "taskset");

    cfg.tables = root.contains("batch_tables") ? batch_tables(root["batch_tables"], "batch_tables", cfg.tasks)
                                               : synthesize_batch_tables(cfg.tasks, default_batch_rule());
    if (root.contains("policy")) {
        const auto name = str(root["policy"], "policy");
        const auto v = parse_policy(name);
        if (!v) throw ConfigError("policy", "unknown policy '" + name + "' (c, cf, cbf, cfb, cbfb)");
        cfg.policy = *v;
    }
    cfg.sim = sim_options(root.contains("sim") ? root["sim"] : json::object(), "sim");
    if (root.contains("proxy")) {
        only_keys(root["proxy"], "proxy", {"base_credit"});
        if (root["proxy"].contains("base_credit")) {
            cfg.proxy.base_credit = number(root["proxy"]["base_credit"], "proxy.base_credit");
            if (cfg.proxy.base_credit < 0 || cfg.proxy.base_credit > 1)
                throw ConfigError("proxy.base_credit", "must lie in [0, 1]");
        }
    }
    if (const auto v = validate_tables(cfg.tasks, cfg.tables); !v.empty())
        throw ConfigError("batch_tables", v.front().detail);
    return cfg;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Config load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

PlatformFile parse_platform_file(const std::string& text) {
    const json root = parse_json(text);
    only_keys(root, "", {"platform", "units", "coarse", "fine", "source"});
    if (root.contains("units") && str(root["units"], "units") != "ms") throw ConfigError("units", "only ms is supported");
    PlatformFile p;
    p.platform = str(need(root, "", "platform"), "platform");
    p.coarse = coarse_profile(need(root, "", "coarse"), "coarse");
    p.fine = fine_profile(need(root, "", "fine"), "fine");
    return p;
}

SyntheticBatchRule parse_batch_rule_file(const std::string& text) {
    const json root = parse_json(text);
    only_keys(root, "", {"synthetic", "note", "rule"});
    if (!root.contains("synthetic") || root["synthetic"] != true)
        throw ConfigError("synthetic", "synthetic batch tables must be flagged \"synthetic\": true");
    return batch_rule(need(root, "", "rule"), "rule");
}

}  // namespace npfp
