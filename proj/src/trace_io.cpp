#include "npfp/trace_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace npfp {

using ojson = nlohmann::ordered_json;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "time_us,kind,task_ids,batch_size,duration_us\n";
    for (const auto& e : trace.events) {
        out << e.time.count() << ',' << event_name(e.kind) << ',';
        for (std::size_t i = 0; i < e.task_ids.size(); ++i) out << (i ? ";" : "") << e.task_ids[i];
        out << ',' << e.batch_size() << ',' << e.duration.count() << '\n';
    }
    return out.str();
}

std::string trace_to_json(const Trace& trace) {
    ojson j;
    j["policy"] = policy_name(trace.variant);
    j["seed"] = trace.seed;
    j["sampling"] = sampling_name(trace.sampling);
    j["horizon_us"] = trace.horizon.count();
    ojson events = ojson::array();
    for (const auto& e : trace.events) {
        ojson ev;
        ev["time_us"] = e.time.count();
        ev["kind"] = event_name(e.kind);
        ev["task_ids"] = e.task_ids;
        ev["batch_size"] = e.batch_size();
        ev["duration_us"] = e.duration.count();
        events.push_back(std::move(ev));
    }
    j["events"] = std::move(events);
    return j.dump(1) + "\n";
}

std::string report_to_json(const Report& report) {
    ojson j;
    j["policy"] = policy_name(report.variant);
    j["policy_label"] = policy_label(report.variant);
    j["seed"] = report.seed;
    j["sampling"] = sampling_name(report.sampling);
    j["horizon_us"] = report.horizon.count();
    j["critical_score"] = report.critical_score;
    j["proxy_score"] = report.proxy_score;
    j["coarse_deadline_misses"] = report.coarse_deadline_misses;
    ojson tasks = ojson::array();
    for (const auto& t : report.tasks) {
        ojson tj;
        tj["id"] = t.task_id;
        tj["released"] = t.released;
        tj["coarse_completed"] = t.coarse_completed;
        tj["coarse_fps"] = t.coarse_fps;
        tj["coarse_deadline_misses"] = t.coarse_deadline_misses;
        tj["hard_frames"] = t.hard_frames;
        tj["fine_completed"] = t.fine_completed;
        tj["fine_completion_rate"] = t.fine_completion_rate;
        tasks.push_back(std::move(tj));
    }
    j["tasks"] = std::move(tasks);
    return j.dump(2) + "\n";
}

}  // namespace npfp
