#pragma once

#include <string>

#include "npfp/metrics.hpp"
#include "npfp/sim.hpp"

namespace npfp {

// time_us,kind,task_ids,batch_size,duration_us with ';'-joined task ids.
std::string trace_to_csv(const Trace& trace);
std::string trace_to_json(const Trace& trace);
std::string report_to_json(const Report& report);

// Fixed six-decimal rendering used by every CSV writer.
std::string fixed6(double v);

}  // namespace npfp
