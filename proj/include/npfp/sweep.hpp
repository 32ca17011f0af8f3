#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "npfp/config.hpp"
#include "npfp/metrics.hpp"

namespace npfp {

struct SweepRow {
    std::uint64_t seed;
    PolicyVariant variant;
    Report report;
};

// One simulation of the configured task set with the given seed and policy.
Report simulate_report(const Config& cfg, std::uint64_t seed, PolicyVariant variant);

// Rows are ordered seed-major, then by position in `policies`.
std::vector<SweepRow> run_sweep_serial(const Config& cfg, std::span<const std::uint64_t> seeds,
                                       std::span<const PolicyVariant> policies);

// OpenMP fan-out over (seed, policy); same rows as the serial version.
std::vector<SweepRow> run_sweep_parallel(const Config& cfg, std::span<const std::uint64_t> seeds,
                                         std::span<const PolicyVariant> policies);

double mean_fine_completion_rate(const Report& r);

// seed,policy,coarse_deadline_misses,critical_score,proxy_score,mean_fine_completion_rate,
// then coarse_fps_<id>,fine_completion_rate_<id> per task.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace npfp
