#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "npfp/policy.hpp"

namespace npfp {

struct CommandOptions {
    std::string config_path;
    std::optional<std::string> policy;  // sweep: comma-separated list
    std::optional<std::uint64_t> seed;
    std::optional<std::string> seeds;   // "A..B", inclusive
    std::optional<double> horizon_ms;
    std::optional<std::string> sampling;
    std::string out_dir = ".";
    bool force = false;
    bool serial = false;
};

// Exit codes: 0 ok, 1 configuration or usage error, 2 not schedulable.
int cmd_analyze(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_dp_demo(std::ostream& out, std::ostream& err);

// Worked partition example: workloads (S, M, M, L) valued 1, 2, 2, 3 ms with
// C(w, 1) = w and C(w, n) = w * n / 2 for n > 1.
struct DpDemo {
    std::vector<std::optional<double>> dba_ms;        // DBA[1..4]
    std::vector<std::optional<double>> last_row_ms;   // k = 4, j = 4..1
    std::string partition;                            // "SM | ML"
    double total_ms = 0;
};
DpDemo dp_demo();

std::vector<std::uint64_t> parse_seed_range(const std::string& text);
std::vector<PolicyVariant> parse_policy_list(const std::string& text);

}  // namespace npfp
