#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "npfp/metrics.hpp"
#include "npfp/model.hpp"
#include "npfp/policy.hpp"
#include "npfp/presets.hpp"
#include "npfp/sim.hpp"

namespace npfp {

// Raised for malformed or schema-violating configuration. `where` names the
// offending field ("sim.horizon_ms") or the line:column of a JSON syntax error.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

struct Config {
    std::vector<Task> tasks;
    BatchWcetTables tables;
    PolicyVariant policy = variants::BC_BF;
    SimOptions sim;
    ProxyParams proxy;
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

// A platform measurement file (tables/server.json etc).
struct PlatformFile {
    std::string platform;
    CoarseProfile coarse;
    FineProfile fine;
};
PlatformFile parse_platform_file(const std::string& text);
// tables/batch_default.json
SyntheticBatchRule parse_batch_rule_file(const std::string& text);

std::string read_file(const std::filesystem::path& path);

}  // namespace npfp
