#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "npfp/model.hpp"

namespace npfp {

// Measured per-component execution times (mean and WCET) for one platform.
struct PlatformPreset {
    std::string_view name;
    CoarseProfile coarse;
    FineProfile fine;
};

// "server", "orin", "tx2". Transcribed in tables/<name>.json as well.
std::optional<PlatformPreset> platform_preset(std::string_view name);
std::vector<std::string_view> platform_names();

// Patch count used for p^S in every preset. The measurement tables do not
// record it, so it only serves the same-granularity consistency check.
inline constexpr int kDefaultCoarsePatches = 795;

// Synthetic batching rule shipped as tables/batch_default.json.
SyntheticBatchRule default_batch_rule();

}  // namespace npfp
