#include "npfp/presets.hpp"

namespace npfp {

namespace {

MeanWcet mw(double mean_ms, double wcet_ms) {
    return {Duration::from_ms(mean_ms), Duration::from_ms(wcet_ms)};
}

PlatformPreset make(std::string_view name, MeanWcet ps, MeanWcet at, MeanWcet dt, MeanWcet sps,
                    MeanWcet at_s, MeanWcet at_m, MeanWcet at_l) {
    PlatformPreset p{name, {}, {}};
    p.coarse = {kDefaultCoarsePatches, ps, at, dt};
    p.fine.selective_split = {sps, sps, sps};
    p.fine.attention = {at_s, at_m, at_l};
    return p;
}

}  // namespace

std::optional<PlatformPreset> platform_preset(std::string_view name) {
    if (name == "server")
        return make("server", mw(20, 30), mw(45, 49), mw(0.2, 0.3), mw(2, 3), mw(44, 46), mw(52, 55), mw(55, 58));
    if (name == "orin")
        return make("orin", mw(59, 70), mw(68, 69), mw(0.5, 0.7), mw(5, 8), mw(65, 78), mw(80, 96), mw(85, 107));
    if (name == "tx2")
        return make("tx2", mw(349, 408), mw(288, 368), mw(1.1, 1.5), mw(32, 38), mw(962, 1147), mw(1207, 1245),
                    mw(1441, 1478));
    return std::nullopt;
}

std::vector<std::string_view> platform_names() { return {"server", "orin", "tx2"}; }

SyntheticBatchRule default_batch_rule() { return {0.6, 0.4, 0}; }

}  // namespace npfp
