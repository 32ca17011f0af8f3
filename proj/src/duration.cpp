#include "npfp/duration.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace npfp {

Duration Duration::from_ms(double ms) {
    if (!std::isfinite(ms))
        throw std::invalid_argument("duration is not finite");
    return Duration(std::llround(ms * 1000.0));
}

std::string format_ms(Duration d) {
    const std::int64_t v = d.count();
    const std::int64_t whole = v / 1000;
    std::int64_t frac = std::llabs(v % 1000);
    std::string out = (v < 0 && whole == 0) ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac));
        std::string f(buf);
        while (f.back() == '0') f.pop_back();
        out += f;
    }
    return out;
}

}  // namespace npfp
