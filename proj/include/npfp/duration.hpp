#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace npfp {

// Integer microseconds. Configuration speaks milliseconds (up to three
// decimals), so 0.3 ms is represented exactly as 300 us.
class Duration {
public:
    constexpr Duration() = default;

    static constexpr Duration us(std::int64_t v) { return Duration(v); }
    static constexpr Duration ms(std::int64_t v) { return Duration(v * 1000); }
    static Duration from_ms(double ms);
    static constexpr Duration max() { return Duration(std::numeric_limits<std::int64_t>::max()); }

    constexpr std::int64_t count() const { return us_; }
    double to_ms() const { return static_cast<double>(us_) / 1000.0; }
    double to_seconds() const { return static_cast<double>(us_) / 1e6; }

    constexpr Duration operator+(Duration o) const { return Duration(us_ + o.us_); }
    constexpr Duration operator-(Duration o) const { return Duration(us_ - o.us_); }
    constexpr Duration operator*(std::int64_t k) const { return Duration(us_ * k); }
    constexpr Duration& operator+=(Duration o) { us_ += o.us_; return *this; }
    constexpr Duration& operator-=(Duration o) { us_ -= o.us_; return *this; }

    constexpr auto operator<=>(const Duration&) const = default;

private:
    constexpr explicit Duration(std::int64_t v) : us_(v) {}
    std::int64_t us_ = 0;
};

constexpr Duration operator*(std::int64_t k, Duration d) { return d * k; }

// ceil(a / b) for positive b
constexpr std::int64_t ceil_div(Duration a, Duration b) {
    return (a.count() + b.count() - 1) / b.count();
}

// "79.3" style rendering: shortest millisecond text without trailing zeros.
std::string format_ms(Duration d);

}  // namespace npfp
