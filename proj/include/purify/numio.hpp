#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace purify {

// Locale-independent, shortest round-trip formatting: parsing the result
// recovers the exact same double.
inline std::string fmt(double v) {
    if (v == 0.0) {
        v = 0.0;  // normalize -0
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Parses a full token as a double; `what` names the field in error messages.
inline double parse_double(std::string_view text, std::string_view what) {
    double v{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw std::invalid_argument(std::string(what) + ": cannot parse number from \"" +
                                    std::string(text) + "\"");
    }
    return v;
}

}  // namespace purify
