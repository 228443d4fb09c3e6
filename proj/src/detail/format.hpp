#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace superfid::detail {

/// Shortest representation that round-trips.
inline std::string num(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

/// Fixed significant digits, for human-readable reports.
inline std::string num(double x, int digits) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
    return std::string(buf, r.ptr);
}

inline std::string num(std::uint64_t x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

}  // namespace superfid::detail
