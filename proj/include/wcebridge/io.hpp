#pragma once

// Byte-stable text output helpers.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

namespace wce {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest round-trip decimal form of v ('.' separator, locale independent).
inline void append_double(std::string& out, double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        out += "nan";
    else
        out.append(buf, ptr);
}

[[nodiscard]] inline std::string format_double(double v)
{
    std::string s;
    append_double(s, v);
    return s;
}

/// 64-bit FNV-1a.
[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

[[nodiscard]] inline std::string hex64(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4)
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

} // namespace wce
