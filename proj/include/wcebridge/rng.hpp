#pragma once

// Counter-based normal variates. Every value is a pure function of
// (seed, lane, path, index), so paths can be generated in any order or on
// any number of workers with identical results.
//
// Philox4x32-10: Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace wce {

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) noexcept
{
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

// 53-bit uniform in the open interval (0, 1).
inline double to_open_unit(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace detail

/// splitmix64 finalizer, used to derive child seeds from a master seed.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept
{
    return mix_seed(master ^ mix_seed(tag));
}

/// Independent substreams for the different consumers of randomness.
enum class Lane : std::uint32_t {
    Chaos = 1,
    ExactOu = 2,
    DoobH = 3,
    BsForward = 4,
    BsBackward = 5,
    Test = 99,
};

/// Random-access stream of standard normals for one (seed, lane, path).
///
/// Block b of the Philox counter yields two 64-bit words, turned into the
/// normals with indices 2b and 2b+1 by Box-Muller.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, Lane lane, std::uint64_t path) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          lane_(static_cast<std::uint32_t>(lane)), path_(path)
    {
    }

    [[nodiscard]] double operator[](std::uint64_t index) const noexcept
    {
        const auto pair = block(index >> 1);
        return pair[index & 1u];
    }

    /// Fills `out` with normals index0, index0+1, ...
    void fill(std::span<double> out, std::uint64_t index0 = 0) const noexcept
    {
        std::size_t i = 0;
        if ((index0 & 1u) && !out.empty())
            out[i++] = (*this)[index0];
        for (std::uint64_t b = (index0 + i) >> 1; i + 1 < out.size(); ++b, i += 2) {
            const auto pair = block(b);
            out[i] = pair[0];
            out[i + 1] = pair[1];
        }
        if (i < out.size())
            out[i] = (*this)[index0 + i];
    }

private:
    [[nodiscard]] std::array<double, 2> block(std::uint64_t b) const noexcept
    {
        const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(b),
                                                  static_cast<std::uint32_t>(b >> 32), lane_,
                                                  static_cast<std::uint32_t>(path_)};
        // The path's high word is folded into the key so 64-bit path ids stay distinct.
        const std::array<std::uint32_t, 2> key = {key_[0], key_[1] ^ static_cast<std::uint32_t>(path_ >> 32)};
        const auto r = detail::philox4x32_10(ctr, key);
        const double u1 = detail::to_open_unit((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
        const double u2 = detail::to_open_unit((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t lane_;
    std::uint64_t path_;
};

} // namespace wce
