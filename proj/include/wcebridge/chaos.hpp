#pragma once

// Normalized Hermite polynomials and the chaos random variables xi_m.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "multiindex.hpp"
#include "rng.hpp"

namespace wce {

inline constexpr std::uint32_t kMaxHermiteDegree = 64;

/// Orthonormal Hermite polynomial: E[H_i(Z) H_j(Z)] = delta_ij for Z ~ N(0,1).
/// H_n = He_n / sqrt(n!), evaluated by the three-term recurrence
/// H_{n+1}(x) = (x H_n(x) - sqrt(n) H_{n-1}(x)) / sqrt(n+1).
[[nodiscard]] inline double hermite(std::uint32_t n, double x)
{
    if (n > kMaxHermiteDegree)
        throw std::out_of_range("hermite: degree above 64");
    if (n == 0)
        return 1.0;
    double prev = 1.0, cur = x;
    for (std::uint32_t k = 1; k < n; ++k) {
        const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                            std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

/// One realization of chi_1..chi_L and the xi_m it induces on an index set.
struct ChaosDraw {
    std::vector<double> chi;
    std::vector<double> xi; // aligned with the IndexSet passed to evaluate_xi; empty until then
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
};

/// L iid standard normals keyed by (seed, path).
[[nodiscard]] inline ChaosDraw sample_chi(std::uint64_t seed, std::uint64_t path, std::uint32_t L)
{
    ChaosDraw d;
    d.seed = seed;
    d.path = path;
    d.chi.resize(L);
    NormalStream(seed, Lane::Chaos, path).fill(d.chi);
    return d;
}

/// xi_m = prod_k H_{m_k}(chi_k).
[[nodiscard]] inline double eval_xi(std::span<const double> chi, const MultiIndex& m)
{
    if (m.max_coord() > chi.size())
        throw std::out_of_range("eval_xi: support of " + m.to_string() + " exceeds the draw length");
    double v = 1.0;
    for (const auto& e : m.entries())
        v *= hermite(e.mult, chi[e.coord - 1]);
    return v;
}

[[nodiscard]] inline double eval_xi(const ChaosDraw& draw, const MultiIndex& m)
{
    return eval_xi(draw.chi, m);
}

/// Evaluates xi_m for every element of `set` into draw.xi.
inline void evaluate_xi(ChaosDraw& draw, const IndexSet& set)
{
    draw.xi.resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& m = set[i];
        // Singletons dominate large sets; skip the recurrence for them.
        const auto& ent = m.entries();
        if (ent.empty())
            draw.xi[i] = 1.0;
        else if (ent.size() == 1 && ent[0].mult == 1)
            draw.xi[i] = draw.chi.at(ent[0].coord - 1);
        else
            draw.xi[i] = eval_xi(draw, m);
    }
}

} // namespace wce
