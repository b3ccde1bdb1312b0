#pragma once

// Two-sample Kolmogorov-Smirnov test, QQ pairs and moment summaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bridge.hpp"

namespace wce {

struct SampleSet {
    std::vector<double> values;
    std::string label;

    void validate() const
    {
        if (values.empty())
            throw std::invalid_argument("sample set '" + label + "' is empty");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("sample set '" + label + "' contains a non-finite value");
    }
};

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t m = 0;
};

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
/// For small lambda the alternating series converges slowly, so the
/// theta-function form 1 - sqrt(2 pi)/lambda sum_k exp(-(2k-1)^2 pi^2 / (8 lambda^2))
/// is used there instead. Both are summed until terms drop below 1e-12.
[[nodiscard]] inline double kolmogorov_q(double lambda)
{
    if (!(lambda > 0.0))
        return 1.0;
    if (lambda < 1.0) {
        const double c = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double term = std::exp(c * (2 * k - 1) * (2 * k - 1));
            s += term;
            if (term < 1e-12)
                break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k < 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-12)
            break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace detail {

// sup |F_a - F_b| over sorted inputs; both CDFs are right-continuous, so all
// copies of a tied value are consumed before the gap is measured.
inline double ks_statistic_sorted(std::span<const double> a, std::span<const double> b)
{
    const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x)
            ++i;
        while (j < b.size() && b[j] == x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

// P(D >= d) under H0, counting monotone lattice paths from (0,0) to (n,m)
// that stay strictly inside |i/n - j/m| < d.
inline double ks_exact_pvalue(std::size_t n, std::size_t m, double d)
{
    const double tol = 1e-12;
    auto inside = [&](std::size_t i, std::size_t j) {
        return std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m) < d - tol;
    };
    // Path counts scaled by 1/C(i+j, i) to stay in range: u holds the
    // probability that a uniformly random path prefix stays inside.
    std::vector<double> u(m + 1, 0.0);
    for (std::size_t j = 0; j <= m; ++j)
        u[j] = (inside(0, j) && (j == 0 || u[j - 1] > 0.0)) ? 1.0 : 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        u[0] = inside(i, 0) ? u[0] : 0.0;
        for (std::size_t j = 1; j <= m; ++j) {
            if (!inside(i, j)) {
                u[j] = 0.0;
                continue;
            }
            // Weights: a path to (i,j) arrives from (i-1,j) with prob i/(i+j).
            const double wi = static_cast<double>(i) / static_cast<double>(i + j);
            u[j] = wi * u[j] + (1.0 - wi) * u[j - 1];
        }
    }
    return std::clamp(1.0 - u[m], 0.0, 1.0);
}

} // namespace detail

enum class KsMethod { Asymptotic, Exact };

/// Two-sample KS test. The asymptotic p-value uses the effective size
/// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) d with ne = nm/(n+m).
/// KsMethod::Exact counts lattice paths and is meant for n, m < 50.
[[nodiscard]] inline KsResult ks_two_sample(const SampleSet& a, const SampleSet& b,
                                            KsMethod method = KsMethod::Asymptotic)
{
    a.validate();
    b.validate();
    std::vector<double> sa = a.values, sb = b.values;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    KsResult r;
    r.n = sa.size();
    r.m = sb.size();
    r.d = detail::ks_statistic_sorted(sa, sb);
    if (method == KsMethod::Exact) {
        r.p_value = r.d == 0.0 ? 1.0 : detail::ks_exact_pvalue(r.n, r.m, r.d);
    } else {
        const double ne = static_cast<double>(r.n) * static_cast<double>(r.m) / static_cast<double>(r.n + r.m);
        const double sq = std::sqrt(ne);
        r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * r.d);
    }
    return r;
}

/// Empirical quantile with linear interpolation between order statistics
/// (position q (n-1) in the sorted sample).
[[nodiscard]] inline double quantile_sorted(std::span<const double> sorted, double q)
{
    if (sorted.empty())
        throw std::invalid_argument("quantile of an empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted.back();
    const double w = h - static_cast<double>(lo);
    return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

/// Matched quantiles at levels (i - 0.5)/k, i = 1..k.
[[nodiscard]] inline std::vector<std::pair<double, double>> qq_pairs(const SampleSet& a, const SampleSet& b,
                                                                      std::size_t k)
{
    if (k < 2)
        throw std::invalid_argument("qq_pairs: need at least two quantiles");
    a.validate();
    b.validate();
    std::vector<double> sa = a.values, sb = b.values;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const double q = (static_cast<double>(i) - 0.5) / static_cast<double>(k);
        out.emplace_back(quantile_sorted(sa, q), quantile_sorted(sb, q));
    }
    return out;
}

/// Value of every path at time t (linear interpolation off the grid).
[[nodiscard]] inline SampleSet marginal_at(std::span<const BridgePath> paths, double t, std::string label = {})
{
    SampleSet s;
    s.label = std::move(label);
    s.values.reserve(paths.size());
    for (const auto& p : paths)
        s.values.push_back(p.at(t));
    return s;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

[[nodiscard]] inline Moments moments(std::span<const double> x)
{
    if (x.size() < 2)
        throw std::invalid_argument("moments: need at least two values");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    Moments r;
    r.mean = mean;
    r.variance = m2 * n / (n - 1.0);
    r.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    r.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return r;
}

} // namespace wce
