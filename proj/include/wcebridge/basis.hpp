#pragma once

// Orthonormal sine basis of L^2(0,T) and fixed-rule quadrature.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wce {

/// 20-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre20 {
    static constexpr std::array<double, 10> nodes = {
        0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
        0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
        0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
        0.9931285991850949247861224};
    static constexpr std::array<double, 10> weights = {
        0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
        0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
        0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
        0.0176140071391521183118620};
};

/// Composite 20-point Gauss-Legendre over `panels` equal panels of [lo, hi].
template <class F>
[[nodiscard]] double integrate_gl(F&& f, double lo, double hi, int panels)
{
    const double h = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        const double half = 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < GaussLegendre20::nodes.size(); ++i) {
            const double dx = half * GaussLegendre20::nodes[i];
            s += GaussLegendre20::weights[i] * (f(mid - dx) + f(mid + dx));
        }
        total += s * half;
    }
    return total;
}

/// e_j(t) = sqrt(2/T) sin(j pi t / T), j = 1..count.
class SineBasis {
public:
    SineBasis(double T, std::uint32_t count) : T_(T), count_(count), scale_(std::sqrt(2.0 / T))
    {
        if (!(T > 0.0) || !std::isfinite(T))
            throw std::invalid_argument("SineBasis: T must be positive and finite");
        if (count < 1)
            throw std::invalid_argument("SineBasis: need at least one basis function");
    }

    [[nodiscard]] double T() const noexcept { return T_; }
    [[nodiscard]] std::uint32_t count() const noexcept { return count_; }

    [[nodiscard]] double eval(std::uint32_t j, double t) const
    {
        check(j, t);
        return eval_unchecked(j, t);
    }

    [[nodiscard]] double eval_unchecked(std::uint32_t j, double t) const noexcept
    {
        return scale_ * std::sin(j * std::numbers::pi * t / T_);
    }

    /// Closed-form antiderivative: int_0^t e_j(s) ds.
    [[nodiscard]] double integral(std::uint32_t j, double t) const
    {
        check(j, t);
        const double w = j * std::numbers::pi / T_;
        return scale_ * (1.0 - std::cos(w * t)) / w;
    }

    /// int_0^T e_i e_j dt by quadrature. Panel count grows with the highest
    /// frequency so the rule stays at ~1e-12 on these integrands.
    [[nodiscard]] double inner_product(std::uint32_t i, std::uint32_t j) const
    {
        check(i, 0.0);
        check(j, 0.0);
        const int panels = 4 + static_cast<int>(i + j);
        return integrate_gl([&](double t) { return eval_unchecked(i, t) * eval_unchecked(j, t); },
                            0.0, T_, panels);
    }

private:
    void check(std::uint32_t j, double t) const
    {
        if (j < 1 || j > count_)
            throw std::out_of_range("SineBasis: index " + std::to_string(j) + " outside 1.." +
                                    std::to_string(count_));
        if (!(t >= 0.0 && t <= T_))
            throw std::out_of_range("SineBasis: time " + std::to_string(t) + " outside [0,T]");
    }

    double T_;
    std::uint32_t count_;
    double scale_;
};

} // namespace wce
