#pragma once

// Explicit Runge-Kutta integrators for dx/dt = F(t, x) over a uniform output grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace wce {

/// Classical fourth-order Runge-Kutta, fixed step.
class RungeKutta4 {
public:
    explicit RungeKutta4(std::size_t n) : tmp_(n), k1_(n), k2_(n), k3_(n), k4_(n) {}

    template <class System>
    void step(System& sys, std::span<double> x, double t, double h)
    {
        const std::size_t n = x.size();
        const double h2 = 0.5 * h;
        sys(t, std::span<const double>(x), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = x[i] + h2 * k1_[i];
        sys(t + h2, std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = x[i] + h2 * k2_[i];
        sys(t + h2, std::span<const double>(tmp_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = x[i] + h * k3_[i];
        sys(t + h, std::span<const double>(tmp_), std::span<double>(k4_));
        const double h6 = h / 6.0, h3 = h / 3.0;
        for (std::size_t i = 0; i < n; ++i)
            x[i] += h6 * k1_[i] + h3 * k2_[i] + h3 * k3_[i] + h6 * k4_[i];
    }

private:
    std::vector<double> tmp_, k1_, k2_, k3_, k4_;
};

struct AdaptiveOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 1e-4;
    double h_min = 1e-14;
    std::size_t max_steps = 10'000'000;
};

/// Dormand-Prince 5(4) with the standard fourth-order continuous extension,
/// used to report the solution at fixed output times.
class DormandPrince45 {
public:
    explicit DormandPrince45(std::size_t n, AdaptiveOptions opt = {})
        : opt_(opt), y_(n), ynew_(n), tmp_(n), k_(7, std::vector<double>(n)), err_(n)
    {
    }

    /// Integrates from (t0, x) and calls observe(t_out, state) at each output
    /// time in `outputs` (increasing, all > t0). Returns accepted step count.
    template <class System, class Observer>
    std::size_t integrate(System& sys, std::span<const double> x0, double t0,
                          std::span<const double> outputs, Observer&& observe)
    {
        const std::size_t n = x0.size();
        std::copy(x0.begin(), x0.end(), y_.begin());
        double t = t0;
        double h = opt_.h_init;
        std::size_t out = 0, accepted = 0;
        sys(t, std::span<const double>(y_), std::span<double>(k_[0]));
        std::vector<double> dense(n);

        while (out < outputs.size()) {
            if (accepted + 1 > opt_.max_steps)
                throw std::runtime_error("DormandPrince45: step budget exhausted");
            const double t_end = outputs.back();
            h = std::min(h, t_end - t);
            stage(sys, t, h);
            double errn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
                const double e = err_[i] / sc;
                errn += e * e;
            }
            errn = std::sqrt(errn / static_cast<double>(std::max<std::size_t>(n, 1)));
            if (!std::isfinite(errn))
                errn = 1e10;

            if (errn <= 1.0) {
                // Emit every output time inside (t, t+h].
                while (out < outputs.size() && outputs[out] <= t + h * (1.0 + 1e-13)) {
                    interpolate(t, h, outputs[out], dense);
                    observe(outputs[out], std::span<const double>(dense));
                    ++out;
                }
                t += h;
                std::swap(y_, ynew_);
                std::swap(k_[0], k_[6]); // FSAL
                ++accepted;
            }
            const double fac = errn == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(errn, -0.2), 0.2, 5.0);
            h *= fac;
            if (h < opt_.h_min)
                throw std::runtime_error("DormandPrince45: step size underflow");
        }
        return accepted;
    }

private:
    template <class System>
    void stage(System& sys, double t, double h)
    {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                                b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        const std::size_t n = y_.size();
        auto& k = k_;
        auto call = [&](double tt, std::vector<double>& out) {
            sys(tt, std::span<const double>(tmp_), std::span<double>(out));
        };
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y_[i] + h * a21 * k[0][i];
        call(t + c2 * h, k[1]);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y_[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
        call(t + c3 * h, k[2]);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y_[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
        call(t + c4 * h, k[3]);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y_[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
        call(t + c5 * h, k[4]);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y_[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                                   a65 * k[4][i]);
        call(t + h, k[5]);
        for (std::size_t i = 0; i < n; ++i)
            ynew_[i] = y_[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                                    b6 * k[5][i]);
        sys(t + h, std::span<const double>(ynew_), std::span<double>(k[6]));
        for (std::size_t i = 0; i < n; ++i)
            err_[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                           e7 * k[6][i]);
    }

    // Shampine's dense output for DOPRI5 (Hairer, Norsett & Wanner, II.6).
    void interpolate(double t, double h, double t_out, std::vector<double>& out) const
    {
        static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                                d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                                d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
        const double th = (t_out - t) / h;
        const double th1 = 1.0 - th;
        const auto& k = k_;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double dy = ynew_[i] - y_[i];
            const double bspl = h * k[0][i] - dy;
            const double r4 = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                                   d6 * k[5][i] + d7 * k[6][i]);
            const double r3 = dy - h * k[6][i] - bspl;
            out[i] = y_[i] + th * (dy + th1 * (bspl + th * (r3 + th1 * r4)));
        }
    }

    AdaptiveOptions opt_;
    std::vector<double> y_, ynew_, tmp_;
    std::vector<std::vector<double>> k_;
    std::vector<double> err_;
};

} // namespace wce
