#pragma once

// Reference bridge samplers used to validate the chaos bridges: the exact OU
// bridge, Doob's h-transform (OU and GBM) and the Bladt-Sorensen coupling (OU).

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bridge.hpp"
#include "models.hpp"
#include "rng.hpp"

namespace wce {

enum class BaselineKind { ExactOu, DoobH, BladtSorensen };

inline std::string_view to_string(BaselineKind k)
{
    switch (k) {
    case BaselineKind::ExactOu: return "ExactOU";
    case BaselineKind::DoobH: return "DoobH";
    case BaselineKind::BladtSorensen: return "BladtSorensen";
    }
    return "?";
}

inline std::optional<BaselineKind> parse_baseline_kind(std::string_view s)
{
    if (s == "ExactOU" || s == "exact-ou" || s == "exact") return BaselineKind::ExactOu;
    if (s == "DoobH" || s == "doob" || s == "doob-h") return BaselineKind::DoobH;
    if (s == "BladtSorensen" || s == "bs" || s == "bladt-sorensen") return BaselineKind::BladtSorensen;
    return std::nullopt;
}

/// Whether the baseline has what it needs for this model.
[[nodiscard]] inline bool baseline_supports(BaselineKind k, ModelKind m) noexcept
{
    switch (k) {
    case BaselineKind::ExactOu:
    case BaselineKind::BladtSorensen: return m == ModelKind::OU;
    case BaselineKind::DoobH: return m == ModelKind::OU || m == ModelKind::GBM;
    }
    return false;
}

struct BaselineOptions {
    /// Euler steps per grid interval (Doob's h-transform).
    std::size_t euler_substeps = 1;
    /// Bladt-Sorensen: maximum number of coupling attempts per path.
    std::uint32_t max_attempts = 1000;
    /// Bladt-Sorensen: use exact OU transitions (otherwise Euler-Maruyama).
    bool exact_transitions = true;
    /// GBM Doob sampler: states at or below zero are moved here.
    double positivity_floor = 1e-10;
};

/// Thrown when the Bladt-Sorensen coupling never crosses within the attempt budget.
class RejectionExhausted : public std::runtime_error {
public:
    explicit RejectionExhausted(std::uint32_t attempts)
        : std::runtime_error("Bladt-Sorensen: no crossing in " + std::to_string(attempts) + " attempts"),
          attempts_(attempts)
    {
    }
    [[nodiscard]] std::uint32_t attempts() const noexcept { return attempts_; }

private:
    std::uint32_t attempts_;
};

namespace detail {

// sigma^2 (1 - e^{-2 a tau}) / (2a), the OU transition variance, with the a -> 0 limit.
inline double ou_transition_variance(double a, double sigma, double tau) noexcept
{
    if (std::abs(a * tau) < 1e-12)
        return sigma * sigma * tau;
    return sigma * sigma * (-std::expm1(-2.0 * a * tau)) / (2.0 * a);
}

} // namespace detail

/// Exact OU bridge: simulate the OU chain from eta with exact transitions, then
/// correct by (theta - Y(T)) sinh(a t) / sinh(a T).
[[nodiscard]] inline BridgePath exact_ou_bridge(double a, double sigma, const BridgeSpec& spec,
                                                const TimeGrid& grid, std::uint64_t seed, std::uint64_t path)
{
    if (!(a > 0.0))
        throw std::invalid_argument("exact_ou_bridge: mean reversion a must be positive");
    spec.validate();
    const std::size_t N = grid.steps();
    const NormalStream noise(seed, Lane::ExactOu, path);
    std::vector<double> y(N + 1);
    y[0] = spec.eta;
    for (std::size_t i = 1; i <= N; ++i) {
        const double dt = grid[i] - grid[i - 1];
        const double decay = std::exp(-a * dt);
        const double sd = std::sqrt(detail::ou_transition_variance(a, sigma, dt));
        y[i] = decay * y[i - 1] + sd * noise[i - 1];
    }
    const double gap = spec.theta - y[N];
    const double denom = std::sinh(a * grid.T());
    BridgePath out{grid, std::vector<double>(N + 1), spec, seed, path, 1, 0};
    for (std::size_t i = 0; i <= N; ++i)
        out.values[i] = y[i] + gap * std::sinh(a * grid[i]) / denom;
    out.values.front() = spec.eta;
    out.values.back() = spec.theta;
    return out;
}

/// d/dz log p(t, z; T, theta) for the models with a closed transition density.
[[nodiscard]] inline double transition_score(const SdeModel& model, double z, double tau, double theta)
{
    switch (model.kind) {
    case ModelKind::OU: {
        const double decay = std::exp(-model.rate * tau);
        return (theta - z * decay) * decay / detail::ou_transition_variance(model.rate, model.sigma, tau);
    }
    case ModelKind::GBM: {
        const double s2 = model.sigma * model.sigma;
        const double mu = std::log(z) + (model.rate - 0.5 * s2) * tau;
        return (std::log(theta) - mu) / (s2 * tau * z);
    }
    default: throw std::invalid_argument("transition_score: no closed-form density for this model");
    }
}

/// Doob's h-transform: Euler-Maruyama for dz = [f(z) + g(z)^2 d_z log p(t,z;T,theta)] dt + g(z) dB
/// up to t_{N-1}; the final node is pinned to theta.
[[nodiscard]] inline BridgePath doob_h_bridge(const SdeModel& model, const BridgeSpec& spec, const TimeGrid& grid,
                                              std::uint64_t seed, std::uint64_t path,
                                              const BaselineOptions& opt = {})
{
    if (model.kind != ModelKind::OU && model.kind != ModelKind::GBM)
        throw std::invalid_argument("doob_h_bridge: only OU and GBM have a closed transition density");
    if (!(model.sigma > 0.0))
        throw std::invalid_argument("doob_h_bridge: sigma must be positive");
    spec.validate();
    if (model.kind == ModelKind::GBM && !(spec.eta > 0.0 && spec.theta > 0.0))
        throw std::invalid_argument("doob_h_bridge: GBM endpoints must be positive");
    const std::size_t N = grid.steps();
    const std::size_t sub = std::max<std::size_t>(opt.euler_substeps, 1);
    const double T = grid.T();
    const NormalStream noise(seed, Lane::DoobH, path);

    BridgePath out{grid, std::vector<double>(N + 1), spec, seed, path, 1, 0};
    double z = spec.eta;
    out.values[0] = z;
    std::uint64_t k = 0;
    for (std::size_t i = 1; i < N; ++i) {
        const double t0 = grid[i - 1];
        const double h = (grid[i] - t0) / static_cast<double>(sub);
        for (std::size_t s = 0; s < sub; ++s, ++k) {
            const double t = t0 + static_cast<double>(s) * h;
            const double g = model.diffusion(z);
            const double b = model.drift(z) + g * g * transition_score(model, z, T - t, spec.theta);
            z += b * h + g * std::sqrt(h) * noise[k];
            if (model.kind == ModelKind::GBM && !(z > 0.0)) {
                z = opt.positivity_floor;
                ++out.reflections;
            }
        }
        out.values[i] = z;
    }
    out.values[N] = spec.theta;
    return out;
}

namespace detail {

inline void ou_forward(const SdeModel& model, double start, const TimeGrid& grid, const NormalStream& noise,
                       std::uint64_t offset, bool exact, std::vector<double>& x)
{
    const std::size_t N = grid.steps();
    x.resize(N + 1);
    x[0] = start;
    for (std::size_t i = 1; i <= N; ++i) {
        const double dt = grid[i] - grid[i - 1];
        const double z = noise[offset + i - 1];
        if (exact)
            x[i] = std::exp(-model.rate * dt) * x[i - 1] +
                   std::sqrt(ou_transition_variance(model.rate, model.sigma, dt)) * z;
        else
            x[i] = x[i - 1] + model.drift(x[i - 1]) * dt + model.diffusion(x[i - 1]) * std::sqrt(dt) * z;
    }
}

} // namespace detail

/// One Bladt-Sorensen coupling attempt. Returns the bridge when the forward
/// path from eta and the time-reversed path from theta cross, nullopt otherwise.
[[nodiscard]] inline std::optional<BridgePath> bladt_sorensen_attempt(const SdeModel& model, const BridgeSpec& spec,
                                                                      const TimeGrid& grid, std::uint64_t seed,
                                                                      std::uint64_t path, std::uint32_t attempt,
                                                                      const BaselineOptions& opt = {})
{
    if (model.kind != ModelKind::OU)
        throw std::invalid_argument("bladt_sorensen: only the ergodic OU model is supported");
    const std::size_t N = grid.steps();
    const std::uint64_t offset = static_cast<std::uint64_t>(attempt) * N;
    std::vector<double> fwd, bwd;
    detail::ou_forward(model, spec.eta, grid, NormalStream(seed, Lane::BsForward, path), offset,
                       opt.exact_transitions, fwd);
    detail::ou_forward(model, spec.theta, grid, NormalStream(seed, Lane::BsBackward, path), offset,
                       opt.exact_transitions, bwd);
    // Reversed second path: r_i = X2(T - t_i) = bwd[N - i].
    auto diff = [&](std::size_t i) { return fwd[i] - bwd[N - i]; };

    std::optional<std::size_t> cross; // first node taken from the reversed path
    if (diff(0) == 0.0) {
        cross = 0;
    } else {
        for (std::size_t i = 1; i <= N; ++i) {
            const double d0 = diff(i - 1), d1 = diff(i);
            if (d1 == 0.0 || (d0 < 0.0) != (d1 < 0.0)) {
                cross = i;
                break;
            }
        }
    }
    if (!cross)
        return std::nullopt;

    BridgePath out{grid, std::vector<double>(N + 1), spec, seed, path, attempt + 1, 0};
    for (std::size_t i = 0; i <= N; ++i)
        out.values[i] = i < *cross ? fwd[i] : bwd[N - i];
    out.values.front() = spec.eta;
    out.values.back() = spec.theta;
    return out;
}

/// Crossing time tau of an accepted attempt, by linear interpolation of the gap.
[[nodiscard]] inline double crossing_time(double t0, double t1, double gap0, double gap1) noexcept
{
    if (gap0 == gap1)
        return t0;
    return t0 + (t1 - t0) * gap0 / (gap0 - gap1);
}

/// Bladt-Sorensen bridge with retries. BridgePath::attempts records how many
/// couplings were drawn.
[[nodiscard]] inline BridgePath bladt_sorensen_bridge(const SdeModel& model, const BridgeSpec& spec,
                                                      const TimeGrid& grid, std::uint64_t seed, std::uint64_t path,
                                                      const BaselineOptions& opt = {})
{
    spec.validate();
    for (std::uint32_t a = 0; a < opt.max_attempts; ++a)
        if (auto p = bladt_sorensen_attempt(model, spec, grid, seed, path, a, opt))
            return std::move(*p);
    throw RejectionExhausted(opt.max_attempts);
}

/// Fraction of independent single coupling attempts that cross.
[[nodiscard]] inline double bladt_sorensen_acceptance_rate(const SdeModel& model, const BridgeSpec& spec,
                                                           const TimeGrid& grid, std::uint64_t seed,
                                                           std::uint32_t attempts, const BaselineOptions& opt = {})
{
    std::uint32_t ok = 0;
    for (std::uint32_t k = 0; k < attempts; ++k)
        if (bladt_sorensen_attempt(model, spec, grid, seed, k, 0, opt))
            ++ok;
    return attempts == 0 ? 0.0 : static_cast<double>(ok) / attempts;
}

/// Dispatches to the requested baseline.
[[nodiscard]] inline BridgePath sample_baseline(BaselineKind kind, const SdeModel& model, const BridgeSpec& spec,
                                                const TimeGrid& grid, std::uint64_t seed, std::uint64_t path,
                                                const BaselineOptions& opt = {})
{
    if (!baseline_supports(kind, model.kind))
        throw std::invalid_argument(std::string(to_string(kind)) + " does not apply to model " +
                                    std::string(to_string(model.kind)));
    switch (kind) {
    case BaselineKind::ExactOu: return exact_ou_bridge(model.rate, model.sigma, spec, grid, seed, path);
    case BaselineKind::DoobH: return doob_h_bridge(model, spec, grid, seed, path, opt);
    case BaselineKind::BladtSorensen: return bladt_sorensen_bridge(model, spec, grid, seed, path, opt);
    }
    throw std::logic_error("unreachable");
}

} // namespace wce
