#pragma once

// Diffusion bridges from a truncated Wiener chaos expansion.
//
// The proposal bridge
//   Y(t) = eta + (theta - eta) t/T + (T - t) int_0^t dX(s) / (T - s)
// is pinned at (0, eta) and (T, theta). Its chaos coefficients follow from the
// propagator coefficients X_m by the same linear map:
//   Y_m(t) = (eta + (theta - eta) t/T) 1{|m|=0} + (T - t) int_0^t dX_m(s) / (T - s).
// The coefficients are computed once per configuration and every Monte Carlo
// path only draws chi and forms sum_m Y_m(t) xi_m.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaos.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "propagator.hpp"

namespace wce {

struct BridgeSpec {
    double eta = 0.0;
    double theta = 0.0;
    double T = 1.0;

    void validate() const
    {
        if (!std::isfinite(eta) || !std::isfinite(theta))
            throw std::invalid_argument("bridge endpoints must be finite");
        if (!(T > 0.0) || !std::isfinite(T))
            throw std::invalid_argument("bridge horizon must be positive");
    }
};

/// Y_m(t_j) on the grid, row-major [row][node], sharing the propagator's index set.
class BridgeCoefficients {
public:
    BridgeCoefficients(TimeGrid grid, std::shared_ptr<const IndexSet> set, BridgeSpec spec)
        : grid_(grid), set_(std::move(set)), spec_(spec), values_(set_->size() * grid_.nodes(), 0.0)
    {
    }

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const IndexSet& index_set() const noexcept { return *set_; }
    [[nodiscard]] const BridgeSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::size_t rows() const noexcept { return set_->size(); }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return {values_.data() + i * grid_.nodes(), grid_.nodes()};
    }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept
    {
        return values_[i * grid_.nodes() + j];
    }
    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept
    {
        return values_[i * grid_.nodes() + j];
    }

private:
    TimeGrid grid_;
    std::shared_ptr<const IndexSet> set_;
    BridgeSpec spec_;
    std::vector<double> values_;
};

/// Applies the bridge map row by row. The stochastic integral is the
/// right-endpoint partition sum  sum_{i<=j} (X_m(t_i) - X_m(t_{i-1})) / (T - t_i);
/// the last node is set to theta 1{|m|=0}, where (T - t) annihilates the sum.
[[nodiscard]] inline BridgeCoefficients transform_to_bridge(const PropagatorSolution& sol, const BridgeSpec& spec)
{
    spec.validate();
    const auto& grid = sol.grid();
    if (std::abs(grid.T() - spec.T) > 1e-12 * spec.T)
        throw std::invalid_argument("transform_to_bridge: bridge horizon differs from the propagator grid");
    BridgeCoefficients out(grid, std::make_shared<const IndexSet>(sol.index_set()), spec);
    const std::size_t N = grid.steps();
    const double T = grid.T();

    for (std::size_t i = 0; i < sol.index_set().size(); ++i) {
        const bool zero = sol.index_set()[i].is_zero();
        const auto x = sol.row(i);
        double q = 0.0;
        out(i, 0) = zero ? spec.eta : 0.0;
        for (std::size_t j = 1; j < N; ++j) {
            const double tj = grid[j];
            q += (x[j] - x[j - 1]) / (T - tj);
            const double base = zero ? spec.eta + (spec.theta - spec.eta) * tj / T : 0.0;
            out(i, j) = base + (T - tj) * q;
        }
        out(i, N) = zero ? spec.theta : 0.0;
    }
    return out;
}

struct BridgePath {
    TimeGrid grid;
    std::vector<double> values;
    BridgeSpec spec;
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    /// Sampler attempts used (only meaningful for rejection samplers).
    std::uint32_t attempts = 1;
    /// Steps where a positivity guard had to move the state.
    std::uint32_t reflections = 0;

    /// Linear interpolation at an arbitrary t in [0, T].
    [[nodiscard]] double at(double t) const
    {
        if (!(t >= 0.0 && t <= grid.T()))
            throw std::out_of_range("BridgePath::at: time outside [0,T]");
        if (auto j = grid.node_of(t))
            return values[*j];
        const double x = t / grid.dt();
        const auto j = std::min<std::size_t>(static_cast<std::size_t>(x), grid.steps() - 1);
        const double w = x - static_cast<double>(j);
        return (1.0 - w) * values[j] + w * values[j + 1];
    }
};

/// Y(t_j) = sum_m Y_m(t_j) xi_m for an already evaluated draw. Endpoints are
/// written from the spec so pinning holds bit for bit.
[[nodiscard]] inline BridgePath assemble_bridge(const BridgeCoefficients& c, const ChaosDraw& draw)
{
    if (draw.xi.size() != c.rows())
        throw std::invalid_argument("assemble_bridge: draw was evaluated on a different index set");
    BridgePath p{c.grid(), std::vector<double>(c.grid().nodes(), 0.0), c.spec(), draw.seed, draw.path, 1, 0};
    double* y = p.values.data();
    const std::size_t n = c.grid().nodes();
    for (std::size_t i = 0; i < c.rows(); ++i) {
        const double w = draw.xi[i];
        if (w == 0.0)
            continue;
        const double* r = c.row(i).data();
        for (std::size_t j = 0; j < n; ++j)
            y[j] += w * r[j];
    }
    p.values.front() = c.spec().eta;
    p.values.back() = c.spec().theta;
    return p;
}

/// One bridge path for (seed, path index).
[[nodiscard]] inline BridgePath sample_bridge(const BridgeCoefficients& c, std::uint64_t seed, std::uint64_t path)
{
    ChaosDraw draw = sample_chi(seed, path, c.index_set().L());
    evaluate_xi(draw, c.index_set());
    return assemble_bridge(c, draw);
}

[[nodiscard]] inline std::vector<BridgePath> sample_bridges(const BridgeCoefficients& c, std::uint64_t seed,
                                                            std::size_t n_paths, std::size_t threads = 1)
{
    std::vector<BridgePath> out(n_paths, BridgePath{c.grid(), {}, c.spec()});
    parallel_for(n_paths, threads, [&](std::size_t k) { out[k] = sample_bridge(c, seed, k); });
    return out;
}

/// X^{p,L}(t_j) = sum_m X_m(t_j) xi_m: the unconditioned truncated diffusion.
[[nodiscard]] inline std::vector<double> truncated_solution(const PropagatorSolution& sol, const ChaosDraw& draw)
{
    if (draw.xi.size() != sol.index_set().size())
        throw std::invalid_argument("truncated_solution: draw was evaluated on a different index set");
    std::vector<double> x(sol.grid().nodes(), 0.0);
    for (std::size_t i = 0; i < sol.index_set().size(); ++i) {
        const double w = draw.xi[i];
        const auto r = sol.row(i);
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] += w * r[j];
    }
    return x;
}

/// Variance of sum_m c_m xi_m at node j from orthonormality: sum_{|m|>=1} c_m(t_j)^2.
template <class Coefficients>
[[nodiscard]] double chaos_variance(const Coefficients& c, std::size_t node)
{
    double v = 0.0;
    for (std::size_t i = 1; i < c.index_set().size(); ++i) {
        const double x = c(i, node);
        v += x * x;
    }
    return v;
}

/// CSV rows "path_id,t,y". When with_attempts is set a fourth column holds the
/// sampler's attempt count.
inline void write_paths_csv(std::ostream& os, std::span<const BridgePath> paths, bool with_attempts = false)
{
    os << (with_attempts ? "path_id,t,y,attempts\n" : "path_id,t,y\n");
    std::string line;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        const auto& p = paths[k];
        for (std::size_t j = 0; j < p.values.size(); ++j) {
            line = std::to_string(k);
            line += ',';
            append_double(line, p.grid[j]);
            line += ',';
            append_double(line, p.values[j]);
            if (with_attempts) {
                line += ',';
                line += std::to_string(p.attempts);
            }
            line += '\n';
            os << line;
        }
    }
}

/// Binary dump: "WCEB", u32 version (1), u64 N (grid steps), u64 n_paths,
/// then n_paths rows of N+1 little-endian float64 values.
inline void write_paths_binary(std::ostream& os, std::span<const BridgePath> paths)
{
    static_assert(sizeof(double) == 8);
    const std::uint32_t version = 1;
    const std::uint64_t N = paths.empty() ? 0 : paths.front().grid.steps();
    const std::uint64_t n = paths.size();
    auto put = [&](const void* p, std::size_t len) { os.write(static_cast<const char*>(p), static_cast<std::streamsize>(len)); };
    put("WCEB", 4);
    put(&version, sizeof(version));
    put(&N, sizeof(N));
    put(&n, sizeof(n));
    for (const auto& p : paths) {
        if (p.values.size() != N + 1)
            throw std::invalid_argument("write_paths_binary: paths on different grids");
        put(p.values.data(), p.values.size() * sizeof(double));
    }
}

} // namespace wce
