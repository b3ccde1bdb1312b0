#pragma once

// Deterministic solution of the propagator system on a uniform time grid.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "basis.hpp"
#include "io.hpp"
#include "models.hpp"
#include "multiindex.hpp"
#include "ode.hpp"

namespace wce {

/// Uniform grid t_j = j T / N, j = 0..N.
class TimeGrid {
public:
    TimeGrid(double T, std::size_t N) : T_(T), N_(N)
    {
        if (!(T > 0.0) || !std::isfinite(T))
            throw std::invalid_argument("TimeGrid: T must be positive and finite");
        if (N < 2)
            throw std::invalid_argument("TimeGrid: need N >= 2 steps");
    }

    [[nodiscard]] double T() const noexcept { return T_; }
    [[nodiscard]] std::size_t steps() const noexcept { return N_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return N_ + 1; }
    [[nodiscard]] double dt() const noexcept { return T_ / static_cast<double>(N_); }

    /// t_j, exact at both ends.
    [[nodiscard]] double operator[](std::size_t j) const noexcept
    {
        return j == N_ ? T_ : T_ * static_cast<double>(j) / static_cast<double>(N_);
    }

    /// Index of the node equal to t, if t lies on the grid (to 1e-12 relative).
    [[nodiscard]] std::optional<std::size_t> node_of(double t) const noexcept
    {
        const double x = t / T_ * static_cast<double>(N_);
        const double r = std::round(x);
        if (r < 0 || r > static_cast<double>(N_) || std::abs(x - r) > 1e-9)
            return std::nullopt;
        return static_cast<std::size_t>(r);
    }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double T_;
    std::size_t N_;
};

/// Raised when a coefficient stops being finite during integration.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string index, double t)
        : std::runtime_error("propagator diverged at t=" + std::to_string(t) + " in coefficient " + index),
          index_(std::move(index)), t_(t)
    {
    }
    [[nodiscard]] const std::string& index() const noexcept { return index_; }
    [[nodiscard]] double time() const noexcept { return t_; }

private:
    std::string index_;
    double t_;
};

enum class Integrator { Rk4, DormandPrince45 };

struct SolverOptions {
    Integrator integrator = Integrator::Rk4;
    /// RK4 steps per output interval.
    std::size_t substeps = 1;
    AdaptiveOptions adaptive{};
};

/// X_m(t_j) for every row m of an index set, stored row-major [row][node].
class PropagatorSolution {
public:
    PropagatorSolution(TimeGrid grid, IndexSet set, SdeModel model, SineBasis basis)
        : grid_(grid), set_(std::move(set)), model_(model), basis_(basis),
          values_(set_.size() * grid_.nodes(), 0.0)
    {
    }

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const IndexSet& index_set() const noexcept { return set_; }
    [[nodiscard]] const SdeModel& model() const noexcept { return model_; }
    [[nodiscard]] const SineBasis& basis() const noexcept { return basis_; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return {values_.data() + i * grid_.nodes(), grid_.nodes()};
    }
    [[nodiscard]] std::span<double> row(std::size_t i) noexcept
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
    IndexSet set_;
    SdeModel model_;
    SineBasis basis_;
    std::vector<double> values_;
};

namespace detail {
inline void check_finite_column(const PropagatorSolution& sol, std::span<const double> x, double t)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw DivergenceError(sol.index_set()[i].to_string(), t);
}
} // namespace detail

/// Integrates the whole triangular system jointly. Row m of order n only reads
/// rows of order n-1 through m^-(j), so this is the same as solving the orders
/// one after another, with every row sharing the same stage times.
[[nodiscard]] inline PropagatorSolution solve_propagator(const SdeModel& model, const IndexSet& set,
                                                         const SineBasis& basis, const TimeGrid& grid,
                                                         const SolverOptions& opt = {})
{
    if (std::abs(basis.T() - grid.T()) > 1e-12 * grid.T())
        throw std::invalid_argument("solve_propagator: basis and grid horizons differ");
    PropagatorSolution sol(grid, set, model, basis);
    PropagatorRhs rhs(model, set, basis);
    const std::size_t n = set.size();

    std::vector<double> x(n, 0.0);
    x[0] = model.x0;
    for (std::size_t i = 0; i < n; ++i)
        sol(i, 0) = x[i];

    if (opt.integrator == Integrator::Rk4) {
        if (opt.substeps < 1)
            throw std::invalid_argument("solve_propagator: substeps must be >= 1");
        RungeKutta4 rk(n);
        const double h = grid.dt() / static_cast<double>(opt.substeps);
        for (std::size_t j = 1; j < grid.nodes(); ++j) {
            const double t0 = grid[j - 1];
            for (std::size_t s = 0; s < opt.substeps; ++s)
                rk.step(rhs, x, t0 + static_cast<double>(s) * h, h);
            detail::check_finite_column(sol, x, grid[j]);
            for (std::size_t i = 0; i < n; ++i)
                sol(i, j) = x[i];
        }
    } else {
        std::vector<double> outputs(grid.steps());
        for (std::size_t j = 1; j < grid.nodes(); ++j)
            outputs[j - 1] = grid[j];
        DormandPrince45 dp(n, opt.adaptive);
        std::size_t j = 1;
        try {
            dp.integrate(rhs, x, 0.0, outputs, [&](double t, std::span<const double> state) {
                detail::check_finite_column(sol, state, t);
                for (std::size_t i = 0; i < n; ++i)
                    sol(i, j) = state[i];
                ++j;
            });
        } catch (const DivergenceError&) {
            throw;
        } catch (const std::runtime_error& e) {
            // Step-size collapse is how blow-up shows up for the adaptive scheme.
            throw DivergenceError(std::string("<step control: ") + e.what() + ">", j < grid.nodes() ? grid[j] : grid.T());
        }
    }
    return sol;
}

struct ErrorBoundConstants {
    double C1;
    double C2;
    double kappa;
};

/// Mean-square truncation bound
///   C1 (1+x0^2) e^{(C1+kappa^2)T} (kappa^2 T)^{p+1}/(p+1)!  +  C2 (1+x0^2) (T^4/L) e^{C2 T}.
/// The constants depend on the Lipschitz constant of the SDE and are user supplied.
[[nodiscard]] inline double wce_error_bound(std::uint32_t p, std::uint32_t L, double T, double x0,
                                            ErrorBoundConstants c)
{
    if (!(c.C1 > 0 && c.C2 > 0 && c.kappa > 0))
        throw std::invalid_argument("wce_error_bound: constants must be positive");
    if (L < 1 || !(T > 0))
        throw std::invalid_argument("wce_error_bound: need L >= 1 and T > 0");
    const double k2T = c.kappa * c.kappa * T;
    // (k2T)^{p+1}/(p+1)! accumulated as a product to avoid overflow.
    double chaos = 1.0;
    for (std::uint32_t i = 1; i <= p + 1; ++i)
        chaos *= k2T / static_cast<double>(i);
    const double amp = 1.0 + x0 * x0;
    return c.C1 * amp * std::exp((c.C1 + c.kappa * c.kappa) * T) * chaos +
           c.C2 * amp * (T * T * T * T / static_cast<double>(L)) * std::exp(c.C2 * T);
}

/// CSV: header "t,X0,X1,..." then one line per grid node.
inline void write_propagator_csv(std::ostream& os, const PropagatorSolution& sol)
{
    os << "t";
    for (std::size_t i = 0; i < sol.index_set().size(); ++i)
        os << ",X" << i;
    os << '\n';
    std::string line;
    for (std::size_t j = 0; j < sol.grid().nodes(); ++j) {
        line.clear();
        append_double(line, sol.grid()[j]);
        for (std::size_t i = 0; i < sol.index_set().size(); ++i) {
            line += ',';
            append_double(line, sol(i, j));
        }
        line += '\n';
        os << line;
    }
}

} // namespace wce
