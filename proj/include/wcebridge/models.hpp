#pragma once

// The four SDE models and the right-hand sides of their propagator systems.
//
// Each propagator row m obeys
//   dX_m/dt = f_m(X) + sum_j sqrt(m_j) e_j(t) sigma_{m^-(j)}(X),
// where f_m and sigma_{m'} are the model's coefficient-wise closures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "basis.hpp"
#include "multiindex.hpp"

namespace wce {

enum class ModelKind { OU, GBM, Logistic, ProteinKinetic };

/// How the Stratonovich-to-Ito drift correction of the protein model is written.
/// `Paper` uses sigma X(1-X)(1-2X); `HalfSigmaSquared` uses (sigma^2/2) X(1-X)(1-2X).
enum class ItoCorrection { Paper, HalfSigmaSquared };

inline std::string_view to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::OU: return "OU";
    case ModelKind::GBM: return "GBM";
    case ModelKind::Logistic: return "Logistic";
    case ModelKind::ProteinKinetic: return "ProteinKinetic";
    }
    return "?";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view s)
{
    if (s == "OU" || s == "ou") return ModelKind::OU;
    if (s == "GBM" || s == "gbm") return ModelKind::GBM;
    if (s == "Logistic" || s == "logistic") return ModelKind::Logistic;
    if (s == "ProteinKinetic" || s == "protein" || s == "protein-kinetic") return ModelKind::ProteinKinetic;
    return std::nullopt;
}

/// An SDE dX = f(X) dt + g(X) dB with initial value x0.
///
/// `rate` is a for OU, GBM and Logistic, and lambda for the protein model.
struct SdeModel {
    ModelKind kind = ModelKind::OU;
    double rate = 0.5;
    double sigma = 1.0;
    double x0 = 0.0;
    ItoCorrection ito = ItoCorrection::Paper;

    void validate() const
    {
        if (!std::isfinite(rate))
            throw std::invalid_argument("model rate parameter must be finite");
        if (!(sigma >= 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("model sigma must be finite and nonnegative");
        if (!std::isfinite(x0))
            throw std::invalid_argument("model x0 must be finite");
    }

    /// Coefficient of the protein model's Ito correction term.
    [[nodiscard]] double ito_weight() const noexcept
    {
        return ito == ItoCorrection::Paper ? sigma : 0.5 * sigma * sigma;
    }

    /// Drift f(x) of the Ito SDE.
    [[nodiscard]] double drift(double x) const noexcept
    {
        switch (kind) {
        case ModelKind::OU: return -rate * x;
        case ModelKind::GBM: return rate * x;
        case ModelKind::Logistic: return rate * x * (1.0 - x);
        case ModelKind::ProteinKinetic: {
            const double c = ito_weight();
            return 1.0 - x + rate * x * (1.0 - x) + c * x * (1.0 - x) * (1.0 - 2.0 * x);
        }
        }
        return 0.0;
    }

    /// Diffusion g(x).
    [[nodiscard]] double diffusion(double x) const noexcept
    {
        switch (kind) {
        case ModelKind::OU: return sigma;
        case ModelKind::GBM:
        case ModelKind::Logistic: return sigma * x;
        case ModelKind::ProteinKinetic: return sigma * x * (1.0 - x);
        }
        return 0.0;
    }
};

/// Row-wise drift closure f_m. The zero row carries the model's constant term.
[[nodiscard]] inline double row_drift(const SdeModel& model, double x, bool zero_row) noexcept
{
    switch (model.kind) {
    case ModelKind::OU: return -model.rate * x;
    case ModelKind::GBM: return model.rate * x;
    case ModelKind::Logistic: return model.rate * x * (1.0 - x);
    case ModelKind::ProteinKinetic: {
        const double c = model.ito_weight();
        const double lam = model.rate;
        const double poly = (lam + c - 1.0) * x - (lam + 3.0 * c) * x * x + 2.0 * c * x * x * x;
        return zero_row ? 1.0 + poly : poly;
    }
    }
    return 0.0;
}

/// sigma_{m'}: projection of the diffusion coefficient onto row m', given its value.
[[nodiscard]] inline double row_diffusion(const SdeModel& model, double x, bool zero_row) noexcept
{
    switch (model.kind) {
    case ModelKind::OU: return zero_row ? model.sigma : 0.0;
    case ModelKind::GBM:
    case ModelKind::Logistic: return model.sigma * x;
    case ModelKind::ProteinKinetic: return model.sigma * x * (1.0 - x);
    }
    return 0.0;
}

/// Propagator right-hand side for one model over one index set.
///
/// The coupling m -> m^-(j) is resolved to row positions once at construction.
/// A parent missing from the set is treated as a zero coefficient.
class PropagatorRhs {
public:
    struct Link {
        std::uint32_t coord;
        double weight; // sqrt(m_j)
        std::uint32_t parent;
    };

    PropagatorRhs(SdeModel model, const IndexSet& set, const SineBasis& basis)
        : model_(model), basis_(basis), L_(set.L()), zero_row_(set.size(), false),
          link_begin_(set.size() + 1, 0)
    {
        model_.validate();
        if (set.L() > basis.count())
            throw std::invalid_argument("PropagatorRhs: index set length exceeds basis size");
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto& m = set[i];
            zero_row_[i] = m.is_zero();
            for (const auto& e : m.entries()) {
                if (auto p = set.find(decrement(m, e.coord, set.L())))
                    links_.push_back({e.coord, std::sqrt(static_cast<double>(e.mult)),
                                      static_cast<std::uint32_t>(*p)});
            }
            link_begin_[i + 1] = links_.size();
        }
        basis_values_.resize(L_);
    }

    [[nodiscard]] std::size_t size() const noexcept { return zero_row_.size(); }
    [[nodiscard]] const SdeModel& model() const noexcept { return model_; }
    [[nodiscard]] std::span<const Link> links(std::size_t row) const noexcept
    {
        return {links_.data() + link_begin_[row], link_begin_[row + 1] - link_begin_[row]};
    }

    /// dX/dt at time t for the full coefficient vector.
    void operator()(double t, std::span<const double> x, std::span<double> dxdt)
    {
        refresh_basis(t);
        for (std::size_t i = 0; i < x.size(); ++i) {
            double v = row_drift(model_, x[i], zero_row_[i]);
            for (std::size_t l = link_begin_[i]; l < link_begin_[i + 1]; ++l) {
                const auto& lk = links_[l];
                v += lk.weight * basis_values_[lk.coord - 1] *
                     row_diffusion(model_, x[lk.parent], zero_row_[lk.parent]);
            }
            dxdt[i] = v;
        }
    }

private:
    void refresh_basis(double t)
    {
        if (cached_t_ && *cached_t_ == t)
            return;
        const double tc = std::min(std::max(t, 0.0), basis_.T());
        for (std::uint32_t j = 1; j <= L_; ++j)
            basis_values_[j - 1] = basis_.eval_unchecked(j, tc);
        cached_t_ = t;
    }

    SdeModel model_;
    SineBasis basis_;
    std::uint32_t L_;
    std::vector<bool> zero_row_;
    std::vector<Link> links_;
    std::vector<std::size_t> link_begin_;
    std::vector<double> basis_values_;
    std::optional<double> cached_t_;
};

/// One-shot evaluation of the propagator derivatives. Builds the coupling
/// table on every call; use PropagatorRhs directly inside integrators.
[[nodiscard]] inline std::vector<double> propagator_rhs(const SdeModel& model, double t,
                                                        std::span<const double> coeffs,
                                                        const IndexSet& set, const SineBasis& basis)
{
    if (coeffs.size() != set.size())
        throw std::invalid_argument("propagator_rhs: coefficient vector does not match index set");
    PropagatorRhs rhs(model, set, basis);
    std::vector<double> out(coeffs.size());
    rhs(t, coeffs, out);
    return out;
}

namespace detail {
inline void require_kind(const SdeModel& model, ModelKind kind)
{
    if (model.kind != kind)
        throw std::invalid_argument("model is " + std::string(to_string(model.kind)) + ", expected " +
                                    std::string(to_string(kind)));
}
} // namespace detail

[[nodiscard]] inline std::vector<double> rhs_ou(const SdeModel& model, double t, std::span<const double> coeffs,
                                                const IndexSet& set, const SineBasis& basis)
{
    detail::require_kind(model, ModelKind::OU);
    return propagator_rhs(model, t, coeffs, set, basis);
}

[[nodiscard]] inline std::vector<double> rhs_gbm(const SdeModel& model, double t, std::span<const double> coeffs,
                                                 const IndexSet& set, const SineBasis& basis)
{
    detail::require_kind(model, ModelKind::GBM);
    return propagator_rhs(model, t, coeffs, set, basis);
}

[[nodiscard]] inline std::vector<double> rhs_logistic(const SdeModel& model, double t,
                                                      std::span<const double> coeffs, const IndexSet& set,
                                                      const SineBasis& basis)
{
    detail::require_kind(model, ModelKind::Logistic);
    return propagator_rhs(model, t, coeffs, set, basis);
}

[[nodiscard]] inline std::vector<double> rhs_protein(const SdeModel& model, double t,
                                                     std::span<const double> coeffs, const IndexSet& set,
                                                     const SineBasis& basis)
{
    detail::require_kind(model, ModelKind::ProteinKinetic);
    return propagator_rhs(model, t, coeffs, set, basis);
}

} // namespace wce
