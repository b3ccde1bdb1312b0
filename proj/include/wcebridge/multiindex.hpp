#pragma once

// Multi-indices of the Wiener chaos and the truncated index sets J_{p,L}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wce {

/// Thrown when an exhaustive enumeration would exceed its configured size cap.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Finitely supported multiplicity vector m = (m_1, m_2, ...).
///
/// Stored sparsely as (coordinate, multiplicity) pairs sorted by coordinate.
/// Coordinates are 1-based. Zero multiplicities are never stored, so two
/// indices compare equal exactly when they describe the same vector.
class MultiIndex {
public:
    struct Entry {
        std::uint32_t coord;
        std::uint32_t mult;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    MultiIndex() = default;

    /// Dense constructor: dense[k-1] is m_k.
    static MultiIndex from_dense(std::initializer_list<std::uint32_t> dense)
    {
        return from_dense(std::vector<std::uint32_t>(dense));
    }

    static MultiIndex from_dense(const std::vector<std::uint32_t>& dense)
    {
        MultiIndex m;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i] != 0)
                m.entries_.push_back({static_cast<std::uint32_t>(i + 1), dense[i]});
        return m;
    }

    /// The unit vector e_k.
    static MultiIndex unit(std::uint32_t k, std::uint32_t mult = 1)
    {
        if (k == 0)
            throw std::out_of_range("multi-index coordinates start at 1");
        MultiIndex m;
        if (mult != 0)
            m.entries_.push_back({k, mult});
        return m;
    }

    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] bool is_zero() const noexcept { return entries_.empty(); }

    /// m_k, zero when k is outside the support.
    [[nodiscard]] std::uint32_t operator[](std::uint32_t k) const noexcept
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                   [](const Entry& e, std::uint32_t c) { return e.coord < c; });
        return (it != entries_.end() && it->coord == k) ? it->mult : 0;
    }

    /// Largest coordinate in the support, 0 for the zero index.
    [[nodiscard]] std::uint32_t max_coord() const noexcept
    {
        return entries_.empty() ? 0 : entries_.back().coord;
    }

    /// Returns a copy with m_k replaced by `mult`.
    [[nodiscard]] MultiIndex with(std::uint32_t k, std::uint32_t mult) const
    {
        MultiIndex m = *this;
        auto it = std::lower_bound(m.entries_.begin(), m.entries_.end(), k,
                                   [](const Entry& e, std::uint32_t c) { return e.coord < c; });
        if (it != m.entries_.end() && it->coord == k) {
            if (mult == 0)
                m.entries_.erase(it);
            else
                it->mult = mult;
        } else if (mult != 0) {
            m.entries_.insert(it, {k, mult});
        }
        return m;
    }

    [[nodiscard]] std::vector<std::uint32_t> dense(std::uint32_t length) const
    {
        std::vector<std::uint32_t> out(length, 0);
        for (const auto& e : entries_)
            if (e.coord <= length)
                out[e.coord - 1] = e.mult;
        return out;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string s = "(";
        const std::uint32_t n = std::max<std::uint32_t>(max_coord(), 1);
        for (std::uint32_t k = 1; k <= n; ++k) {
            if (k > 1)
                s += ',';
            s += std::to_string((*this)[k]);
        }
        return s + ")";
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

    /// Graded lexicographic order: by |m|, then by the dense vector compared
    /// from coordinate 1 upward with larger leading entries first.
    friend bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

    /// Plain structural order, usable as a map key.
    friend bool operator<(const MultiIndex& a, const MultiIndex& b)
    {
        return std::lexicographical_compare(
            a.entries_.begin(), a.entries_.end(), b.entries_.begin(), b.entries_.end(),
            [](const Entry& x, const Entry& y) {
                return x.coord != y.coord ? x.coord < y.coord : x.mult < y.mult;
            });
    }

private:
    std::vector<Entry> entries_;
};

/// |m| = sum of all multiplicities.
[[nodiscard]] inline std::uint64_t order(const MultiIndex& m) noexcept
{
    std::uint64_t s = 0;
    for (const auto& e : m.entries())
        s += e.mult;
    return s;
}

/// m^-(k): entry k lowered by one, floored at zero.
[[nodiscard]] inline MultiIndex decrement(const MultiIndex& m, std::uint32_t k, std::uint32_t length_bound)
{
    if (k < 1 || k > length_bound)
        throw std::out_of_range("decrement: coordinate " + std::to_string(k) + " outside 1.." +
                                std::to_string(length_bound));
    const std::uint32_t mk = m[k];
    return mk == 0 ? m : m.with(k, mk - 1);
}

/// m! = prod_k m_k!. Exact for |m| <= 20.
[[nodiscard]] inline std::uint64_t factorial_product(const MultiIndex& m) noexcept
{
    std::uint64_t out = 1;
    for (const auto& e : m.entries())
        for (std::uint32_t i = 2; i <= e.mult; ++i)
            out *= i;
    return out;
}

inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b)
{
    const auto oa = order(a), ob = order(b);
    if (oa != ob)
        return oa < ob;
    // Walk coordinates in increasing order; the first differing entry decides,
    // with the larger entry coming first (e1 before e2, 2e1 before e1+e2).
    auto ia = a.entries().begin(), ib = b.entries().begin();
    while (ia != a.entries().end() && ib != b.entries().end()) {
        if (ia->coord != ib->coord)
            return ia->coord < ib->coord;
        if (ia->mult != ib->mult)
            return ia->mult > ib->mult;
        ++ia;
        ++ib;
    }
    return ia != a.entries().end() && ib == b.entries().end();
}

enum class IndexScheme { TableA, FullUpToOrder };

inline const char* to_string(IndexScheme s)
{
    return s == IndexScheme::TableA ? "TableA" : "FullUpToOrder";
}

/// Ordered, duplicate-free collection of multi-indices with |m| <= p and
/// support inside 1..L. Element 0 is always the zero index.
class IndexSet {
public:
    IndexSet(std::vector<MultiIndex> indices, std::uint32_t p, std::uint32_t L, IndexScheme scheme)
        : indices_(std::move(indices)), p_(p), L_(L), scheme_(scheme)
    {
        if (indices_.empty() || !indices_.front().is_zero())
            throw std::invalid_argument("IndexSet: first element must be the zero index");
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            const auto& m = indices_[i];
            if (order(m) > p_ || m.max_coord() > L_)
                throw std::invalid_argument("IndexSet: " + m.to_string() + " outside J_{p,L}");
            if (!lookup_.emplace(m, i).second)
                throw std::invalid_argument("IndexSet: duplicate " + m.to_string());
            max_order_ = std::max<std::uint32_t>(max_order_, static_cast<std::uint32_t>(order(m)));
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return indices_.end(); }

    [[nodiscard]] std::uint32_t p() const noexcept { return p_; }
    [[nodiscard]] std::uint32_t L() const noexcept { return L_; }
    [[nodiscard]] IndexScheme scheme() const noexcept { return scheme_; }
    /// Largest order actually present (may be below p).
    [[nodiscard]] std::uint32_t max_order() const noexcept { return max_order_; }

    /// Position of m in the set, if present.
    [[nodiscard]] std::optional<std::size_t> find(const MultiIndex& m) const
    {
        auto it = lookup_.find(m);
        if (it == lookup_.end())
            return std::nullopt;
        return it->second;
    }

private:
    std::vector<MultiIndex> indices_;
    std::map<MultiIndex, std::size_t> lookup_;
    std::uint32_t p_;
    std::uint32_t L_;
    IndexScheme scheme_;
    std::uint32_t max_order_ = 0;
};

/// The fixed list of vectors used for the numerical experiments: the zero
/// vector, all singletons e_1..e_L, six order-two vectors on coordinates 1-3,
/// (1,2) and (2,1), then n*e_1 and n*e_2 for n = 3..10. Vectors with order
/// above p or support beyond L are dropped; L = 0 leaves only the zero index.
[[nodiscard]] inline IndexSet enumerate_table_a(std::uint32_t p, std::uint32_t L)
{
    std::vector<MultiIndex> out;
    out.reserve(L + 32);
    out.emplace_back();
    if (p >= 1)
        for (std::uint32_t k = 1; k <= L; ++k)
            out.push_back(MultiIndex::unit(k));

    std::vector<MultiIndex> tail = {
        MultiIndex::from_dense({1, 1}),    MultiIndex::from_dense({1, 0, 1}),
        MultiIndex::from_dense({0, 1, 1}), MultiIndex::from_dense({2}),
        MultiIndex::from_dense({0, 2}),    MultiIndex::from_dense({0, 0, 2}),
        MultiIndex::from_dense({1, 2}),    MultiIndex::from_dense({2, 1}),
    };
    for (std::uint32_t n = 3; n <= 10; ++n) {
        tail.push_back(MultiIndex::unit(1, n));
        tail.push_back(MultiIndex::unit(2, n));
    }
    for (auto& m : tail)
        if (order(m) <= p && m.max_coord() <= L)
            out.push_back(std::move(m));
    return IndexSet(std::move(out), p, L, IndexScheme::TableA);
}

/// C(n, k) as a double (only used for size checks).
[[nodiscard]] inline double binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0.0;
    double r = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// Every multi-index with support in 1..L and |m| <= p, graded-lex order.
[[nodiscard]] inline IndexSet enumerate_full(std::uint32_t p, std::uint32_t L, double cap = 1e6)
{
    const double count = binomial(static_cast<std::uint64_t>(L) + p, p);
    if (count > cap)
        throw SizeError("enumerate_full: C(L+p,p) = " + std::to_string(count) + " exceeds cap");

    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(count));
    // Depth-first over coordinates 1..L distributing the remaining order; for
    // each total order n, visiting larger leading entries first yields the
    // graded-lex sequence directly.
    std::vector<std::uint32_t> dense(L, 0);
    auto emit = [&](auto&& self, std::uint32_t coord, std::uint32_t remaining) -> void {
        if (remaining == 0) {
            out.push_back(MultiIndex::from_dense(dense));
            return;
        }
        if (coord > L)
            return;
        for (std::uint32_t v = remaining;; --v) {
            dense[coord - 1] = v;
            self(self, coord + 1, remaining - v);
            if (v == 0)
                break;
        }
        dense[coord - 1] = 0;
    };
    for (std::uint32_t n = 0; n <= p; ++n)
        emit(emit, 1, n);
    return IndexSet(std::move(out), p, L, IndexScheme::FullUpToOrder);
}

[[nodiscard]] inline IndexSet enumerate(IndexScheme scheme, std::uint32_t p, std::uint32_t L)
{
    return scheme == IndexScheme::TableA ? enumerate_table_a(p, L) : enumerate_full(p, L);
}

} // namespace wce
