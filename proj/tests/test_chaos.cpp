#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <wcebridge/basis.hpp>
#include <wcebridge/chaos.hpp>
#include <wcebridge/rng.hpp>

using namespace wce;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers)
{
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(detail::philox4x32_10(A4{0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(detail::philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(detail::philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalStream, RandomAccessMatchesFill)
{
    const NormalStream s(42, Lane::Test, 7);
    std::vector<double> a(11);
    s.fill(a, 3);
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a[i], s[3 + i]);
}

TEST(Hermite, Values)
{
    for (double x : {-3.0, 0.0, 7.0})
        EXPECT_EQ(hermite(0, x), 1.0);
    EXPECT_DOUBLE_EQ(hermite(1, 2.0), 2.0);
    EXPECT_NEAR(hermite(2, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(hermite(2, 3.0), 8.0 / std::sqrt(2.0), 1e-14);
    // He_3(x) = x^3 - 3x, normalized by sqrt(3!).
    EXPECT_NEAR(hermite(3, 1.5), (3.375 - 4.5) / std::sqrt(6.0), 1e-14);
    EXPECT_TRUE(std::isfinite(hermite(64, 5.0)));
}

TEST(SampleChi, Determinism)
{
    const auto a = sample_chi(123, 0, 50), b = sample_chi(123, 0, 50), c = sample_chi(123, 1, 50);
    EXPECT_EQ(a.chi, b.chi);
    EXPECT_NE(a.chi, c.chi);
    EXPECT_EQ(a.chi.size(), 50u);
}

TEST(SampleChi, Moments)
{
    const int n = 100000;
    double s = 0, s2 = 0;
    for (int k = 0; k < n; ++k) {
        const double x = sample_chi(2024, k, 1).chi[0];
        s += x;
        s2 += x * x;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    EXPECT_LT(std::abs(mean), 3.0 / std::sqrt(n));
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Xi, Basics)
{
    auto d = sample_chi(5, 9, 3);
    EXPECT_EQ(eval_xi(d, MultiIndex{}), 1.0);
    for (std::uint32_t k = 1; k <= 3; ++k)
        EXPECT_EQ(eval_xi(d, MultiIndex::unit(k)), d.chi[k - 1]);
    EXPECT_THROW((void)eval_xi(d, MultiIndex::unit(4)), std::out_of_range);
    const auto set = enumerate_full(3, 3);
    evaluate_xi(d, set);
    for (std::size_t i = 0; i < set.size(); ++i)
        EXPECT_DOUBLE_EQ(d.xi[i], eval_xi(d, set[i]));
}

TEST(Hermite, OrthonormalUnderGaussian)
{
    const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::uint32_t i = 0; i <= 12; ++i)
        for (std::uint32_t j = 0; j <= 12; ++j) {
            const double v = integrate_gl(
                [&](double x) { return hermite(i, x) * hermite(j, x) * c * std::exp(-0.5 * x * x); }, -14.0, 14.0,
                200);
            EXPECT_NEAR(v, i == j ? 1.0 : 0.0, 1e-12) << i << "," << j;
        }
}

// Products of cubic Hermite terms have E[xi^4] near 93, so the Monte Carlo
// standard error at 1e5 draws exceeds 0.02 for those pairs; the band is the
// larger of 0.02 and four estimated standard errors.
TEST(Xi, MonteCarloOrthonormality)
{
    const auto set = enumerate_full(3, 3);
    const std::size_t n = set.size();
    const int draws = 100000;
    std::vector<double> gram(n * n, 0.0), gram2(n * n, 0.0), mean(n, 0.0);
    for (int k = 0; k < draws; ++k) {
        auto d = sample_chi(77, k, 3);
        evaluate_xi(d, set);
        for (std::size_t i = 0; i < n; ++i) {
            mean[i] += d.xi[i];
            for (std::size_t j = i; j < n; ++j) {
                const double v = d.xi[i] * d.xi[j];
                gram[i * n + j] += v;
                gram2[i * n + j] += v * v;
            }
        }
    }
    int strict = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            EXPECT_LT(std::abs(mean[i] / draws), std::max(0.02, 4.0 / std::sqrt(draws))) << set[i].to_string();
        }
        for (std::size_t j = i; j < n; ++j) {
            const double m = gram[i * n + j] / draws;
            const double se = std::sqrt((gram2[i * n + j] / draws - m * m) / draws);
            const double target = i == j ? 1.0 : 0.0;
            EXPECT_NEAR(m, target, std::max(0.02, 4.0 * se)) << set[i].to_string() << " " << set[j].to_string();
            if (std::abs(m - target) < 0.02)
                ++strict;
        }
    }
    RecordProperty("pairs_within_0_02", strict);
}
