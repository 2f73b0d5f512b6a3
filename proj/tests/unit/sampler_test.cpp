#include <gtest/gtest.h>

#include <cmath>

#include "fastperm/circulant.hpp"
#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"
#include "fastperm/sampler.hpp"
#include "oracles.hpp"

using namespace fastperm;

TEST(CirculantDots, Examples) {
    auto r = circulant_dots(SampleVector{1, 0, 0}, SampleVector{5, 7, 9});
    EXPECT_NEAR(r.values[0], 5, 1e-12);
    EXPECT_NEAR(r.values[1], 7, 1e-12);
    EXPECT_NEAR(r.values[2], 9, 1e-12);
    r = circulant_dots(SampleVector{1, 1, 1}, SampleVector{5, 7, 9});
    for (double y : r.values) EXPECT_NEAR(y, 21, 1e-12);
    r = circulant_dots(SampleVector{1, 2}, SampleVector{3, 4});
    EXPECT_NEAR(r.values[0], 11, 1e-12);
    EXPECT_NEAR(r.values[1], 10, 1e-12);
}

TEST(CirculantDots, Errors) {
    EXPECT_THROW(circulant_dots(SampleVector{1, 2}, SampleVector{1, 2, 3}), DimensionError);
}

TEST(CirculantDots, MatchesDirectForAllSmallLengths) {
    RngStream rng(21, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 63;  // 2..64, primes included
        std::vector<double> u(n), v(n);
        for (double& x : u) x = rng.normal() * 100;
        for (double& x : v) x = rng.normal();
        const auto fft = circulant_dots(SampleVector(u), SampleVector(v));
        const auto ref = oracle::shift_products(u, v);
        const double scale = norm2(u) * norm2(v);
        for (std::size_t k = 0; k < n; ++k)
            ASSERT_LE(std::fabs(fft.values[k] - static_cast<double>(ref[k])), 1e-9 * scale) << "n=" << n;
    }
}

TEST(CirculantDots, LargePrimeLength) {
    RngStream rng(22, 0);
    const std::size_t n = 4099;
    std::vector<double> u(n), v(n);
    for (double& x : u) x = rng.normal();
    for (double& x : v) x = rng.normal();
    const auto fft = circulant_dots(SampleVector(u), SampleVector(v));
    const auto direct = circulant_dots_direct(u, v);
    const double scale = norm2(u) * norm2(v);
    for (std::size_t k = 0; k < n; k += 37) EXPECT_LE(std::fabs(fft.values[k] - direct.values[k]), 1e-9 * scale);
}

TEST(CirculantCorrelator, LoadedFormMatches) {
    RngStream rng(23, 0);
    const std::size_t n = 30;
    std::vector<double> u1(n), u2(n), v(n), a(n), b(n);
    for (double& x : u1) x = rng.normal();
    for (double& x : u2) x = rng.normal();
    for (double& x : v) x = rng.normal();
    CirculantCorrelator c(n);
    c.load_right(v);
    c.correlate_loaded(u1, a);
    c.correlate(u2, v, b);
    std::vector<double> a2(n);
    c.load_right(v);
    c.correlate_loaded(u1, a2);
    EXPECT_EQ(a, a2);
    const auto ref = oracle::shift_products(u2, v);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(b[k], static_cast<double>(ref[k]), 1e-10);
}

TEST(BatchIndicatorMean, ZeroVectors) {
    const SampleVector z{0, 0, 0, 0};
    const RngStream rng(1, 0);
    EXPECT_EQ(batch_indicator_mean(z, z, 0.0, rng).mean_indicator, 1.0);
    EXPECT_EQ(batch_indicator_mean(z, z, 1.0, rng).mean_indicator, 0.0);
    EXPECT_THROW(batch_indicator_mean(z, z, NAN, rng), NonFiniteError);
}

TEST(BatchIndicatorMean, ExpectationIsExactPValue) {
    const SampleVector u{1, 2, 3};
    const RngStream root(31, 0);
    double sum = 0;
    const int batches = 20000;
    for (int i = 0; i < batches; ++i) {
        const auto r = batch_indicator_mean(u, u, 14.0, root.child(i));
        ASSERT_EQ(r.hits, static_cast<std::size_t>(std::lround(r.mean_indicator * 3)));
        sum += r.mean_indicator;
    }
    EXPECT_NEAR(sum / batches, 1.0 / 6, 0.01);
}

TEST(BatchIndicatorMean, ConvergesToOracleForGaussianData) {
    RngStream data(32, 0);
    for (std::size_t n = 4; n <= 7; ++n) {
        std::vector<double> u(n), v(n);
        for (double& x : u) x = data.normal();
        for (double& x : v) x = data.normal();
        const double t = compensated_dot(u, v);
        const double p = oracle::brute_force_pvalue(u, v, t, 1e-12L);
        const RngStream root(33, n);
        double sum = 0;
        const int batches = 20000;
        for (int i = 0; i < batches; ++i)
            sum += batch_indicator_mean(SampleVector(u), SampleVector(v), t, root.child(i)).mean_indicator;
        EXPECT_NEAR(sum / batches, p, 4 * std::sqrt(p * (1 - p) / batches) + 1e-3) << "n=" << n;
    }
}

TEST(BatchIndicatorMean, SymmetricInArguments) {
    const SampleVector u{0.3, -1.2, 2.0, 0.7, 1.1};
    const SampleVector v{1.0, 0.2, -0.5, 0.9, -2.0};
    const double t = 0.5;
    const RngStream root(34, 0);
    double a = 0, b = 0;
    for (int i = 0; i < 20000; ++i) {
        a += batch_indicator_mean(u, v, t, root.child(i)).mean_indicator;
        b += batch_indicator_mean(v, u, t, root.child(i + 1'000'000)).mean_indicator;
    }
    EXPECT_NEAR(a / 20000, b / 20000, 0.015);
}

TEST(BatchIndicatorMean, SeedPathsRecorded) {
    const SampleVector u{1, 2, 3, 4};
    const RngStream s(5, 77);
    const auto r = batch_indicator_mean(u, u, 0, s);
    EXPECT_EQ(r.sigma1_seedpath, id_of(s.child(1)));
    EXPECT_EQ(r.sigma2_seedpath, id_of(s.child(2)));
    const auto r2 = batch_indicator_mean(u, u, 0, s);
    EXPECT_EQ(r.mean_indicator, r2.mean_indicator);
}

// Integer data puts many shift products exactly on the threshold; the guard
// band must settle every one of them exactly before the comparison.
TEST(BatchSampler, BorderlineProductsRefinedExactly) {
    std::vector<double> u(64), v(64);
    for (std::size_t i = 0; i < 64; ++i) {
        u[i] = static_cast<double>(i % 5);
        v[i] = static_cast<double>(i % 3);
    }
    const double t = compensated_dot(u, v);
    BatchSampler s(u, v);
    const RngStream root(35, 0);
    std::size_t near = 0;
    for (int i = 0; i < 200; ++i) {
        const auto r = s.run(t, root.child(i));
        near += r.near_threshold_count;
        std::size_t hits = 0;
        for (double y : s.shift_products()) {
            if (std::fabs(y - t) < 1e-6) ASSERT_EQ(y, t);
            hits += (y >= t);
        }
        EXPECT_EQ(hits, r.hits);
    }
    EXPECT_GT(near, 0u);
}

TEST(BatchSampler, MonotoneInThresholdPathwise) {
    RngStream data(36, 0);
    std::vector<double> u(20), v(20);
    for (double& x : u) x = data.normal();
    for (double& x : v) x = data.normal();
    BatchSampler s(u, v);
    const RngStream stream(36, 1);
    double prev = 1.0;
    for (double t = -10; t <= 10; t += 0.25) {
        const double m = s.run(t, stream).mean_indicator;
        EXPECT_LE(m, prev);
        prev = m;
    }
}

TEST(GuardBand, Scale) {
    EXPECT_DOUBLE_EQ(guard_band(2, 3, -4), 1e-9 * 10);
}
