#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fastperm/dot.hpp"
#include "fastperm/error.hpp"
#include "fastperm/estimators.hpp"
#include "oracles.hpp"

using namespace fastperm;

namespace {

struct Instance {
    std::vector<double> u, v;
    double t;
    double p;
};

Instance gaussian_instance(std::uint64_t seed, std::size_t n) {
    RngStream rng(seed, n);
    Instance in;
    in.u.resize(n);
    in.v.resize(n);
    for (double& x : in.u) x = rng.normal();
    for (double& x : in.v) x = rng.normal();
    in.t = compensated_dot(in.u, in.v);
    in.p = n <= 8 ? oracle::brute_force_pvalue(in.u, in.v, in.t, 1e-12L) : -1.0;
    return in;
}

}  // namespace

TEST(AccuracySpec, BatchCountAndValidation) {
    EXPECT_EQ((AccuracySpec{0.1, 0.05, 2.0}.batch_count(3)), 1334u);  // ceil(2 / (0.05 * 3 * 0.01))
    EXPECT_EQ((AccuracySpec{0.5, 0.5, 1.0}.batch_count(1000)), 1u);
    EXPECT_THROW((AccuracySpec{0, 0.05, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((AccuracySpec{0.1, 1.0, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((AccuracySpec{0.1, 0.05, -1}.validate()), std::invalid_argument);
}

TEST(Method, NamesRoundTrip) {
    for (Method m : {Method::fft, Method::fft_median, Method::naive, Method::exact, Method::conservative})
        EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_FALSE(parse_method("bogus"));
}

TEST(EstimatePValue, ZeroVectorsGiveOne) {
    const SampleVector z(std::vector<double>(8, 0.0));
    const auto e = estimate_pvalue(z, z, 0.0, {0.3, 0.2, 2.0}, RngStream(1, 0));
    EXPECT_EQ(e.estimate, 1.0);
    EXPECT_EQ(e.empirical_batch_variance, 0.0);
    EXPECT_EQ(e.method, Method::fft);
}

TEST(EstimatePValue, SmallExampleMeetsGuarantee) {
    const SampleVector u{1, 2, 3};
    const AccuracySpec acc{0.1, 0.05, 2.0};
    int failures = 0;
    const int runs = 100;
    for (int s = 0; s < runs; ++s) {
        const auto e = estimate_pvalue(u, u, 14.0, acc, RngStream(s, 0));
        failures += std::fabs(e.estimate - 1.0 / 6) > 0.1 * std::sqrt(1.0 / 6);
    }
    EXPECT_LE(failures, 12);  // 5% target plus binomial slack at 100 runs
}

TEST(EstimatePValue, GaussianInstanceAgainstExact) {
    const auto in = gaussian_instance(40, 6);
    const AccuracySpec acc{0.1, 0.05, 2.0};
    int failures = 0;
    for (int s = 0; s < 100; ++s) {
        const auto e = estimate_pvalue(SampleVector(in.u), SampleVector(in.v), in.t, acc, RngStream(s, 1));
        failures += std::fabs(e.estimate - in.p) > 0.1 * std::sqrt(in.p);
    }
    EXPECT_LE(failures, 12);
}

TEST(EstimatePValue, IdenticalAcrossThreadCounts) {
    const auto in = gaussian_instance(41, 50);
    const AccuracySpec acc{0.05, 0.05, 2.0};
    const RngStream rng(99, 0);
    const auto a = estimate_pvalue(SampleVector(in.u), SampleVector(in.v), in.t, acc, rng, {.threads = 1});
    const auto b = estimate_pvalue(SampleVector(in.u), SampleVector(in.v), in.t, acc, rng, {.threads = 4});
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.empirical_batch_variance, b.empirical_batch_variance);
    EXPECT_EQ(a.batches, b.batches);
}

TEST(EstimatePValue, BatchCapEnforced) {
    const SampleVector u{1, 2, 3};
    EstimatorOptions opts;
    opts.max_batches = 10;
    EXPECT_THROW(estimate_pvalue(u, u, 14, {0.01, 0.01, 2}, RngStream(1, 1), opts), CapExceededError);
}

TEST(EstimatePValueMedian, OneRepeatMatchesQuarterDelta) {
    const auto in = gaussian_instance(42, 6);
    const RngStream rng(7, 3);
    const auto m = estimate_pvalue_median(SampleVector(in.u), SampleVector(in.v), in.t, {0.1, 0.01, 2.0}, rng, 1);
    const auto l = estimate_pvalue(SampleVector(in.u), SampleVector(in.v), in.t, {0.1, 0.25, 2.0}, rng);
    EXPECT_EQ(m.estimate, l.estimate);
}

TEST(EstimatePValueMedian, ZeroVectorsAndRepeatValidation) {
    const SampleVector z(std::vector<double>(6, 0.0));
    EXPECT_EQ(estimate_pvalue_median(z, z, 0.0, {0.2, 0.05, 2}, RngStream(1, 1), 5).estimate, 1.0);
    EXPECT_THROW(estimate_pvalue_median(z, z, 0.0, {0.2, 0.05, 2}, RngStream(1, 1), 4), std::invalid_argument);
}

TEST(EstimatePValueMedian, FailsLessOftenThanSingleQuarterRun) {
    const auto in = gaussian_instance(43, 6);
    const SampleVector u(in.u), v(in.v);
    // A deliberately loose accuracy makes single-run failures common enough to compare.
    const AccuracySpec acc{0.1, 0.25, 0.25};
    int single = 0, median = 0;
    const int trials = 500;
    for (int s = 0; s < trials; ++s) {
        const double e1 = estimate_pvalue(u, v, in.t, acc, RngStream(s, 10)).estimate;
        const double e9 = estimate_pvalue_median(u, v, in.t, acc, RngStream(s, 20), 9).estimate;
        single += std::fabs(e1 - in.p) > 0.1 * std::sqrt(in.p);
        median += std::fabs(e9 - in.p) > 0.1 * std::sqrt(in.p);
    }
    EXPECT_LT(median, single) << "single=" << single << " median=" << median;
}

TEST(MedianRepeats, OddAndLogarithmic) {
    EXPECT_EQ(median_repeats_for(0.25) % 2, 1u);
    EXPECT_EQ(median_repeats_for(1e-6) % 2, 1u);
    EXPECT_LT(median_repeats_for(0.1), median_repeats_for(1e-6));
    EXPECT_GE(std::exp(-static_cast<double>(median_repeats_for(1e-3)) / 8), 0.0);
    EXPECT_LE(std::exp(-static_cast<double>(median_repeats_for(1e-3)) / 8), 1e-3);
}

TEST(EstimatePValueAuto, UsesLinearPlanAtDefaultDelta) {
    const auto in = gaussian_instance(44, 6);
    const RngStream rng(1, 2);
    const AccuracySpec acc{0.05, 0.05, 2.0};
    const auto a = estimate_pvalue_auto(SampleVector(in.u), SampleVector(in.v), in.t, acc, rng);
    const auto b = estimate_pvalue(SampleVector(in.u), SampleVector(in.v), in.t, acc, rng);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.method, Method::fft);
    const auto c = estimate_pvalue_auto(SampleVector(in.u), SampleVector(in.v), in.t, {0.05, 1e-6, 2.0}, rng);
    EXPECT_EQ(c.method, Method::fft_median);
}

TEST(ConservativePValue, NEqualsTwoIsUniformOnGrid) {
    RngStream data(50, 0);
    const RngStream root(50, 1);
    int ones = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        const SampleVector u{data.normal(), data.normal()};
        const SampleVector v{data.normal(), data.normal()};
        const double r = conservative_pvalue(u, v, 0, root.child(i)).estimate;
        ASSERT_TRUE(r == 0.5 || r == 1.0);
        ones += (r == 1.0);
    }
    EXPECT_NEAR(ones / double(trials), 0.5, 0.03);
}

TEST(ConservativePValue, ZeroVectorsAndGrid) {
    const SampleVector z{0, 0, 0};
    EXPECT_EQ(conservative_pvalue(z, z, 2, RngStream(1, 1)).estimate, 1.0);
    const auto in = gaussian_instance(51, 7);
    const auto e = conservative_pvalue(SampleVector(in.u), SampleVector(in.v), 9, RngStream(3, 3));
    const double scaled = e.estimate * 7 * 10;
    EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
    EXPECT_GE(std::round(scaled), 1.0);
    EXPECT_EQ(e.batches, 10u);
    EXPECT_EQ(e.method, Method::conservative);
}

TEST(ConservativePValue, ThreadIndependent) {
    const auto in = gaussian_instance(52, 40);
    const RngStream rng(8, 8);
    const auto a = conservative_pvalue(SampleVector(in.u), SampleVector(in.v), 50, rng, {.threads = 1});
    const auto b = conservative_pvalue(SampleVector(in.u), SampleVector(in.v), 50, rng, {.threads = 3});
    EXPECT_EQ(a.estimate, b.estimate);
}

TEST(NaiveMc, Examples) {
    const SampleVector z{0, 0};
    EXPECT_EQ(naive_mc_pvalue(z, z, 0.0, 10, RngStream(1, 1)).estimate, 1.0);
    const SampleVector u{1, 2, 3};
    EXPECT_NEAR(naive_mc_pvalue(u, u, 14, 60000, RngStream(2, 2)).estimate, 1.0 / 6, 0.01);
    EXPECT_EQ(naive_mc_pvalue(u, u, 14.5, 1000, RngStream(3, 3)).estimate, 0.0);
    EXPECT_THROW(naive_mc_pvalue(u, u, 14, 0, RngStream(3, 3)), std::invalid_argument);
}

TEST(ExactPValue, Examples) {
    const SampleVector u{1, 2, 3};
    EXPECT_DOUBLE_EQ(exact_pvalue(u, u, 14).estimate, 1.0 / 6);
    EXPECT_EQ(exact_pvalue(u, u, 10).estimate, 1.0);
    EXPECT_EQ(exact_pvalue(u, u, 9.9).estimate, 1.0);
    EXPECT_EQ(exact_pvalue(u, u, 14).batches, 6u);
    EXPECT_THROW(exact_pvalue(SampleVector(std::vector<double>(11, 1.0)), SampleVector(std::vector<double>(11, 1.0)), 0),
                 CapExceededError);
}

TEST(ExactPValue, AgreesWithHeapEnumeration) {
    for (std::size_t n = 2; n <= 8; ++n) {
        const auto in = gaussian_instance(60, n);
        const double e = exact_pvalue(SampleVector(in.u), SampleVector(in.v), in.t).estimate;
        EXPECT_DOUBLE_EQ(e, in.p) << "n=" << n;
        const double scaled = e * static_cast<double>(oracle::all_products(in.u, in.v).size());
        EXPECT_NEAR(scaled, std::round(scaled), 1e-6);
    }
}

TEST(ExactPValue, MonotoneAcrossAchievableValues) {
    const std::vector<double> u{0.5, -1, 2, 0.3, 1.7};
    const std::vector<double> v{1, 0.1, -0.4, 2.2, 0.9};
    auto prods = oracle::all_products(u, v);
    std::sort(prods.begin(), prods.end());
    double prev = 1.0;
    for (long double t : prods) {
        const double e = exact_pvalue(SampleVector(u), SampleVector(v), static_cast<double>(t)).estimate;
        EXPECT_LE(e, prev);
        prev = e;
    }
}

TEST(CovarianceProbe, ZeroVectorsGiveZeroRatio) {
    const SampleVector z(std::vector<double>(6, 0.0));
    const auto r = empirical_covariance_probe(z, z, 0.0, 100, RngStream(1, 1));
    EXPECT_EQ(r.batch_variance, 0.0);
    EXPECT_EQ(r.variance_ratio, 0.0);
    EXPECT_EQ(r.p_reference, 1.0);
    EXPECT_TRUE(r.p_reference_exact);
}

TEST(CovarianceProbe, SmallInstanceCovarianceNotPositive) {
    const auto in = gaussian_instance(70, 6);
    auto prods = oracle::all_products(in.u, in.v);
    std::nth_element(prods.begin(), prods.begin() + prods.size() / 2, prods.end());
    const double t = static_cast<double>(prods[prods.size() / 2]);
    const auto r = empirical_covariance_probe(SampleVector(in.u), SampleVector(in.v), t, 20000, RngStream(2, 2));
    EXPECT_TRUE(r.p_reference_exact);
    EXPECT_LE(r.mean_pairwise_covariance, 3 * r.covariance_std_error);
    // Independent shifts would give ratio 1; with nonpositive covariance it is at most about 1.
    EXPECT_LE(r.variance_ratio, 1.2);
}
