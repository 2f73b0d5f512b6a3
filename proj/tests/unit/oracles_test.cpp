// Sanity checks on the reference implementations themselves.
#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

TEST(Oracle, HeapEnumerationVisitsEveryPermutationOnce) {
    // With u = (1, 10, 100, ...) and v = (0, 1, 2, ...) each product encodes the permutation.
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<double> u(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = std::pow(10.0, static_cast<double>(i));
            v[i] = static_cast<double>(i);
        }
        const auto prods = oracle::all_products(u, v);
        std::set<long double> distinct(prods.begin(), prods.end());
        std::size_t fact = 1;
        for (std::size_t i = 2; i <= n; ++i) fact *= i;
        EXPECT_EQ(prods.size(), fact);
        EXPECT_EQ(distinct.size(), fact);
    }
}

TEST(Oracle, SmallHandValues) {
    const std::vector<double> a{1, 2, 3};
    auto p = oracle::all_products(a, a);
    std::sort(p.begin(), p.end());
    EXPECT_EQ(p, (std::vector<long double>{10, 11, 11, 13, 13, 14}));
    EXPECT_EQ(oracle::partition_count(4), 5u);
    EXPECT_EQ(oracle::partition_count(10), 42u);
    EXPECT_EQ(oracle::partition_count(20), 627u);
    EXPECT_EQ(oracle::ranks({3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
    EXPECT_EQ(oracle::mann_whitney_pvalue({1, 2}, {3, 4}), 1.0 / 6);
}

TEST(Oracle, S4TableIsOrthonormal) {
    const auto t = oracle::s4_character_table();
    ASSERT_EQ(t.size(), 5u);
    long long total = 0;
    for (const auto& r : t) total += r.size;
    EXPECT_EQ(total, 24);
    auto inner = [&](auto f, auto g) {
        long long s = 0;
        for (const auto& r : t) s += r.size * f(r) * g(r);
        return s;
    };
    auto c4 = [](const oracle::S4Row& r) { return r.chi_4; };
    auto c31 = [](const oracle::S4Row& r) { return r.chi_31; };
    auto c22 = [](const oracle::S4Row& r) { return r.chi_22; };
    auto c211 = [](const oracle::S4Row& r) { return r.chi_211; };
    EXPECT_EQ(inner(c31, c31), 24);
    EXPECT_EQ(inner(c22, c22), 24);
    EXPECT_EQ(inner(c211, c211), 24);
    EXPECT_EQ(inner(c31, c22), 0);
    EXPECT_EQ(inner(c4, c211), 0);
}
