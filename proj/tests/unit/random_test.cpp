#include "blockboot/random.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <set>

namespace {

using blockboot::Stream;
using blockboot::derive_seed;

TEST(Stream, Deterministic) {
    Stream a(42);
    Stream b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
    Stream c(43);
    Stream d(42);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) equal += c.next() == d.next();
    EXPECT_EQ(equal, 0);
}

TEST(Stream, DerivedSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t parent : {0ULL, 1ULL, 2ULL}) {
        for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(parent, i));
    }
    EXPECT_EQ(seen.size(), 3000u);
    static_assert(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST(Stream, Uniform01MomentsAndRange) {
    Stream s(7);
    const int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 2e-3);
}

TEST(Stream, IndexIsUniform) {
    Stream s(8);
    std::array<int, 7> counts{};
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto j = s.index(7);
        ASSERT_LT(j, 7u);
        ++counts[j];
    }
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_LT(chi2, 22.46);  // chi-square(6) 0.999 quantile
    EXPECT_EQ(s.index(1), 0u);
}

TEST(Stream, NormalMoments) {
    Stream s(9);
    const int n = 200000;
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.012);
    EXPECT_NEAR(m2 / n, 1.0, 0.015);
    EXPECT_NEAR(m4 / n, 3.0, 0.1);
}

TEST(Stream, GammaAndStudentMoments) {
    Stream s(10);
    const int n = 200000;
    double g = 0.0;
    double t2 = 0.0;
    for (int i = 0; i < n; ++i) {
        g += s.gamma(3.0);
        const double t = s.student_t(10.0);
        t2 += t * t;
    }
    EXPECT_NEAR(g / n, 3.0, 0.03);
    EXPECT_NEAR(t2 / n, 10.0 / 8.0, 0.03);
}

}  // namespace
