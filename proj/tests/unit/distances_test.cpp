#include "blockboot/distances.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace blockboot;

TEST(Kolmogorov, TwoSample) {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(kolmogorov_distance(a, b), 0.0);
    const std::vector<double> c{5.0, 6.0};
    EXPECT_EQ(kolmogorov_distance(a, c), 1.0);
    // Ties across samples are handled at the common jump.
    const std::vector<double> d{2.0, 2.0};
    EXPECT_DOUBLE_EQ(kolmogorov_distance(a, d), 0.5);
    EXPECT_THROW((void)kolmogorov_distance(a, std::vector<double>{}), EmptyInputError);
}

TEST(Kolmogorov, AgainstCdf) {
    const std::vector<double> a{0.5};
    EXPECT_DOUBLE_EQ(kolmogorov_distance(a, [](double t) { return std::clamp(t, 0.0, 1.0); }), 0.5);
    Stream rng(1);
    std::vector<double> xs(20000);
    for (double& x : xs) x = rng.normal();
    EXPECT_LT(kolmogorov_distance(xs, normal_cdf), 1.36 / std::sqrt(20000.0));
}

TEST(Reference, ClosedForms) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    // P(sigma^2 Z^2 <= x) = P(|Z| <= sqrt(x) / sigma).
    EXPECT_NEAR(scaled_chi_square1_cdf(4.0 * 1.959963984540054 * 1.959963984540054, 4.0), 0.95, 1e-12);
    EXPECT_NEAR(half_normal_cdf(2.0 * 1.959963984540054, 4.0), 0.95, 1e-12);
    EXPECT_EQ(scaled_chi_square1_cdf(-1.0, 1.0), 0.0);
    EXPECT_EQ(half_normal_cdf(-1.0, 1.0), 0.0);
}

}  // namespace
