#include "blockboot/bootstrap.hpp"
#include "blockboot/cvm.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/random.hpp"
#include "blockboot/vmstat.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace {

using namespace blockboot;

const NullDistribution kUniform = NullDistribution::parse("uniform");

// Exact integral over [0, 1] of (F_a - F_b)^2 for two empirical CDFs.
double exact_squared_l2(std::vector<double> a, std::vector<double> b) {
    std::vector<double> cuts{0.0, 1.0};
    cuts.insert(cuts.end(), a.begin(), a.end());
    cuts.insert(cuts.end(), b.begin(), b.end());
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double d = oracle::brute_ecdf(a, mid) - oracle::brute_ecdf(b, mid);
        total += d * d * (cuts[i + 1] - cuts[i]);
    }
    return total;
}

TEST(NullDistribution, Parse) {
    const auto u = NullDistribution::parse("uniform:2:4");
    EXPECT_EQ(u.cdf(3.0), 0.5);
    EXPECT_EQ(u.density(3.0), 0.5);
    EXPECT_EQ(u.cdf(5.0), 1.0);
    const auto g = NullDistribution::parse("gaussian:1:2");
    EXPECT_NEAR(g.cdf(1.0), 0.5, 1e-15);
    EXPECT_EQ(g.support().first, 1.0 - 16.0);
    EXPECT_THROW((void)NullDistribution::parse("cauchy"), ConfigError);
    EXPECT_THROW((void)NullDistribution::parse("uniform:1"), ConfigError);
    EXPECT_THROW((void)NullDistribution::parse("uniform:1:0"), ConfigError);
    EXPECT_THROW((void)NullDistribution::parse("gaussian:0:-1"), ConfigError);
}

TEST(CvmSpec, Validation) {
    auto id = [](double t) { return std::clamp(t, 0.0, 1.0); };
    EXPECT_NO_THROW(CvmSpec(id, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}));
    EXPECT_THROW(CvmSpec(id, {0.0, 0.0}, {1.0, 1.0}), SpecError);
    EXPECT_THROW(CvmSpec(id, {0.0, 1.0}, {1.0, -1.0}), SpecError);
    EXPECT_THROW(CvmSpec([](double t) { return 1.0 - t; }, {0.0, 1.0}, {1.0, 1.0}), SpecError);
    EXPECT_THROW(CvmSpec([](double t) { return 2.0 * t; }, {0.0, 1.0}, {1.0, 1.0}), SpecError);
    EXPECT_THROW(CvmSpec(id, {}, {}), SpecError);
}

TEST(CvmSpec, GridMergesSamplePoints) {
    const std::vector<double> xs{0.123, 0.5, 2.0};
    const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 11, xs);
    EXPECT_EQ(spec.grid().size(), 12u);  // 0.5 is already a grid point; 2.0 lies outside
    EXPECT_TRUE(std::binary_search(spec.grid().begin(), spec.grid().end(), 0.123));
    double mass = 0.0;
    for (double w : spec.weights()) mass += w;
    EXPECT_NEAR(mass, 1.0, 1e-14);
}

TEST(CvmStatistic, SingleObservationAtOneHalf) {
    const std::vector<double> xs{0.5};
    const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 10000, xs);
    EXPECT_NEAR(cvm_statistic(xs, spec), 1.0 / 12.0, 1e-4);
}

TEST(CvmStatistic, ZeroWeightAndPerfectFit) {
    const std::vector<double> xs{0.1, 0.7};
    EXPECT_EQ(cvm_statistic(xs, make_cvm_spec(kUniform, CvmWeight::zero, 64, xs)), 0.0);
    // F equal to F_n on the grid.
    const CvmSpec fit([&](double t) { return oracle::brute_ecdf(xs, t); }, {0.0, 0.1, 0.5, 0.7, 1.0},
                      {1.0, 1.0, 1.0, 1.0, 1.0});
    EXPECT_EQ(cvm_statistic(xs, fit), 0.0);
}

TEST(CvmStatistic, MatchesExactIntegral) {
    Stream rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs(1 + rng.index(30));
        for (double& x : xs) x = rng.uniform01();
        const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 20001, xs);
        // Exact integral of (F_n(t) - t)^2 over [0, 1].
        std::vector<double> sorted(xs);
        std::sort(sorted.begin(), sorted.end());
        double exact = 0.0;
        double lo = 0.0;
        for (std::size_t i = 0; i <= sorted.size(); ++i) {
            const double hi = i < sorted.size() ? sorted[i] : 1.0;
            const double f = static_cast<double>(i) / static_cast<double>(sorted.size());
            exact += ((hi - f) * (hi - f) * (hi - f) - (lo - f) * (lo - f) * (lo - f)) / 3.0;
            lo = hi;
        }
        EXPECT_NEAR(cvm_statistic(xs, spec), exact, 1e-5);
    }
}

TEST(CvmStatistic, EqualsVStatisticWithInducedKernel) {
    Stream rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs(1 + rng.index(20));
        for (double& x : xs) x = rng.uniform01();
        const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 10000, xs);
        const auto h = cvm_kernel(spec);
        EXPECT_NEAR(cvm_statistic(xs, spec), v_statistic(xs, h), 1e-6);
        check_symmetry(h);
    }
}

TEST(CvmKernel, PositiveDefiniteOnRandomPoints) {
    const auto spec = make_cvm_spec(NullDistribution::parse("gaussian"), CvmWeight::density, 512);
    const auto h = cvm_kernel(spec);
    Stream rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> xs(5);
        std::vector<double> c(5);
        for (std::size_t i = 0; i < 5; ++i) {
            xs[i] = rng.normal();
            c[i] = rng.normal();
        }
        double q = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) q += c[i] * c[j] * h(xs[i], xs[j]);
        }
        ASSERT_GE(q, -1e-12);
    }
}

TEST(BootstrapCvm, IdenticalSampleGivesZero) {
    const std::vector<double> xs{0.1, 0.4, 0.6, 0.9};
    const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 256, xs);
    EXPECT_EQ(bootstrap_cvm_statistic(xs, xs, spec), 0.0);
}

TEST(BootstrapCvm, EqualsScaledHilbertNormOfIndicatorMeans) {
    Stream rng(4);
    const std::vector<double> xs{0.05, 0.3, 0.31, 0.5, 0.77, 0.9};
    const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 1000, xs);
    const auto space = spec.space();
    const auto plan = BlockPlan::make(6, 2);
    auto indicator_mean = [&](std::span<const double> sample) {
        std::vector<double> v(space->size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = oracle::brute_ecdf(sample, space->grid()[j]);
        return GridFunction(space, v);
    };
    for (int trial = 0; trial < 30; ++trial) {
        const auto star = oracle::resample(xs, 2, draw_block_choices(plan, rng));
        const double via_norm = 6.0 * std::pow(norm(indicator_mean(star) - indicator_mean(xs)), 2);
        const double direct = bootstrap_cvm_statistic(xs, star, spec);
        EXPECT_NEAR(direct, via_norm, 1e-12);
        // Three-term formula with the induced kernel; F cancels.
        EXPECT_NEAR(direct, 6.0 * bootstrap_v_statistic(xs, star, cvm_kernel(spec)), 1e-12);
        EXPECT_NEAR(direct, 6.0 * exact_squared_l2(star, xs), 2e-3);
    }
}

TEST(BootstrapCvm, MonteCarloMatchesEnumeration) {
    const std::vector<double> xs{0.1, 0.4, 0.6, 0.9};
    const auto plan = BlockPlan::make(4, 2);
    const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 2048, xs);
    // Library values on every selection agree with the exact integral...
    oracle::for_each_selection(2, [&](const std::vector<std::size_t>& c) {
        const auto star = oracle::resample(xs, 2, c);
        EXPECT_NEAR(bootstrap_cvm_statistic(xs, star, spec), 4.0 * exact_squared_l2(star, xs), 2e-3);
    });
    // ...and the engine's Monte Carlo law agrees with the enumerated law.
    const auto law = oracle::exact_law(xs, 2, 2, [&](const std::vector<double>& star) {
        return bootstrap_cvm_statistic(xs, star, spec);
    });
    const CvmBootstrap engine(xs, plan, spec);
    const auto dist = bootstrap_distribution_from_choices(
        plan, 100000, [&](std::span<const std::size_t> c) { return engine.replicate(c); }, 5, "cvm");
    EXPECT_LT(oracle::kolmogorov_to_discrete(dist.scalar_replicates(), law), 0.01);
}

TEST(CvmBootstrap, AgreesWithDirectFormula) {
    Stream rng(6);
    std::vector<double> xs(211);
    for (double& x : xs) x = rng.uniform01();
    const auto plan = BlockPlan::make(211, 6);
    const auto spec = make_cvm_spec(kUniform, CvmWeight::unit, 300, xs);
    const CvmBootstrap engine(xs, plan, spec);
    const auto prefix = std::span<const double>(xs).subspan(0, plan.used());
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = draw_block_choices(plan, rng);
        const auto star = oracle::resample(xs, plan.p, c);
        EXPECT_NEAR(engine.replicate(c), bootstrap_cvm_statistic(prefix, star, spec), 1e-12);
    }
}

TEST(CvmWeight, ParseAndPrint) {
    for (auto w : {CvmWeight::unit, CvmWeight::density, CvmWeight::zero}) {
        EXPECT_EQ(parse_cvm_weight(to_string(w)), w);
    }
    EXPECT_THROW((void)parse_cvm_weight("anderson-darling"), ConfigError);
}

}  // namespace
