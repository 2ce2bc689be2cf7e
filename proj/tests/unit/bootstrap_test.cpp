#include "blockboot/bootstrap.hpp"
#include "blockboot/distances.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/generators.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>

namespace {

using namespace blockboot;

HilbertSample one_to(std::size_t n) {
    std::vector<double> xs(n);
    std::iota(xs.begin(), xs.end(), 1.0);
    return HilbertSample::scalars(xs);
}

TEST(Schedule, SmallestCase) {
    for (bool freeze : {false, true}) {
        const auto plan = block_length_schedule(1, kDefaultBlockExponent, freeze);
        EXPECT_EQ(plan.p, 1u);
        EXPECT_EQ(plan.k, 1u);
    }
}

TEST(Schedule, CubeRootOfThousand) {
    const auto plan = block_length_schedule(1000, 1.0 / 3.0, false);
    EXPECT_EQ(plan.p, 10u);
    EXPECT_EQ(plan.k, 100u);
}

TEST(Schedule, DyadicFreeze) {
    const auto plan = block_length_schedule(5, 1.0 / 3.0, true);
    EXPECT_EQ(plan.p, 2u);
    EXPECT_EQ(plan.k, 2u);
    EXPECT_TRUE(plan.dyadic_freeze);
    // Constant on (512, 1024].
    const auto lo = block_length_schedule(513, 1.0 / 3.0, true).p;
    EXPECT_EQ(lo, block_length_schedule(1024, 1.0 / 3.0, true).p);
    EXPECT_EQ(lo, 10u);
}

TEST(Schedule, MonotoneInN) {
    for (bool freeze : {false, true}) {
        for (double e : {0.25, 1.0 / 3.0, 0.5}) {
            std::size_t previous = 0;
            for (std::size_t n = 1; n <= 10000; ++n) {
                const auto plan = block_length_schedule(n, e, freeze);
                ASSERT_GE(plan.p, previous) << "n=" << n;
                ASSERT_GE(plan.k, 1u);
                ASSERT_LE(plan.k * plan.p, n);
                ASSERT_EQ(plan.k, n / plan.p);
                previous = plan.p;
            }
        }
    }
}

TEST(Schedule, Errors) {
    EXPECT_THROW((void)block_length_schedule(0), EmptyInputError);
    EXPECT_THROW((void)block_length_schedule(10, 0.0), ConfigError);
    EXPECT_THROW((void)block_length_schedule(10, 1.0), ConfigError);
    EXPECT_THROW((void)BlockPlan::make(10, 0), ConfigError);
    EXPECT_THROW((void)BlockPlan::make(10, 11), ConfigError);
}

TEST(BlockPlan, BlocksCoverPrefix) {
    const auto plan = BlockPlan::make(23, 4);
    EXPECT_EQ(plan.k, 5u);
    EXPECT_EQ(plan.used(), 20u);
    EXPECT_EQ(plan.discarded(), 3u);
    std::size_t next = 0;
    for (std::size_t i = 0; i < plan.k; ++i) {
        const auto b = plan.block(i);
        EXPECT_EQ(b.begin, next);
        EXPECT_EQ(b.size(), 4u);
        next = b.end;
    }
    EXPECT_EQ(next, plan.used());
    EXPECT_THROW((void)plan.block(5), IndexError);
}

TEST(Resample, SingleBlockReturnsPrefix) {
    const auto s = one_to(7);
    const auto plan = BlockPlan::make(7, 5);
    ASSERT_TRUE(plan.degenerate());
    Stream rng(1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(draw_bootstrap_sample(s, plan, rng), s.slice(0, 5));
}

TEST(Resample, FourOutcomesAreEquallyLikely) {
    const auto s = one_to(4);
    const auto plan = BlockPlan::make(4, 2);
    Stream rng(2);
    std::array<int, 4> counts{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const auto star = draw_bootstrap_sample(s, plan, rng);
        const int first = star.row(0)[0] == 1.0 ? 0 : 1;
        const int second = star.row(2)[0] == 1.0 ? 0 : 1;
        ++counts[static_cast<std::size_t>(2 * first + second)];
    }
    double chi2 = 0.0;
    for (int c : counts) {
        EXPECT_NEAR(c / static_cast<double>(draws), 0.25, 0.01);
        chi2 += (c - draws / 4.0) * (c - draws / 4.0) / (draws / 4.0);
    }
    EXPECT_LT(chi2, 16.27);  // chi-square(3) 0.999 quantile
}

TEST(Resample, DeterministicAndMadeOfBlocks) {
    const auto space = GridSpace::uniform(0.0, 1.0, 3);
    std::vector<double> values(3 * 17);
    std::iota(values.begin(), values.end(), 0.0);
    const HilbertSample s(space, values);
    const auto plan = BlockPlan::make(17, 3);
    Stream a(5);
    Stream b(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto star = draw_bootstrap_sample(s, plan, a);
        EXPECT_EQ(star, draw_bootstrap_sample(s, plan, b));
        ASSERT_EQ(star.size(), plan.used());
        for (std::size_t i = 0; i < plan.k; ++i) {
            // Each output block is a contiguous block of s, bit for bit.
            const double first = star.row(i * plan.p)[0];
            const auto src = static_cast<std::size_t>(first) / 3;
            ASSERT_EQ(src % plan.p, 0u);
            ASSERT_LT(src / plan.p, plan.k);
            for (std::size_t j = 0; j < plan.p; ++j) {
                for (std::size_t c = 0; c < 3; ++c) ASSERT_EQ(star.row(i * plan.p + j)[c], s.row(src + j)[c]);
            }
        }
    }
}

TEST(Resample, PlanMismatch) {
    const auto s = one_to(10);
    Stream rng(0);
    EXPECT_THROW((void)draw_bootstrap_sample(s, BlockPlan::make(12, 3), rng), PlanMismatchError);
    const auto plan = BlockPlan::make(10, 3);
    const std::vector<std::size_t> short_choices{0, 1};
    EXPECT_THROW((void)assemble_bootstrap_sample(s, plan, short_choices), LengthMismatchError);
    const std::vector<std::size_t> bad_choices{0, 1, 3};
    EXPECT_THROW((void)assemble_bootstrap_sample(s, plan, bad_choices), IndexError);
}

TEST(MeanStatistic, ZeroForSingleBlock) {
    const auto s = one_to(9);
    const auto plan = BlockPlan::make(9, 9);
    EXPECT_EQ(bootstrap_mean_statistic(s, s, plan)[0], 0.0);
}

TEST(MeanStatistic, LinearInTheData) {
    const auto s = one_to(12);
    const auto plan = BlockPlan::make(12, 3);
    Stream a(7);
    Stream b(7);
    const auto star = draw_bootstrap_sample(s, plan, a);
    const auto star_scaled = draw_bootstrap_sample(s.scaled(-2.5), plan, b);
    EXPECT_NEAR(bootstrap_mean_statistic(s.scaled(-2.5), star_scaled, plan)[0],
                -2.5 * bootstrap_mean_statistic(s, star, plan)[0], 1e-12);
}

TEST(MeanStatistic, LengthMismatch) {
    const auto s = one_to(12);
    EXPECT_THROW((void)bootstrap_mean_statistic(s, s.slice(0, 5), BlockPlan::make(12, 3)), LengthMismatchError);
}

TEST(MeanStatistic, ExactLawOverAllSelections) {
    // Every selection of the 27 is evaluated by the library and compared
    // with the oracle's direct arithmetic.
    const auto s = one_to(6);
    const auto plan = BlockPlan::make(6, 2);
    const auto xs = s.scalar_values();
    const double center = oracle::plain_mean(xs);
    std::size_t count = 0;
    oracle::for_each_selection(3, [&](const std::vector<std::size_t>& c) {
        const auto star = assemble_bootstrap_sample(s, plan, c);
        const double expected = std::sqrt(6.0) * (oracle::plain_mean(oracle::resample(xs, 2, c)) - center);
        EXPECT_NEAR(bootstrap_mean_statistic(s, star, plan)[0], expected, 1e-12);
        ++count;
    });
    EXPECT_EQ(count, 27u);
}

TEST(MeanStatistic, MonteCarloMatchesEnumeration) {
    const auto s = one_to(6);
    const auto plan = BlockPlan::make(6, 2);
    const auto xs = s.scalar_values();
    const double center = oracle::plain_mean(xs);
    const auto law = oracle::exact_law(xs, 2, 3, [&](const std::vector<double>& star) {
        return std::sqrt(6.0) * (oracle::plain_mean(star) - center);
    });
    const ScalarStatistic stat = [](const HilbertSample& x, const HilbertSample& star, const BlockPlan& pl) {
        return bootstrap_mean_statistic(x, star, pl)[0];
    };
    const auto dist = bootstrap_distribution(s, plan, 100000, stat, 2718, "mean");
    EXPECT_LT(oracle::kolmogorov_to_discrete(dist.scalar_replicates(), law), 0.01);
}

TEST(CenteringIdentity, EnumerationAverageIsTruncatedMean) {
    // Integer data with kp a power of two keeps every mean exact.
    for (std::size_t k : {1u, 2u, 4u}) {
        const auto s = one_to(2 * k + 1);
        const auto plan = BlockPlan::make(2 * k + 1, 2);
        ASSERT_EQ(plan.k, k);
        double total = 0.0;
        double count = 0.0;
        oracle::for_each_selection(k, [&](const std::vector<std::size_t>& c) {
            total += sample_mean(assemble_bootstrap_sample(s, plan, c))[0];
            count += 1.0;
        });
        EXPECT_EQ(total / count, truncated_mean(s, plan)[0]) << "k=" << k;
    }
    const auto s = one_to(9);
    const auto plan = BlockPlan::make(9, 3);
    double total = 0.0;
    oracle::for_each_selection(3, [&](const std::vector<std::size_t>& c) {
        total += sample_mean(assemble_bootstrap_sample(s, plan, c))[0];
    });
    EXPECT_DOUBLE_EQ(total / 27.0, truncated_mean(s, plan)[0]);
}

TEST(BlockSums, MatchesMaterializedResample) {
    const auto space = GridSpace::uniform(0.0, 1.0, 5);
    ProcessConfig cfg;
    cfg.kind = ProcessKind::ar1_functional;
    cfg.phi = 0.3;
    const auto s = generate_functional(cfg, 103, space);
    const auto plan = BlockPlan::make(103, 7);
    const BlockSums sums(s, plan);
    EXPECT_LT(norm(sums.center() - truncated_mean(s, plan)), 1e-14);
    Stream rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = draw_block_choices(plan, rng);
        const auto direct = bootstrap_mean_statistic(s, assemble_bootstrap_sample(s, plan, c), plan);
        EXPECT_LT(norm(sums.mean_statistic(c) - direct), 1e-12);
    }
}

TEST(Distribution, ConstantStatistic) {
    const auto s = one_to(20);
    const ScalarStatistic c = [](const HilbertSample&, const HilbertSample&, const BlockPlan&) { return 3.5; };
    const auto dist = bootstrap_distribution(s, BlockPlan::make(20, 4), 50, c, 1, "const");
    EXPECT_EQ(dist.size(), 50u);
    for (double v : dist.scalar_replicates()) EXPECT_EQ(v, 3.5);
}

TEST(Distribution, SingleBlockMeanIsZero) {
    const auto s = one_to(20);
    const FunctionStatistic stat = [](const HilbertSample& x, const HilbertSample& star, const BlockPlan& pl) {
        return bootstrap_mean_statistic(x, star, pl);
    };
    const auto dist = bootstrap_distribution(s, BlockPlan::make(20, 20), 30, stat, 1, "mean");
    EXPECT_FALSE(dist.is_scalar());
    for (const auto& f : std::get<std::vector<GridFunction>>(dist.replicates)) EXPECT_EQ(f[0], 0.0);
    EXPECT_THROW((void)dist.scalar_replicates(), UnsupportedStatisticError);
    EXPECT_THROW((void)bootstrap_quantile(dist, 0.5), UnsupportedStatisticError);
}

TEST(Distribution, IndependentOfThreadCount) {
    ProcessConfig cfg;
    cfg.kind = ProcessKind::ar1_real;
    cfg.phi = 0.5;
    const auto s = generate_real(cfg, 500);
    const auto plan = block_length_schedule(500);
    const ScalarStatistic stat = [](const HilbertSample& x, const HilbertSample& star, const BlockPlan& pl) {
        return norm(bootstrap_mean_statistic(x, star, pl));
    };
    const auto one = bootstrap_distribution(s, plan, 400, stat, 77, "m", 1);
    const auto four = bootstrap_distribution(s, plan, 400, stat, 77, "m", 4);
    EXPECT_EQ(one.scalar_replicates(), four.scalar_replicates());
    // Replicate r depends on r alone.
    const BlockSums sums(s, plan);
    for (std::size_t r : {0u, 17u, 399u}) {
        Stream stream(derive_seed(77, r));
        const auto c = draw_block_choices(plan, stream);
        EXPECT_NEAR(one.scalar_replicates()[r], norm(sums.mean_statistic(c)), 1e-12);
    }
}

TEST(Distribution, ErrorsCarryReplicateIndex) {
    const auto s = one_to(20);
    const ChoiceStatistic stat = [](std::span<const std::size_t> c) -> double {
        if (c[0] == 3) throw std::runtime_error("boom");
        return 0.0;
    };
    try {
        (void)bootstrap_distribution_from_choices(BlockPlan::make(20, 4), 200, stat, 9, "x");
        FAIL() << "expected a replicate error";
    } catch (const ReplicateError& e) {
        Stream stream(derive_seed(9, e.replicate()));
        EXPECT_EQ(draw_block_choices(BlockPlan::make(20, 4), stream)[0], 3u);
    }
    EXPECT_THROW((void)bootstrap_distribution_from_choices(BlockPlan::make(20, 4), 0, stat, 9, "x"), ConfigError);
}

TEST(Quantile, LowerEmpiricalQuantile) {
    const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    EXPECT_EQ(empirical_quantile(v, 0.5), 2.0);
    EXPECT_EQ(empirical_quantile(v, 0.51), 3.0);
    EXPECT_EQ(empirical_quantile(v, 0.25 - 1e-12), 1.0);
    EXPECT_EQ(empirical_quantile(v, 0.01), 1.0);
    EXPECT_EQ(empirical_quantile(v, 0.99), 4.0);
    EXPECT_THROW((void)empirical_quantile(v, 0.0), ConfigError);
    EXPECT_THROW((void)empirical_quantile(v, 1.0), ConfigError);
    EXPECT_THROW((void)empirical_quantile({}, 0.5), EmptyInputError);
}

TEST(Quantile, UniformReplicates) {
    Stream rng(10);
    std::vector<double> v(100000);
    for (double& x : v) x = rng.uniform01();
    EXPECT_NEAR(empirical_quantile(v, 0.9), 0.9, 0.01);
}

TEST(LongRunVariance, ConstantSampleIsZero) {
    const auto s = HilbertSample::scalars(std::vector<double>(50, 3.25));
    EXPECT_EQ(long_run_variance_estimate(s, BlockPlan::make(50, 5)), 0.0);
}

TEST(LongRunVariance, IidGaussian) {
    ProcessConfig cfg;
    cfg.seed = 100;
    const auto s = generate_real(cfg, 100000);
    EXPECT_NEAR(long_run_variance_estimate(s, BlockPlan::make(100000, 10)), 1.0, 0.05);
}

TEST(LongRunVariance, Ar1MatchesAutocovarianceSum) {
    ProcessConfig cfg;
    cfg.kind = ProcessKind::ar1_real;
    cfg.phi = 0.5;
    cfg.seed = 101;
    const std::size_t n = 100000;
    const auto s = generate_real(cfg, n);
    const double truth = oracle::ar1_autocovariance_sum(0.5);
    EXPECT_NEAR(truth, 4.0, 1e-12);
    EXPECT_NEAR(long_run_variance_estimate(s, block_length_schedule(n)) / truth, 1.0, 0.10);
}

TEST(LongRunVariance, ShiftInvariant) {
    ProcessConfig cfg;
    cfg.kind = ProcessKind::ar1_real;
    cfg.phi = 0.2;
    const auto s = generate_real(cfg, 1000);
    const auto plan = BlockPlan::make(1000, 10);
    std::vector<double> shifted(s.scalar_values().begin(), s.scalar_values().end());
    for (double& x : shifted) x += 0.75;
    const double a = long_run_variance_estimate(s, plan);
    const double b = long_run_variance_estimate(HilbertSample::scalars(shifted), plan);
    EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(LongRunCovariance, ProjectionProperties) {
    const auto space = GridSpace::uniform(0.0, 1.0, 6);
    ProcessConfig cfg;
    cfg.kind = ProcessKind::ar1_functional;
    cfg.phi = 0.4;
    const auto s = generate_functional(cfg, 240, space);
    const auto plan = BlockPlan::make(240, 6);
    Stream rng(12);
    auto random_fn = [&] {
        std::vector<double> v(6);
        for (double& x : v) x = rng.normal();
        return GridFunction(space, v);
    };
    const auto zero = GridFunction::zero(space);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = random_fn();
        const auto y = random_fn();
        EXPECT_EQ(long_run_covariance_projection(s, plan, x, zero), 0.0);
        EXPECT_GE(long_run_covariance_projection(s, plan, x, x), 0.0);
        EXPECT_NEAR(long_run_covariance_projection(s, plan, x, y), long_run_covariance_projection(s, plan, y, x),
                    1e-12);
        // Cauchy-Schwarz for a positive semidefinite form.
        const double xy = long_run_covariance_projection(s, plan, x, y);
        EXPECT_LE(xy * xy, long_run_covariance_projection(s, plan, x, x) *
                                   long_run_covariance_projection(s, plan, y, y) * (1 + 1e-12));
    }
}

TEST(LongRunCovariance, ScalarReductionIsExact) {
    const auto s = generate_real(ProcessConfig{}, 333);
    const auto plan = BlockPlan::make(333, 7);
    const auto one = GridFunction::scalar(1.0);
    EXPECT_EQ(long_run_covariance_projection(s, plan, one, one), long_run_variance_estimate(s, plan));
    EXPECT_THROW((void)long_run_covariance_projection(s, plan, GridFunction::constant(GridSpace::uniform(0, 1, 2), 1),
                                                      one),
                 DomainMismatchError);
}

}  // namespace
