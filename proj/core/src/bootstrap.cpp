#include "blockboot/bootstrap.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/parallel.hpp"
#include "blockboot/summation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace blockboot {

namespace {

void require_plan(const HilbertSample& s, const BlockPlan& plan) {
    if (plan.n != s.size() || plan.k == 0 || plan.p == 0 || plan.k * plan.p > plan.n) {
        throw PlanMismatchError("block plan (n=" + std::to_string(plan.n) +
                                ", p=" + std::to_string(plan.p) + ", k=" + std::to_string(plan.k) +
                                ") does not match a sample of length " + std::to_string(s.size()));
    }
}

template <typename Value, typename Eval>
std::vector<Value> run_replicates(const BlockPlan& plan, std::size_t B, std::uint64_t seed,
                                  std::size_t threads, const Eval& eval) {
    if (B == 0) throw ConfigError("number of bootstrap replicates must be positive");
    std::vector<std::optional<Value>> slots(B);
    parallel_for(B, threads, [&](std::size_t r) {
        Stream stream(derive_seed(seed, r));
        const auto choices = draw_block_choices(plan, stream);
        try {
            slots[r].emplace(eval(choices));
        } catch (const std::exception& e) {
            throw ReplicateError(r, e.what());
        }
    });
    std::vector<Value> out;
    out.reserve(B);
    for (auto& v : slots) out.push_back(std::move(*v));
    return out;
}

}  // namespace

BlockPlan BlockPlan::make(std::size_t n, std::size_t p, bool dyadic_freeze) {
    if (n == 0) throw EmptyInputError("block plan needs a nonempty sample");
    if (p == 0 || p > n) {
        throw ConfigError("block length " + std::to_string(p) + " must lie in [1, " +
                          std::to_string(n) + "]");
    }
    return BlockPlan{n, p, n / p, dyadic_freeze};
}

IndexRange BlockPlan::block(std::size_t i) const {
    if (i >= k) throw IndexError("block index " + std::to_string(i) + " out of range");
    return {i * p, (i + 1) * p};
}

std::size_t base_block_length(std::size_t m, double exponent) {
    if (!(exponent > 0.0 && exponent < 1.0)) {
        throw ConfigError("block length exponent must lie in (0, 1)");
    }
    const double v = std::pow(static_cast<double>(m), exponent);
    const double nearest = std::round(v);
    const double snapped = std::abs(v - nearest) <= 1e-9 * std::max(1.0, v) ? nearest : std::floor(v);
    return std::max<std::size_t>(1, static_cast<std::size_t>(snapped));
}

BlockPlan block_length_schedule(std::size_t n, double exponent, bool dyadic_freeze) {
    if (n == 0) throw EmptyInputError("block length schedule needs n >= 1");
    std::size_t p = 1;
    if (!dyadic_freeze) {
        p = base_block_length(n, exponent);
    } else if (n > 1) {
        std::size_t upper = 1;
        while (upper < n) upper <<= 1;  // 2^(l-1) < n <= 2^l
        p = base_block_length(upper, exponent);
    } else {
        (void)base_block_length(1, exponent);  // validates the exponent
    }
    p = std::min(p, n);
    return BlockPlan{n, p, n / p, dyadic_freeze};
}

std::vector<std::size_t> draw_block_choices(const BlockPlan& plan, Stream& stream) {
    std::vector<std::size_t> choices(plan.k);
    for (auto& c : choices) c = static_cast<std::size_t>(stream.index(plan.k));
    return choices;
}

HilbertSample assemble_bootstrap_sample(const HilbertSample& s, const BlockPlan& plan,
                                        std::span<const std::size_t> choices) {
    require_plan(s, plan);
    if (choices.size() != plan.k) throw LengthMismatchError("expected one choice per block");
    const std::size_t d = s.dim();
    const std::size_t stride = plan.p * d;
    const auto data = s.data();
    std::vector<double> out(plan.used() * d);
    for (std::size_t i = 0; i < plan.k; ++i) {
        if (choices[i] >= plan.k) throw IndexError("block choice out of range");
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(choices[i] * stride), stride,
                    out.begin() + static_cast<std::ptrdiff_t>(i * stride));
    }
    return HilbertSample(s.space(), std::move(out));
}

HilbertSample draw_bootstrap_sample(const HilbertSample& s, const BlockPlan& plan, Stream& stream) {
    require_plan(s, plan);
    const auto choices = draw_block_choices(plan, stream);
    return assemble_bootstrap_sample(s, plan, choices);
}

GridFunction truncated_mean(const HilbertSample& s, const BlockPlan& plan) {
    require_plan(s, plan);
    return sample_mean(s, {0, plan.used()});
}

GridFunction bootstrap_mean_statistic(const HilbertSample& s, const HilbertSample& star,
                                      const BlockPlan& plan) {
    if (star.size() != plan.used()) {
        throw LengthMismatchError("bootstrap sample has length " + std::to_string(star.size()) +
                                  ", expected kp = " + std::to_string(plan.used()));
    }
    if (s.size() < plan.used()) throw LengthMismatchError("sample shorter than kp");
    require_same_space(s.space(), star.space());
    const GridFunction center = sample_mean(s, {0, plan.used()});
    const GridFunction boot = sample_mean(star);
    return (boot - center).scaled(std::sqrt(static_cast<double>(plan.used())));
}

BlockSums::BlockSums(const HilbertSample& s, const BlockPlan& plan)
    : plan_(plan), space_(s.space()), sums_(plan.k * s.dim(), 0.0), center_(truncated_mean(s, plan)) {
    const std::size_t d = s.dim();
    const auto data = s.data();
    for (std::size_t b = 0; b < plan.k; ++b) {
        double* acc = sums_.data() + b * d;
        for (std::size_t i = b * plan.p; i < (b + 1) * plan.p; ++i) {
            for (std::size_t j = 0; j < d; ++j) acc[j] += data[i * d + j];
        }
    }
}

GridFunction BlockSums::centered_mean(std::span<const std::size_t> choices) const {
    if (choices.size() != plan_.k) throw LengthMismatchError("expected one choice per block");
    const std::size_t d = space_->size();
    std::vector<double> acc(d, 0.0);
    for (const std::size_t c : choices) {
        const double* sum = sums_.data() + c * d;
        for (std::size_t j = 0; j < d; ++j) acc[j] += sum[j];
    }
    const double kp = static_cast<double>(plan_.used());
    const auto center = center_.values();
    for (std::size_t j = 0; j < d; ++j) acc[j] = acc[j] / kp - center[j];
    return GridFunction(space_, std::move(acc));
}

GridFunction BlockSums::mean_statistic(std::span<const std::size_t> choices) const {
    return centered_mean(choices).scaled(std::sqrt(static_cast<double>(plan_.used())));
}

std::size_t BootstrapDistribution::size() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, replicates);
}

const std::vector<double>& BootstrapDistribution::scalar_replicates() const {
    if (!is_scalar()) {
        throw UnsupportedStatisticError("statistic '" + statistic_id + "' is function valued");
    }
    return std::get<std::vector<double>>(replicates);
}

BootstrapDistribution bootstrap_distribution(const HilbertSample& s, const BlockPlan& plan,
                                             std::size_t B, const ScalarStatistic& statistic,
                                             std::uint64_t seed, std::string statistic_id,
                                             std::size_t threads) {
    require_plan(s, plan);
    auto values = run_replicates<double>(plan, B, seed, threads, [&](const auto& choices) {
        return statistic(s, assemble_bootstrap_sample(s, plan, choices), plan);
    });
    return {std::move(values), seed, std::move(statistic_id)};
}

BootstrapDistribution bootstrap_distribution(const HilbertSample& s, const BlockPlan& plan,
                                             std::size_t B, const FunctionStatistic& statistic,
                                             std::uint64_t seed, std::string statistic_id,
                                             std::size_t threads) {
    require_plan(s, plan);
    auto values = run_replicates<GridFunction>(plan, B, seed, threads, [&](const auto& choices) {
        return statistic(s, assemble_bootstrap_sample(s, plan, choices), plan);
    });
    return {std::move(values), seed, std::move(statistic_id)};
}

BootstrapDistribution bootstrap_distribution_from_choices(const BlockPlan& plan, std::size_t B,
                                                          const ChoiceStatistic& statistic,
                                                          std::uint64_t seed,
                                                          std::string statistic_id,
                                                          std::size_t threads) {
    auto values = run_replicates<double>(plan, B, seed, threads,
                                         [&](const auto& choices) { return statistic(choices); });
    return {std::move(values), seed, std::move(statistic_id)};
}

double empirical_quantile(std::span<const double> values, double q) {
    if (values.empty()) throw EmptyInputError("quantile of an empty distribution");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
    const double B = static_cast<double>(values.size());
    const double pos = B * q;
    const double nearest = std::round(pos);
    const double rank = std::abs(pos - nearest) <= 1e-9 * B ? nearest : std::ceil(pos);
    const auto r = std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, values.size());
    std::vector<double> sorted(values.begin(), values.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(r - 1), sorted.end());
    return sorted[r - 1];
}

double bootstrap_quantile(const BootstrapDistribution& dist, double q) {
    return empirical_quantile(dist.scalar_replicates(), q);
}

double long_run_variance_estimate(const HilbertSample& s, const BlockPlan& plan) {
    require_plan(s, plan);
    const GridFunction center = truncated_mean(s, plan);
    std::vector<double> terms(plan.k);
    for (std::size_t i = 0; i < plan.k; ++i) {
        const GridFunction block_sum = centered_block_sum(s, plan.block(i), center);
        terms[i] = squared_norm(*s.space(), block_sum.values());
    }
    return pairwise_sum(terms) / static_cast<double>(plan.used());
}

double long_run_covariance_projection(const HilbertSample& s, const BlockPlan& plan,
                                      const GridFunction& x, const GridFunction& y) {
    require_plan(s, plan);
    require_same_space(s.space(), x.space());
    require_same_space(s.space(), y.space());
    const GridFunction center = truncated_mean(s, plan);
    std::vector<double> terms(plan.k);
    for (std::size_t i = 0; i < plan.k; ++i) {
        const GridFunction block_sum = centered_block_sum(s, plan.block(i), center);
        terms[i] = inner_product(block_sum, x) * inner_product(block_sum, y);
    }
    return pairwise_sum(terms) / static_cast<double>(plan.used());
}

}  // namespace blockboot
