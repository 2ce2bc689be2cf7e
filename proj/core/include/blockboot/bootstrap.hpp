#pragma once

// Nonoverlapping block bootstrap.
//
// A sample of length n is cut into k = floor(n / p) contiguous blocks of
// length p; observations kp+1..n are not used by any bootstrap quantity. A
// bootstrap sample concatenates k blocks drawn independently and uniformly
// with replacement. Its conditional mean is the mean of the first kp
// observations, which is also the centering of every statistic here.
//
// Block indices are 0-based in code: block i covers [i p, (i + 1) p).

#include "blockboot/hilbert.hpp"
#include "blockboot/random.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace blockboot {

struct BlockPlan {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t k = 0;
    bool dyadic_freeze = false;

    /// Explicit block length; requires 1 <= p <= n.
    static BlockPlan make(std::size_t n, std::size_t p, bool dyadic_freeze = false);

    [[nodiscard]] IndexRange block(std::size_t i) const;
    [[nodiscard]] std::size_t used() const noexcept { return k * p; }
    [[nodiscard]] std::size_t discarded() const noexcept { return n - k * p; }

    /// A single block: every bootstrap sample equals the original.
    [[nodiscard]] bool degenerate() const noexcept { return k == 1; }

    friend bool operator==(const BlockPlan&, const BlockPlan&) = default;
};

inline constexpr double kDefaultBlockExponent = 1.0 / 3.0;

/// max(1, floor(m^exponent)). Values within 1e-9 (relative) of an integer
/// are snapped to it so that, e.g., 1000^(1/3) gives 10 and not 9.
[[nodiscard]] std::size_t base_block_length(std::size_t m, double exponent);

/// Growth rule for the block length. Without freezing p = base(n). With
/// freezing p = base(2^l) for 2^(l-1) < n <= 2^l, so p is constant on dyadic
/// ranges. Both rules are nondecreasing in n.
[[nodiscard]] BlockPlan block_length_schedule(std::size_t n,
                                              double exponent = kDefaultBlockExponent,
                                              bool dyadic_freeze = false);

/// k block indices, each uniform on {0, ..., k - 1}.
[[nodiscard]] std::vector<std::size_t> draw_block_choices(const BlockPlan& plan, Stream& stream);

/// Concatenation of the chosen blocks of s.
[[nodiscard]] HilbertSample assemble_bootstrap_sample(const HilbertSample& s, const BlockPlan& plan,
                                                      std::span<const std::size_t> choices);

[[nodiscard]] HilbertSample draw_bootstrap_sample(const HilbertSample& s, const BlockPlan& plan,
                                                  Stream& stream);

/// Mean of the first kp observations.
[[nodiscard]] GridFunction truncated_mean(const HilbertSample& s, const BlockPlan& plan);

/// sqrt(kp) (mean(star) - mean of the first kp elements of s).
[[nodiscard]] GridFunction bootstrap_mean_statistic(const HilbertSample& s, const HilbertSample& star,
                                                    const BlockPlan& plan);

/// Per-block sums of one sample, for evaluating mean-type bootstrap
/// statistics from block choices without materializing the resample.
class BlockSums {
public:
    BlockSums(const HilbertSample& s, const BlockPlan& plan);

    [[nodiscard]] const BlockPlan& plan() const noexcept { return plan_; }
    [[nodiscard]] const GridFunction& center() const noexcept { return center_; }

    /// mean(star) - center for the resample given by `choices`.
    [[nodiscard]] GridFunction centered_mean(std::span<const std::size_t> choices) const;

    /// sqrt(kp) * centered_mean(choices).
    [[nodiscard]] GridFunction mean_statistic(std::span<const std::size_t> choices) const;

private:
    BlockPlan plan_;
    SpacePtr space_;
    std::vector<double> sums_;  // k x d
    GridFunction center_;
};

using ScalarStatistic =
    std::function<double(const HilbertSample& s, const HilbertSample& star, const BlockPlan& plan)>;
using FunctionStatistic =
    std::function<GridFunction(const HilbertSample& s, const HilbertSample& star, const BlockPlan& plan)>;
/// A statistic evaluated directly from the k block choices of one replicate.
using ChoiceStatistic = std::function<double(std::span<const std::size_t> choices)>;

struct BootstrapDistribution {
    std::variant<std::vector<double>, std::vector<GridFunction>> replicates;
    std::uint64_t seed = 0;
    std::string statistic_id;

    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] bool is_scalar() const noexcept {
        return std::holds_alternative<std::vector<double>>(replicates);
    }
    /// Throws UnsupportedStatisticError for function-valued replicates.
    [[nodiscard]] const std::vector<double>& scalar_replicates() const;
};

/// B replicates of `statistic`; replicate r uses Stream(derive_seed(seed, r)),
/// so the result is bit-identical for any thread count.
[[nodiscard]] BootstrapDistribution bootstrap_distribution(const HilbertSample& s,
                                                           const BlockPlan& plan, std::size_t B,
                                                           const ScalarStatistic& statistic,
                                                           std::uint64_t seed,
                                                           std::string statistic_id,
                                                           std::size_t threads = 1);

[[nodiscard]] BootstrapDistribution bootstrap_distribution(const HilbertSample& s,
                                                           const BlockPlan& plan, std::size_t B,
                                                           const FunctionStatistic& statistic,
                                                           std::uint64_t seed,
                                                           std::string statistic_id,
                                                           std::size_t threads = 1);

/// Same streams as bootstrap_distribution, but the statistic sees only the
/// block choices.
[[nodiscard]] BootstrapDistribution bootstrap_distribution_from_choices(
    const BlockPlan& plan, std::size_t B, const ChoiceStatistic& statistic, std::uint64_t seed,
    std::string statistic_id, std::size_t threads = 1);

/// Lower empirical quantile: the ceil(B q)-th smallest value, 0 < q < 1.
[[nodiscard]] double empirical_quantile(std::span<const double> values, double q);
[[nodiscard]] double bootstrap_quantile(const BootstrapDistribution& dist, double q);

/// (1/kp) sum_i ||sum_{j in B_i} (X_j - mean_kp)||^2, the exact bootstrap
/// second moment of sqrt(kp)(mean* - mean_kp).
[[nodiscard]] double long_run_variance_estimate(const HilbertSample& s, const BlockPlan& plan);

/// (1/kp) sum_i <S_i, x><S_i, y> with S_i the centered block sums: the block
/// estimate of <Vx, y> for the long-run covariance operator V.
[[nodiscard]] double long_run_covariance_projection(const HilbertSample& s, const BlockPlan& plan,
                                                    const GridFunction& x, const GridFunction& y);

}  // namespace blockboot
