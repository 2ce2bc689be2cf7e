#pragma once

// V-statistics, U-statistics and the Cramer-von Mises statistic, with their
// block bootstrap versions.
//
// The bootstrap V-statistic is the three-term expression
//   V* = (1/(kp)^2) [ sum h(X*_i, X*_j) - 2 sum h(X*_i, X_j) + sum h(X_i, X_j) ]
// over i, j = 1..kp, which equals a squared Hilbert norm for positive
// definite h and needs no eigen-decomposition of the kernel.

#include "blockboot/bootstrap.hpp"
#include "blockboot/cvm.hpp"
#include "blockboot/hilbert.hpp"
#include "blockboot/kernels.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace blockboot {

/// Rows longer than this are evaluated in column tiles of this width.
inline constexpr std::size_t kKernelTileWidth = 4096;

/// sum_{i, j} h(xs_i, ys_j). Row sums are reduced in a fixed order, so the
/// result does not depend on `threads`.
[[nodiscard]] double kernel_double_sum(std::span<const double> xs, std::span<const double> ys,
                                       const Kernel& h, std::size_t threads = 1);

/// (1/n^2) sum_{i, j} h(X_i, X_j).
[[nodiscard]] double v_statistic(std::span<const double> xs, const Kernel& h, std::size_t threads = 1);
[[nodiscard]] double v_statistic(const HilbertSample& s, const Kernel& h, std::size_t threads = 1);

/// (2/(n(n-1))) sum_{i<j} h(X_i, X_j); n >= 2.
[[nodiscard]] double u_statistic(std::span<const double> xs, const Kernel& h);
[[nodiscard]] double u_statistic(const HilbertSample& s, const Kernel& h);

/// Three-term bootstrap V-statistic. `s` is the first kp observations and
/// `star` a bootstrap sample of the same length. Not scaled by kp.
[[nodiscard]] double bootstrap_v_statistic(std::span<const double> s, std::span<const double> star,
                                           const Kernel& h);
[[nodiscard]] double bootstrap_v_statistic(const HilbertSample& s, const HilbertSample& star,
                                           const Kernel& h);

/// Fraction of observations <= t.
[[nodiscard]] double empirical_cdf(std::span<const double> xs, double t);
[[nodiscard]] double empirical_cdf(const HilbertSample& s, double t);

/// sum_j w_j (F_n(t_j) - F(t_j))^2 on the spec's grid. Not scaled by n.
[[nodiscard]] double cvm_statistic(std::span<const double> xs, const CvmSpec& spec);
[[nodiscard]] double cvm_statistic(const HilbertSample& s, const CvmSpec& spec);

/// kp * sum_j w_j (F*(t_j) - F_kp(t_j))^2 with `s` the first kp observations.
[[nodiscard]] double bootstrap_cvm_statistic(std::span<const double> s, std::span<const double> star,
                                             const CvmSpec& spec);
[[nodiscard]] double bootstrap_cvm_statistic(const HilbertSample& s, const HilbertSample& star,
                                             const CvmSpec& spec);

/// max over probes x of |(1/n) sum_i h(x, X_i)|. Small values are consistent
/// with a degenerate kernel; advisory only.
[[nodiscard]] double degeneracy_diagnostic(std::span<const double> xs, const Kernel& h,
                                           std::span<const double> probes);

/// Three-term bootstrap V-statistic from block choices.
///
/// The kernel sums between every pair of blocks are tabulated once, in
/// O((kp)^2) kernel evaluations. Each replicate then costs O(k^2) instead of
/// O((kp)^2): with c_u the number of times block u is drawn,
///   sum h(X*_i, X*_j) = sum_{u,v} c_u c_v G_uv,  sum h(X*_i, X_j) = sum_u c_u R_u.
class VStatBootstrap {
public:
    /// `xs` is the full sample; observations past kp are ignored.
    VStatBootstrap(std::span<const double> xs, const BlockPlan& plan, const Kernel& h,
                   std::size_t threads = 1);

    /// V* (unscaled) for one replicate.
    [[nodiscard]] double replicate(std::span<const std::size_t> choices) const;

    [[nodiscard]] const BlockPlan& plan() const noexcept { return plan_; }

private:
    BlockPlan plan_;
    std::vector<double> gram_;      // k x k block sums of h
    std::vector<double> row_sums_;  // R_u = sum_v G_uv
    double total_ = 0.0;
};

/// Bootstrap CvM statistic from block choices in O(kp + d) per replicate.
///
/// F*(t) - F_kp(t) = (1/kp) sum over observations X_i <= t of (c_{b(i)} - 1),
/// where b(i) is the block holding observation i. Sorting the kp
/// observations once lets each replicate sweep the grid in a single pass.
class CvmBootstrap {
public:
    CvmBootstrap(std::span<const double> xs, const BlockPlan& plan, const CvmSpec& spec);

    /// kp * V* for one replicate.
    [[nodiscard]] double replicate(std::span<const std::size_t> choices) const;

private:
    BlockPlan plan_;
    std::vector<std::size_t> sorted_block_;  // block of the i-th smallest observation
    std::vector<std::size_t> grid_count_;    // observations <= t_j
    std::vector<double> weights_;
};

/// Parses "product", "gaussian:<bandwidth>", or "cvm:<null>" where <null> is
/// understood by NullDistribution::parse (unit weight over its support).
[[nodiscard]] Kernel parse_kernel(std::string_view text,
                                  std::size_t cvm_grid_points = kDefaultCvmGridPoints);

}  // namespace blockboot
