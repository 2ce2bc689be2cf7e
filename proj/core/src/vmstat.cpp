#include "blockboot/vmstat.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/io.hpp"
#include "blockboot/parallel.hpp"
#include "blockboot/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace blockboot {

namespace {

void require_equal_lengths(std::size_t a, std::size_t b) {
    if (a != b) {
        throw LengthMismatchError("bootstrap sample length " + std::to_string(b) +
                                  " differs from the original kp = " + std::to_string(a));
    }
    if (a == 0) throw EmptyInputError("bootstrap statistic of an empty sample");
}

// sum_j h(x, ys_j) with fixed tiling.
double kernel_row_sum(double x, std::span<const double> ys, const Kernel& h,
                      std::vector<double>& buffer) {
    const std::size_t m = ys.size();
    const std::size_t tile = std::min(m, kKernelTileWidth);
    buffer.resize(tile);
    if (m <= kKernelTileWidth) {
        h.row(x, ys, buffer);
        return pairwise_sum(buffer);
    }
    std::vector<double> partials;
    partials.reserve((m + tile - 1) / tile);
    for (std::size_t start = 0; start < m; start += tile) {
        const std::size_t len = std::min(tile, m - start);
        const std::span<double> out(buffer.data(), len);
        h.row(x, ys.subspan(start, len), out);
        partials.push_back(pairwise_sum(out));
    }
    return pairwise_sum(partials);
}

// Number of sorted values <= t for each grid point.
std::vector<std::size_t> counts_at_or_below(std::span<const double> sorted,
                                            std::span<const double> grid) {
    std::vector<std::size_t> out(grid.size());
    std::size_t idx = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        while (idx < sorted.size() && sorted[idx] <= grid[j]) ++idx;
        out[j] = idx;
    }
    return out;
}

std::vector<double> sorted_copy(std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

double kernel_double_sum(std::span<const double> xs, std::span<const double> ys, const Kernel& h,
                         std::size_t threads) {
    std::vector<double> row_sums(xs.size());
    const std::size_t rows_per_task = 64;
    const std::size_t tasks = (xs.size() + rows_per_task - 1) / rows_per_task;
    parallel_for(tasks, threads, [&](std::size_t t) {
        std::vector<double> buffer;
        const std::size_t end = std::min(xs.size(), (t + 1) * rows_per_task);
        for (std::size_t i = t * rows_per_task; i < end; ++i) {
            row_sums[i] = kernel_row_sum(xs[i], ys, h, buffer);
        }
    });
    return pairwise_sum(row_sums);
}

double v_statistic(std::span<const double> xs, const Kernel& h, std::size_t threads) {
    if (xs.empty()) throw EmptyInputError("V-statistic of an empty sample");
    const double n = static_cast<double>(xs.size());
    return kernel_double_sum(xs, xs, h, threads) / (n * n);
}

double v_statistic(const HilbertSample& s, const Kernel& h, std::size_t threads) {
    return v_statistic(s.scalar_values(), h, threads);
}

double u_statistic(std::span<const double> xs, const Kernel& h) {
    const std::size_t n = xs.size();
    if (n < 2) throw InsufficientSampleError("U-statistic needs at least two observations");
    std::vector<double> row_sums(n - 1);
    std::vector<double> buffer;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        row_sums[i] = kernel_row_sum(xs[i], xs.subspan(i + 1), h, buffer);
    }
    const double nn = static_cast<double>(n);
    return 2.0 * pairwise_sum(row_sums) / (nn * (nn - 1.0));
}

double u_statistic(const HilbertSample& s, const Kernel& h) {
    return u_statistic(s.scalar_values(), h);
}

double bootstrap_v_statistic(std::span<const double> s, std::span<const double> star,
                             const Kernel& h) {
    require_equal_lengths(s.size(), star.size());
    const double kp = static_cast<double>(s.size());
    const double star_star = kernel_double_sum(star, star, h);
    const double star_orig = kernel_double_sum(star, s, h);
    const double orig_orig = kernel_double_sum(s, s, h);
    return (star_star - 2.0 * star_orig + orig_orig) / (kp * kp);
}

double bootstrap_v_statistic(const HilbertSample& s, const HilbertSample& star, const Kernel& h) {
    return bootstrap_v_statistic(s.scalar_values(), star.scalar_values(), h);
}

double empirical_cdf(std::span<const double> xs, double t) {
    if (xs.empty()) throw EmptyInputError("empirical CDF of an empty sample");
    const auto count = std::count_if(xs.begin(), xs.end(), [t](double x) { return x <= t; });
    return static_cast<double>(count) / static_cast<double>(xs.size());
}

double empirical_cdf(const HilbertSample& s, double t) { return empirical_cdf(s.scalar_values(), t); }

double cvm_statistic(std::span<const double> xs, const CvmSpec& spec) {
    if (xs.empty()) throw EmptyInputError("CvM statistic of an empty sample");
    const auto counts = counts_at_or_below(sorted_copy(xs), spec.grid());
    const auto w = spec.weights();
    const auto F = spec.cdf_values();
    const double n = static_cast<double>(xs.size());
    return pairwise_sum(0, counts.size(), [&](std::size_t j) {
        const double diff = static_cast<double>(counts[j]) / n - F[j];
        return w[j] * diff * diff;
    });
}

double cvm_statistic(const HilbertSample& s, const CvmSpec& spec) {
    return cvm_statistic(s.scalar_values(), spec);
}

double bootstrap_cvm_statistic(std::span<const double> s, std::span<const double> star,
                               const CvmSpec& spec) {
    require_equal_lengths(s.size(), star.size());
    const auto orig = counts_at_or_below(sorted_copy(s), spec.grid());
    const auto boot = counts_at_or_below(sorted_copy(star), spec.grid());
    const auto w = spec.weights();
    const double kp = static_cast<double>(s.size());
    const double integral = pairwise_sum(0, orig.size(), [&](std::size_t j) {
        const double diff = static_cast<double>(boot[j]) / kp - static_cast<double>(orig[j]) / kp;
        return w[j] * diff * diff;
    });
    return kp * integral;
}

double bootstrap_cvm_statistic(const HilbertSample& s, const HilbertSample& star,
                               const CvmSpec& spec) {
    return bootstrap_cvm_statistic(s.scalar_values(), star.scalar_values(), spec);
}

double degeneracy_diagnostic(std::span<const double> xs, const Kernel& h,
                             std::span<const double> probes) {
    if (xs.empty()) throw EmptyInputError("degeneracy diagnostic of an empty sample");
    std::vector<double> buffer;
    double worst = 0.0;
    for (double x : probes) {
        const double mean = kernel_row_sum(x, xs, h, buffer) / static_cast<double>(xs.size());
        worst = std::max(worst, std::abs(mean));
    }
    return worst;
}

VStatBootstrap::VStatBootstrap(std::span<const double> xs, const BlockPlan& plan, const Kernel& h,
                               std::size_t threads)
    : plan_(plan) {
    if (plan.n != xs.size()) throw PlanMismatchError("block plan does not match sample length");
    const std::size_t k = plan.k;
    const std::size_t p = plan.p;
    const auto used = xs.first(plan.used());
    gram_.assign(k * k, 0.0);
    parallel_for(k, threads, [&](std::size_t u) {
        std::vector<double> row(used.size());
        std::vector<double> acc(k, 0.0);
        for (std::size_t i = u * p; i < (u + 1) * p; ++i) {
            h.row(used[i], used, row);
            for (std::size_t v = 0; v < k; ++v) {
                double block = 0.0;
                for (std::size_t j = v * p; j < (v + 1) * p; ++j) block += row[j];
                acc[v] += block;
            }
        }
        std::copy(acc.begin(), acc.end(), gram_.begin() + static_cast<std::ptrdiff_t>(u * k));
    });
    row_sums_.resize(k);
    for (std::size_t u = 0; u < k; ++u) {
        row_sums_[u] = pairwise_sum(std::span<const double>(gram_).subspan(u * k, k));
    }
    total_ = pairwise_sum(row_sums_);
}

double VStatBootstrap::replicate(std::span<const std::size_t> choices) const {
    const std::size_t k = plan_.k;
    if (choices.size() != k) throw LengthMismatchError("expected one choice per block");
    std::vector<std::size_t> counts(k, 0);
    for (const std::size_t c : choices) ++counts[c];
    std::vector<std::size_t> drawn;
    drawn.reserve(k);
    for (std::size_t u = 0; u < k; ++u) {
        if (counts[u] > 0) drawn.push_back(u);
    }
    double star_star = 0.0;
    double star_orig = 0.0;
    for (std::size_t a = 0; a < drawn.size(); ++a) {
        const std::size_t u = drawn[a];
        const double cu = static_cast<double>(counts[u]);
        const double* g = gram_.data() + u * k;
        double off_diagonal = 0.0;
        for (std::size_t b = a + 1; b < drawn.size(); ++b) {
            off_diagonal += static_cast<double>(counts[drawn[b]]) * g[drawn[b]];
        }
        star_star += cu * (cu * g[u] + 2.0 * off_diagonal);
        star_orig += cu * row_sums_[u];
    }
    const double kp = static_cast<double>(plan_.used());
    return (star_star - 2.0 * star_orig + total_) / (kp * kp);
}

CvmBootstrap::CvmBootstrap(std::span<const double> xs, const BlockPlan& plan, const CvmSpec& spec)
    : plan_(plan), weights_(spec.weights().begin(), spec.weights().end()) {
    if (plan.n != xs.size()) throw PlanMismatchError("block plan does not match sample length");
    const std::size_t used = plan.used();
    std::vector<std::size_t> order(used);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> sorted(used);
    sorted_block_.resize(used);
    for (std::size_t i = 0; i < used; ++i) {
        sorted[i] = xs[order[i]];
        sorted_block_[i] = order[i] / plan.p;
    }
    grid_count_ = counts_at_or_below(sorted, spec.grid());
}

double CvmBootstrap::replicate(std::span<const std::size_t> choices) const {
    const std::size_t k = plan_.k;
    if (choices.size() != k) throw LengthMismatchError("expected one choice per block");
    std::vector<long> excess(k, -1);
    for (const std::size_t c : choices) ++excess[c];
    long running = 0;
    std::size_t idx = 0;
    double acc = 0.0;
    for (std::size_t j = 0; j < grid_count_.size(); ++j) {
        for (; idx < grid_count_[j]; ++idx) running += excess[sorted_block_[idx]];
        const double diff = static_cast<double>(running);
        acc += weights_[j] * diff * diff;
    }
    return acc / static_cast<double>(plan_.used());
}

Kernel parse_kernel(std::string_view text, std::size_t cvm_grid_points) {
    if (text == "product") return product_kernel();
    if (text.starts_with("gaussian:")) {
        return gaussian_kernel(io::parse_double(text.substr(std::string_view("gaussian:").size())));
    }
    if (text.starts_with("cvm:")) {
        const auto null = NullDistribution::parse(text.substr(4));
        return cvm_kernel(make_cvm_spec(null, CvmWeight::unit, cvm_grid_points));
    }
    throw ConfigError("unknown kernel '" + std::string(text) + "'");
}

}  // namespace blockboot
