#pragma once

#include <functional>
#include <span>

namespace blockboot {

/// sup_x |F_a(x) - F_b(x)| between two empirical distributions. Ties are
/// handled by evaluating both CDFs after each distinct value.
[[nodiscard]] double kolmogorov_distance(std::span<const double> a, std::span<const double> b);

/// sup_x |F_a(x) - F(x)| for a continuous reference CDF F.
[[nodiscard]] double kolmogorov_distance(std::span<const double> a,
                                         const std::function<double(double)>& cdf);

[[nodiscard]] double normal_cdf(double x);

/// CDF of variance * chi-square(1).
[[nodiscard]] double scaled_chi_square1_cdf(double x, double variance);

/// CDF of |N(0, variance)|.
[[nodiscard]] double half_normal_cdf(double x, double variance);

}  // namespace blockboot
