#include "blockboot/distances.hpp"

#include "blockboot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace blockboot {

double kolmogorov_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInputError("Kolmogorov distance of an empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double worst = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double x = 0.0;
        if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
            x = sa[i];
        } else {
            x = sb[j];
        }
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return worst;
}

double kolmogorov_distance(std::span<const double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw EmptyInputError("Kolmogorov distance of an empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::sort(sa.begin(), sa.end());
    const double n = static_cast<double>(sa.size());
    double worst = 0.0;
    std::size_t i = 0;
    while (i < sa.size()) {
        const double x = sa[i];
        const double below = static_cast<double>(i) / n;
        while (i < sa.size() && sa[i] == x) ++i;
        const double at = static_cast<double>(i) / n;
        const double F = cdf(x);
        worst = std::max({worst, std::abs(at - F), std::abs(F - below)});
    }
    return worst;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double scaled_chi_square1_cdf(double x, double variance) {
    if (x <= 0.0) return 0.0;
    return std::erf(std::sqrt(x / (2.0 * variance)));
}

double half_normal_cdf(double x, double variance) {
    if (x <= 0.0) return 0.0;
    return std::erf(x / std::sqrt(2.0 * variance));
}

}  // namespace blockboot
