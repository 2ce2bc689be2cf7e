#pragma once

// Cramer-von Mises ingredients: the hypothesized distribution, the weighted
// quadrature grid, and the kernel the statistic induces.
//
// With H the space of functions with <f, g> = int f g w, the statistic
// int (F_n - F)^2 w is ||F_n - F||^2 where F_n is the mean of the
// indicator functions t -> 1{X_i <= t}. On the grid this is an exact
// V-statistic with kernel
//   h(x, y) = sum_j w_j (1{x <= t_j} - F(t_j)) (1{y <= t_j} - F(t_j)).

#include "blockboot/hilbert.hpp"
#include "blockboot/kernels.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blockboot {

/// Hypothesized marginal law. Parsed from "uniform[:a:b]" or
/// "gaussian[:mu:sigma]"; defaults are uniform on [0, 1] and N(0, 1).
struct NullDistribution {
    enum class Kind { uniform, gaussian };

    Kind kind = Kind::uniform;
    double a = 0.0;  ///< lower end, or mean
    double b = 1.0;  ///< upper end, or standard deviation

    static NullDistribution parse(std::string_view text);

    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double density(double x) const;
    /// Integration range for the weight: [a, b], or mu +- 8 sigma.
    [[nodiscard]] std::pair<double, double> support() const;
    [[nodiscard]] std::string name() const;
};

/// Pointwise weight function choice.
enum class CvmWeight { unit, density, zero };

[[nodiscard]] CvmWeight parse_cvm_weight(std::string_view text);
[[nodiscard]] std::string_view to_string(CvmWeight weight) noexcept;

class CvmSpec {
public:
    /// Validates that cdf is nondecreasing with values in [0, 1] at the grid
    /// points and that the weights are finite and nonnegative; SpecError
    /// otherwise. The weights may all be zero.
    CvmSpec(std::function<double(double)> cdf, std::vector<double> grid, std::vector<double> weights);

    [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    /// F evaluated at the grid points.
    [[nodiscard]] std::span<const double> cdf_values() const noexcept { return cdf_values_; }
    [[nodiscard]] double cdf(double x) const { return cdf_(x); }
    [[nodiscard]] bool zero_weight() const noexcept { return zero_weight_; }

    /// The grid as a GridSpace; throws ConfigError when all weights are zero.
    [[nodiscard]] SpacePtr space() const;

private:
    std::function<double(double)> cdf_;
    std::vector<double> grid_;
    std::vector<double> weights_;
    std::vector<double> cdf_values_;
    bool zero_weight_ = false;
};

inline constexpr std::size_t kDefaultCvmGridPoints = 2048;

/// Uniform grid of `points` abscissae over the null's support, merged with
/// those sample points that fall inside it, and trapezoid weights from the
/// chosen pointwise weight.
[[nodiscard]] CvmSpec make_cvm_spec(const NullDistribution& null, CvmWeight weight,
                                    std::size_t points = kDefaultCvmGridPoints,
                                    std::span<const double> sample_points = {});

/// The kernel induced by the statistic on the spec's grid. Evaluation is
/// O(log d) through suffix sums of w and F w.
[[nodiscard]] Kernel cvm_kernel(const CvmSpec& spec);

}  // namespace blockboot
