#include "blockboot/cvm.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace blockboot {

namespace {

class CvmKernel final : public Kernel::Impl {
public:
    explicit CvmKernel(const CvmSpec& spec) : grid_(spec.grid().begin(), spec.grid().end()) {
        const std::size_t d = grid_.size();
        const auto w = spec.weights();
        const auto F = spec.cdf_values();
        weight_suffix_.assign(d + 1, 0.0);
        cdf_weight_suffix_.assign(d + 1, 0.0);
        for (std::size_t j = d; j-- > 0;) {
            weight_suffix_[j] = weight_suffix_[j + 1] + w[j];
            cdf_weight_suffix_[j] = cdf_weight_suffix_[j + 1] + w[j] * F[j];
            constant_ += w[j] * F[j] * F[j];
        }
    }

    double operator()(double x, double y) const override {
        const std::size_t a = first_at_or_above(x);
        const std::size_t b = first_at_or_above(y);
        const std::size_t lo = std::min(a, b);
        const std::size_t hi = std::max(a, b);
        return weight_suffix_[hi] - (cdf_weight_suffix_[lo] + cdf_weight_suffix_[hi]) + constant_;
    }

private:
    std::size_t first_at_or_above(double x) const {
        return static_cast<std::size_t>(std::lower_bound(grid_.begin(), grid_.end(), x) - grid_.begin());
    }

    std::vector<double> grid_;
    std::vector<double> weight_suffix_;
    std::vector<double> cdf_weight_suffix_;
    double constant_ = 0.0;
};

std::vector<std::string> split_colon(std::string_view text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream ss{std::string(text)};
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
}

}  // namespace

NullDistribution NullDistribution::parse(std::string_view text) {
    const auto parts = split_colon(text);
    if (parts.empty()) throw ConfigError("empty null distribution");
    NullDistribution null;
    if (parts[0] == "uniform") {
        null.kind = Kind::uniform;
    } else if (parts[0] == "gaussian") {
        null.kind = Kind::gaussian;
        null.a = 0.0;
        null.b = 1.0;
    } else {
        throw ConfigError("unknown null distribution '" + std::string(text) + "'");
    }
    if (parts.size() == 3) {
        null.a = io::parse_double(parts[1]);
        null.b = io::parse_double(parts[2]);
    } else if (parts.size() != 1) {
        throw ConfigError("null distribution '" + std::string(text) + "' needs 0 or 2 parameters");
    }
    if (!(null.b > (null.kind == Kind::uniform ? null.a : 0.0))) {
        throw ConfigError("invalid parameters for null distribution '" + std::string(text) + "'");
    }
    return null;
}

double NullDistribution::cdf(double x) const {
    if (kind == Kind::uniform) return std::clamp((x - a) / (b - a), 0.0, 1.0);
    return 0.5 * std::erfc(-(x - a) / (b * std::numbers::sqrt2));
}

double NullDistribution::density(double x) const {
    if (kind == Kind::uniform) return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
    const double z = (x - a) / b;
    return std::exp(-0.5 * z * z) / (b * std::sqrt(2.0 * std::numbers::pi));
}

std::pair<double, double> NullDistribution::support() const {
    if (kind == Kind::uniform) return {a, b};
    return {a - 8.0 * b, a + 8.0 * b};
}

std::string NullDistribution::name() const {
    return std::string(kind == Kind::uniform ? "uniform:" : "gaussian:") + io::format_double(a) +
           ":" + io::format_double(b);
}

CvmWeight parse_cvm_weight(std::string_view text) {
    if (text == "unit") return CvmWeight::unit;
    if (text == "density") return CvmWeight::density;
    if (text == "zero") return CvmWeight::zero;
    throw ConfigError("unknown CvM weight '" + std::string(text) + "'");
}

std::string_view to_string(CvmWeight weight) noexcept {
    switch (weight) {
        case CvmWeight::unit: return "unit";
        case CvmWeight::density: return "density";
        case CvmWeight::zero: return "zero";
    }
    return "?";
}

CvmSpec::CvmSpec(std::function<double(double)> cdf, std::vector<double> grid,
                 std::vector<double> weights)
    : cdf_(std::move(cdf)), grid_(std::move(grid)), weights_(std::move(weights)) {
    if (grid_.empty()) throw SpecError("CvM grid is empty");
    if (grid_.size() != weights_.size()) throw SpecError("CvM grid and weights differ in length");
    cdf_values_.resize(grid_.size());
    zero_weight_ = true;
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        if (j > 0 && !(grid_[j] > grid_[j - 1])) throw SpecError("CvM grid must be strictly increasing");
        if (!std::isfinite(weights_[j]) || weights_[j] < 0.0) {
            throw SpecError("CvM weights must be finite and nonnegative");
        }
        zero_weight_ = zero_weight_ && weights_[j] == 0.0;
        const double F = cdf_(grid_[j]);
        if (!(F >= 0.0 && F <= 1.0)) {
            throw SpecError("hypothesized CDF leaves [0, 1] at t = " + io::format_double(grid_[j]));
        }
        if (j > 0 && F < cdf_values_[j - 1]) {
            throw SpecError("hypothesized CDF decreases at t = " + io::format_double(grid_[j]));
        }
        cdf_values_[j] = F;
    }
}

SpacePtr CvmSpec::space() const { return GridSpace::make(grid_, weights_); }

CvmSpec make_cvm_spec(const NullDistribution& null, CvmWeight weight, std::size_t points,
                      std::span<const double> sample_points) {
    if (points < 2) throw ConfigError("CvM grid needs at least two points");
    const auto [lo, hi] = null.support();
    std::vector<double> grid;
    grid.reserve(points + sample_points.size());
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) grid.push_back(lo + step * static_cast<double>(j));
    grid.back() = hi;
    for (double x : sample_points) {
        if (x >= lo && x <= hi) grid.push_back(x);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const std::size_t d = grid.size();
    std::vector<double> weights(d, 0.0);
    if (weight != CvmWeight::zero) {
        for (std::size_t j = 0; j < d; ++j) {
            const double w = weight == CvmWeight::unit ? 1.0 : null.density(grid[j]);
            const double left = j > 0 ? grid[j] - grid[j - 1] : 0.0;
            const double right = j + 1 < d ? grid[j + 1] - grid[j] : 0.0;
            weights[j] = w * 0.5 * (left + right);
        }
    }
    return CvmSpec([null](double x) { return null.cdf(x); }, std::move(grid), std::move(weights));
}

Kernel cvm_kernel(const CvmSpec& spec) {
    return Kernel("cvm", std::make_shared<CvmKernel>(spec), KernelInfo{std::nullopt, true});
}

}  // namespace blockboot
