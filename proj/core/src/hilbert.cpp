#include "blockboot/hilbert.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace blockboot {

GridSpace::GridSpace(std::vector<double> grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {}

std::shared_ptr<const GridSpace> GridSpace::make(std::vector<double> grid,
                                                 std::vector<double> weights) {
    if (grid.empty()) throw EmptyInputError("grid must contain at least one point");
    if (grid.size() != weights.size()) {
        throw DomainMismatchError("grid has " + std::to_string(grid.size()) + " points but " +
                                  std::to_string(weights.size()) + " weights");
    }
    bool any_positive = false;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!std::isfinite(grid[j])) throw ConfigError("grid abscissae must be finite");
        if (j > 0 && !(grid[j] > grid[j - 1])) {
            throw ConfigError("grid must be strictly increasing (index " + std::to_string(j) + ")");
        }
        if (!std::isfinite(weights[j]) || weights[j] < 0.0) {
            throw ConfigError("weights must be finite and nonnegative (index " +
                              std::to_string(j) + ")");
        }
        any_positive = any_positive || weights[j] > 0.0;
    }
    if (!any_positive) throw ConfigError("at least one weight must be positive");
    return std::shared_ptr<const GridSpace>(new GridSpace(std::move(grid), std::move(weights)));
}

std::shared_ptr<const GridSpace> GridSpace::trapezoid(std::vector<double> grid,
                                                      std::span<const double> pointwise_weight) {
    const std::size_t d = grid.size();
    if (d == 0) throw EmptyInputError("grid must contain at least one point");
    if (pointwise_weight.size() != d) {
        throw DomainMismatchError("pointwise weight length does not match grid");
    }
    std::vector<double> weights(d);
    if (d == 1) {
        weights[0] = pointwise_weight[0];
    } else {
        for (std::size_t j = 0; j < d; ++j) {
            const double left = j > 0 ? grid[j] - grid[j - 1] : 0.0;
            const double right = j + 1 < d ? grid[j + 1] - grid[j] : 0.0;
            weights[j] = pointwise_weight[j] * 0.5 * (left + right);
        }
    }
    return make(std::move(grid), std::move(weights));
}

std::shared_ptr<const GridSpace> GridSpace::uniform(double lower, double upper,
                                                    std::size_t points) {
    if (points == 0) throw EmptyInputError("uniform grid needs at least one point");
    if (points == 1) return make({lower}, {1.0});
    if (!(upper > lower)) throw ConfigError("uniform grid needs lower < upper");
    std::vector<double> grid(points);
    const double step = (upper - lower) / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) grid[j] = lower + step * static_cast<double>(j);
    grid.back() = upper;
    const std::vector<double> ones(points, 1.0);
    return trapezoid(std::move(grid), ones);
}

std::shared_ptr<const GridSpace> GridSpace::scalar() {
    static const auto space = make({0.0}, {1.0});
    return space;
}

bool GridSpace::same_as(const GridSpace& other) const noexcept {
    return this == &other || (grid_ == other.grid_ && weights_ == other.weights_);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
    if (a == b) return;
    if (!a || !b || !a->same_as(*b)) {
        throw DomainMismatchError("operands are defined on different grids or weights");
    }
}

GridFunction::GridFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw DomainMismatchError("grid function needs a space");
    if (values_.size() != space_->size()) {
        throw DomainMismatchError("grid function has " + std::to_string(values_.size()) +
                                  " values on a " + std::to_string(space_->size()) +
                                  "-point grid");
    }
}

GridFunction GridFunction::zero(SpacePtr space) { return constant(std::move(space), 0.0); }

GridFunction GridFunction::constant(SpacePtr space, double value) {
    const std::size_t d = space->size();
    return GridFunction(std::move(space), std::vector<double>(d, value));
}

GridFunction GridFunction::scalar(double value) { return GridFunction(GridSpace::scalar(), {value}); }

GridFunction GridFunction::scaled(double factor) const {
    std::vector<double> out(values_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = factor * values_[j];
    return GridFunction(space_, std::move(out));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_space(a.space_, b.space_);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.values_[j] + b.values_[j];
    return GridFunction(a.space_, std::move(out));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_space(a.space_, b.space_);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.values_[j] - b.values_[j];
    return GridFunction(a.space_, std::move(out));
}

bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.space_->same_as(*b.space_) && a.values_ == b.values_;
}

HilbertSample::HilbertSample(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)), n_(0) {
    if (!space_) throw DomainMismatchError("sample needs a space");
    const std::size_t d = space_->size();
    if (values_.empty()) throw EmptyInputError("sample must contain at least one element");
    if (values_.size() % d != 0) {
        throw DomainMismatchError("sample data length is not a multiple of the grid size");
    }
    n_ = values_.size() / d;
}

HilbertSample HilbertSample::from_elements(std::span<const GridFunction> elements) {
    if (elements.empty()) throw EmptyInputError("sample must contain at least one element");
    const SpacePtr& space = elements.front().space();
    std::vector<double> data;
    data.reserve(elements.size() * space->size());
    for (const auto& e : elements) {
        require_same_space(space, e.space());
        data.insert(data.end(), e.values().begin(), e.values().end());
    }
    return HilbertSample(space, std::move(data));
}

HilbertSample HilbertSample::scalars(std::vector<double> xs) {
    return HilbertSample(GridSpace::scalar(), std::move(xs));
}

std::span<const double> HilbertSample::row(std::size_t i) const {
    if (i >= n_) throw IndexError("element index " + std::to_string(i) + " out of range");
    const std::size_t d = dim();
    return std::span<const double>(values_).subspan(i * d, d);
}

GridFunction HilbertSample::element(std::size_t i) const {
    const auto r = row(i);
    return GridFunction(space_, std::vector<double>(r.begin(), r.end()));
}

std::span<const double> HilbertSample::scalar_values() const {
    if (!space_->is_scalar()) {
        throw DomainMismatchError("operation needs a scalar (d = 1) sample");
    }
    return values_;
}

HilbertSample HilbertSample::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > n_) throw IndexError("invalid slice of sample");
    const std::size_t d = dim();
    return HilbertSample(space_, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(begin * d),
                                                     values_.begin() + static_cast<std::ptrdiff_t>(end * d)));
}

HilbertSample HilbertSample::scaled(double factor) const {
    std::vector<double> out(values_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = factor * values_[j];
    return HilbertSample(space_, std::move(out));
}

bool operator==(const HilbertSample& a, const HilbertSample& b) {
    return a.space_->same_as(*b.space_) && a.values_ == b.values_;
}

double inner_product(const GridSpace& space, std::span<const double> f, std::span<const double> g) {
    if (f.size() != space.size() || g.size() != space.size()) {
        throw DomainMismatchError("inner product operands do not match the grid");
    }
    const auto w = space.weights();
    // f*g is commutative in IEEE arithmetic, so the result is exactly symmetric.
    return pairwise_sum(0, f.size(), [&](std::size_t j) { return f[j] * g[j] * w[j]; });
}

double inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_space(f.space(), g.space());
    return inner_product(*f.space(), f.values(), g.values());
}

double squared_norm(const GridSpace& space, std::span<const double> f) {
    return inner_product(space, f, f);
}

double norm(const GridFunction& f) {
    return std::sqrt(std::max(0.0, squared_norm(*f.space(), f.values())));
}

GridFunction sample_mean(const HilbertSample& s, IndexRange range) {
    if (range.end > s.size() || range.begin > range.end) {
        throw IndexError("block range exceeds sample length");
    }
    if (range.size() == 0) throw EmptyInputError("mean of an empty range");
    const std::size_t d = s.dim();
    const auto data = s.data();
    std::vector<double> acc(d, 0.0);
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const double* row = data.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) acc[j] += row[j];
    }
    const double inv = static_cast<double>(range.size());
    for (auto& v : acc) v /= inv;
    return GridFunction(s.space(), std::move(acc));
}

GridFunction sample_mean(const HilbertSample& s) { return sample_mean(s, {0, s.size()}); }

GridFunction centered_block_sum(const HilbertSample& s, IndexRange block,
                                const GridFunction& center) {
    if (block.end > s.size() || block.begin > block.end) {
        throw IndexError("block [" + std::to_string(block.begin) + ", " +
                         std::to_string(block.end) + ") exceeds sample length " +
                         std::to_string(s.size()));
    }
    require_same_space(s.space(), center.space());
    const std::size_t d = s.dim();
    const auto data = s.data();
    const auto c = center.values();
    std::vector<double> acc(d, 0.0);
    for (std::size_t i = block.begin; i < block.end; ++i) {
        const double* row = data.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) acc[j] += row[j] - c[j];
    }
    return GridFunction(s.space(), std::move(acc));
}

}  // namespace blockboot
