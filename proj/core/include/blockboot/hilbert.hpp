#pragma once

// Weighted grid-function model of a separable Hilbert space.
//
// An element is a vector of values on a fixed, strictly increasing grid.
// The inner product is the weighted dot product sum_j f_j g_j w_j where the
// weights already include the quadrature cell width. Scalars are the d = 1
// case with unit weight.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace blockboot {

/// Grid abscissae and precombined quadrature weights shared by all elements
/// of one space. Immutable after construction.
class GridSpace {
public:
    /// Weights must already be w(t_j) * (cell width).
    static std::shared_ptr<const GridSpace> make(std::vector<double> grid,
                                                 std::vector<double> weights);

    /// Builds quadrature weights from a pointwise weight function by the
    /// trapezoid rule: w_j * (t_{j+1} - t_{j-1}) / 2 with half cells at the
    /// ends. A single-point grid gets weight w_0.
    static std::shared_ptr<const GridSpace> trapezoid(std::vector<double> grid,
                                                      std::span<const double> pointwise_weight);

    /// Uniform grid of `points` abscissae on [lower, upper] with w == 1.
    static std::shared_ptr<const GridSpace> uniform(double lower, double upper, std::size_t points);

    /// The real line: one grid point, weight 1.
    static std::shared_ptr<const GridSpace> scalar();

    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }
    [[nodiscard]] std::span<const double> grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] bool is_scalar() const noexcept { return grid_.size() == 1; }

    /// Same grid and weights, compared exactly.
    [[nodiscard]] bool same_as(const GridSpace& other) const noexcept;

private:
    GridSpace(std::vector<double> grid, std::vector<double> weights);

    std::vector<double> grid_;
    std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const GridSpace>;

/// Throws DomainMismatchError unless a and b describe the same space.
void require_same_space(const SpacePtr& a, const SpacePtr& b);

class GridFunction {
public:
    GridFunction(SpacePtr space, std::vector<double> values);

    static GridFunction zero(SpacePtr space);
    static GridFunction constant(SpacePtr space, double value);
    static GridFunction scalar(double value);

    [[nodiscard]] const SpacePtr& space() const noexcept { return space_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return values_[j]; }

    [[nodiscard]] GridFunction scaled(double factor) const;

    friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
    friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
    friend GridFunction operator*(double a, const GridFunction& f) { return f.scaled(a); }

    friend bool operator==(const GridFunction& a, const GridFunction& b);

private:
    SpacePtr space_;
    std::vector<double> values_;
};

/// An ordered series X_1..X_n of elements of one space, stored row-major.
class HilbertSample {
public:
    /// `values` holds n rows of space->size() entries.
    HilbertSample(SpacePtr space, std::vector<double> values);

    static HilbertSample from_elements(std::span<const GridFunction> elements);
    static HilbertSample scalars(std::vector<double> xs);

    [[nodiscard]] const SpacePtr& space() const noexcept { return space_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return space_->size(); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const;
    [[nodiscard]] GridFunction element(std::size_t i) const;
    [[nodiscard]] std::span<const double> data() const noexcept { return values_; }

    /// The raw observations of a d = 1 sample; throws DomainMismatchError otherwise.
    [[nodiscard]] std::span<const double> scalar_values() const;

    /// Elements [begin, end) as a new sample.
    [[nodiscard]] HilbertSample slice(std::size_t begin, std::size_t end) const;

    /// Every element multiplied by `factor`.
    [[nodiscard]] HilbertSample scaled(double factor) const;

    friend bool operator==(const HilbertSample& a, const HilbertSample& b);

private:
    SpacePtr space_;
    std::vector<double> values_;
    std::size_t n_;
};

/// Half-open 0-based index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
};

/// Weighted dot product of two value vectors on `space`.
[[nodiscard]] double inner_product(const GridSpace& space, std::span<const double> f,
                                   std::span<const double> g);

[[nodiscard]] double inner_product(const GridFunction& f, const GridFunction& g);
[[nodiscard]] double norm(const GridFunction& f);
[[nodiscard]] double squared_norm(const GridSpace& space, std::span<const double> f);

[[nodiscard]] GridFunction sample_mean(const HilbertSample& s);

/// Pointwise mean of the elements in `range`.
[[nodiscard]] GridFunction sample_mean(const HilbertSample& s, IndexRange range);

/// Sum over j in `block` of (X_j - center), unnormalized.
[[nodiscard]] GridFunction centered_block_sum(const HilbertSample& s, IndexRange block,
                                              const GridFunction& center);

}  // namespace blockboot
