#include "blockboot/kernels.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/io.hpp"
#include "blockboot/random.hpp"

#include <cmath>
#include <utility>

namespace blockboot {

namespace {

class FunctionKernel final : public Kernel::Impl {
public:
    explicit FunctionKernel(std::function<double(double, double)> h) : h_(std::move(h)) {}
    double operator()(double x, double y) const override { return h_(x, y); }

private:
    std::function<double(double, double)> h_;
};

class ProductKernel final : public Kernel::Impl {
public:
    double operator()(double x, double y) const override { return x * y; }
    void row(double x, std::span<const double> ys, std::span<double> out) const override {
        for (std::size_t j = 0; j < ys.size(); ++j) out[j] = x * ys[j];
    }
};

class GaussianKernel final : public Kernel::Impl {
public:
    explicit GaussianKernel(double bandwidth) : inv_bw_(1.0 / bandwidth) {}
    double operator()(double x, double y) const override {
        // (x - y)^2 == (y - x)^2 exactly, so the kernel is exactly symmetric.
        const double z = (x - y) * inv_bw_;
        return std::exp(-z * z);
    }
    void row(double x, std::span<const double> ys, std::span<double> out) const override {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double z = (x - ys[j]) * inv_bw_;
            out[j] = std::exp(-z * z);
        }
    }

private:
    double inv_bw_;
};

}  // namespace

void Kernel::Impl::row(double x, std::span<const double> ys, std::span<double> out) const {
    for (std::size_t j = 0; j < ys.size(); ++j) out[j] = (*this)(x, ys[j]);
}

Kernel::Kernel(std::string name, std::shared_ptr<const Impl> impl, KernelInfo info)
    : name_(std::move(name)), impl_(std::move(impl)), info_(info) {
    if (!impl_) throw SpecError("kernel '" + name_ + "' has no implementation");
}

Kernel Kernel::from_function(std::string name, std::function<double(double, double)> h,
                             KernelInfo info) {
    Kernel kernel(std::move(name), std::make_shared<FunctionKernel>(std::move(h)), info);
    check_symmetry(kernel);
    return kernel;
}

Kernel product_kernel() {
    // Positive definite; Lipschitz only on bounded sets.
    return Kernel("product", std::make_shared<ProductKernel>(), KernelInfo{std::nullopt, true});
}

Kernel gaussian_kernel(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw ConfigError("gaussian kernel bandwidth must be positive");
    }
    // sup |d/dx exp(-(x/b)^2)| = sqrt(2/e) / b.
    const double lipschitz = std::sqrt(2.0 / std::exp(1.0)) / bandwidth;
    return Kernel("gaussian:" + io::format_double(bandwidth),
                  std::make_shared<GaussianKernel>(bandwidth), KernelInfo{lipschitz, true});
}

void check_symmetry(const Kernel& h, std::size_t pairs, std::uint64_t seed, double tolerance) {
    Stream stream(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
        const double x = 3.0 * stream.normal();
        const double y = 3.0 * stream.normal();
        const double hxy = h(x, y);
        const double hyx = h(y, x);
        const double scale = std::max({1.0, std::abs(hxy), std::abs(hyx)});
        if (!(std::abs(hxy - hyx) <= tolerance * scale)) {
            throw SpecError("kernel '" + h.name() + "' is not symmetric at (" +
                            io::format_double(x) + ", " + io::format_double(y) + ")");
        }
    }
}

}  // namespace blockboot
