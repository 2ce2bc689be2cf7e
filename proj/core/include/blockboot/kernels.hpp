#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace blockboot {

/// Declared properties of a kernel. Documentation only; not verified.
struct KernelInfo {
    std::optional<double> lipschitz;
    bool positive_definite = false;
};

/// Symmetric bivariate kernel h on the real line.
class Kernel {
public:
    class Impl {
    public:
        virtual ~Impl() = default;
        [[nodiscard]] virtual double operator()(double x, double y) const = 0;
        /// out[j] = h(x, ys[j]).
        virtual void row(double x, std::span<const double> ys, std::span<double> out) const;
    };

    Kernel(std::string name, std::shared_ptr<const Impl> impl, KernelInfo info = {});

    /// Wraps an arbitrary callable. Symmetry is spot-checked on 64 fixed
    /// pseudo-random pairs; an asymmetry above 1e-12 throws SpecError.
    static Kernel from_function(std::string name, std::function<double(double, double)> h,
                                KernelInfo info = {});

    [[nodiscard]] double operator()(double x, double y) const { return (*impl_)(x, y); }
    void row(double x, std::span<const double> ys, std::span<double> out) const {
        impl_->row(x, ys, out);
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const KernelInfo& info() const noexcept { return info_; }

private:
    std::string name_;
    std::shared_ptr<const Impl> impl_;
    KernelInfo info_;
};

/// h(x, y) = x y.
[[nodiscard]] Kernel product_kernel();

/// h(x, y) = exp(-((x - y) / bandwidth)^2).
[[nodiscard]] Kernel gaussian_kernel(double bandwidth);

/// Throws SpecError if |h(x, y) - h(y, x)| > tolerance on any of `pairs`
/// pseudo-random pairs drawn with the given seed.
void check_symmetry(const Kernel& h, std::size_t pairs = 64, std::uint64_t seed = 0x5eed,
                    double tolerance = 1e-12);

}  // namespace blockboot
