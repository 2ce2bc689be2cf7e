#pragma once

// Seeded random streams.
//
// Every random quantity in the library is drawn from a Stream whose seed is
// obtained with derive_seed(parent, index). Replicate r of a bootstrap or a
// Monte Carlo run therefore owns stream derive_seed(seed, r) no matter which
// thread evaluates it or in what order.
//
// The generator is xoshiro256** seeded through splitmix64. Variate
// transforms are implemented here rather than taken from <random>, whose
// distributions are not specified bit for bit and differ across standard
// libraries. The exact algorithms below are part of the stable interface:
//   uniform01   top 53 bits of one draw, times 2^-53
//   index(k)    Lemire's nearly-divisionless bounded integer with rejection
//   normal      Marsaglia polar method, second variate cached
//   gamma       Marsaglia-Tsang squeeze (shape >= 1)

#include <array>
#include <cstdint>
#include <optional>

namespace blockboot {

/// splitmix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of child stream `index` of `parent`.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(parent ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) noexcept;

    [[nodiscard]] std::uint64_t next() noexcept;

    /// Uniform on [0, 1).
    [[nodiscard]] double uniform01() noexcept;

    /// Uniform integer on {0, ..., bound - 1}; bound must be positive.
    [[nodiscard]] std::uint64_t index(std::uint64_t bound) noexcept;

    [[nodiscard]] double normal() noexcept;

    /// Gamma(shape, 1); shape >= 1.
    [[nodiscard]] double gamma(double shape) noexcept;

    /// Student t with `nu` degrees of freedom.
    [[nodiscard]] double student_t(double nu) noexcept;

    /// One fair bit.
    [[nodiscard]] bool bit() noexcept { return (next() >> 63) != 0; }

private:
    std::array<std::uint64_t, 4> state_{};
    std::optional<double> cached_normal_;
};

}  // namespace blockboot
